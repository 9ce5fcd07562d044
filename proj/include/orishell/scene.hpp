#pragma once

#include "orishell/assembly.hpp"
#include "orishell/mesh.hpp"
#include "orishell/solver.hpp"

#include <json.hpp>

namespace orishell {

struct OutputSpec {
  std::vector<int> tracked_nodes;
  int cadence = 1;
};

/// Mesh + boundary conditions + solver configuration + tracked outputs.
struct Scene {
  Mesh mesh;
  DofMap dofs;
  BoundaryConditions bcs;
  SolverConfig solver;
  OutputSpec outputs;
  nlohmann::json meta;  // generator-specific extras (grids, parameters)
};

}  // namespace orishell
