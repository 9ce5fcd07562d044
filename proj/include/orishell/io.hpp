#pragma once

#include "orishell/benchmarks.hpp"
#include "orishell/scene.hpp"

#include <string>
#include <vector>

namespace orishell {

/// Scene files are JSON documents; see README for the schema.
Scene parse_scene(const std::string& path);
Scene scene_from_json(const nlohmann::json& j);
nlohmann::json serialize_scene(const Scene& scene);

/// Legacy ASCII unstructured-grid snapshot (VTK DataFile Version 3.0):
/// deformed mid-surface points, quad cells (type 9), point vector
/// "displacement", cell scalars "panel_id" and "bending_energy_density".
/// File name: step_%04d.vtk inside dir.
std::string write_snapshot(const Scene& scene, const Assembler& asmb,
                           const VecX& U, int increment, const std::string& dir);

/// Round-trip helper: POINTS section of a legacy VTK file.
std::vector<Vec3> read_snapshot_points(const std::string& path);

void write_miura_curves(const std::string& path, const std::vector<MiuraBenchRow>& rows);
void write_annulus_curves(const std::string& path, const std::vector<AnnulusBenchRow>& rows);
void write_cantilever_curves(const std::string& path,
                             const std::vector<CantileverBenchRow>& rows);

/// Generic per-increment curves for `simulate`: lambda, energy, max fold
/// angle, tracked node displacements.
void write_generic_curves(const std::string& path, const Scene& scene,
                          const Trajectory& traj);

void write_summary(const std::string& path, const nlohmann::json& summary);

}  // namespace orishell
