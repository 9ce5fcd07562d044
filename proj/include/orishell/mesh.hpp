#pragma once

#include "orishell/types.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

namespace orishell {

struct Material {
  double E = 0.0;   // Young's modulus [Pa]
  double nu = 0.0;  // Poisson's ratio
  double h = 0.0;   // shell thickness [m]
};

struct Node {
  int id = -1;
  Vec3 X = Vec3::Zero();  // initial mid-surface position
};

struct QuadElement {
  int id = -1;
  std::array<int, 4> nodes{};  // counterclockwise
  int panel = -1;
};

struct CreaseParams {
  double k_f = 0.0;     // folding stiffness per unit length
  double theta0 = 0.0;  // rest angle [rad]
  double thetaL = 0.0;  // lower barrier activation angle
  double thetaR = 0.0;  // upper barrier activation angle
  double l = 0.0;       // rest length [m]
};

// Barriers engage over the outer 10% of the approach to +/-pi by default.
inline double default_thetaL(double theta0) { return theta0 - 0.9 * (theta0 + M_PI); }
inline double default_thetaR(double theta0) { return theta0 + 0.9 * (M_PI - theta0); }

/// Crease as specified by the user: the two incident elements are resolved
/// from the shared edge during mesh building.
struct CreaseSpec {
  int node1 = -1;
  int node2 = -1;
  double k_f = 0.0;
  double theta0 = 0.0;
  std::optional<double> thetaL;
  std::optional<double> thetaR;
};

struct CreaseSegment {
  int id = -1;
  int elem_a = -1;  // side "a" (director field p)
  int elem_b = -1;  // side "b" (director field q)
  int node1 = -1;   // crease endpoint at s = -1
  int node2 = -1;   // crease endpoint at s = +1
  CreaseParams params;
};

/// Geometry, connectivity, panel grouping and crease topology.
/// Immutable once the generators are done with it.
class Mesh {
public:
  std::vector<Node> nodes;
  std::vector<QuadElement> elements;
  std::vector<CreaseSegment> creases;
  Material material;
  int num_panels = 0;

  // Director slots, one per (panel, node) incidence. Filled by init_directors.
  // slot_panel/slot_node/slot_director are parallel arrays in slot order
  // (node-major, panels ascending within a node).
  std::vector<int> slot_panel;
  std::vector<int> slot_node;
  std::vector<Vec3> slot_director;
  std::vector<std::vector<int>> node_slots;  // per node: slot ids

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_slots() const { return static_cast<int>(slot_director.size()); }

  /// Slot id for (panel, node); -1 if absent.
  int slot(int panel, int node) const {
    for (int s : node_slots[node])
      if (slot_panel[s] == panel) return s;
    return -1;
  }

  bool has_directors() const { return !slot_director.empty(); }

  /// Generators may re-seat crease rest angles before the mesh is shared.
  void set_crease_rest_angle(int crease_id, double theta0) {
    auto& p = creases[crease_id].params;
    double spanL = p.theta0 - p.thetaL;
    double spanR = p.thetaR - p.theta0;
    p.theta0 = theta0;
    p.thetaL = theta0 - spanL;
    p.thetaR = theta0 + spanR;
  }
  void set_crease_rest_angle_default_barriers(int crease_id, double theta0) {
    auto& p = creases[crease_id].params;
    p.theta0 = theta0;
    p.thetaL = default_thetaL(theta0);
    p.thetaR = default_thetaR(theta0);
  }
};

/// Validates topology and computes crease rest lengths.
Mesh build_mesh(const std::vector<Vec3>& coords,
                const std::vector<std::array<int, 4>>& quads,
                const std::vector<int>& panel_of_quad,
                const std::vector<CreaseSpec>& crease_list,
                const Material& material);

/// One director per (panel, node) incidence, |X_n| = h/2, normal to the
/// (flat) panel. Throws NonFlatPanel when nodal normals inside a panel
/// disagree by more than 1e-8 rad.
void init_directors(Mesh& mesh);

/// Maps node translations and per-slot director displacements onto dense
/// global indices: node-major, translations before directors.
struct DofMap {
  std::vector<int> trans_base;  // per node: first of 3 translation dofs
  std::vector<int> slot_base;   // per slot: first of 3 director dofs
  int total_dofs = 0;

  int trans_dof(int node, int comp) const { return trans_base[node] + comp; }
  int slot_dof(int slot, int comp) const { return slot_base[slot] + comp; }
};

DofMap build_dof_map(const Mesh& mesh);

inline int dir_dof(const Mesh& mesh, const DofMap& dofs, int panel, int node, int comp) {
  return dofs.slot_dof(mesh.slot(panel, node), comp);
}

/// Characteristic geometric size (bounding-box diagonal), used for default
/// solver tolerances.
double mesh_characteristic_size(const Mesh& mesh);

}  // namespace orishell
