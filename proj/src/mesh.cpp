#include "orishell/mesh.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace orishell {

namespace {

// Undirected edge key.
std::pair<int, int> edge_key(int a, int b) {
  return {std::min(a, b), std::max(a, b)};
}

// Mid-surface area jacobian at the four Gauss points; zero/negative area
// means a collapsed or folded-over quad.
void check_quad_geometry(const std::vector<Vec3>& X, const QuadElement& e, double scale) {
  static const double g = 1.0 / std::sqrt(3.0);
  static const double pts[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
  const Vec3& x1 = X[e.nodes[0]];
  const Vec3& x2 = X[e.nodes[1]];
  const Vec3& x3 = X[e.nodes[2]];
  const Vec3& x4 = X[e.nodes[3]];
  Vec3 n_ref = (x2 - x1).cross(x4 - x1);
  for (auto& p : pts) {
    double xi = p[0], eta = p[1];
    Vec3 d_xi = 0.25 * (-(1 - eta) * x1 + (1 - eta) * x2 + (1 + eta) * x3 - (1 + eta) * x4);
    Vec3 d_eta = 0.25 * (-(1 - xi) * x1 - (1 + xi) * x2 + (1 + xi) * x3 + (1 - xi) * x4);
    Vec3 cr = d_xi.cross(d_eta);
    if (cr.norm() <= 1e-14 * scale * scale || cr.dot(n_ref) <= 0.0)
      fail(ErrorKind::DegenerateElement,
           "element " + std::to_string(e.id) + " has a degenerate mid-surface jacobian");
  }
}

}  // namespace

Mesh build_mesh(const std::vector<Vec3>& coords,
                const std::vector<std::array<int, 4>>& quads,
                const std::vector<int>& panel_of_quad,
                const std::vector<CreaseSpec>& crease_list,
                const Material& material) {
  if (!(material.E > 0.0) || !(material.nu > -1.0 && material.nu < 0.5) || !(material.h > 0.0))
    fail(ErrorKind::ValidationError, "material requires E > 0, -1 < nu < 0.5, h > 0");
  if (quads.size() != panel_of_quad.size())
    fail(ErrorKind::ValidationError, "panel assignment size does not match element count");

  Mesh mesh;
  mesh.material = material;
  mesh.nodes.resize(coords.size());
  for (size_t i = 0; i < coords.size(); ++i) {
    if (!coords[i].allFinite())
      fail(ErrorKind::ValidationError, "node " + std::to_string(i) + " has non-finite coordinates");
    mesh.nodes[i] = Node{static_cast<int>(i), coords[i]};
  }

  const int nn = mesh.num_nodes();
  std::vector<char> referenced(nn, 0);
  mesh.elements.resize(quads.size());
  int max_panel = -1;
  for (size_t e = 0; e < quads.size(); ++e) {
    QuadElement el;
    el.id = static_cast<int>(e);
    el.nodes = quads[e];
    el.panel = panel_of_quad[e];
    std::set<int> distinct;
    for (int n : el.nodes) {
      if (n < 0 || n >= nn)
        fail(ErrorKind::ValidationError, "element " + std::to_string(e) + " references invalid node");
      distinct.insert(n);
      referenced[n] = 1;
    }
    if (distinct.size() != 4)
      fail(ErrorKind::DegenerateElement, "element " + std::to_string(e) + " repeats a node");
    if (el.panel < 0)
      fail(ErrorKind::ValidationError, "element " + std::to_string(e) + " has no panel");
    max_panel = std::max(max_panel, el.panel);
    mesh.elements[e] = el;
  }
  mesh.num_panels = max_panel + 1;

  for (int n = 0; n < nn; ++n)
    if (!referenced[n])
      fail(ErrorKind::DanglingNode, "node " + std::to_string(n) + " is not used by any element");

  double scale = mesh_characteristic_size(mesh);
  for (const auto& el : mesh.elements) check_quad_geometry(coords, el, scale);

  // Edge -> incident elements.
  std::map<std::pair<int, int>, std::vector<int>> edge_elems;
  for (const auto& el : mesh.elements)
    for (int k = 0; k < 4; ++k)
      edge_elems[edge_key(el.nodes[k], el.nodes[(k + 1) % 4])].push_back(el.id);

  // Panels must be edge-connected sets of quads.
  for (int p = 0; p < mesh.num_panels; ++p) {
    std::vector<int> members;
    for (const auto& el : mesh.elements)
      if (el.panel == p) members.push_back(el.id);
    if (members.empty())
      fail(ErrorKind::ValidationError, "panel " + std::to_string(p) + " has no elements");
    std::set<int> seen{members[0]};
    std::vector<int> stack{members[0]};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      const auto& el = mesh.elements[cur];
      for (int k = 0; k < 4; ++k)
        for (int other : edge_elems[edge_key(el.nodes[k], el.nodes[(k + 1) % 4])])
          if (mesh.elements[other].panel == p && !seen.count(other)) {
            seen.insert(other);
            stack.push_back(other);
          }
    }
    if (seen.size() != members.size())
      fail(ErrorKind::ValidationError, "panel " + std::to_string(p) + " is not edge-connected");
  }

  mesh.creases.reserve(crease_list.size());
  for (size_t c = 0; c < crease_list.size(); ++c) {
    const CreaseSpec& spec = crease_list[c];
    if (spec.node1 < 0 || spec.node1 >= nn || spec.node2 < 0 || spec.node2 >= nn || spec.node1 == spec.node2)
      fail(ErrorKind::ValidationError, "crease " + std::to_string(c) + " has invalid endpoints");
    auto it = edge_elems.find(edge_key(spec.node1, spec.node2));
    if (it == edge_elems.end() || it->second.size() < 2)
      fail(ErrorKind::ValidationError,
           "crease " + std::to_string(c) + " edge is not shared by two elements");
    if (it->second.size() > 2)
      fail(ErrorKind::NonManifoldCrease,
           "crease " + std::to_string(c) + " edge is shared by more than two elements");
    int ea = it->second[0], eb = it->second[1];
    if (mesh.elements[ea].panel == mesh.elements[eb].panel)
      fail(ErrorKind::ValidationError,
           "crease " + std::to_string(c) + " must separate two different panels");

    CreaseSegment seg;
    seg.id = static_cast<int>(c);
    seg.elem_a = ea;
    seg.elem_b = eb;
    seg.node1 = spec.node1;
    seg.node2 = spec.node2;
    seg.params.k_f = spec.k_f;
    seg.params.theta0 = spec.theta0;
    seg.params.thetaL = spec.thetaL.value_or(default_thetaL(spec.theta0));
    seg.params.thetaR = spec.thetaR.value_or(default_thetaR(spec.theta0));
    seg.params.l = (coords[spec.node2] - coords[spec.node1]).norm();
    if (!(seg.params.l > 0.0))
      fail(ErrorKind::ValidationError, "crease " + std::to_string(c) + " has zero rest length");
    if (!(seg.params.thetaL <= seg.params.theta0 && seg.params.theta0 <= seg.params.thetaR &&
          seg.params.thetaL > -M_PI && seg.params.thetaR < M_PI))
      fail(ErrorKind::ValidationError,
           "crease " + std::to_string(c) + " violates -pi < thetaL <= theta0 <= thetaR < pi");
    if (seg.params.k_f < 0.0)
      fail(ErrorKind::ValidationError, "crease " + std::to_string(c) + " has negative k_f");
    mesh.creases.push_back(seg);
  }

  return mesh;
}

void init_directors(Mesh& mesh) {
  const double h = mesh.material.h;
  const int nn = mesh.num_nodes();

  // Panel normal taken from the first element's node ordering.
  std::vector<Vec3> panel_normal(mesh.num_panels, Vec3::Zero());
  std::vector<char> panel_seen(mesh.num_panels, 0);
  for (const auto& el : mesh.elements) {
    const Vec3& x1 = mesh.nodes[el.nodes[0]].X;
    const Vec3& x2 = mesh.nodes[el.nodes[1]].X;
    const Vec3& x4 = mesh.nodes[el.nodes[3]].X;
    Vec3 n = (x2 - x1).cross(x4 - x1).normalized();
    if (!panel_seen[el.panel]) {
      panel_normal[el.panel] = n;
      panel_seen[el.panel] = 1;
    } else {
      double dev = std::acos(std::clamp(n.dot(panel_normal[el.panel]), -1.0, 1.0));
      if (dev > 1e-8)
        fail(ErrorKind::NonFlatPanel,
             "panel " + std::to_string(el.panel) + " is not flat (normal deviation " +
                 std::to_string(dev) + " rad)");
    }
  }
  // Flatness check across every element corner, not just the first normals.
  for (const auto& el : mesh.elements) {
    const Vec3& n = panel_normal[el.panel];
    for (int k = 0; k < 4; ++k) {
      Vec3 e1 = mesh.nodes[el.nodes[(k + 1) % 4]].X - mesh.nodes[el.nodes[k]].X;
      Vec3 e2 = mesh.nodes[el.nodes[(k + 3) % 4]].X - mesh.nodes[el.nodes[k]].X;
      Vec3 nk = e1.cross(e2);
      if (nk.norm() > 0) {
        double dev = std::asin(std::clamp(nk.normalized().cross(n).norm(), 0.0, 1.0));
        if (dev > 1e-8)
          fail(ErrorKind::NonFlatPanel,
               "panel " + std::to_string(el.panel) + " is not flat at element " +
                   std::to_string(el.id));
      }
    }
  }

  // Slots: node-major, panels ascending within a node.
  std::vector<std::set<int>> node_panels(nn);
  for (const auto& el : mesh.elements)
    for (int n : el.nodes) node_panels[n].insert(el.panel);

  mesh.slot_panel.clear();
  mesh.slot_node.clear();
  mesh.slot_director.clear();
  mesh.node_slots.assign(nn, {});
  for (int n = 0; n < nn; ++n) {
    for (int p : node_panels[n]) {
      int s = mesh.num_slots();
      mesh.slot_panel.push_back(p);
      mesh.slot_node.push_back(n);
      mesh.slot_director.push_back(0.5 * h * panel_normal[p]);
      mesh.node_slots[n].push_back(s);
    }
  }
}

DofMap build_dof_map(const Mesh& mesh) {
  if (!mesh.has_directors())
    fail(ErrorKind::ValidationError, "directors must be initialized before building the dof map");
  DofMap dm;
  dm.trans_base.resize(mesh.num_nodes());
  dm.slot_base.resize(mesh.num_slots());
  int next = 0;
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    dm.trans_base[n] = next;
    next += 3;
    for (int s : mesh.node_slots[n]) {
      dm.slot_base[s] = next;
      next += 3;
    }
  }
  dm.total_dofs = next;
  return dm;
}

double mesh_characteristic_size(const Mesh& mesh) {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
  Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
  for (const auto& n : mesh.nodes) {
    lo = lo.cwiseMin(n.X);
    hi = hi.cwiseMax(n.X);
  }
  double d = (hi - lo).norm();
  return d > 0 ? d : 1.0;
}

}  // namespace orishell
