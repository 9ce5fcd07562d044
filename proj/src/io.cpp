#include "orishell/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace orishell {

namespace {

using nlohmann::json;

int dof_letter(const std::string& s, const std::string& where) {
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  fail(ErrorKind::ValidationError, where + ": dof must be one of x, y, z");
}

void check_field(const json& j, const char* name, const std::string& where) {
  if (!j.contains(name))
    fail(ErrorKind::ValidationError, where + ": missing field '" + name + "'");
}

FILE* open_out(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) fail(ErrorKind::IoError, "cannot open " + path + " for writing");
  return f;
}

void write_num(FILE* f, double v) {
  if (!std::isfinite(v)) fail(ErrorKind::IoError, "refusing to write non-finite value");
  std::fprintf(f, "%.12g", v);
}

}  // namespace

Scene parse_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "file not found: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, path + ": " + e.what());
  }
  try {
    return scene_from_json(j);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorKind::ValidationError, path + ": " + e.what());
  }
}

Scene scene_from_json(const json& j) {
  check_field(j, "nodes", "scene");
  check_field(j, "elements", "scene");
  check_field(j, "material", "scene");

  std::vector<Vec3> coords;
  for (const auto& n : j.at("nodes")) {
    if (!n.is_array() || n.size() != 3)
      fail(ErrorKind::ValidationError, "nodes: each entry must be [x, y, z]");
    coords.emplace_back(n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>());
  }

  std::vector<std::array<int, 4>> quads;
  std::vector<int> panels;
  for (const auto& e : j.at("elements")) {
    check_field(e, "nodes", "elements");
    const auto& nn = e.at("nodes");
    if (nn.size() != 4) fail(ErrorKind::ValidationError, "elements: need 4 nodes per quad");
    quads.push_back({nn.at(0).get<int>(), nn.at(1).get<int>(), nn.at(2).get<int>(),
                     nn.at(3).get<int>()});
    panels.push_back(e.value("panel", 0));
  }

  std::vector<CreaseSpec> creases;
  if (j.contains("creases")) {
    int idx = 0;
    for (const auto& c : j.at("creases")) {
      std::string where = "creases[" + std::to_string(idx++) + "]";
      check_field(c, "node1", where);
      check_field(c, "node2", where);
      check_field(c, "k_f", where);
      CreaseSpec spec;
      spec.node1 = c.at("node1").get<int>();
      spec.node2 = c.at("node2").get<int>();
      spec.k_f = c.at("k_f").get<double>();
      spec.theta0 = c.value("theta0", 0.0);
      if (c.contains("thetaL")) spec.thetaL = c.at("thetaL").get<double>();
      if (c.contains("thetaR")) spec.thetaR = c.at("thetaR").get<double>();
      double tL = spec.thetaL.value_or(default_thetaL(spec.theta0));
      double tR = spec.thetaR.value_or(default_thetaR(spec.theta0));
      if (tL > tR) fail(ErrorKind::ValidationError, where + ": thetaL <= thetaR required");
      creases.push_back(spec);
    }
  }

  const auto& m = j.at("material");
  check_field(m, "E", "material");
  check_field(m, "nu", "material");
  check_field(m, "h", "material");
  Material mat{m.at("E").get<double>(), m.at("nu").get<double>(), m.at("h").get<double>()};

  Scene s;
  s.mesh = build_mesh(coords, quads, panels, creases, mat);
  init_directors(s.mesh);
  s.dofs = build_dof_map(s.mesh);

  auto check_node = [&](int node, const std::string& where) {
    if (node < 0 || node >= s.mesh.num_nodes())
      fail(ErrorKind::ValidationError, where + ": node out of range");
  };

  if (j.contains("bcs")) {
    int idx = 0;
    for (const auto& b : j.at("bcs")) {
      std::string where = "bcs[" + std::to_string(idx++) + "]";
      check_field(b, "node", where);
      int node = b.at("node").get<int>();
      check_node(node, where);
      std::string fix = b.value("fix", "");
      for (char c : fix)
        s.bcs.fixed_dofs.push_back(s.dofs.trans_dof(node, dof_letter(std::string(1, c), where)));
      std::string fd = b.value("fix_directors", "");
      for (char c : fd) {
        int comp = dof_letter(std::string(1, c), where);
        for (int slot : s.mesh.node_slots[node])
          s.bcs.fixed_dofs.push_back(s.dofs.slot_dof(slot, comp));
      }
    }
  }
  std::vector<double> targets;
  if (j.contains("prescribed")) {
    int idx = 0;
    for (const auto& p : j.at("prescribed")) {
      std::string where = "prescribed[" + std::to_string(idx++) + "]";
      check_field(p, "node", where);
      check_field(p, "dof", where);
      check_field(p, "value", where);
      int node = p.at("node").get<int>();
      check_node(node, where);
      s.bcs.prescribed_dofs.push_back(
          s.dofs.trans_dof(node, dof_letter(p.at("dof").get<std::string>(), where)));
      targets.push_back(p.at("value").get<double>());
    }
  }
  s.bcs.prescribed_targets = Eigen::Map<VecX>(targets.data(), targets.size());
  s.bcs.F_ext = VecX::Zero(s.dofs.total_dofs);
  if (j.contains("forces")) {
    int idx = 0;
    for (const auto& p : j.at("forces")) {
      std::string where = "forces[" + std::to_string(idx++) + "]";
      check_field(p, "node", where);
      check_field(p, "dof", where);
      check_field(p, "value", where);
      int node = p.at("node").get<int>();
      check_node(node, where);
      s.bcs.F_ext[s.dofs.trans_dof(node, dof_letter(p.at("dof").get<std::string>(), where))] +=
          p.at("value").get<double>();
    }
  }
  partition_free_dofs(s.bcs, s.dofs.total_dofs);  // validates overlap

  if (j.contains("solver")) {
    const auto& so = j.at("solver");
    s.solver.max_increments = so.value("max_increments", s.solver.max_increments);
    s.solver.max_iterations = so.value("max_iterations", s.solver.max_iterations);
    s.solver.tolerance = so.value("tolerance", s.solver.tolerance);
    s.solver.max_recovery = so.value("max_recovery", s.solver.max_recovery);
    if (s.solver.max_increments <= 0 || s.solver.max_iterations <= 0 || s.solver.max_recovery < 1)
      fail(ErrorKind::ValidationError, "solver: counts must be positive");
  }
  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    if (o.contains("tracked_nodes"))
      for (const auto& n : o.at("tracked_nodes")) {
        int node = n.get<int>();
        check_node(node, "outputs.tracked_nodes");
        s.outputs.tracked_nodes.push_back(node);
      }
    s.outputs.cadence = o.value("cadence", 1);
    if (s.outputs.cadence < 1)
      fail(ErrorKind::ValidationError, "outputs.cadence must be >= 1");
  }
  if (j.contains("meta")) s.meta = j.at("meta");
  return s;
}

json serialize_scene(const Scene& s) {
  json j;
  j["nodes"] = json::array();
  for (const auto& n : s.mesh.nodes) j["nodes"].push_back({n.X.x(), n.X.y(), n.X.z()});
  j["elements"] = json::array();
  for (const auto& e : s.mesh.elements)
    j["elements"].push_back({{"nodes", {e.nodes[0], e.nodes[1], e.nodes[2], e.nodes[3]}},
                             {"panel", e.panel}});
  j["creases"] = json::array();
  for (const auto& c : s.mesh.creases)
    j["creases"].push_back({{"node1", c.node1},
                            {"node2", c.node2},
                            {"k_f", c.params.k_f},
                            {"theta0", c.params.theta0},
                            {"thetaL", c.params.thetaL},
                            {"thetaR", c.params.thetaR}});
  j["material"] = {{"E", s.mesh.material.E}, {"nu", s.mesh.material.nu}, {"h", s.mesh.material.h}};

  // Group fixed dofs back into per-node letter sets.
  std::vector<std::array<bool, 3>> fix_t(s.mesh.num_nodes(), {false, false, false});
  std::vector<std::array<bool, 3>> fix_d(s.mesh.num_nodes(), {false, false, false});
  for (int d : s.bcs.fixed_dofs) {
    bool found = false;
    for (int n = 0; n < s.mesh.num_nodes() && !found; ++n)
      for (int c = 0; c < 3; ++c)
        if (s.dofs.trans_dof(n, c) == d) {
          fix_t[n][c] = true;
          found = true;
          break;
        }
    if (!found)
      for (int slot = 0; slot < s.mesh.num_slots() && !found; ++slot)
        for (int c = 0; c < 3; ++c)
          if (s.dofs.slot_dof(slot, c) == d) {
            fix_d[s.mesh.slot_node[slot]][c] = true;
            found = true;
            break;
          }
  }
  j["bcs"] = json::array();
  const char* letters = "xyz";
  for (int n = 0; n < s.mesh.num_nodes(); ++n) {
    std::string ft, fd;
    for (int c = 0; c < 3; ++c) {
      if (fix_t[n][c]) ft += letters[c];
      if (fix_d[n][c]) fd += letters[c];
    }
    if (ft.empty() && fd.empty()) continue;
    json b = {{"node", n}};
    if (!ft.empty()) b["fix"] = ft;
    if (!fd.empty()) b["fix_directors"] = fd;
    j["bcs"].push_back(b);
  }
  j["prescribed"] = json::array();
  for (size_t k = 0; k < s.bcs.prescribed_dofs.size(); ++k) {
    int d = s.bcs.prescribed_dofs[k];
    for (int n = 0; n < s.mesh.num_nodes(); ++n)
      for (int c = 0; c < 3; ++c)
        if (s.dofs.trans_dof(n, c) == d)
          j["prescribed"].push_back({{"node", n},
                                     {"dof", std::string(1, letters[c])},
                                     {"value", s.bcs.prescribed_targets[k]}});
  }
  j["forces"] = json::array();
  if (s.bcs.F_ext.size() == s.dofs.total_dofs)
    for (int n = 0; n < s.mesh.num_nodes(); ++n)
      for (int c = 0; c < 3; ++c) {
        double v = s.bcs.F_ext[s.dofs.trans_dof(n, c)];
        if (v != 0.0)
          j["forces"].push_back({{"node", n}, {"dof", std::string(1, letters[c])}, {"value", v}});
      }
  j["solver"] = {{"max_increments", s.solver.max_increments},
                 {"max_iterations", s.solver.max_iterations},
                 {"tolerance", s.solver.tolerance},
                 {"max_recovery", s.solver.max_recovery}};
  j["outputs"] = {{"tracked_nodes", s.outputs.tracked_nodes}, {"cadence", s.outputs.cadence}};
  if (!s.meta.is_null()) j["meta"] = s.meta;
  return j;
}

std::string write_snapshot(const Scene& scene, const Assembler& asmb,
                           const VecX& U, int increment, const std::string& dir) {
  std::filesystem::create_directories(dir);
  char name[32];
  std::snprintf(name, sizeof(name), "step_%04d.vtk", increment);
  std::string path = dir + "/" + name;
  FILE* f = open_out(path);

  const Mesh& mesh = scene.mesh;
  std::fprintf(f, "# vtk DataFile Version 3.0\n");
  std::fprintf(f, "orishell snapshot increment %d\n", increment);
  std::fprintf(f, "ASCII\nDATASET UNSTRUCTURED_GRID\n");
  std::fprintf(f, "POINTS %d double\n", mesh.num_nodes());
  for (const auto& n : mesh.nodes) {
    Vec3 x = n.X + U.segment<3>(scene.dofs.trans_dof(n.id, 0));
    std::fprintf(f, "%.17g %.17g %.17g\n", x.x(), x.y(), x.z());
  }
  std::fprintf(f, "CELLS %d %d\n", mesh.num_elements(), 5 * mesh.num_elements());
  for (const auto& e : mesh.elements)
    std::fprintf(f, "4 %d %d %d %d\n", e.nodes[0], e.nodes[1], e.nodes[2], e.nodes[3]);
  std::fprintf(f, "CELL_TYPES %d\n", mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) std::fprintf(f, "9\n");
  std::fprintf(f, "POINT_DATA %d\n", mesh.num_nodes());
  std::fprintf(f, "VECTORS displacement double\n");
  for (const auto& n : mesh.nodes) {
    Vec3 u = U.segment<3>(scene.dofs.trans_dof(n.id, 0));
    std::fprintf(f, "%.17g %.17g %.17g\n", u.x(), u.y(), u.z());
  }
  std::fprintf(f, "CELL_DATA %d\n", mesh.num_elements());
  std::fprintf(f, "SCALARS panel_id int 1\nLOOKUP_TABLE default\n");
  for (const auto& e : mesh.elements) std::fprintf(f, "%d\n", e.panel);
  std::fprintf(f, "SCALARS bending_energy_density double 1\nLOOKUP_TABLE default\n");
  VecX eb = asmb.element_bending_energies(U);
  for (int e = 0; e < mesh.num_elements(); ++e)
    std::fprintf(f, "%.17g\n", eb[e] / asmb.element_area(e));
  std::fclose(f);
  return path;
}

std::vector<Vec3> read_snapshot_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  std::string line;
  int count = -1;
  while (std::getline(in, line)) {
    if (line.rfind("POINTS", 0) == 0) {
      std::istringstream ss(line);
      std::string kw, type;
      ss >> kw >> count >> type;
      break;
    }
  }
  if (count < 0) fail(ErrorKind::ParseError, path + ": no POINTS section");
  std::vector<Vec3> pts(count);
  for (int i = 0; i < count; ++i)
    if (!(in >> pts[i].x() >> pts[i].y() >> pts[i].z()))
      fail(ErrorKind::ParseError, path + ": truncated POINTS section");
  return pts;
}

void write_miura_curves(const std::string& path, const std::vector<MiuraBenchRow>& rows) {
  FILE* f = open_out(path);
  std::fprintf(f, "lambda,L_ratio,H,W,H_analytic,W_analytic\n");
  for (const auto& r : rows) {
    write_num(f, r.lambda); std::fputc(',', f);
    write_num(f, r.L_ratio); std::fputc(',', f);
    write_num(f, r.H); std::fputc(',', f);
    write_num(f, r.W); std::fputc(',', f);
    write_num(f, r.H_analytic); std::fputc(',', f);
    write_num(f, r.W_analytic); std::fputc('\n', f);
  }
  std::fclose(f);
}

void write_annulus_curves(const std::string& path, const std::vector<AnnulusBenchRow>& rows) {
  FILE* f = open_out(path);
  std::fprintf(f,
               "mesh_density,k_f,E_bend,E_theory,rel_error,"
               "E_bend_no_crease_row,E_bend_inner\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%dx%d,", r.n, r.m);
    write_num(f, r.k_f); std::fputc(',', f);
    write_num(f, r.E_bend); std::fputc(',', f);
    write_num(f, r.E_theory); std::fputc(',', f);
    write_num(f, r.rel_error); std::fputc(',', f);
    write_num(f, r.E_bend_no_crease_row); std::fputc(',', f);
    write_num(f, r.E_bend_inner); std::fputc('\n', f);
  }
  std::fclose(f);
}

void write_cantilever_curves(const std::string& path,
                             const std::vector<CantileverBenchRow>& rows) {
  FILE* f = open_out(path);
  std::fprintf(f, "P,u_tip,w_tip,u_oracle,w_oracle\n");
  for (const auto& r : rows) {
    write_num(f, r.P); std::fputc(',', f);
    write_num(f, r.u_tip); std::fputc(',', f);
    write_num(f, r.w_tip); std::fputc(',', f);
    write_num(f, r.u_oracle); std::fputc(',', f);
    write_num(f, r.w_oracle); std::fputc('\n', f);
  }
  std::fclose(f);
}

void write_generic_curves(const std::string& path, const Scene& scene,
                          const Trajectory& traj) {
  FILE* f = open_out(path);
  std::fprintf(f, "lambda,energy,max_fold");
  for (int n : scene.outputs.tracked_nodes)
    std::fprintf(f, ",u%d_x,u%d_y,u%d_z", n, n, n);
  std::fputc('\n', f);
  for (const auto& inc : traj.increments) {
    write_num(f, inc.lambda); std::fputc(',', f);
    write_num(f, inc.energy); std::fputc(',', f);
    write_num(f, inc.max_abs_fold);
    for (int n : scene.outputs.tracked_nodes)
      for (int c = 0; c < 3; ++c) {
        std::fputc(',', f);
        write_num(f, inc.U[scene.dofs.trans_dof(n, c)]);
      }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

void write_summary(const std::string& path, const nlohmann::json& summary) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoError, "cannot open " + path + " for writing");
  out << summary.dump(2) << "\n";
}

}  // namespace orishell
