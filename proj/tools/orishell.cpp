#include "orishell/benchmarks.hpp"
#include "orishell/io.hpp"
#include "orishell/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <random>

using namespace orishell;

namespace {

int run_simulate(const std::string& scene_path, const std::string& out_dir,
                 int increments, double tol, int max_iters, int snapshots) {
  Scene scene = parse_scene(scene_path);
  if (increments > 0) scene.solver.max_increments = increments;
  if (tol > 0) scene.solver.tolerance = tol;
  if (max_iters > 0) scene.solver.max_iterations = max_iters;
  if (snapshots > 0) scene.outputs.cadence = snapshots;

  std::filesystem::create_directories(out_dir);
  Assembler asmb(scene.mesh, scene.dofs);
  NewtonSolver solver(asmb, scene.bcs, scene.solver);
  Trajectory traj = solver.run();

  for (const auto& inc : traj.increments)
    if ((inc.index - 1) % scene.outputs.cadence == 0 ||
        &inc == &traj.increments.back())
      write_snapshot(scene, asmb, inc.U, inc.index, out_dir);
  write_generic_curves(out_dir + "/curves.csv", scene, traj);

  nlohmann::json summary;
  summary["completed"] = traj.completed;
  summary["increments"] = traj.increments.size();
  summary["failures"] = traj.total_failures;
  summary["final_lambda"] = traj.increments.empty() ? 0.0 : traj.increments.back().lambda;
  if (!traj.completed) summary["diagnostic"] = traj.diagnostic;
  write_summary(out_dir + "/summary.json", summary);

  if (!traj.completed) {
    std::fprintf(stderr, "solver failed: %s\n", traj.diagnostic.c_str());
    return 2;
  }
  return 0;
}

int run_bench_miura(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  MiuraBenchResult res = run_miura_bench(100, /*quiet=*/false);
  write_miura_curves(out_dir + "/miura_curves.csv", res.rows);

  MiuraParams p;
  Material mat{12e9, 0.3, 0.01};
  Scene scene = gen_miura_unit(p, mat, 0.01, 100, -3.44);
  Assembler asmb(scene.mesh, scene.dofs);
  int cadence = std::max<size_t>(1, res.traj.increments.size() / 20);
  for (const auto& inc : res.traj.increments)
    if ((inc.index - 1) % cadence == 0 || &inc == &res.traj.increments.back())
      write_snapshot(scene, asmb, inc.U, inc.index, out_dir);

  nlohmann::json summary;
  summary["benchmark"] = "miura";
  summary["completed"] = res.completed;
  summary["increments"] = res.rows.size();
  double worst = 0.0;
  for (const auto& r : res.rows)
    worst = std::max(worst, std::abs(r.W - r.W_analytic) / r.W_analytic);
  summary["max_W_rel_error"] = worst;
  write_summary(out_dir + "/miura_summary.json", summary);
  std::printf("miura: %zu increments, max W error vs analytic %.3g\n", res.rows.size(), worst);
  return res.completed ? 0 : 2;
}

int run_bench_annulus(const std::string& out_dir, const std::string& mesh_arg,
                      std::vector<double> kfs) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::pair<int, int>> meshes = {{32, 4}, {64, 8}, {128, 16}};
  if (!mesh_arg.empty()) {
    int n = 0, m = 0;
    if (std::sscanf(mesh_arg.c_str(), "%dx%d", &n, &m) != 2 || n < 1 || m < 1) {
      std::fprintf(stderr, "invalid --mesh (expected NxM)\n");
      return 1;
    }
    meshes = {{n, m}};
  }
  if (kfs.empty()) kfs = {0.1, 0.5, 1.0};

  std::vector<AnnulusBenchRow> rows;
  bool all_ok = true;
  for (auto [n, m] : meshes)
    for (double kf : kfs) {
      std::printf("annulus %dx%d k_f=%g ...\n", n, m, kf);
      AnnulusBenchRow row = run_annulus_case(n, m, kf);
      std::printf("  E_bend=%.6g E_theory=%.6g rel_error=%.3f%%%s\n", row.E_bend,
                  row.E_theory, 100.0 * row.rel_error,
                  row.completed ? "" : "  [INCOMPLETE]");
      all_ok = all_ok && row.completed;
      rows.push_back(row);
    }
  write_annulus_curves(out_dir + "/annulus_curves.csv", rows);
  return all_ok ? 0 : 2;
}

int run_bench_cantilever(const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  CantileverBenchResult coarse = run_cantilever_bench(10, 1, /*quiet=*/false);
  write_cantilever_curves(out_dir + "/cantilever_curves.csv", coarse.rows);
  CantileverBenchResult fine = run_cantilever_bench(40, 4, /*quiet=*/true);
  write_cantilever_curves(out_dir + "/cantilever_refined.csv", fine.rows);

  double worst = 0.0;
  for (const auto& r : coarse.rows)
    if (r.w_oracle > 0) worst = std::max(worst, std::abs(r.w_tip - r.w_oracle) / r.w_oracle);
  std::printf("cantilever: max w error vs elastica %.3g (10 elements)\n", worst);
  return (coarse.completed && fine.completed) ? 0 : 2;
}

// Condensed derivative / invariance self-check.
int run_check() {
  std::mt19937 rng(4242);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int failures = 0;
  auto report = [&](const char* name, bool ok, double worst) {
    std::printf("[%s] %-34s worst %.3e\n", ok ? "PASS" : "FAIL", name, worst);
    if (!ok) ++failures;
  };

  Material mat{2.0e6, 0.3, 0.02};
  IntegratedConstitutive C = integrated_constitutive(mat);
  double worst_g = 0.0, worst_h = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    std::array<Vec3, 4> X = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1.1, 0.9, 0), Vec3(-0.1, 1.05, 0)};
    for (auto& x : X) x += 0.05 * Vec3(gauss(rng), gauss(rng), 0.0);
    std::array<Vec3, 4> D;
    D.fill(Vec3(0, 0, 0.5 * mat.h));
    ElementGeometry geom(X, D, C);
    ElemVec Ue;
    for (int i = 0; i < 24; ++i) Ue[i] = 0.01 * gauss(rng);
    ElemVec g;
    ElemMat H;
    geom.force_stiffness(Ue, g, H);
    double step = 1e-6;
    for (int i = 0; i < 24; ++i) {
      ElemVec Up = Ue, Um = Ue;
      Up[i] += step;
      Um[i] -= step;
      double fd = (geom.energy(Up) - geom.energy(Um)) / (2 * step);
      worst_g = std::max(worst_g, std::abs(fd - g[i]) / std::max(1e-12, g.norm()));
      ElemVec gp, gm;
      ElemMat Hd;
      geom.force_stiffness(Up, gp, Hd);
      geom.force_stiffness(Um, gm, Hd);
      worst_h = std::max(worst_h,
                         ((gp - gm) / (2 * step) - H.col(i)).norm() / std::max(1e-12, H.norm()));
    }
  }
  report("element gradient vs FD", worst_g < 1e-6, worst_g);
  report("element hessian vs FD", worst_h < 1e-5, worst_h);

  CreaseParams cp;
  cp.k_f = 0.7;
  cp.theta0 = 0.4;
  cp.thetaL = default_thetaL(cp.theta0);
  cp.thetaR = default_thetaR(cp.theta0);
  cp.l = 1.3;
  double worst_cg = 0.0, worst_ch = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    Vec3 base(0, 0, 1);
    std::array<Vec3, 4> d;
    for (auto& v : d) v = base + 0.3 * Vec3(gauss(rng), gauss(rng), gauss(rng));
    Vec3 x1(0, 0, 0), x2(1.3, 0, 0);
    auto cc = crease_contribution(d[0], d[1], d[2], d[3], x1, x2, cp, 0.02, true);
    double step = 1e-6;
    for (int i = 0; i < 12; ++i) {
      std::array<Vec3, 4> dp = d, dm = d;
      dp[i / 3][i % 3] += step;
      dm[i / 3][i % 3] -= step;
      auto cpv = crease_contribution(dp[0], dp[1], dp[2], dp[3], x1, x2, cp, 0.02, true);
      auto cmv = crease_contribution(dm[0], dm[1], dm[2], dm[3], x1, x2, cp, 0.02, true);
      double fd = (cpv.energy - cmv.energy) / (2 * step);
      worst_cg = std::max(worst_cg,
                          std::abs(fd - cc.grad[i]) / std::max(1e-12, cc.grad.norm()));
      worst_ch = std::max(worst_ch, ((cpv.grad - cmv.grad) / (2 * step) - cc.hess.col(i))
                                            .segment(0, 12)
                                            .norm() /
                                        std::max(1e-12, cc.hess.norm()));
    }
  }
  report("crease gradient vs FD", worst_cg < 1e-6, worst_cg);
  report("crease hessian vs FD", worst_ch < 1e-5, worst_ch);

  // Rigid-motion invariance of a creased two-panel mesh.
  std::vector<Vec3> coords = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0},
                              {0, 1, 0}, {1, 1, 0}, {2, 1, 0}};
  std::vector<std::array<int, 4>> quads = {{0, 1, 4, 3}, {1, 2, 5, 4}};
  CreaseSpec cs;
  cs.node1 = 1;
  cs.node2 = 4;
  cs.k_f = 0.3;
  Mesh mesh = build_mesh(coords, quads, {0, 1}, {cs}, Material{1e6, 0.3, 0.01});
  init_directors(mesh);
  DofMap dofs = build_dof_map(mesh);
  Assembler asmb(mesh, dofs);
  Vec3 axis = Vec3(0.3, -0.5, 0.8).normalized();
  Mat3 R = Eigen::AngleAxisd(0.9, axis).toRotationMatrix();
  Vec3 t(0.2, -0.1, 0.4);
  VecX U = VecX::Zero(dofs.total_dofs);
  for (int n = 0; n < mesh.num_nodes(); ++n)
    U.segment<3>(dofs.trans_dof(n, 0)) = R * mesh.nodes[n].X + t - mesh.nodes[n].X;
  for (int s = 0; s < mesh.num_slots(); ++s)
    U.segment<3>(dofs.slot_dof(s, 0)) = R * mesh.slot_director[s] - mesh.slot_director[s];
  double e = asmb.total_energy(U);
  double scale = 1e6 * 0.01 * 2.0;
  report("rigid motion invariance", std::abs(e) < 1e-10 * scale, std::abs(e) / scale);

  std::printf(failures == 0 ? "self-check passed\n" : "self-check FAILED\n");
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"origami solid-shell simulator"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "run a scene file");
  std::string scene_path, out_dir = "out";
  int increments = -1, max_iters = -1, snapshots = -1;
  double tol = -1;
  sim->add_option("scene", scene_path, "scene JSON file")->required();
  sim->add_option("--out", out_dir, "output directory");
  sim->add_option("--increments", increments, "override max increments");
  sim->add_option("--tol", tol, "override displacement tolerance");
  sim->add_option("--max-iters", max_iters, "override max Newton iterations");
  sim->add_option("--snapshots", snapshots, "snapshot cadence");

  auto* bench = app.add_subcommand("bench", "run a benchmark");
  std::string which, mesh_arg;
  std::vector<double> kfs;
  std::string bench_out = "bench_out";
  bench->add_option("name", which, "miura|annulus|cantilever|all")->required();
  bench->add_option("--out", bench_out, "output directory");
  bench->add_option("--mesh", mesh_arg, "annulus mesh NxM");
  bench->add_option("--kf", kfs, "annulus folding stiffness list");

  auto* check = app.add_subcommand("check", "run the derivative/property self-check");
  (void)check;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed())
      return run_simulate(scene_path, out_dir, increments, tol, max_iters, snapshots);
    if (bench->parsed()) {
      if (which == "miura") return run_bench_miura(bench_out);
      if (which == "annulus") return run_bench_annulus(bench_out, mesh_arg, kfs);
      if (which == "cantilever") return run_bench_cantilever(bench_out);
      if (which == "all") {
        int a = run_bench_miura(bench_out + "/miura");
        int b = run_bench_annulus(bench_out + "/annulus", mesh_arg, kfs);
        int c = run_bench_cantilever(bench_out + "/cantilever");
        return (a || b || c) ? 2 : 0;
      }
      std::fprintf(stderr, "unknown benchmark '%s'\n", which.c_str());
      return 1;
    }
    return run_check();
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == ErrorKind::IoError || e.kind() == ErrorKind::ParseError ||
                   e.kind() == ErrorKind::ValidationError ||
                   e.kind() == ErrorKind::UnknownScene
               ? 1
               : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
