#include "orishell/crease.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

using namespace orishell;
using namespace orishell::testing;

namespace {

CreaseParams make_params(double k_f, double theta0, double l = 1.0) {
  CreaseParams p;
  p.k_f = k_f;
  p.theta0 = theta0;
  p.thetaL = default_thetaL(theta0);
  p.thetaR = default_thetaR(theta0);
  p.l = l;
  return p;
}

}  // namespace

TEST_CASE("density: rest angle, middle branch value, divergence") {
  CreaseParams p = make_params(0.01, 0.0);
  p.thetaL = -M_PI / 2;
  p.thetaR = M_PI / 2;
  CHECK(crease_energy_density(p.theta0, p) == 0.0);
  CHECK(crease_energy_density(0.5, p) == doctest::Approx(1.25e-3).epsilon(1e-12));

  double prev = crease_energy_density(p.thetaR + 0.01, p);
  for (double th = p.thetaR + 0.02; th < M_PI; th += 0.05) {
    double v = crease_energy_density(th, p);
    CHECK(v > prev);
    prev = v;
  }
  // logarithmic divergence toward pi: still growing arbitrarily close to it
  double v6 = crease_energy_density(M_PI - 1e-6, p);
  double v12 = crease_energy_density(M_PI - 1e-12, p);
  CHECK(v6 > crease_energy_density(2.0, p));
  CHECK(v12 > v6);
  CHECK(std::isfinite(v12));
  CHECK_THROWS_AS(crease_energy_density(M_PI, p), Error);
  CHECK_THROWS_AS(crease_energy_density(-M_PI - 0.1, p), Error);
}

TEST_CASE("density: C1 continuity at the branch junctions on a parameter grid") {
  for (double theta0 : {-0.8, 0.0, 0.6}) {
    for (double fl : {0.3, 0.6, 0.9}) {
      for (double fr : {0.4, 0.75}) {
        CreaseParams p;
        p.k_f = 0.37;
        p.theta0 = theta0;
        p.thetaL = theta0 - fl * (theta0 + M_PI);
        p.thetaR = theta0 + fr * (M_PI - theta0);
        p.l = 1.0;
        // barrier branch agrees with the quadratic branch to first order
        const double d = 1e-8;
        for (int side = 0; side < 2; ++side) {
          double tj = side == 0 ? p.thetaL : p.thetaR;
          double into_barrier = tj + (side == 0 ? -d : d);
          DensityEval mid = crease_density_deriv(tj, p);  // middle branch at tj
          DensityEval bar = crease_density_deriv(into_barrier, p);
          CHECK(std::abs(bar.psi - (mid.psi + (into_barrier - tj) * mid.dpsi)) < 1e-10);
          CHECK(std::abs(bar.dpsi - mid.dpsi) < 1e-6);
        }
        // exact value/slope agreement at the junction itself
        DensityEval mid_at_R = crease_density_deriv(p.thetaR, p);
        CHECK(mid_at_R.psi == doctest::Approx(0.5 * p.k_f * std::pow(p.thetaR - p.theta0, 2)));
        CHECK(mid_at_R.dpsi == doctest::Approx(p.k_f * (p.thetaR - p.theta0)));
      }
    }
  }
}

TEST_CASE("density derivatives match finite differences") {
  CreaseParams p = make_params(0.42, 0.3);
  for (double th : {-2.9, -1.0, 0.31, 2.2, 2.95}) {
    DensityEval e = crease_density_deriv(th, p);
    double d = 1e-7;
    double fd1 = (crease_energy_density(th + d, p) - crease_energy_density(th - d, p)) / (2 * d);
    double fd2 = (crease_density_deriv(th + d, p).dpsi - crease_density_deriv(th - d, p).dpsi) / (2 * d);
    CHECK(e.dpsi == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(e.ddpsi == doctest::Approx(fd2).epsilon(1e-6));
  }
}

TEST_CASE("density: nonnegative with zero minimum at theta0; monotone barriers") {
  CreaseParams p = make_params(0.8, -0.4);
  CHECK(crease_energy_density(p.theta0, p) == 0.0);
  for (double th = -3.1; th < 3.1; th += 0.05)
    CHECK(crease_energy_density(th, p) >= 0.0);
  // strictly decreasing on (-pi, thetaL)
  double prev = crease_energy_density(-3.13, p);
  for (double th = -3.0; th < p.thetaL; th += 0.05) {
    double v = crease_energy_density(th, p);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("signed angle: hand cases and antisymmetry") {
  Vec3 p(0, 0, 1), q(1, 0, 0), axis(0, 1, 0);
  CHECK(signed_angle(p, q, axis) == doctest::Approx(M_PI / 2));
  CHECK(signed_angle(q, p, axis) == doctest::Approx(-M_PI / 2));

  for (int t = 0; t < 10; ++t) {
    Vec3 a = rand_vec3(), b = rand_vec3(), ax = rand_vec3();
    if (a.norm() < 1e-3 || b.norm() < 1e-3) continue;
    CHECK(signed_angle(a, b, ax) == doctest::Approx(-signed_angle(b, a, ax)));
    Mat3 R = random_rotation();
    CHECK(signed_angle(R * a, R * b, R * ax) ==
          doctest::Approx(signed_angle(a, b, ax)).epsilon(1e-12));
  }
}

TEST_CASE("signed angle derivatives match finite differences") {
  for (int t = 0; t < 20; ++t) {
    Vec3 p = rand_vec3() + Vec3(0, 0, 2);
    Vec3 q = rand_vec3() + Vec3(0.5, 0, 1.5);
    Vec3 axis(1, 0.2, 0);
    AngleDerivs ad = signed_angle_derivs(p, q, axis, true);
    REQUIRE(!ad.degenerate);

    VecX x(6);
    x << p, q;
    auto f = [&](const VecX& v) {
      return signed_angle(v.segment<3>(0), v.segment<3>(3), axis);
    };
    VecX g_fd = fd_gradient(f, x, 1e-7);
    VecX g(6);
    g << ad.dp, ad.dq;
    CHECK((g - g_fd).norm() < 1e-6 * std::max(1.0, g_fd.norm()));

    MatX H(6, 6);
    H.block<3, 3>(0, 0) = ad.Hpp;
    H.block<3, 3>(0, 3) = ad.Hpq;
    H.block<3, 3>(3, 0) = ad.Hpq.transpose();
    H.block<3, 3>(3, 3) = ad.Hqq;
    MatX H_fd = fd_jacobian(
        [&](const VecX& v) {
          AngleDerivs a = signed_angle_derivs(v.segment<3>(0), v.segment<3>(3), axis, false);
          VecX gg(6);
          gg << a.dp, a.dq;
          return gg;
        },
        x, 1e-6);
    CHECK((H - H_fd).norm() < 1e-5 * std::max(1.0, H_fd.norm()));
    CHECK((H - H.transpose()).norm() < 1e-10 * std::max(1.0, H.norm()));
  }
}

TEST_CASE("fold_angle_at: flat state, sign rule, panel swap") {
  Material mat{1e6, 0.3, 0.01};
  Mesh mesh = two_panel_mesh(mat, 0.1);
  DofMap dofs = build_dof_map(mesh);
  VecX U = VecX::Zero(dofs.total_dofs);
  const CreaseSegment& cr = mesh.creases[0];

  for (double s : {-0.7, 0.0, 0.9})
    CHECK(fold_angle_at(mesh, dofs, U, cr, s).theta == doctest::Approx(0.0));

  // tilt panel b directors toward +x: directors rotate about the crease axis
  int pb = mesh.elements[cr.elem_b].panel;
  for (int node : {cr.node1, cr.node2}) {
    int slot = mesh.slot(pb, node);
    Vec3 d0 = mesh.slot_director[slot];
    Mat3 R = Eigen::AngleAxisd(0.6, Vec3(0, 1, 0)).toRotationMatrix();
    U.segment<3>(dofs.slot_dof(slot, 0)) = R * d0 - d0;
  }
  double th = fold_angle_at(mesh, dofs, U, cr, 0.0).theta;
  CHECK(std::abs(std::abs(th) - 0.6) < 1e-12);

  // swapping the roles of the panels flips the sign
  CreaseSegment swapped = cr;
  std::swap(swapped.elem_a, swapped.elem_b);
  CHECK(fold_angle_at(mesh, dofs, U, swapped, 0.0).theta == doctest::Approx(-th));

  // rigid motion of the whole state leaves theta unchanged
  Mat3 R = random_rotation();
  Vec3 t = rand_vec3();
  VecX Ur = rigid_motion_displacement(mesh, dofs, R, t);
  // compose: rotate deformed directors too
  VecX Uc = VecX::Zero(dofs.total_dofs);
  for (int n = 0; n < mesh.num_nodes(); ++n)
    Uc.segment<3>(dofs.trans_dof(n, 0)) =
        R * (mesh.nodes[n].X + U.segment<3>(dofs.trans_dof(n, 0))) + t - mesh.nodes[n].X;
  for (int s = 0; s < mesh.num_slots(); ++s)
    Uc.segment<3>(dofs.slot_dof(s, 0)) =
        R * (mesh.slot_director[s] + U.segment<3>(dofs.slot_dof(s, 0))) - mesh.slot_director[s];
  CHECK(fold_angle_at(mesh, dofs, Uc, cr, 0.0).theta == doctest::Approx(th).epsilon(1e-12));
}

TEST_CASE("fold angle interpolates along s") {
  Vec3 p(0, 0, 1);
  CHECK(signed_angle(p, Vec3(1, 0, 0), Vec3(0, 1, 0)) == doctest::Approx(M_PI / 2));
  // differing end directors produce an s-dependent angle through the blend
  Material mat{1e6, 0.3, 0.01};
  Mesh mesh = two_panel_mesh(mat, 0.1);
  DofMap dofs = build_dof_map(mesh);
  VecX U = VecX::Zero(dofs.total_dofs);
  const CreaseSegment& cr = mesh.creases[0];
  int pb = mesh.elements[cr.elem_b].panel;
  int slot2 = mesh.slot(pb, cr.node2);
  Vec3 d0 = mesh.slot_director[slot2];
  Mat3 R = Eigen::AngleAxisd(0.8, Vec3(0, 1, 0)).toRotationMatrix();
  U.segment<3>(dofs.slot_dof(slot2, 0)) = R * d0 - d0;
  double th_m = std::abs(fold_angle_at(mesh, dofs, U, cr, -1.0).theta);
  double th_0 = std::abs(fold_angle_at(mesh, dofs, U, cr, 0.0).theta);
  double th_p = std::abs(fold_angle_at(mesh, dofs, U, cr, 1.0).theta);
  CHECK(th_m == doctest::Approx(0.0));
  CHECK(th_p == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(th_0 > 0.0);
  CHECK(th_0 < th_p);
}

TEST_CASE("crease contribution: rest state, constant-angle reduction, FD") {
  CreaseParams p = make_params(0.35, 0.0, 1.7);
  Vec3 x1(0, 0, 0), x2(1.7, 0, 0);
  Vec3 up(0, 0, 0.005);

  SUBCASE("flat rest state gives zero energy and gradient") {
    auto cc = crease_contribution(up, up, up, up, x1, x2, p, 0.01, true);
    CHECK(cc.energy == doctest::Approx(0.0));
    CHECK(cc.grad.norm() == doctest::Approx(0.0));
  }

  SUBCASE("constant directors reduce to l * density(theta)") {
    Mat3 R = Eigen::AngleAxisd(0.9, Vec3(1, 0, 0).normalized()).toRotationMatrix();
    Vec3 q = R * up;
    auto cc = crease_contribution(up, up, q, q, x1, x2, p, 0.01, false);
    double theta = signed_angle(up, q, x2 - x1);
    CHECK(cc.energy == doctest::Approx(p.l * crease_energy_density(theta, p)).epsilon(1e-12));
  }

  SUBCASE("gradient and hessian match FD at a random perturbed state") {
    CreaseParams pr = make_params(0.2, 0.25, 1.7);
    for (int trial = 0; trial < 10; ++trial) {
      std::array<Vec3, 4> d;
      for (auto& v : d) v = Vec3(0, 0, 1) + 0.4 * rand_vec3();
      auto cc = crease_contribution(d[0], d[1], d[2], d[3], x1, x2, pr, 0.01, true);
      VecX x(12);
      x << d[0], d[1], d[2], d[3];
      auto energy_of = [&](const VecX& v) {
        return crease_contribution(v.segment<3>(0), v.segment<3>(3), v.segment<3>(6),
                                   v.segment<3>(9), x1, x2, pr, 0.01, false)
            .energy;
      };
      VecX g_fd = fd_gradient(energy_of, x, 1e-7);
      CHECK((VecX(cc.grad.segment(0, 12)) - g_fd).norm() <=
            1e-6 * std::max(1e-12, g_fd.norm()));
      MatX H_fd = fd_jacobian(
          [&](const VecX& v) {
            auto c = crease_contribution(v.segment<3>(0), v.segment<3>(3), v.segment<3>(6),
                                         v.segment<3>(9), x1, x2, pr, 0.01, true);
            return VecX(c.grad.segment(0, 12));
          },
          x, 1e-6);
      CHECK((MatX(cc.hess.block(0, 0, 12, 12)) - H_fd).norm() <= 1e-5 * H_fd.norm());
    }
  }

  SUBCASE("rigid motion leaves energy unchanged") {
    CreaseParams pr = make_params(0.2, 0.25, 1.7);
    std::array<Vec3, 4> d;
    for (auto& v : d) v = Vec3(0, 0, 1) + 0.3 * rand_vec3();
    auto c0 = crease_contribution(d[0], d[1], d[2], d[3], x1, x2, pr, 0.01, false);
    Mat3 R = random_rotation();
    Vec3 t = rand_vec3();
    auto c1 = crease_contribution(R * d[0], R * d[1], R * d[2], R * d[3], R * x1 + t,
                                  R * x2 + t, pr, 0.01, false);
    CHECK(c1.energy == doctest::Approx(c0.energy).epsilon(1e-12));
  }

  SUBCASE("zero interpolated director is rejected") {
    // blend vanishes at the first gauss point: da2 = -(L1/L2) da1 there
    double s_g = -1.0 / std::sqrt(3.0);
    double ratio = (1.0 - s_g) / (1.0 + s_g);
    CHECK_THROWS_AS(
        crease_contribution(up, -ratio * up, up, up, x1, x2, p, 0.01, false), Error);
  }
}
