#include "orishell/shell_element.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

using namespace orishell;
using namespace orishell::testing;

namespace {

const Material kMat{2e6, 0.3, 0.02};

ElementGeometry make_geom(const std::array<Vec3, 4>& X, const Material& mat = kMat) {
  std::array<Vec3, 4> D;
  Vec3 n = (X[1] - X[0]).cross(X[3] - X[0]).normalized();
  D.fill(0.5 * mat.h * n);
  return ElementGeometry(X, D, integrated_constitutive(mat));
}

std::array<Vec3, 4> unit_square() {
  return {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
}

}  // namespace

TEST_CASE("shape functions: nodal values, partition of unity") {
  ShapeEval c = shape_functions(0, 0);
  for (int i = 0; i < 4; ++i) CHECK(c.N[i] == doctest::Approx(0.25));
  ShapeEval n3 = shape_functions(1, 1);
  CHECK(n3.N[0] == doctest::Approx(0));
  CHECK(n3.N[1] == doctest::Approx(0));
  CHECK(n3.N[2] == doctest::Approx(1));
  CHECK(n3.N[3] == doctest::Approx(0));
  for (int t = 0; t < 10; ++t) {
    double xi = unit_rand(), eta = unit_rand();
    ShapeEval s = shape_functions(xi, eta);
    CHECK(s.N.sum() == doctest::Approx(1.0));
    CHECK(s.dNxi.sum() == doctest::Approx(0.0));
    CHECK(s.dNeta.sum() == doctest::Approx(0.0));
  }
}

TEST_CASE("local basis of a unit square and frame covariance") {
  auto X = unit_square();
  LocalFrame f = local_basis(X);
  CHECK((f.ex - Vec3(1, 0, 0)).norm() == doctest::Approx(0));
  CHECK((f.ey - Vec3(0, 1, 0)).norm() == doctest::Approx(0));
  CHECK((f.ez - Vec3(0, 0, 1)).norm() == doctest::Approx(0));

  // cosine table entries for centered unit square with directors (0,0,h/2)
  std::array<Vec3, 4> Xc = {Vec3(-0.5, -0.5, 0), Vec3(0.5, -0.5, 0),
                            Vec3(0.5, 0.5, 0), Vec3(-0.5, 0.5, 0)};
  TransformSet T = transform_matrices(local_basis(Xc), Vec3(0.5, 0, 0), Vec3(0, 0.5, 0),
                                      Vec3(0, 0, 0.01));
  CHECK(T.cosines(2, 2) == doctest::Approx(0.01));
  CHECK(T.cosines(0, 2) == doctest::Approx(0.0));
  CHECK(T.cosines(1, 2) == doctest::Approx(0.0));

  Mat3 R = random_rotation();
  std::array<Vec3, 4> Xr;
  for (int i = 0; i < 4; ++i) Xr[i] = R * X[i];
  LocalFrame fr = local_basis(Xr);
  CHECK((fr.ex - R * f.ex).norm() < 1e-14);
  CHECK((fr.ey - R * f.ey).norm() < 1e-14);
  CHECK((fr.ez - R * f.ez).norm() < 1e-14);
  TransformSet T0 = transform_matrices(f, X[1] - X[0], X[3] - X[0], Vec3(0, 0, 0.01));
  TransformSet Tr = transform_matrices(fr, R * (X[1] - X[0]), R * (X[3] - X[0]),
                                       R * Vec3(0, 0, 0.01));
  CHECK((T0.cosines - Tr.cosines).norm() < 1e-13);
}

TEST_CASE("transforms: centered unit square gives T_eps = 4 I, T_zeta = 4/h^2") {
  double h = 0.01;
  std::array<Vec3, 4> Xc = {Vec3(-0.5, -0.5, 0), Vec3(0.5, -0.5, 0),
                            Vec3(0.5, 0.5, 0), Vec3(-0.5, 0.5, 0)};
  TransformSet T = transform_matrices(local_basis(Xc), Vec3(0.5, 0, 0), Vec3(0, 0.5, 0),
                                      Vec3(0, 0, 0.5 * h));
  CHECK((T.T_eps - 4.0 * Mat3::Identity()).norm() < 1e-12);
  CHECK(T.T_zeta == doctest::Approx(4.0 / (h * h)));
}

TEST_CASE("transforms: orthonormal aligned natural basis is the identity") {
  std::array<Vec3, 4> X = {Vec3(-1, -1, 0), Vec3(1, -1, 0), Vec3(1, 1, 0), Vec3(-1, 1, 0)};
  TransformSet T = transform_matrices(local_basis(X), Vec3(1, 0, 0), Vec3(0, 1, 0),
                                      Vec3(0, 0, 1));
  CHECK((T.T_eps - Mat3::Identity()).norm() < 1e-13);
  CHECK((T.T_gam - Mat2::Identity()).norm() < 1e-13);
  CHECK(T.T_zeta == doctest::Approx(1.0));
}

TEST_CASE("transforms: singular for collapsed element") {
  auto X = unit_square();
  CHECK_THROWS_AS(transform_matrices(local_basis(X), Vec3(0.5, 0, 0), Vec3(0.5, 0, 0),
                                     Vec3(0, 0, 0.01)),
                  Error);
}

TEST_CASE("rotated-in-plane square: membrane invariants match tensor rotation") {
  // Same physical constant-gradient field on an element rotated in-plane:
  // strain invariants must match the direct Green-Lagrange evaluation.
  Eigen::Matrix2d A;
  A << 0.013, -0.004, 0.006, -0.009;
  Eigen::Matrix2d E2 = 0.5 * (A + A.transpose() + A.transpose() * A);
  double tr_ref = E2.trace(), det_ref = E2.determinant();

  double ang = 0.7;
  Eigen::Rotation2Dd rot(ang);
  auto X = unit_square();
  std::array<Vec3, 4> Xr;
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector2d p = rot * Eigen::Vector2d(X[i].x(), X[i].y());
    Xr[i] = Vec3(p.x(), p.y(), 0);
  }
  ElementGeometry geom = make_geom(Xr);
  ElemVec Ue = ElemVec::Zero();
  // displacement field u(x) = (R A R^T) x, expressed in global coordinates
  Eigen::Matrix2d Ag = rot.toRotationMatrix() * A * rot.toRotationMatrix().transpose();
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector2d u = Ag * Eigen::Vector2d(Xr[i].x(), Xr[i].y());
    Ue.segment<3>(6 * i) = Vec3(u.x(), u.y(), 0);
  }
  for (int gp = 0; gp < 4; ++gp) {
    StrainState s = geom.local_strains(Ue, gp);
    Eigen::Matrix2d Em;
    Em << s.eps_m[0], 0.5 * s.eps_m[2], 0.5 * s.eps_m[2], s.eps_m[1];
    CHECK(Em.trace() == doctest::Approx(tr_ref).epsilon(1e-10));
    CHECK(Em.determinant() == doctest::Approx(det_ref).epsilon(1e-10));
  }
}

TEST_CASE("natural strains vanish for reference, translation, finite rotation") {
  ElementGeometry geom = make_geom(distorted_quad());
  auto strain_norm = [&](const ElemVec& Ue) {
    double m = 0;
    for (double xi : {-0.6, 0.3})
      for (double eta : {-0.2, 0.8}) {
        NaturalStrains ns = geom.natural_strains(Ue, xi, eta);
        m = std::max({m, ns.eps_m.cwiseAbs().maxCoeff(), ns.eps_b.cwiseAbs().maxCoeff(),
                      ns.gamma_xi_samples.cwiseAbs().maxCoeff(),
                      ns.gamma_eta_samples.cwiseAbs().maxCoeff(),
                      ns.eps_zz_nodes.cwiseAbs().maxCoeff()});
      }
    return m;
  };

  CHECK(strain_norm(ElemVec::Zero()) == 0.0);

  ElemVec Ut = ElemVec::Zero();
  Vec3 t = rand_vec3();
  for (int i = 0; i < 4; ++i) Ut.segment<3>(6 * i) = t;
  CHECK(strain_norm(Ut) < 1e-14);

  Mat3 R = random_rotation();
  ElemVec Ur;
  for (int i = 0; i < 4; ++i) {
    Ur.segment<3>(6 * i) = R * geom.rest_positions()[i] - geom.rest_positions()[i];
    Ur.segment<3>(6 * i + 3) = R * geom.rest_directors()[i] - geom.rest_directors()[i];
  }
  CHECK(strain_norm(Ur) < 1e-14);
}

TEST_CASE("ans_interpolate blends") {
  double gx, ge, ez;
  ans_interpolate(Vec2(0.7, 0.7), Vec2(-0.3, -0.3), Vec4::Constant(0.2), 0.37, -0.81,
                  gx, ge, ez);
  CHECK(gx == doctest::Approx(0.7));
  CHECK(ge == doctest::Approx(-0.3));
  CHECK(ez == doctest::Approx(0.2));

  ans_interpolate(Vec2(0.0, 1.0), Vec2(0, 0), Vec4::Zero(), 0.0, 0.0, gx, ge, ez);
  CHECK(gx == doctest::Approx(0.5));

  ans_interpolate(Vec2(0, 0), Vec2(0, 0), Vec4(1, 0, 0, 0), -1.0, -1.0, gx, ge, ez);
  CHECK(ez == doctest::Approx(1.0));
}

TEST_CASE("ANS equals direct evaluation for spatially constant shear") {
  // Parallelogram: X_o,phi constant, so a uniform director displacement gives
  // a constant shear field and the ANS blend must reproduce it.
  std::array<Vec3, 4> X = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1.4, 1, 0), Vec3(0.4, 1, 0)};
  ElementGeometry geom = make_geom(X);
  ElemVec Ue = ElemVec::Zero();
  Vec3 v = rand_vec3(0.01);
  for (int i = 0; i < 4; ++i) Ue.segment<3>(6 * i + 3) = v;
  NaturalStrains ns = geom.natural_strains(Ue, 0.3, -0.5);
  Vec3 Xo_xi = 0.25 * ((X[1] - X[0]) + (X[2] - X[3]));
  double direct = Xo_xi.dot(v);
  CHECK(ns.gamma_xi_samples[0] == doctest::Approx(direct).epsilon(1e-13));
  CHECK(ns.gamma_xi_samples[1] == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("integrated constitutive") {
  IntegratedConstitutive c0 = integrated_constitutive(Material{1.0, 0.0, 0.01});
  CHECK(c0.Cm(0, 0) == doctest::Approx(2.0));
  CHECK(c0.Cm(1, 1) == doctest::Approx(2.0));
  CHECK(c0.Cm(2, 2) == doctest::Approx(1.0));
  CHECK(c0.Cm(0, 1) == doctest::Approx(0.0));

  IntegratedConstitutive cp = integrated_constitutive(Material{12e9, 0.3, 0.01});
  CHECK(0.5 * cp.Cm(0, 0) == doctest::Approx(12e9 / (1 - 0.09)).epsilon(1e-12));

  for (double nu : {-0.4, 0.0, 0.25, 0.45}) {
    IntegratedConstitutive c = integrated_constitutive(Material{3.7e8, nu, 0.01});
    CHECK((c.Cm - 3.0 * c.Cb).norm() < 1e-9 * c.Cm.norm());
    Eigen::SelfAdjointEigenSolver<Mat3> es(c.Cm);
    CHECK(es.eigenvalues().minCoeff() > 0);
    CHECK(c.CT > 0);
  }
}

TEST_CASE("element energy: zero, rigid motion, uniaxial stretch oracle") {
  Material mat{1.0, 0.0, 0.01};
  auto X = unit_square();
  std::array<Vec3, 4> D;
  D.fill(Vec3(0, 0, 0.005));
  ElementGeometry geom(X, D, integrated_constitutive(mat));

  CHECK(geom.energy(ElemVec::Zero()) == 0.0);

  // rigid motion
  Mat3 R = random_rotation();
  Vec3 t = rand_vec3();
  ElemVec Ur;
  for (int i = 0; i < 4; ++i) {
    Ur.segment<3>(6 * i) = R * X[i] + t - X[i];
    Ur.segment<3>(6 * i + 3) = R * D[i] - D[i];
  }
  double scale = mat.E * mat.h * geom.area();
  CHECK(std::abs(geom.energy(Ur)) < 1e-12 * scale);

  // uniaxial stretch u_x = 0.01 x: Green-Lagrange strain 0.01 + 0.5e-4,
  // membrane energy = 0.5 * E h * eps^2 * area (independent quadrature value)
  ElemVec Us = ElemVec::Zero();
  for (int i = 0; i < 4; ++i) Us[6 * i] = 0.01 * X[i].x();
  double eps = 0.01 + 0.5 * 1e-4;
  double expected = 0.5 * mat.E * mat.h * eps * eps * 1.0;
  CHECK(geom.energy(Us) == doctest::Approx(expected).epsilon(1e-12));
  Vec4 split = geom.energy_split(Us);
  CHECK(split[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(split[1] == doctest::Approx(0.0));
  CHECK(split[2] == doctest::Approx(0.0));
  CHECK(split[3] == doctest::Approx(0.0));
}

TEST_CASE("energy split sums to total energy") {
  ElementGeometry geom = make_geom(distorted_quad());
  ElemVec Ue;
  for (int i = 0; i < 24; ++i) Ue[i] = 0.01 * unit_rand();
  Vec4 split = geom.energy_split(Ue);
  CHECK(split.sum() == doctest::Approx(geom.energy(Ue)).epsilon(1e-12));
}

TEST_CASE("element is quartic, not quadratic, in finite displacements") {
  ElementGeometry geom = make_geom(distorted_quad());
  ElemVec Ue;
  for (int i = 0; i < 24; ++i) Ue[i] = 0.05 * unit_rand();
  double e1 = geom.energy(Ue);
  double e2 = geom.energy(ElemVec(2.0 * Ue));
  CHECK(std::abs(e2 - 4.0 * e1) > 1e-6 * std::abs(e1));
}

TEST_CASE("gradient and hessian match finite differences") {
  for (int trial = 0; trial < 8; ++trial) {
    std::array<Vec3, 4> X = distorted_quad();
    for (auto& x : X) x += 0.05 * Vec3(unit_rand(), unit_rand(), 0.0);
    ElementGeometry geom = make_geom(X);

    ElemVec Ue;
    for (int i = 0; i < 24; ++i) Ue[i] = 0.01 * unit_rand();
    ElemVec grad;
    ElemMat hess;
    double e = geom.force_stiffness(Ue, grad, hess);
    CHECK(e == doctest::Approx(geom.energy(Ue)).epsilon(1e-12));

    double step = 1e-6;
    VecX g_fd = fd_gradient([&](const VecX& u) { return geom.energy(ElemVec(u)); },
                            VecX(Ue), step);
    CHECK((VecX(grad) - g_fd).norm() <= 1e-6 * std::max(1e-12, g_fd.norm()));

    MatX H_fd = fd_jacobian(
        [&](const VecX& u) {
          ElemVec g;
          ElemMat h;
          geom.force_stiffness(ElemVec(u), g, h);
          return VecX(g);
        },
        VecX(Ue), step);
    CHECK((MatX(hess) - H_fd).norm() <= 1e-5 * H_fd.norm());
    CHECK((MatX(hess) - MatX(hess).transpose()).norm() <= 1e-12 * MatX(hess).norm());
  }
}

TEST_CASE("reference state: zero gradient, linear-elastic stiffness") {
  ElementGeometry geom = make_geom(distorted_quad());
  ElemVec grad;
  ElemMat hess;
  geom.force_stiffness(ElemVec::Zero(), grad, hess);
  CHECK(grad.norm() == 0.0);

  // K at U = 0 must equal the FD jacobian of the residual (linear stiffness)
  MatX H_fd = fd_jacobian(
      [&](const VecX& u) {
        ElemVec g;
        ElemMat h;
        geom.force_stiffness(ElemVec(u), g, h);
        return VecX(g);
      },
      VecX::Zero(24), 1e-7);
  CHECK((MatX(hess) - H_fd).norm() <= 1e-5 * H_fd.norm());
}

TEST_CASE("zero-energy modes: rigid motions leave gradient at zero") {
  ElementGeometry geom = make_geom(distorted_quad());
  double scale = kMat.E * kMat.h * geom.area();
  for (int trial = 0; trial < 5; ++trial) {
    Mat3 R = random_rotation();
    Vec3 t = rand_vec3();
    ElemVec Ur;
    for (int i = 0; i < 4; ++i) {
      Ur.segment<3>(6 * i) = R * geom.rest_positions()[i] + t - geom.rest_positions()[i];
      Ur.segment<3>(6 * i + 3) = R * geom.rest_directors()[i] - geom.rest_directors()[i];
    }
    ElemVec grad;
    ElemMat hess;
    double e = geom.force_stiffness(Ur, grad, hess);
    CHECK(std::abs(e) < 1e-12 * scale);
    CHECK(grad.norm() < 1e-10 * scale);
  }
}
