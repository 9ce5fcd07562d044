#include "orishell/shell_element.hpp"

#include <cmath>

namespace orishell {

using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using BMat = Eigen::Matrix<double, 9, 24>;
using BRow = Eigen::Matrix<double, 1, 24>;

ShapeEval shape_functions(double xi, double eta) {
  ShapeEval s;
  s.N << 0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
         0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta);
  s.dNxi << -0.25 * (1 - eta), 0.25 * (1 - eta), 0.25 * (1 + eta), -0.25 * (1 + eta);
  s.dNeta << -0.25 * (1 - xi), -0.25 * (1 + xi), 0.25 * (1 + xi), 0.25 * (1 - xi);
  return s;
}

IntegratedConstitutive integrated_constitutive(const Material& mat) {
  const double E = mat.E, nu = mat.nu;
  Mat3 Ceps;
  Ceps << 1.0, nu, 0.0,
          nu, 1.0, 0.0,
          0.0, 0.0, 0.5 * (1.0 - nu);
  Ceps *= E / (1.0 - nu * nu);
  IntegratedConstitutive C;
  C.Cm = 2.0 * Ceps;
  C.Cb = (2.0 / 3.0) * Ceps;
  C.CS = 2.0 * (5.0 / 6.0) * (E / (2.0 * (1.0 + nu))) * Mat2::Identity();
  C.CT = 2.0 * E;
  return C;
}

LocalFrame local_basis(const std::array<Vec3, 4>& X) {
  Vec3 d12 = X[1] - X[0];
  Vec3 d14 = X[3] - X[0];
  double s = d12.norm(), t = d14.norm();
  if (s <= 0 || t <= 0)
    fail(ErrorKind::DegenerateElement, "element edge has zero length");
  LocalFrame f;
  f.ex = d12 / s;
  Vec3 n = f.ex.cross(d14 / t);
  if (n.norm() <= 1e-12)
    fail(ErrorKind::DegenerateElement, "element edge vectors are parallel");
  f.ez = n.normalized();
  f.ey = f.ez.cross(f.ex);
  return f;
}

TransformSet transform_matrices(const LocalFrame& frame, const Vec3& e_xi,
                                const Vec3& e_eta, const Vec3& e_zeta) {
  TransformSet T;
  Mat3& c = T.cosines;
  const Vec3 loc[3] = {frame.ex, frame.ey, frame.ez};
  const Vec3 nat[3] = {e_xi, e_eta, e_zeta};
  for (int m = 0; m < 3; ++m)
    for (int i = 0; i < 3; ++i) c(m, i) = loc[m].dot(nat[i]);
  if (!c.allFinite())
    fail(ErrorKind::SingularTransform, "non-finite cosine table");

  Mat3 M3;
  M3 << c(0, 0) * c(0, 0), c(1, 0) * c(1, 0), c(0, 0) * c(1, 0),
        c(0, 1) * c(0, 1), c(1, 1) * c(1, 1), c(0, 1) * c(1, 1),
        2 * c(0, 0) * c(0, 1), 2 * c(1, 0) * c(1, 1), c(0, 0) * c(1, 1) + c(1, 0) * c(0, 1);
  double sc3 = M3.norm();
  if (std::abs(M3.determinant()) <= 1e-12 * sc3 * sc3 * sc3)
    fail(ErrorKind::SingularTransform, "in-plane strain transform is rank-deficient");
  T.T_eps = M3.inverse();

  Mat2 M2;
  M2 << c(2, 2) * c(0, 0), c(2, 2) * c(1, 0),
        c(2, 2) * c(0, 1), c(2, 2) * c(1, 1);
  double sc2 = M2.norm();
  if (std::abs(M2.determinant()) <= 1e-12 * sc2 * sc2)
    fail(ErrorKind::SingularTransform, "shear strain transform is rank-deficient");
  T.T_gam = M2.inverse();

  double czz2 = c(2, 2) * c(2, 2);
  if (czz2 <= 0 || !std::isfinite(1.0 / czz2))
    fail(ErrorKind::SingularTransform, "director has no component along the element normal");
  T.T_zeta = 1.0 / czz2;
  return T;
}

void ans_interpolate(const Vec2& gxi, const Vec2& geta, const Vec4& ezz_nodes,
                     double xi, double eta,
                     double& gamma_zxi, double& gamma_zeta, double& eps_zz) {
  gamma_zxi = 0.5 * (1 - eta) * gxi[0] + 0.5 * (1 + eta) * gxi[1];
  gamma_zeta = 0.5 * (1 - xi) * geta[0] + 0.5 * (1 + xi) * geta[1];
  ShapeEval s = shape_functions(xi, eta);
  eps_zz = s.N.dot(ezz_nodes);
}

const std::array<std::array<double, 2>, 4>& ElementGeometry::gauss_points() {
  static const double g = 1.0 / std::sqrt(3.0);
  static const std::array<std::array<double, 2>, 4> pts = {
      {{-g, -g}, {g, -g}, {g, g}, {-g, g}}};
  return pts;
}

namespace {

Vec3 field(const Vec4& w, const std::array<Vec3, 4>& v) {
  return w[0] * v[0] + w[1] * v[1] + w[2] * v[2] + w[3] * v[3];
}

}  // namespace

struct ElementGeometry::State {
  std::array<Vec3, 4> Uo, Un;
  // ANS sample fields and values
  std::array<Vec3, 2> sxi_Uod, sxi_Uns, seta_Uod, seta_Uns;
  Vec2 gxi_val, geta_val;
  Vec4 zz_val;
};

ElementGeometry::ElementGeometry(const std::array<Vec3, 4>& X,
                                 const std::array<Vec3, 4>& D,
                                 const IntegratedConstitutive& C)
    : X_(X), D_(D), C_(C) {
  LocalFrame frame = local_basis(X);

  const auto& gps = gauss_points();
  area_ = 0.0;
  for (int g = 0; g < 4; ++g) {
    GaussCache& gc = gp_[g];
    double xi = gps[g][0], eta = gps[g][1];
    gc.sh = shape_functions(xi, eta);
    gc.Xo_xi = field(gc.sh.dNxi, X);
    gc.Xo_eta = field(gc.sh.dNeta, X);
    gc.Xn = field(gc.sh.N, D);
    gc.Xn_xi = field(gc.sh.dNxi, D);
    gc.Xn_eta = field(gc.sh.dNeta, D);
    gc.J = gc.Xo_xi.cross(gc.Xo_eta).dot(gc.Xn);
    if (gc.J <= 0)
      fail(ErrorKind::DegenerateElement, "non-positive jacobian at a quadrature point");
    area_ += gc.Xo_xi.cross(gc.Xo_eta).norm();
    gc.T = transform_matrices(frame, gc.Xo_xi, gc.Xo_eta, gc.Xn);

    Mat9 T9 = Mat9::Zero();
    T9.block<3, 3>(0, 0) = gc.T.T_eps;
    T9.block<3, 3>(3, 3) = gc.T.T_eps;
    T9.block<2, 2>(6, 6) = gc.T.T_gam;
    T9(8, 8) = gc.T.T_zeta;
    Mat9 Cloc = Mat9::Zero();
    Cloc.block<3, 3>(0, 0) = C.Cm;
    Cloc.block<3, 3>(3, 3) = C.Cb;
    Cloc.block<2, 2>(6, 6) = C.CS;
    Cloc(8, 8) = C.CT;
    gc.Cnat = T9.transpose() * Cloc * T9;
    gc.Cnat = 0.5 * (gc.Cnat + gc.Cnat.transpose()).eval();

    gc.w_xi << 0.5 * (1 - eta), 0.5 * (1 + eta);
    gc.w_eta << 0.5 * (1 - xi), 0.5 * (1 + xi);
  }

  const double sp[2] = {-1.0, 1.0};
  for (int k = 0; k < 2; ++k) {
    sxi_[k].sh = shape_functions(0.0, sp[k]);
    sxi_[k].Xo_d = field(sxi_[k].sh.dNxi, X);
    sxi_[k].Xn = field(sxi_[k].sh.N, D);
    seta_[k].sh = shape_functions(sp[k], 0.0);
    seta_[k].Xo_d = field(seta_[k].sh.dNeta, X);
    seta_[k].Xn = field(seta_[k].sh.N, D);
  }
}

void ElementGeometry::natural_values(const ElemVec& Ue, State& st) const {
  for (int i = 0; i < 4; ++i) {
    st.Uo[i] = Ue.segment<3>(6 * i);
    st.Un[i] = Ue.segment<3>(6 * i + 3);
  }
  for (int k = 0; k < 2; ++k) {
    st.sxi_Uod[k] = field(sxi_[k].sh.dNxi, st.Uo);
    st.sxi_Uns[k] = field(sxi_[k].sh.N, st.Un);
    st.gxi_val[k] = sxi_[k].Xo_d.dot(st.sxi_Uns[k]) + sxi_[k].Xn.dot(st.sxi_Uod[k]) +
                    st.sxi_Uod[k].dot(st.sxi_Uns[k]);
    st.seta_Uod[k] = field(seta_[k].sh.dNeta, st.Uo);
    st.seta_Uns[k] = field(seta_[k].sh.N, st.Un);
    st.geta_val[k] = seta_[k].Xo_d.dot(st.seta_Uns[k]) + seta_[k].Xn.dot(st.seta_Uod[k]) +
                     st.seta_Uod[k].dot(st.seta_Uns[k]);
  }
  for (int i = 0; i < 4; ++i)
    st.zz_val[i] = D_[i].dot(st.Un[i]) + 0.5 * st.Un[i].squaredNorm();
}

namespace {

struct GpFields {
  Vec3 Uo_xi, Uo_eta, Un_xi, Un_eta;
};

Vec9 natural_e9(const Vec3& Xo_xi, const Vec3& Xo_eta, const Vec3& Xn_xi,
                const Vec3& Xn_eta, const GpFields& f, const Vec2& w_xi,
                const Vec2& w_eta, const Vec4& N, const Vec2& gxi_val,
                const Vec2& geta_val, const Vec4& zz_val) {
  Vec9 e;
  e[0] = Xo_xi.dot(f.Uo_xi) + 0.5 * f.Uo_xi.squaredNorm();
  e[1] = Xo_eta.dot(f.Uo_eta) + 0.5 * f.Uo_eta.squaredNorm();
  e[2] = Xo_xi.dot(f.Uo_eta) + Xo_eta.dot(f.Uo_xi) + f.Uo_xi.dot(f.Uo_eta);
  e[3] = Xo_xi.dot(f.Un_xi) + Xn_xi.dot(f.Uo_xi) + f.Uo_xi.dot(f.Un_xi);
  e[4] = Xo_eta.dot(f.Un_eta) + Xn_eta.dot(f.Uo_eta) + f.Uo_eta.dot(f.Un_eta);
  e[5] = Xo_xi.dot(f.Un_eta) + Xo_eta.dot(f.Un_xi) + Xn_xi.dot(f.Uo_eta) +
         Xn_eta.dot(f.Uo_xi) + f.Uo_xi.dot(f.Un_eta) + f.Uo_eta.dot(f.Un_xi);
  e[6] = w_xi.dot(gxi_val);
  e[7] = w_eta.dot(geta_val);
  e[8] = N.dot(zz_val);
  return e;
}

}  // namespace

double ElementGeometry::energy(const ElemVec& Ue) const {
  State st;
  natural_values(Ue, st);
  double psi = 0.0;
  for (const GaussCache& gc : gp_) {
    GpFields f{field(gc.sh.dNxi, st.Uo), field(gc.sh.dNeta, st.Uo),
               field(gc.sh.dNxi, st.Un), field(gc.sh.dNeta, st.Un)};
    Vec9 e = natural_e9(gc.Xo_xi, gc.Xo_eta, gc.Xn_xi, gc.Xn_eta, f,
                        gc.w_xi, gc.w_eta, gc.sh.N, st.gxi_val, st.geta_val, st.zz_val);
    psi += 0.5 * gc.J * e.dot(gc.Cnat * e);
  }
  return psi;
}

Vec4 ElementGeometry::energy_split(const ElemVec& Ue) const {
  State st;
  natural_values(Ue, st);
  Vec4 parts = Vec4::Zero();
  for (const GaussCache& gc : gp_) {
    GpFields f{field(gc.sh.dNxi, st.Uo), field(gc.sh.dNeta, st.Uo),
               field(gc.sh.dNxi, st.Un), field(gc.sh.dNeta, st.Un)};
    Vec9 e = natural_e9(gc.Xo_xi, gc.Xo_eta, gc.Xn_xi, gc.Xn_eta, f,
                        gc.w_xi, gc.w_eta, gc.sh.N, st.gxi_val, st.geta_val, st.zz_val);
    Vec3 em = gc.T.T_eps * e.segment<3>(0);
    Vec3 eb = gc.T.T_eps * e.segment<3>(3);
    Vec2 gl = gc.T.T_gam * e.segment<2>(6);
    double ez = gc.T.T_zeta * e[8];
    parts[0] += 0.5 * gc.J * em.dot(C_.Cm * em);
    parts[1] += 0.5 * gc.J * eb.dot(C_.Cb * eb);
    parts[2] += 0.5 * gc.J * gl.dot(C_.CS * gl);
    parts[3] += 0.5 * gc.J * C_.CT * ez * ez;
  }
  return parts;
}

StrainState ElementGeometry::local_strains(const ElemVec& Ue, int gp) const {
  State st;
  natural_values(Ue, st);
  const GaussCache& gc = gp_[gp];
  GpFields f{field(gc.sh.dNxi, st.Uo), field(gc.sh.dNeta, st.Uo),
             field(gc.sh.dNxi, st.Un), field(gc.sh.dNeta, st.Un)};
  Vec9 e = natural_e9(gc.Xo_xi, gc.Xo_eta, gc.Xn_xi, gc.Xn_eta, f,
                      gc.w_xi, gc.w_eta, gc.sh.N, st.gxi_val, st.geta_val, st.zz_val);
  StrainState s;
  s.eps_m = gc.T.T_eps * e.segment<3>(0);
  s.eps_b = gc.T.T_eps * e.segment<3>(3);
  s.gamma = gc.T.T_gam * e.segment<2>(6);
  s.eps_zz = gc.T.T_zeta * e[8];
  return s;
}

NaturalStrains ElementGeometry::natural_strains(const ElemVec& Ue, double xi, double eta) const {
  State st;
  natural_values(Ue, st);
  ShapeEval sh = shape_functions(xi, eta);
  Vec3 Xo_xi = field(sh.dNxi, X_), Xo_eta = field(sh.dNeta, X_);
  Vec3 Xn_xi = field(sh.dNxi, D_), Xn_eta = field(sh.dNeta, D_);
  GpFields f{field(sh.dNxi, st.Uo), field(sh.dNeta, st.Uo),
             field(sh.dNxi, st.Un), field(sh.dNeta, st.Un)};
  NaturalStrains out;
  out.eps_m[0] = Xo_xi.dot(f.Uo_xi) + 0.5 * f.Uo_xi.squaredNorm();
  out.eps_m[1] = Xo_eta.dot(f.Uo_eta) + 0.5 * f.Uo_eta.squaredNorm();
  out.eps_m[2] = Xo_xi.dot(f.Uo_eta) + Xo_eta.dot(f.Uo_xi) + f.Uo_xi.dot(f.Uo_eta);
  out.eps_b[0] = Xo_xi.dot(f.Un_xi) + Xn_xi.dot(f.Uo_xi) + f.Uo_xi.dot(f.Un_xi);
  out.eps_b[1] = Xo_eta.dot(f.Un_eta) + Xn_eta.dot(f.Uo_eta) + f.Uo_eta.dot(f.Un_eta);
  out.eps_b[2] = Xo_xi.dot(f.Un_eta) + Xo_eta.dot(f.Un_xi) + Xn_xi.dot(f.Uo_eta) +
                 Xn_eta.dot(f.Uo_xi) + f.Uo_xi.dot(f.Un_eta) + f.Uo_eta.dot(f.Un_xi);
  out.gamma_xi_samples = st.gxi_val;
  out.gamma_eta_samples = st.geta_val;
  out.eps_zz_nodes = st.zz_val;
  return out;
}

double ElementGeometry::force_stiffness(const ElemVec& Ue, ElemVec& grad, ElemMat& hess) const {
  State st;
  natural_values(Ue, st);
  grad.setZero();
  hess.setZero();

  // Current-configuration B rows for the ANS samples.
  std::array<BRow, 2> Bxi, Beta;
  for (int k = 0; k < 2; ++k) {
    Bxi[k].setZero();
    Beta[k].setZero();
    Vec3 an_xi = sxi_[k].Xn + st.sxi_Uns[k];
    Vec3 ao_xi = sxi_[k].Xo_d + st.sxi_Uod[k];
    Vec3 an_eta = seta_[k].Xn + st.seta_Uns[k];
    Vec3 ao_eta = seta_[k].Xo_d + st.seta_Uod[k];
    for (int i = 0; i < 4; ++i) {
      Bxi[k].segment<3>(6 * i) = sxi_[k].sh.dNxi[i] * an_xi;
      Bxi[k].segment<3>(6 * i + 3) = sxi_[k].sh.N[i] * ao_xi;
      Beta[k].segment<3>(6 * i) = seta_[k].sh.dNeta[i] * an_eta;
      Beta[k].segment<3>(6 * i + 3) = seta_[k].sh.N[i] * ao_eta;
    }
  }

  double psi = 0.0;
  Eigen::Matrix<double, 8, 8> G = Eigen::Matrix<double, 8, 8>::Zero();
  for (const GaussCache& gc : gp_) {
    GpFields f{field(gc.sh.dNxi, st.Uo), field(gc.sh.dNeta, st.Uo),
               field(gc.sh.dNxi, st.Un), field(gc.sh.dNeta, st.Un)};
    Vec9 e = natural_e9(gc.Xo_xi, gc.Xo_eta, gc.Xn_xi, gc.Xn_eta, f,
                        gc.w_xi, gc.w_eta, gc.sh.N, st.gxi_val, st.geta_val, st.zz_val);

    BMat B;
    B.setZero();
    Vec3 am_xi = gc.Xo_xi + f.Uo_xi;
    Vec3 am_eta = gc.Xo_eta + f.Uo_eta;
    Vec3 ab_xi = gc.Xn_xi + f.Un_xi;
    Vec3 ab_eta = gc.Xn_eta + f.Un_eta;
    for (int i = 0; i < 4; ++i) {
      double dxi = gc.sh.dNxi[i], deta = gc.sh.dNeta[i];
      B.block<1, 3>(0, 6 * i) = (dxi * am_xi).transpose();
      B.block<1, 3>(1, 6 * i) = (deta * am_eta).transpose();
      B.block<1, 3>(2, 6 * i) = (deta * am_xi + dxi * am_eta).transpose();
      B.block<1, 3>(3, 6 * i) = (dxi * ab_xi).transpose();
      B.block<1, 3>(3, 6 * i + 3) = (dxi * am_xi).transpose();
      B.block<1, 3>(4, 6 * i) = (deta * ab_eta).transpose();
      B.block<1, 3>(4, 6 * i + 3) = (deta * am_eta).transpose();
      B.block<1, 3>(5, 6 * i) = (deta * ab_xi + dxi * ab_eta).transpose();
      B.block<1, 3>(5, 6 * i + 3) = (deta * am_xi + dxi * am_eta).transpose();
      B.block<1, 3>(8, 6 * i + 3) = (gc.sh.N[i] * (D_[i] + st.Un[i])).transpose();
    }
    B.row(6) = gc.w_xi[0] * Bxi[0] + gc.w_xi[1] * Bxi[1];
    B.row(7) = gc.w_eta[0] * Beta[0] + gc.w_eta[1] * Beta[1];

    Vec9 Ce = gc.Cnat * e;
    psi += 0.5 * gc.J * e.dot(Ce);
    Vec9 s9 = gc.J * Ce;
    grad += B.transpose() * s9;
    hess += gc.J * (B.transpose() * gc.Cnat * B);

    // Geometric (displacement-independent curvature of the strain measures).
    for (int i = 0; i < 4; ++i) {
      double dxi_i = gc.sh.dNxi[i], deta_i = gc.sh.dNeta[i];
      for (int j = 0; j < 4; ++j) {
        double dxi_j = gc.sh.dNxi[j], deta_j = gc.sh.dNeta[j];
        G(2 * i, 2 * j) += s9[0] * dxi_i * dxi_j + s9[1] * deta_i * deta_j +
                           s9[2] * (dxi_i * deta_j + deta_i * dxi_j);
        double c_on = s9[3] * dxi_i * dxi_j + s9[4] * deta_i * deta_j +
                      s9[5] * (dxi_i * deta_j + deta_i * dxi_j);
        G(2 * i, 2 * j + 1) += c_on;
        G(2 * j + 1, 2 * i) += c_on;
      }
    }
    for (int k = 0; k < 2; ++k) {
      double cxi = s9[6] * gc.w_xi[k];
      double ceta = s9[7] * gc.w_eta[k];
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          double vxi = cxi * sxi_[k].sh.dNxi[i] * sxi_[k].sh.N[j];
          G(2 * i, 2 * j + 1) += vxi;
          G(2 * j + 1, 2 * i) += vxi;
          double veta = ceta * seta_[k].sh.dNeta[i] * seta_[k].sh.N[j];
          G(2 * i, 2 * j + 1) += veta;
          G(2 * j + 1, 2 * i) += veta;
        }
    }
    for (int i = 0; i < 4; ++i)
      G(2 * i + 1, 2 * i + 1) += s9[8] * gc.sh.N[i];
  }

  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      if (G(a, b) != 0.0)
        hess.block<3, 3>(3 * a, 3 * b) += G(a, b) * Mat3::Identity();

  hess = 0.5 * (hess + hess.transpose()).eval();
  return psi;
}

}  // namespace orishell
