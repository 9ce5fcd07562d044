#include "orishell/crease.hpp"

#include <cmath>

namespace orishell {

namespace {

// Barrier branch pieces. The linear term keeps the junction C1 (in fact C2,
// since tan'(0) = 1 restores the quadratic curvature k_f).
struct Branch {
  double A, B;  // log amplitude and argument slope
};

inline Branch right_branch(const CreaseParams& p) {
  return {4.0 * p.k_f * (M_PI - p.thetaR) * (M_PI - p.thetaR) / (M_PI * M_PI),
          M_PI / (2.0 * (M_PI - p.thetaR))};
}
inline Branch left_branch(const CreaseParams& p) {
  return {4.0 * p.k_f * (p.thetaL + M_PI) * (p.thetaL + M_PI) / (M_PI * M_PI),
          M_PI / (2.0 * (p.thetaL + M_PI))};
}

}  // namespace

double crease_energy_density(double theta, const CreaseParams& p) {
  if (std::abs(theta) >= M_PI)
    fail(ErrorKind::BarrierOverflow, "fold angle reached +/-pi");
  if (theta >= p.thetaL && theta <= p.thetaR) {
    double d = theta - p.theta0;
    return 0.5 * p.k_f * d * d;
  }
  if (theta > p.thetaR) {
    Branch b = right_branch(p);
    double dR = p.thetaR - p.theta0;
    return 0.5 * p.k_f * dR * dR + p.k_f * dR * (theta - p.thetaR) -
           b.A * std::log(std::abs(std::cos(b.B * (theta - p.thetaR))));
  }
  Branch b = left_branch(p);
  double dL = p.theta0 - p.thetaL;
  return 0.5 * p.k_f * dL * dL + p.k_f * dL * (p.thetaL - theta) -
         b.A * std::log(std::abs(std::cos(b.B * (p.thetaL - theta))));
}

DensityEval crease_density_deriv(double theta, const CreaseParams& p) {
  DensityEval e;
  if (theta >= p.thetaL && theta <= p.thetaR) {
    double d = theta - p.theta0;
    e.psi = 0.5 * p.k_f * d * d;
    e.dpsi = p.k_f * d;
    e.ddpsi = p.k_f;
    return e;
  }
  if (theta > p.thetaR) {
    Branch b = right_branch(p);
    double dR = p.thetaR - p.theta0;
    double arg = b.B * (theta - p.thetaR);
    double t = std::tan(arg);
    e.psi = 0.5 * p.k_f * dR * dR + p.k_f * dR * (theta - p.thetaR) -
            b.A * std::log(std::abs(std::cos(arg)));
    e.dpsi = p.k_f * dR + b.A * b.B * t;
    e.ddpsi = b.A * b.B * b.B * (1.0 + t * t);
    return e;
  }
  Branch b = left_branch(p);
  double dL = p.theta0 - p.thetaL;
  double arg = b.B * (p.thetaL - theta);
  double t = std::tan(arg);
  e.psi = 0.5 * p.k_f * dL * dL + p.k_f * dL * (p.thetaL - theta) -
          b.A * std::log(std::abs(std::cos(arg)));
  e.dpsi = -p.k_f * dL - b.A * b.B * t;
  e.ddpsi = b.A * b.B * b.B * (1.0 + t * t);
  return e;
}

double signed_angle(const Vec3& p, const Vec3& q, const Vec3& axis) {
  Vec3 c = p.cross(q);
  double phi = std::atan2(c.norm(), p.dot(q));
  return c.dot(axis) >= 0.0 ? phi : -phi;
}

AngleDerivs signed_angle_derivs(const Vec3& p, const Vec3& q, const Vec3& axis,
                                bool want_second) {
  AngleDerivs out;
  Vec3 c = p.cross(q);
  double n = c.norm();
  double d = p.dot(q);
  double D = p.squaredNorm() * q.squaredNorm();
  double sign = c.dot(axis) >= 0.0 ? 1.0 : -1.0;
  double phi = std::atan2(n, d);
  out.theta = sign * phi;

  if (n <= 1e-14 * std::sqrt(D)) {
    out.degenerate = true;  // parallel directors: gradient direction undefined
    return out;
  }

  Vec3 chat = c / n;
  Vec3 np = q.cross(chat);   // grad_p |c|
  Vec3 nq = chat.cross(p);   // grad_q |c|
  Vec3 gp = (d * np - n * q) / D;
  Vec3 gq = (d * nq - n * p) / D;
  out.dp = sign * gp;
  out.dq = sign * gq;
  if (!want_second) return out;

  Mat3 P = Mat3::Identity() - chat * chat.transpose();
  Mat3 sq = skew(q), sp = skew(p), sc = skew(chat);
  Mat3 Hn_pp = -sq * P * sq / n;
  Mat3 Hn_qq = -sp * P * sp / n;
  Mat3 Hn_pq = -sc + sq * P * sp / n;

  Vec3 Dp = 2.0 * q.squaredNorm() * p;
  Vec3 Dq = 2.0 * p.squaredNorm() * q;

  Mat3 Hpp = (d * Hn_pp + np * q.transpose() - q * np.transpose()) / D -
             gp * Dp.transpose() / D;
  Mat3 Hqq = (d * Hn_qq + nq * p.transpose() - p * nq.transpose()) / D -
             gq * Dq.transpose() / D;
  Mat3 Hpq = (d * Hn_pq - n * Mat3::Identity() + np * p.transpose() - q * nq.transpose()) / D -
             gp * Dq.transpose() / D;

  out.Hpp = sign * 0.5 * (Hpp + Hpp.transpose());
  out.Hqq = sign * 0.5 * (Hqq + Hqq.transpose());
  out.Hpq = sign * Hpq;
  return out;
}

FoldAngleState fold_angle_at(const Mesh& mesh, const DofMap& dofs, const VecX& U,
                             const CreaseSegment& crease, double s) {
  const int pa = mesh.elements[crease.elem_a].panel;
  const int pb = mesh.elements[crease.elem_b].panel;
  auto deformed_dir = [&](int panel, int node) {
    int slot = mesh.slot(panel, node);
    return Vec3(mesh.slot_director[slot] + U.segment<3>(dofs.slot_dof(slot, 0)));
  };
  auto current_pos = [&](int node) {
    return Vec3(mesh.nodes[node].X + U.segment<3>(dofs.trans_dof(node, 0)));
  };
  double L1 = 0.5 * (1.0 - s), L2 = 0.5 * (1.0 + s);
  FoldAngleState st;
  st.p = L1 * deformed_dir(pa, crease.node1) + L2 * deformed_dir(pa, crease.node2);
  st.q = L1 * deformed_dir(pb, crease.node1) + L2 * deformed_dir(pb, crease.node2);
  st.axis = current_pos(crease.node2) - current_pos(crease.node1);
  double hmin = 1e-12 * mesh.material.h;
  if (st.p.norm() < hmin || st.q.norm() < hmin)
    fail(ErrorKind::ZeroDirector, "crease " + std::to_string(crease.id) +
                                      " has a vanishing interpolated director");
  st.theta = signed_angle(st.p, st.q, st.axis);
  return st;
}

CreaseContribution crease_contribution(const Vec3& da1, const Vec3& da2,
                                       const Vec3& db1, const Vec3& db2,
                                       const Vec3& x1, const Vec3& x2,
                                       const CreaseParams& params,
                                       double thickness, bool want_derivs) {
  CreaseContribution out;
  static const double gauss_s[2] = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
  const double half_l = 0.5 * params.l;
  const Vec3 axis = x2 - x1;
  const double hmin = 1e-12 * thickness;

  for (int g = 0; g < 2; ++g) {
    double s = gauss_s[g];
    double L1 = 0.5 * (1.0 - s), L2 = 0.5 * (1.0 + s);
    Vec3 p = L1 * da1 + L2 * da2;
    Vec3 q = L1 * db1 + L2 * db2;
    if (p.norm() < hmin || q.norm() < hmin)
      fail(ErrorKind::ZeroDirector, "vanishing interpolated director on crease");

    AngleDerivs ad = signed_angle_derivs(p, q, axis, want_derivs);
    out.theta[g] = ad.theta;
    if (std::abs(ad.theta) >= M_PI) {
      out.diverged = true;
      out.energy = std::numeric_limits<double>::infinity();
      continue;
    }
    DensityEval de = crease_density_deriv(ad.theta, params);
    out.energy += half_l * de.psi;
    if (!want_derivs || ad.degenerate) continue;

    const double Lw[4] = {L1, L2, L1, L2};
    Vec3 dtheta_pq[2] = {ad.dp, ad.dq};
    // gradient over the four director slots
    Eigen::Matrix<double, 12, 1> dtheta;
    for (int k = 0; k < 4; ++k)
      dtheta.segment<3>(3 * k) = Lw[k] * dtheta_pq[k / 2];
    out.grad.segment<12>(0) += (half_l * de.dpsi) * dtheta;

    Eigen::Matrix<double, 12, 12> Htheta;
    for (int k = 0; k < 4; ++k)
      for (int m = 0; m < 4; ++m) {
        const Mat3* blk;
        bool transpose = false;
        if (k < 2 && m < 2) blk = &ad.Hpp;
        else if (k >= 2 && m >= 2) blk = &ad.Hqq;
        else if (k < 2) blk = &ad.Hpq;
        else { blk = &ad.Hpq; transpose = true; }
        Mat3 b = transpose ? Mat3(blk->transpose()) : *blk;
        Htheta.block<3, 3>(3 * k, 3 * m) = Lw[k] * Lw[m] * b;
      }
    out.hess.block<12, 12>(0, 0) +=
        half_l * (de.ddpsi * (dtheta * dtheta.transpose()) + de.dpsi * Htheta);
  }
  return out;
}

}  // namespace orishell
