#pragma once

#include "orishell/mesh.hpp"
#include "orishell/types.hpp"

namespace orishell {

/// Fold energy per unit crease length: quadratic about theta0 on
/// [thetaL, thetaR], log-barrier branches outside. Throws BarrierOverflow
/// for |theta| >= pi.
double crease_energy_density(double theta, const CreaseParams& p);

struct DensityEval {
  double psi = 0.0, dpsi = 0.0, ddpsi = 0.0;
};
DensityEval crease_density_deriv(double theta, const CreaseParams& p);

/// Signed angle between p and q, sign from (p x q) . axis (>= 0 -> +).
/// Derivatives are with respect to p and q; the axis enters only through the
/// (piecewise constant) sign. `degenerate` marks numerically parallel
/// directors, where the angle gradient direction is undefined.
struct AngleDerivs {
  double theta = 0.0;
  bool degenerate = false;
  Vec3 dp = Vec3::Zero(), dq = Vec3::Zero();
  Mat3 Hpp = Mat3::Zero(), Hpq = Mat3::Zero(), Hqq = Mat3::Zero();
};

double signed_angle(const Vec3& p, const Vec3& q, const Vec3& axis);
AngleDerivs signed_angle_derivs(const Vec3& p, const Vec3& q, const Vec3& axis,
                                bool want_second);

struct FoldAngleState {
  double theta = 0.0;
  Vec3 p, q, axis;
};

/// Directors p, q interpolated at crease coordinate s from the deformed end
/// directors; theta per the acos sign rule on current positions.
FoldAngleState fold_angle_at(const Mesh& mesh, const DofMap& dofs, const VecX& U,
                             const CreaseSegment& crease, double s);

/// Energy, gradient and hessian of one crease, integrated with 2-point Gauss
/// along s. Dof footprint order:
///   [d_a1, d_a2, d_b1, d_b2, x_1, x_2]  (director slots then translations)
/// Translation derivatives are identically zero (positions enter through the
/// sign only); they are part of the footprint for assembly bookkeeping.
struct CreaseContribution {
  double energy = 0.0;
  bool diverged = false;   // some gauss angle reached +/-pi
  double theta[2] = {0.0, 0.0};
  Eigen::Matrix<double, 18, 1> grad = Eigen::Matrix<double, 18, 1>::Zero();
  Eigen::Matrix<double, 18, 18> hess = Eigen::Matrix<double, 18, 18>::Zero();
};

CreaseContribution crease_contribution(const Vec3& da1, const Vec3& da2,
                                       const Vec3& db1, const Vec3& db2,
                                       const Vec3& x1, const Vec3& x2,
                                       const CreaseParams& params,
                                       double thickness, bool want_derivs);

}  // namespace orishell
