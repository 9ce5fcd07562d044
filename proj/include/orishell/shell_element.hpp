#pragma once

#include "orishell/mesh.hpp"
#include "orishell/types.hpp"

#include <array>

namespace orishell {

/// Bilinear interpolation functions and their natural-coordinate derivatives.
/// Node order: (-1,-1), (1,-1), (1,1), (-1,1).
struct ShapeEval {
  Vec4 N, dNxi, dNeta;
};

ShapeEval shape_functions(double xi, double eta);

/// Thickness-integrated constitutive blocks (plane stress in-plane,
/// 5/6-corrected transverse shear, uncoupled transverse normal).
struct IntegratedConstitutive {
  Mat3 Cm;   // membrane
  Mat3 Cb;   // bending
  Mat2 CS;   // transverse shear
  double CT; // transverse normal
};

IntegratedConstitutive integrated_constitutive(const Material& mat);

/// Element-local orthonormal frame, e_z normal to the initial flat element.
struct LocalFrame {
  Vec3 ex, ey, ez;
};

LocalFrame local_basis(const std::array<Vec3, 4>& X);

/// Strain maps from the natural frame (covariant components on the
/// non-normalized basis e_xi = X_o,xi, e_eta = X_o,eta, e_zeta = X_n)
/// into the local Cartesian frame.
struct TransformSet {
  Mat3 T_eps;
  Mat2 T_gam;
  double T_zeta;
  Eigen::Matrix3d cosines;  // rows x,y,z; cols xi,eta,zeta
};

TransformSet transform_matrices(const LocalFrame& frame, const Vec3& e_xi,
                                const Vec3& e_eta, const Vec3& e_zeta);

/// Local-frame strains at one quadrature point.
struct StrainState {
  Vec3 eps_m;    // (eps_xx, eps_yy, gamma_xy)
  Vec3 eps_b;
  Vec2 gamma;    // (gamma_zx, gamma_zy)
  double eps_zz;
};

/// Natural (pre-transform) strain pieces at one in-plane point, plus the ANS
/// samples that feed the interpolation.
struct NaturalStrains {
  Vec3 eps_m;            // (eps_xixi, eps_etaeta, 2 eps_xieta)
  Vec3 eps_b;
  Vec2 gamma_xi_samples; // gamma_zeta-xi at (0,-1), (0,+1)
  Vec2 gamma_eta_samples;// gamma_zeta-eta at (-1,0), (+1,0)
  Vec4 eps_zz_nodes;
};

/// ANS blends: shear from edge midpoints, thickness strain from the nodes.
void ans_interpolate(const Vec2& gamma_xi_samples, const Vec2& gamma_eta_samples,
                     const Vec4& eps_zz_nodes, double xi, double eta,
                     double& gamma_zxi, double& gamma_zeta, double& eps_zz);

using ElemVec = Eigen::Matrix<double, 24, 1>;
using ElemMat = Eigen::Matrix<double, 24, 24>;

/// Element displacement layout: [U_o1, U_n1, U_o2, U_n2, U_o3, U_n3, U_o4, U_n4].
///
/// Precomputes everything that depends on the initial configuration only:
/// shape data at the quadrature/ANS/nodal points, natural bases, Jacobian,
/// transforms and the folded-back constitutive matrix per quadrature point.
class ElementGeometry {
public:
  ElementGeometry(const std::array<Vec3, 4>& X, const std::array<Vec3, 4>& D,
                  const IntegratedConstitutive& C);

  double energy(const ElemVec& Ue) const;
  /// (membrane, bending, shear, thickness) energy parts.
  Vec4 energy_split(const ElemVec& Ue) const;
  /// Returns the energy; fills analytic gradient and (symmetric) hessian.
  double force_stiffness(const ElemVec& Ue, ElemVec& grad, ElemMat& hess) const;

  NaturalStrains natural_strains(const ElemVec& Ue, double xi, double eta) const;
  StrainState local_strains(const ElemVec& Ue, int gp) const;

  double area() const { return area_; }
  double jacobian(int gp) const { return gp_[gp].J; }
  const TransformSet& transforms(int gp) const { return gp_[gp].T; }
  const std::array<Vec3, 4>& rest_positions() const { return X_; }
  const std::array<Vec3, 4>& rest_directors() const { return D_; }

  static constexpr int kGauss = 4;
  static const std::array<std::array<double, 2>, 4>& gauss_points();

private:
  struct GaussCache {
    ShapeEval sh;
    Vec3 Xo_xi, Xo_eta, Xn, Xn_xi, Xn_eta;
    double J = 0.0;  // J_o = (X_o,xi x X_o,eta) . X_n
    TransformSet T;
    Eigen::Matrix<double, 9, 9> Cnat;  // T9^T diag(Cm,Cb,CS,CT) T9
    Vec2 w_xi, w_eta;                  // ANS blend weights at this point
  };
  struct SampleCache {
    ShapeEval sh;
    Vec3 Xo_d;  // X_o,xi at the xi-shear samples, X_o,eta at the eta ones
    Vec3 Xn;
  };

  struct State;  // displacement-dependent scratch, defined in the .cpp

  void natural_values(const ElemVec& Ue, State& st) const;

  std::array<Vec3, 4> X_;
  std::array<Vec3, 4> D_;
  IntegratedConstitutive C_;
  std::array<GaussCache, 4> gp_;
  std::array<SampleCache, 2> sxi_;   // (0,-1), (0,+1)
  std::array<SampleCache, 2> seta_;  // (-1,0), (+1,0)
  double area_ = 0.0;

  friend struct ElementGeometryTestAccess;
};

}  // namespace orishell
