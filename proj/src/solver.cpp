#include "orishell/solver.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <cstdio>
#include <limits>

namespace orishell {

VecX linear_solve(const SpMat& K, const VecX& r) {
  if (K.rows() == 0) return VecX();
  Eigen::SimplicialLDLT<SpMat> ldlt(K);
  if (ldlt.info() != Eigen::Success)
    fail(ErrorKind::SingularSystem, "sparse factorization failed");
  VecX x = ldlt.solve(r);
  double rn = r.norm();
  if (!x.allFinite())
    fail(ErrorKind::SingularSystem, "linear solve produced non-finite values");
  if (rn == 0.0) return x;
  // Iterative refinement with the factorization in hand.
  double res = (K * x - r).norm();
  for (int it = 0; it < 5 && res > 1e-10 * rn; ++it) {
    VecX x2 = x + VecX(ldlt.solve(r - K * x));
    double res2 = (K * x2 - r).norm();
    if (!x2.allFinite() || res2 >= res) break;
    x = x2;
    res = res2;
  }
  if (res > 1e-10 * rn)
    fail(ErrorKind::SingularSystem, "linear solve residual exceeds 1e-10 of the load");
  return x;
}

// Omega-restricted view of the assembled matrix with a one-time symbolic
// extraction; values are refreshed from the full matrix between factorizations.
struct NewtonSolver::ReducedSystem {
  SpMat Kr;
  std::vector<std::pair<int, int>> copy_map;  // (full value index, reduced value index)
  Eigen::SimplicialLDLT<SpMat> ldlt;
  bool analyzed = false;

  ReducedSystem(const SpMat& K, const std::vector<int>& free) {
    std::vector<int> pos(K.rows(), -1);
    for (size_t i = 0; i < free.size(); ++i) pos[free[i]] = static_cast<int>(i);
    std::vector<Eigen::Triplet<double>> trips;
    for (int col = 0; col < K.outerSize(); ++col) {
      if (pos[col] < 0) continue;
      for (SpMat::InnerIterator it(K, col); it; ++it)
        if (pos[it.row()] >= 0) trips.emplace_back(pos[it.row()], pos[col], 0.0);
    }
    const int n = static_cast<int>(free.size());
    Kr.resize(n, n);
    Kr.setFromTriplets(trips.begin(), trips.end());
    Kr.makeCompressed();

    const int* outer = K.outerIndexPtr();
    const int* inner = K.innerIndexPtr();
    const int* router = Kr.outerIndexPtr();
    const int* rinner = Kr.innerIndexPtr();
    for (int col = 0; col < K.outerSize(); ++col) {
      if (pos[col] < 0) continue;
      int rcol = pos[col];
      int rk = router[rcol];
      for (int k = outer[col]; k < outer[col + 1]; ++k) {
        if (pos[inner[k]] < 0) continue;
        while (rinner[rk] != pos[inner[k]]) ++rk;
        copy_map.emplace_back(k, rk);
        ++rk;
      }
    }
  }

  void refresh(const SpMat& K) {
    const double* src = K.valuePtr();
    double* dst = Kr.valuePtr();
    for (const auto& [from, to] : copy_map) dst[to] = src[from];
  }

  // Returns false on factorization failure or an out-of-tolerance residual.
  bool solve(const VecX& r, VecX& x) {
    if (Kr.rows() == 0) {
      x.resize(0);
      return true;
    }
    if (!analyzed) {
      ldlt.analyzePattern(Kr);
      analyzed = true;
    }
    ldlt.factorize(Kr);
    if (ldlt.info() != Eigen::Success) return false;
    x = ldlt.solve(r);
    if (!x.allFinite()) return false;
    double rn = r.norm();
    if (rn == 0.0) return true;
    double res = (Kr * x - r).norm();
    for (int it = 0; it < 4 && res > 1e-10 * rn; ++it) {
      VecX x2 = x + VecX(ldlt.solve(r - Kr * x));
      double res2 = (Kr * x2 - r).norm();
      if (!x2.allFinite() || res2 >= res) break;
      x = x2;
      res = res2;
    }
    if (res <= 1e-10 * rn) return true;
    // A backward-stable direct solve cannot beat roundoff on |K||x|; accept
    // residuals at that floor instead of misreporting a singular system.
    double floor_scale = (Kr.cwiseAbs() * x.cwiseAbs()).norm();
    return res <= 1e3 * std::numeric_limits<double>::epsilon() * floor_scale;
  }
};

NewtonSolver::NewtonSolver(Assembler& assembler, const BoundaryConditions& bcs,
                           const SolverConfig& config)
    : asm_(assembler), bcs_(bcs), cfg_(config) {
  free_ = partition_free_dofs(bcs_, asm_.total_dofs());
  tol_ = cfg_.tolerance > 0 ? cfg_.tolerance
                            : 1e-8 * mesh_characteristic_size(asm_.mesh());
  if (bcs_.F_ext.size() == 0) bcs_.F_ext = VecX::Zero(asm_.total_dofs());
}

Trajectory NewtonSolver::run(const SolverHooks& hooks) {
  Trajectory traj;
  const int n = asm_.total_dofs();
  const int np = static_cast<int>(bcs_.prescribed_dofs.size());
  const double ninc = static_cast<double>(cfg_.max_increments);

  VecX U = VecX::Zero(n);
  double lambda = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  int gamma = 0;
  int delta = 0;
  const int Gamma = cfg_.max_recovery;

  VecX dU_presc(np);
  for (int k = 0; k < np; ++k) dU_presc[k] = bcs_.prescribed_targets[k] / ninc;

  ReducedSystem reduced(asm_.matrix(), free_);
  VecX U_prev = U;
  VecX dU = VecX::Zero(n);
  VecX r_red(free_.size()), x_red;

  while (lambda < 1.0 && gamma <= Gamma) {
    delta += 1;
    U_prev = U;

    // Cap the effective step so lambda lands exactly on 1 (and does not
    // creep past it by accumulated roundoff).
    double lambda_target = lambda + alpha / ninc;
    if (lambda_target > 1.0 - 1e-12) lambda_target = 1.0;
    double alpha_eff = (lambda_target - lambda) * ninc;

    for (int k = 0; k < np; ++k) U[bcs_.prescribed_dofs[k]] += alpha_eff * dU_presc[k];
    for (int f : bcs_.fixed_dofs) U[f] = 0.0;

    double eps = std::numeric_limits<double>::infinity();
    int iota = 0;
    bool solve_failed = false;
    while (eps > tol_ && iota < cfg_.max_iterations) {
      Assembler::Result ar = asm_.assemble(U);
      if (ar.diverged) {
        solve_failed = true;
        ++iota;
        break;
      }
      for (size_t i = 0; i < free_.size(); ++i) {
        int d = free_[i];
        r_red[i] = lambda_target * bcs_.F_ext[d] - asm_.internal_force()[d];
      }
      bool injected = hooks.inject_linear_failure && hooks.inject_linear_failure(delta, iota);
      reduced.refresh(asm_.matrix());
      if (injected || !reduced.solve(r_red, x_red)) {
        solve_failed = true;
        ++iota;
        break;
      }
      dU.setZero();
      for (size_t i = 0; i < free_.size(); ++i) dU[free_[i]] = x_red[i];
      U += beta * dU;
      eps = x_red.norm();
      ++iota;
    }

    bool failed = solve_failed ||
                  iota >= ((alpha > 1.0) ? 2.0 : 1.0) * cfg_.max_iterations / (beta + 1.0);
    if (failed) {
      gamma += 1;
      delta -= 1;
      if (gamma <= 10)
        alpha = alpha / 2.0;
      else {
        alpha = std::max(alpha, 1.0) * 1.5;
        beta = beta * 0.75;
      }
      U = U_prev;
      traj.total_failures += 1;
      if (hooks.on_recover) hooks.on_recover(gamma, alpha, beta, U);
      if (!hooks.quiet)
        std::printf("  recovery %2d: alpha=%.6g beta=%.6g\n", gamma, alpha, beta);
    } else {
      lambda = lambda_target;
      gamma = 0;
      beta = 1.0;
      alpha = (alpha < 1.0) ? std::min(alpha * 1.1, 1.0) : std::max(alpha * 0.9, 1.0);

      IncrementRecord rec;
      rec.index = delta;
      rec.lambda = lambda;
      rec.alpha = alpha_eff;
      rec.beta = beta;
      rec.iterations = iota;
      rec.eps = eps;
      rec.energy = asm_.total_energy(U);
      rec.max_abs_fold = asm_.mesh().creases.empty() ? 0.0 : asm_.max_fold_angle(U);
      rec.U = U;
      if (!hooks.quiet)
        std::printf("inc %4d  lambda=%.6f alpha=%.4g beta=%.4g iters=%d |dU|=%.3e\n",
                    rec.index, rec.lambda, rec.alpha, rec.beta, rec.iterations, rec.eps);
      if (hooks.on_accept) hooks.on_accept(rec);
      traj.increments.push_back(std::move(rec));
    }
  }

  traj.completed = lambda >= 1.0;
  if (!traj.completed)
    traj.diagnostic = "recovery exhausted after " + std::to_string(Gamma) +
                      " attempts at lambda = " + std::to_string(lambda);
  return traj;
}

}  // namespace orishell
