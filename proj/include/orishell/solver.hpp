#pragma once

#include "orishell/assembly.hpp"

#include <functional>
#include <string>
#include <vector>

namespace orishell {

struct SolverConfig {
  int max_increments = 100;
  int max_iterations = 50;
  double tolerance = -1.0;  // <= 0: 1e-8 * characteristic mesh size
  int max_recovery = 20;    // Gamma
  int snapshot_every = 1;   // output cadence
};

struct IncrementRecord {
  int index = 0;          // increment counter delta at acceptance
  double lambda = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  int iterations = 0;
  double eps = 0.0;       // ||dU[Omega]|| at exit
  double energy = 0.0;
  double max_abs_fold = 0.0;
  VecX U;
};

struct Trajectory {
  std::vector<IncrementRecord> increments;
  bool completed = false;
  std::string diagnostic;
  int total_failures = 0;
};

struct SolverHooks {
  // Test hook: force the linear solve of (increment delta, iteration iota) to fail.
  std::function<bool(int, int)> inject_linear_failure;
  std::function<void(const IncrementRecord&)> on_accept;
  // Called after a failed increment, with the post-update recovery state and
  // the rolled-back displacement vector.
  std::function<void(int, double, double, const VecX&)> on_recover;
  bool quiet = false;
};

/// Direct sparse solve of K x = r with an LDLT factorization; throws
/// SingularSystem when factorization fails or the residual check
/// ||K x - r|| <= 1e-10 ||r|| does not hold.
VecX linear_solve(const SpMat& K, const VecX& r);

/// Damped Newton with adaptive load increments and recovery.
class NewtonSolver {
public:
  NewtonSolver(Assembler& assembler, const BoundaryConditions& bcs,
               const SolverConfig& config);

  Trajectory run(const SolverHooks& hooks = {});

  double tolerance() const { return tol_; }
  const std::vector<int>& free_dofs() const { return free_; }

private:
  struct ReducedSystem;  // cached Omega-submatrix extraction

  Assembler& asm_;
  BoundaryConditions bcs_;
  SolverConfig cfg_;
  std::vector<int> free_;
  double tol_;
};

}  // namespace orishell
