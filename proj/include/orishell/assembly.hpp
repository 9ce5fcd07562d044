#pragma once

#include "orishell/crease.hpp"
#include "orishell/mesh.hpp"
#include "orishell/shell_element.hpp"

#include <Eigen/Sparse>
#include <vector>

namespace orishell {

using SpMat = Eigen::SparseMatrix<double>;

struct BoundaryConditions {
  std::vector<int> fixed_dofs;       // homogeneous Dirichlet set (Phi)
  std::vector<int> prescribed_dofs;  // displacement-driven dofs
  VecX prescribed_targets;           // total displacement per prescribed dof
  VecX F_ext;                        // external force vector (empty means zero)
};

/// Sorted free set: complement of fixed and prescribed. Throws OverlappingBCs
/// when the two sets intersect or contain duplicates.
std::vector<int> partition_free_dofs(const BoundaryConditions& bc, int total_dofs);

/// Scatter-adds element and crease energies/forces/stiffnesses through the
/// DofMap into a fixed sparsity pattern. Element evaluation may run in
/// parallel; the scatter is sequential in entity order, so results are
/// reproducible for any thread count.
class Assembler {
public:
  Assembler(const Mesh& mesh, const DofMap& dofs);

  struct Result {
    double energy = 0.0;
    bool diverged = false;       // barrier hit +/-pi, vanished director, or non-finite state
    double max_abs_fold = 0.0;
  };

  /// Refreshes K and F_int at the given displacement state.
  Result assemble(const VecX& U);

  double total_energy(const VecX& U) const;
  double max_fold_angle(const VecX& U) const;

  /// (membrane, bending, shear, thickness) summed over the element subset.
  Vec4 energy_split(const VecX& U, const std::vector<int>& elems) const;
  double bending_energy(const VecX& U, const std::vector<int>& elems) const;
  VecX element_bending_energies(const VecX& U) const;
  double element_area(int e) const { return geoms_[e].area(); }

  const SpMat& matrix() const { return K_; }
  const VecX& internal_force() const { return F_int_; }
  const Mesh& mesh() const { return *mesh_; }
  const DofMap& dof_map() const { return *dofs_; }
  int total_dofs() const { return dofs_->total_dofs; }

  ElemVec gather_element(const VecX& U, int e) const;
  const ElementGeometry& geometry(int e) const { return geoms_[e]; }

private:
  struct CreaseGather {
    std::array<int, 6> blocks;  // slot dofs (4) then translation dofs (2), base indices
  };

  void gather_crease_state(const VecX& U, int c, Vec3& da1, Vec3& da2, Vec3& db1,
                           Vec3& db2, Vec3& x1, Vec3& x2) const;

  const Mesh* mesh_;
  const DofMap* dofs_;
  std::vector<ElementGeometry> geoms_;
  std::vector<std::array<int, 24>> elem_dofs_;
  std::vector<CreaseGather> crease_dofs_;
  SpMat K_;
  VecX F_int_;
  std::vector<std::vector<int>> elem_slots_;    // per element: 576 value indices
  std::vector<std::vector<int>> crease_slots_;  // per crease: 324 value indices
};

}  // namespace orishell
