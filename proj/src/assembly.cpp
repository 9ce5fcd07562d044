#include "orishell/assembly.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <thread>

namespace orishell {

namespace {

int thread_budget() {
  if (const char* env = std::getenv("ORISHELL_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Static chunking; bodies must be independent per index.
template <typename F>
void parallel_for(int n, F&& body) {
  int nt = std::min(thread_budget(), std::max(1, n / 64));
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    int lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (int i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Index of (row, col) inside the compressed storage.
int value_index(const SpMat& K, int row, int col) {
  const int* outer = K.outerIndexPtr();
  const int* inner = K.innerIndexPtr();
  int lo = outer[col], hi = outer[col + 1];
  const int* it = std::lower_bound(inner + lo, inner + hi, row);
  return static_cast<int>(it - inner);
}

}  // namespace

std::vector<int> partition_free_dofs(const BoundaryConditions& bc, int total_dofs) {
  std::vector<char> tag(total_dofs, 0);
  for (int d : bc.fixed_dofs) {
    if (d < 0 || d >= total_dofs)
      fail(ErrorKind::ValidationError, "fixed dof out of range");
    if (tag[d]) fail(ErrorKind::OverlappingBCs, "dof " + std::to_string(d) + " constrained twice");
    tag[d] = 1;
  }
  for (int d : bc.prescribed_dofs) {
    if (d < 0 || d >= total_dofs)
      fail(ErrorKind::ValidationError, "prescribed dof out of range");
    if (tag[d]) fail(ErrorKind::OverlappingBCs, "dof " + std::to_string(d) + " constrained twice");
    tag[d] = 2;
  }
  std::vector<int> free;
  free.reserve(total_dofs);
  for (int d = 0; d < total_dofs; ++d)
    if (!tag[d]) free.push_back(d);
  return free;
}

Assembler::Assembler(const Mesh& mesh, const DofMap& dofs)
    : mesh_(&mesh), dofs_(&dofs) {
  IntegratedConstitutive C = integrated_constitutive(mesh.material);

  geoms_.reserve(mesh.num_elements());
  elem_dofs_.resize(mesh.num_elements());
  for (const auto& el : mesh.elements) {
    std::array<Vec3, 4> X, D;
    for (int i = 0; i < 4; ++i) {
      X[i] = mesh.nodes[el.nodes[i]].X;
      D[i] = mesh.slot_director[mesh.slot(el.panel, el.nodes[i])];
    }
    try {
      geoms_.emplace_back(X, D, C);
    } catch (const Error& e) {
      fail(e.kind(), "element " + std::to_string(el.id) + ": " + e.what());
    }
    auto& map = elem_dofs_[el.id];
    for (int i = 0; i < 4; ++i) {
      int slot = mesh.slot(el.panel, el.nodes[i]);
      for (int c = 0; c < 3; ++c) {
        map[6 * i + c] = dofs.trans_dof(el.nodes[i], c);
        map[6 * i + 3 + c] = dofs.slot_dof(slot, c);
      }
    }
  }

  crease_dofs_.resize(mesh.creases.size());
  for (const auto& cr : mesh.creases) {
    int pa = mesh.elements[cr.elem_a].panel;
    int pb = mesh.elements[cr.elem_b].panel;
    crease_dofs_[cr.id].blocks = {
        dofs.slot_dof(mesh.slot(pa, cr.node1), 0), dofs.slot_dof(mesh.slot(pa, cr.node2), 0),
        dofs.slot_dof(mesh.slot(pb, cr.node1), 0), dofs.slot_dof(mesh.slot(pb, cr.node2), 0),
        dofs.trans_dof(cr.node1, 0), dofs.trans_dof(cr.node2, 0)};
  }

  // Fixed sparsity pattern covering element and crease footprints.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.num_elements() * 576 + mesh.creases.size() * 324);
  for (const auto& map : elem_dofs_)
    for (int a : map)
      for (int b : map) trips.emplace_back(a, b, 0.0);
  for (const auto& cg : crease_dofs_)
    for (int ba : cg.blocks)
      for (int bb : cg.blocks)
        for (int ca = 0; ca < 3; ++ca)
          for (int cb = 0; cb < 3; ++cb) trips.emplace_back(ba + ca, bb + cb, 0.0);
  K_.resize(dofs.total_dofs, dofs.total_dofs);
  K_.setFromTriplets(trips.begin(), trips.end());
  K_.makeCompressed();
  F_int_.setZero(dofs.total_dofs);

  elem_slots_.resize(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    elem_slots_[e].resize(576);
    const auto& map = elem_dofs_[e];
    for (int a = 0; a < 24; ++a)
      for (int b = 0; b < 24; ++b)
        elem_slots_[e][24 * a + b] = value_index(K_, map[a], map[b]);
  }
  crease_slots_.resize(mesh.creases.size());
  for (size_t c = 0; c < mesh.creases.size(); ++c) {
    crease_slots_[c].resize(324);
    const auto& blocks = crease_dofs_[c].blocks;
    for (int a = 0; a < 18; ++a)
      for (int b = 0; b < 18; ++b) {
        int ga = blocks[a / 3] + a % 3;
        int gb = blocks[b / 3] + b % 3;
        crease_slots_[c][18 * a + b] = value_index(K_, ga, gb);
      }
  }
}

ElemVec Assembler::gather_element(const VecX& U, int e) const {
  ElemVec Ue;
  const auto& map = elem_dofs_[e];
  for (int k = 0; k < 24; ++k) Ue[k] = U[map[k]];
  return Ue;
}

void Assembler::gather_crease_state(const VecX& U, int c, Vec3& da1, Vec3& da2,
                                    Vec3& db1, Vec3& db2, Vec3& x1, Vec3& x2) const {
  const Mesh& m = *mesh_;
  const CreaseSegment& cr = m.creases[c];
  int pa = m.elements[cr.elem_a].panel;
  int pb = m.elements[cr.elem_b].panel;
  auto dir = [&](int panel, int node) {
    int slot = m.slot(panel, node);
    return Vec3(m.slot_director[slot] + U.segment<3>(dofs_->slot_dof(slot, 0)));
  };
  da1 = dir(pa, cr.node1);
  da2 = dir(pa, cr.node2);
  db1 = dir(pb, cr.node1);
  db2 = dir(pb, cr.node2);
  x1 = m.nodes[cr.node1].X + U.segment<3>(dofs_->trans_dof(cr.node1, 0));
  x2 = m.nodes[cr.node2].X + U.segment<3>(dofs_->trans_dof(cr.node2, 0));
}

Assembler::Result Assembler::assemble(const VecX& U) {
  Result res;
  if (!U.allFinite()) {
    res.diverged = true;
    res.energy = std::numeric_limits<double>::infinity();
    return res;
  }

  const int ne = mesh_->num_elements();
  const int nc = static_cast<int>(mesh_->creases.size());

  struct ElemOut {
    double energy;
    ElemVec grad;
    ElemMat hess;
  };
  std::vector<ElemOut> eout(ne);
  parallel_for(ne, [&](int e) {
    ElemVec Ue = gather_element(U, e);
    eout[e].energy = geoms_[e].force_stiffness(Ue, eout[e].grad, eout[e].hess);
  });

  std::vector<CreaseContribution> cout_(nc);
  bool crease_error = false;
  for (int c = 0; c < nc; ++c) {
    Vec3 da1, da2, db1, db2, x1, x2;
    gather_crease_state(U, c, da1, da2, db1, db2, x1, x2);
    try {
      cout_[c] = crease_contribution(da1, da2, db1, db2, x1, x2,
                                     mesh_->creases[c].params, mesh_->material.h, true);
    } catch (const Error&) {
      crease_error = true;
      break;
    }
  }

  double* vals = K_.valuePtr();
  std::fill(vals, vals + K_.nonZeros(), 0.0);
  F_int_.setZero();

  double energy = 0.0;
  for (int e = 0; e < ne; ++e) {
    energy += eout[e].energy;
    const auto& map = elem_dofs_[e];
    const auto& slots = elem_slots_[e];
    for (int a = 0; a < 24; ++a) {
      F_int_[map[a]] += eout[e].grad[a];
      for (int b = 0; b < 24; ++b) vals[slots[24 * a + b]] += eout[e].hess(a, b);
    }
  }
  double max_fold = 0.0;
  bool diverged = crease_error;
  for (int c = 0; c < nc && !crease_error; ++c) {
    const auto& cc = cout_[c];
    diverged = diverged || cc.diverged;
    max_fold = std::max({max_fold, std::abs(cc.theta[0]), std::abs(cc.theta[1])});
    if (cc.diverged) continue;
    energy += cc.energy;
    const auto& blocks = crease_dofs_[c].blocks;
    const auto& slots = crease_slots_[c];
    for (int a = 0; a < 18; ++a) {
      F_int_[blocks[a / 3] + a % 3] += cc.grad[a];
      for (int b = 0; b < 18; ++b) vals[slots[18 * a + b]] += cc.hess(a, b);
    }
  }

  res.energy = diverged ? std::numeric_limits<double>::infinity() : energy;
  res.diverged = diverged || !std::isfinite(energy);
  res.max_abs_fold = max_fold;
  return res;
}

double Assembler::total_energy(const VecX& U) const {
  if (!U.allFinite()) return std::numeric_limits<double>::infinity();
  double energy = 0.0;
  for (int e = 0; e < mesh_->num_elements(); ++e)
    energy += geoms_[e].energy(gather_element(U, e));
  for (size_t c = 0; c < mesh_->creases.size(); ++c) {
    Vec3 da1, da2, db1, db2, x1, x2;
    gather_crease_state(U, static_cast<int>(c), da1, da2, db1, db2, x1, x2);
    CreaseContribution cc = crease_contribution(da1, da2, db1, db2, x1, x2,
                                                mesh_->creases[c].params,
                                                mesh_->material.h, false);
    energy += cc.energy;
  }
  return energy;
}

double Assembler::max_fold_angle(const VecX& U) const {
  double m = 0.0;
  for (const auto& cr : mesh_->creases)
    for (double s : {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}) {
      FoldAngleState st = fold_angle_at(*mesh_, *dofs_, U, cr, s);
      m = std::max(m, std::abs(st.theta));
    }
  return m;
}

Vec4 Assembler::energy_split(const VecX& U, const std::vector<int>& elems) const {
  Vec4 parts = Vec4::Zero();
  for (int e : elems) parts += geoms_[e].energy_split(gather_element(U, e));
  return parts;
}

double Assembler::bending_energy(const VecX& U, const std::vector<int>& elems) const {
  return energy_split(U, elems)[1];
}

VecX Assembler::element_bending_energies(const VecX& U) const {
  VecX out(mesh_->num_elements());
  for (int e = 0; e < mesh_->num_elements(); ++e)
    out[e] = geoms_[e].energy_split(gather_element(U, e))[1];
  return out;
}

}  // namespace orishell
