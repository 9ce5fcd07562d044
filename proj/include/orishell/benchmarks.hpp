#pragma once

#include "orishell/scene.hpp"

#include <array>
#include <string>
#include <vector>

namespace orishell {

// ---------------------------------------------------------------------------
// Miura-ori unit cell
// ---------------------------------------------------------------------------

struct MiuraParams {
  double a = 2.0;
  double b = 2.0;
  double gamma = M_PI / 3.0;   // panel angle
  double beta0 = M_PI / 12.0;  // initial fold parameter (15 deg)
};

struct MiuraAnalytic {
  double H = 0.0, L = 0.0, W = 0.0;
};

/// Closed-form cell dimensions as a function of the fold parameter beta.
MiuraAnalytic miura_analytic(const MiuraParams& p, double beta);

/// Rigid-cell edge vectors at fold parameter beta; the generated cell and
/// the analytic H, W agree for every beta.
struct MiuraCellVectors {
  Vec3 B0, B1;  // column offsets (in-plane zigzag)
  Vec3 A0, A1;  // row offsets (vertical zigzag)
};
MiuraCellVectors miura_cell_vectors(const MiuraParams& p, double beta);

Scene gen_miura_unit(const MiuraParams& p, const Material& mat, double k_f,
                     int max_increments = 100, double prescribed = -3.44);

struct MiuraMeasurement {
  double H = 0.0, L = 0.0, W = 0.0, beta_hat = 0.0;
};

/// Extents in the cell's symmetry frame (fitted, rigid-motion invariant);
/// beta_hat inverts H = a sin(beta) sin(gamma). W spans the outer node
/// columns, the periodic cell width.
MiuraMeasurement measure_miura(const Scene& scene, const VecX& U);

// ---------------------------------------------------------------------------
// Creased annulus sector folding onto a cone
// ---------------------------------------------------------------------------

struct AnnulusParams {
  double R = 0.1;        // mid-arc (crease) radius
  double a = 0.005;      // band width on each side of the crease
  double alpha = M_PI / 4.0;
  int n = 32;            // circumferential divisions
  int m = 4;             // radial divisions per band
  double phi = M_PI / 2.0;  // target fold angle
};

Scene gen_annulus_sector(const AnnulusParams& p, const Material& mat, double k_f,
                         int max_increments = 60);

/// Theoretical bending energy of the cone band between slant radii r0 and r1,
/// integrated numerically from the principal-curvature field.
double cone_theory_energy_region(double r0, double r1, double alpha, double phi,
                                 double D_b);
double cone_theory_energy(const AnnulusParams& p, const Material& mat);
double bending_rigidity(const Material& mat);

/// Elements of the annulus mesh by band; optionally excluding the row of
/// elements adjacent to the crease.
std::vector<int> annulus_band_elements(const Scene& scene, int band,
                                       bool exclude_crease_row);

double measure_bending_energy(const Assembler& asmb, const VecX& U,
                              const std::vector<int>& elems);

// ---------------------------------------------------------------------------
// Cantilever strip (solid-shell accuracy check)
// ---------------------------------------------------------------------------

struct CantileverParams {
  int nx = 10;
  int ny = 1;
  double length = 10.0;
  double width = 1.0;
  double P_total = 4000.0;  // transverse tip load, shared by the tip nodes
  int increments = 10;
};

Scene gen_cantilever(const CantileverParams& p);

struct TipDeflection {
  double u = 0.0;  // horizontal (axial) tip motion, positive toward the root
  double w = 0.0;  // transverse tip deflection magnitude
};

/// Inextensible-elastica cantilever under a dead transverse tip load,
/// solved by shooting; independent of the finite-element path.
TipDeflection elastica_oracle(double P, double length = 10.0, double EI = 1e5,
                              int steps = 4000);

TipDeflection measure_tip_deflection(const Scene& scene, const VecX& U);

// ---------------------------------------------------------------------------
// Qualitative scenes
// ---------------------------------------------------------------------------

/// name: "miura_sheet" (tessellation) or "full_annulus" (closed circular
/// crease with fold-inducing prescribed displacements).
Scene gen_qualitative(const std::string& name);

// ---------------------------------------------------------------------------
// Benchmark pipelines (shared by the CLI and the acceptance suite)
// ---------------------------------------------------------------------------

struct MiuraBenchRow {
  double lambda, L_ratio, H, W, H_analytic, W_analytic;
};

struct MiuraBenchResult {
  Trajectory traj;
  std::vector<MiuraBenchRow> rows;
  MiuraParams params;
  bool completed = false;
};

MiuraBenchResult run_miura_bench(int max_increments = 100, bool quiet = true);

struct AnnulusBenchRow {
  int n = 0, m = 0;
  double k_f = 0.0;
  double E_bend = 0.0;          // outer band, all rows
  double E_theory = 0.0;        // cone theory over the outer band
  double rel_error = 0.0;
  double E_bend_no_crease_row = 0.0;
  double E_bend_inner = 0.0;
  bool completed = false;
};

AnnulusBenchRow run_annulus_case(int n, int m, double k_f, int max_increments = 25,
                                 bool quiet = true);

struct CantileverBenchRow {
  double P, u_tip, w_tip, u_oracle, w_oracle;
};

struct CantileverBenchResult {
  Trajectory traj;
  std::vector<CantileverBenchRow> rows;
  bool completed = false;
};

CantileverBenchResult run_cantilever_bench(int nx = 10, int ny = 1, bool quiet = true);

}  // namespace orishell
