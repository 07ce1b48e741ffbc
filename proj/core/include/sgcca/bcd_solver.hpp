#pragma once

#include <cstdint>
#include <vector>

#include "sgcca/model.hpp"
#include "sgcca/types.hpp"

namespace sgcca {

// Block-coordinate-descent solvers: the improved sweep that replaces each
// coefficient with the exact linear-maximization solution (variants P1, P2,
// P3), and the baseline sweep whose outer weight is the normalized
// soft-threshold with the level found by binary search. Both share the
// Gauss-Seidel order j = 1..J and the stopping rule
//   h(a^{s+1}) - h(a^s) <= epsilon * max(1, |h|).

struct BcdConfig {
  Variant variant = Variant::P3;
  Scheme scheme = Scheme::horst();
  std::vector<double> sparsity;      // per-block l1 budgets s_j
  double epsilon = 1e-8;             // relative improvement tolerance
  std::size_t max_sweeps = 1000;
  std::uint64_t seed = 0;
};

struct SolverReport {
  CoefState final_state;
  std::vector<double> objective_trace;  // h at the start and after each sweep
  std::size_t sweeps = 0;               // sweeps (BCD) or iterations (GP)
  double wall_time_s = 0.0;
  bool converged = false;
  double stationarity_residual = 0.0;
  std::uint64_t seed = 0;
  std::size_t degenerate_updates = 0;  // zero inner-target encounters
  std::size_t search_failures = 0;     // baseline binary-search non-convergences
  double step_norm_sum = 0.0;          // GP finite-length diagnostic
  double step_size_final = 0.0;        // GP last gamma
};

// Seeded standard-normal draw per block, projected onto the variant set.
CoefState init_coefs(const BlockSet& bs, const BcdConfig& cfg);

struct SweepOutcome {
  CoefState state;
  std::size_t degenerate_updates = 0;
  std::size_t search_failures = 0;
};

// One Gauss-Seidel sweep of the exact-LM update. A zero inner target
// v = X_j' z_j is counted as degenerate; under P2/P3 the previous a_j is
// retained (every feasible point ties, retaining keeps the trace monotone),
// under P1 the zero vector is taken.
SweepOutcome bcd_sweep(const BlockSet& bs, const DesignGraph& dg, const BcdConfig& cfg,
                       const CoefState& st);

// One sweep of the baseline outer weight S_lam((1/n) X_j' z_j) normalized,
// with lam bisected so the normalized vector's l1 norm hits s_j (100
// iterations, tolerance 1e-8; non-convergence keeps the best level seen and
// is counted in search_failures).
SweepOutcome baseline_sweep(const BlockSet& bs, const DesignGraph& dg, const BcdConfig& cfg,
                            const CoefState& st);

SolverReport fit_bcd(const BlockSet& bs, const DesignGraph& dg, const BcdConfig& cfg);

// Baseline solver; the constraint variant is implicitly P3.
SolverReport fit_baseline(const BlockSet& bs, const DesignGraph& dg, const BcdConfig& cfg);

}  // namespace sgcca
