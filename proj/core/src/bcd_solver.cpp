#include "sgcca/bcd_solver.hpp"

#include <chrono>
#include <cmath>

#include "sgcca/norm_geometry.hpp"
#include "sgcca/rng.hpp"

namespace sgcca {

namespace {

void validate_config(const BlockSet& bs, const BcdConfig& cfg) {
  if (!(cfg.epsilon > 0.0))
    raise(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (cfg.max_sweeps < 1)
    raise(ErrorCode::InvalidArgument, "max_sweeps must be at least 1");
  std::vector<Index> dims;
  for (std::size_t j = 0; j < bs.count(); ++j) dims.push_back(bs.dim(j));
  validate_sparsity(cfg.sparsity, dims);
}

// Normalized soft-threshold whose l1 norm is driven to the target by
// bisection on the level. Returns the vector, the level used, and whether
// the search converged. ||v|| must be positive.
struct BaselineWeight {
  Vector x;
  double lambda = 0.0;
  bool converged = true;
};

BaselineWeight baseline_outer_weight(const Vector& v, double target) {
  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-8;

  const Vector a = v.cwiseAbs();
  const double norm0 = v.norm();
  BaselineWeight out;
  if (a.sum() / norm0 <= target + kTol) {
    out.x = v / norm0;
    out.lambda = 0.0;
    return out;
  }

  double lo = 0.0;
  double hi = a.maxCoeff();
  double best_lambda = 0.0;
  double best_gap = a.sum() / norm0 - target;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const Vector s = soft_threshold(v, mid);
    const double ns = s.norm();
    if (ns == 0.0) {  // level at or above v_max
      hi = mid;
      continue;
    }
    const double gap = s.lpNorm<1>() / ns - target;
    if (std::abs(gap) < best_gap) {
      best_gap = std::abs(gap);
      best_lambda = mid;
    }
    if (std::abs(gap) <= kTol) {
      out.x = s / ns;
      out.lambda = mid;
      return out;
    }
    if (gap > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const Vector s = soft_threshold(v, best_lambda);
  out.x = s / s.norm();
  out.lambda = best_lambda;
  out.converged = false;
  return out;
}

using SweepBody = SweepOutcome (*)(const BlockSet&, const DesignGraph&, const BcdConfig&,
                                   const CoefState&);

SolverReport run_sweeps(const BlockSet& bs, const DesignGraph& dg, const BcdConfig& cfg,
                        SweepBody sweep) {
  const auto started = std::chrono::steady_clock::now();
  validate_config(bs, cfg);

  CoefState st = init_coefs(bs, cfg);
  SolverReport report{st};
  report.seed = cfg.seed;
  report.objective_trace.push_back(objective_h(bs, dg, cfg.scheme, st));

  for (std::size_t s = 0; s < cfg.max_sweeps; ++s) {
    SweepOutcome outcome = sweep(bs, dg, cfg, st);
    st = std::move(outcome.state);
    report.degenerate_updates += outcome.degenerate_updates;
    report.search_failures += outcome.search_failures;
    ++report.sweeps;

    const double h = objective_h(bs, dg, cfg.scheme, st);
    const double previous = report.objective_trace.back();
    report.objective_trace.push_back(h);
    if (h - previous <= cfg.epsilon * std::max(1.0, std::abs(h))) {
      report.converged = true;
      break;
    }
  }

  // Stationarity surrogate: the largest per-block move of one probe sweep
  // from the final state (the probe is not committed).
  SweepOutcome probe = sweep(bs, dg, cfg, st);
  double residual = 0.0;
  for (std::size_t j = 0; j < st.a.size(); ++j)
    residual = std::max(residual, (probe.state.a[j] - st.a[j]).norm());
  report.stationarity_residual = residual;

  report.final_state = std::move(st);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace

CoefState init_coefs(const BlockSet& bs, const BcdConfig& cfg) {
  validate_config(bs, cfg);
  Rng rng(cfg.seed);
  std::vector<Vector> a;
  a.reserve(bs.count());
  for (std::size_t j = 0; j < bs.count(); ++j) {
    Vector g(bs.dim(j));
    for (Index i = 0; i < g.size(); ++i) g[i] = rng.normal();
    a.push_back(project_omega(g, cfg.sparsity[j], cfg.variant));
  }
  return CoefState(std::move(a), cfg.variant, cfg.sparsity);
}

SweepOutcome bcd_sweep(const BlockSet& bs, const DesignGraph& dg, const BcdConfig& cfg,
                       const CoefState& st) {
  SweepOutcome out{st};
  for (std::size_t j = 0; j < bs.count(); ++j) {
    const Vector z = inner_components(bs, dg, cfg.scheme, out.state, j, j);
    const Vector v = bs.block(j).transpose() * z;
    if (v.isZero(0.0)) {
      ++out.degenerate_updates;
      if (cfg.variant != Variant::P1) continue;  // retain the previous a_j
    }
    out.state.a[j] = solve_lm(v, cfg.sparsity[j], cfg.variant).x;
  }
  return out;
}

SweepOutcome baseline_sweep(const BlockSet& bs, const DesignGraph& dg, const BcdConfig& cfg,
                            const CoefState& st) {
  const double n = static_cast<double>(bs.samples());
  SweepOutcome out{st};
  for (std::size_t j = 0; j < bs.count(); ++j) {
    const Vector z = inner_components(bs, dg, cfg.scheme, out.state, j, j);
    const Vector v = (bs.block(j).transpose() * z) / n;
    if (v.isZero(0.0)) {
      ++out.degenerate_updates;
      continue;
    }
    BaselineWeight weight = baseline_outer_weight(v, cfg.sparsity[j]);
    if (!weight.converged) ++out.search_failures;
    out.state.a[j] = std::move(weight.x);
  }
  return out;
}

SolverReport fit_bcd(const BlockSet& bs, const DesignGraph& dg, const BcdConfig& cfg) {
  return run_sweeps(bs, dg, cfg, &bcd_sweep);
}

SolverReport fit_baseline(const BlockSet& bs, const DesignGraph& dg, const BcdConfig& cfg) {
  BcdConfig baseline_cfg = cfg;
  baseline_cfg.variant = Variant::P3;
  return run_sweeps(bs, dg, baseline_cfg, &baseline_sweep);
}

}  // namespace sgcca
