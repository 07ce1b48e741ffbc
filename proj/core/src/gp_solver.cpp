#include "sgcca/gp_solver.hpp"

#include <chrono>
#include <cmath>

#include "sgcca/norm_geometry.hpp"
#include "sgcca/rng.hpp"

namespace sgcca {

namespace {

void validate_config(const BlockSet& bs, const GpConfig& cfg) {
  if (!(cfg.gamma_min > 0.0) || !(cfg.gamma_min <= cfg.gamma_max))
    raise(ErrorCode::InvalidArgument, "step bounds must satisfy 0 < gamma_min <= gamma_max");
  if (!(cfg.step_cap_factor > 0.0) || !(cfg.step_cap_factor < 1.0))
    raise(ErrorCode::InvalidArgument, "step_cap_factor must lie in (0, 1)");
  if (!(cfg.tol > 0.0)) raise(ErrorCode::InvalidArgument, "tol must be positive");
  if (cfg.max_iters < 1) raise(ErrorCode::InvalidArgument, "max_iters must be at least 1");
  std::vector<Index> dims;
  for (std::size_t j = 0; j < bs.count(); ++j) dims.push_back(bs.dim(j));
  validate_sparsity(cfg.sparsity, dims);
}

// Largest singular value of B by power iteration on B'B, relative tolerance
// 1e-8, deterministic start.
double spectral_norm(const Matrix& B) {
  if (B.size() == 0) return 0.0;
  Rng rng(0x5eedu);
  Vector y(B.cols());
  for (Index i = 0; i < y.size(); ++i) y[i] = rng.normal();
  y.normalize();

  double sigma_sq = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Vector z = B.transpose() * (B * y);
    const double norm = z.norm();
    if (norm == 0.0) return 0.0;
    const double next = norm;  // Rayleigh estimate of sigma^2 for unit y
    y = z / norm;
    if (iter > 0 && std::abs(next - sigma_sq) <= 1e-8 * std::max(1.0, next)) {
      sigma_sq = next;
      break;
    }
    sigma_sq = next;
  }
  return std::sqrt(sigma_sq);
}

double flat_norm(const std::vector<Vector>& blocks) {
  double sq = 0.0;
  for (const Vector& b : blocks) sq += b.squaredNorm();
  return std::sqrt(sq);
}

double flat_dot(const std::vector<Vector>& lhs, const std::vector<Vector>& rhs) {
  double dot = 0.0;
  for (std::size_t j = 0; j < lhs.size(); ++j) dot += lhs[j].dot(rhs[j]);
  return dot;
}

}  // namespace

double bb_step(const BbState& bb, const GpConfig& cfg, double step_cap) {
  double gamma = cfg.gamma_max;
  if (bb.b_s > 0.0)
    gamma = std::min(cfg.gamma_max, std::max(cfg.gamma_min, bb.a_s / bb.b_s));
  return std::min(gamma, step_cap);
}

std::vector<Vector> gradient_h(const BlockSet& bs, const DesignGraph& dg, const Scheme& sch,
                               const CoefState& st) {
  if (sch.kind != SchemeKind::Horst)
    raise(ErrorCode::UnsupportedScheme,
          "gradient_h supports the horst scheme only, got " + std::string(sch.name()));
  if (dg.size() != bs.count() || st.a.size() != bs.count())
    raise(ErrorCode::DimensionMismatch, "gradient_h: inconsistent block count");

  const double n = static_cast<double>(bs.samples());
  std::vector<Vector> scores(bs.count());
  for (std::size_t k = 0; k < bs.count(); ++k) scores[k] = bs.block(k) * st.a[k];

  std::vector<Vector> grad(bs.count());
  for (std::size_t l = 0; l < bs.count(); ++l) {
    Vector sum = Vector::Zero(bs.samples());
    for (std::size_t k = 0; k < bs.count(); ++k)
      if (k != l && dg.connected(l, k)) sum += scores[k];
    grad[l] = (2.0 / n) * (bs.block(l).transpose() * sum);
  }
  return grad;
}

double lipschitz_bound(const BlockSet& bs, const DesignGraph& dg) {
  if (dg.size() != bs.count())
    raise(ErrorCode::DimensionMismatch, "lipschitz_bound: inconsistent block count");
  const double n = static_cast<double>(bs.samples());
  const double J = static_cast<double>(bs.count());
  double largest = 0.0;
  for (std::size_t j = 0; j < bs.count(); ++j)
    for (std::size_t k = j + 1; k < bs.count(); ++k) {
      if (!dg.connected(j, k)) continue;
      largest = std::max(largest, spectral_norm(bs.block(j).transpose() * bs.block(k)));
    }
  return (2.0 / n) * std::pow(J - 1.0, 1.5) * std::sqrt(J) * largest;
}

CoefState project_product(const std::vector<Vector>& raw, const std::vector<double>& sparsity,
                          Variant variant) {
  if (raw.size() != sparsity.size())
    raise(ErrorCode::DimensionMismatch, "project_product: one budget per block required");
  std::vector<Vector> blocks;
  blocks.reserve(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j)
    blocks.push_back(project_omega(raw[j], sparsity[j], variant));
  return CoefState(std::move(blocks), variant, sparsity);
}

SolverReport fit_gp(const BlockSet& bs, const DesignGraph& dg, const GpConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  validate_config(bs, cfg);
  const Scheme horst = Scheme::horst();

  const double lipschitz = lipschitz_bound(bs, dg);
  // A zero bound means the gradient vanishes identically; any step works.
  const double step_cap =
      lipschitz > 0.0 ? cfg.step_cap_factor / lipschitz : cfg.gamma_max;

  BcdConfig init_cfg;
  init_cfg.variant = cfg.variant;
  init_cfg.sparsity = cfg.sparsity;
  init_cfg.seed = cfg.seed;
  CoefState st = init_coefs(bs, init_cfg);

  SolverReport report{st};
  report.seed = cfg.seed;
  report.objective_trace.push_back(objective_h(bs, dg, horst, st));

  double gamma = step_cap;
  std::vector<Vector> grad = gradient_h(bs, dg, horst, st);

  const auto propose = [&](const CoefState& state, const std::vector<Vector>& g,
                           double step, std::size_t* degenerate) {
    std::vector<Vector> raw(state.a.size());
    for (std::size_t j = 0; j < raw.size(); ++j) raw[j] = state.a[j] + step * g[j];
    if (cfg.variant != Variant::P1) {
      // A zero raw block has no projection onto the sphere sets; retain the
      // previous feasible block.
      for (std::size_t j = 0; j < raw.size(); ++j)
        if (raw[j].isZero(0.0)) {
          raw[j] = state.a[j];
          if (degenerate) ++(*degenerate);
        }
    }
    return project_product(raw, cfg.sparsity, cfg.variant);
  };

  double residual = 0.0;
  for (std::size_t s = 0; s < cfg.max_iters; ++s) {
    CoefState next = propose(st, grad, gamma, &report.degenerate_updates);
    std::vector<Vector> step_vec(st.a.size());
    for (std::size_t j = 0; j < st.a.size(); ++j) step_vec[j] = next.a[j] - st.a[j];
    const double step_norm = flat_norm(step_vec);
    residual = step_norm;
    if (step_norm <= cfg.tol) {
      report.converged = true;
      break;
    }

    std::vector<Vector> grad_next = gradient_h(bs, dg, horst, next);
    BbState bb;
    bb.a_s = step_norm * step_norm;
    std::vector<Vector> y_vec(st.a.size());
    for (std::size_t j = 0; j < st.a.size(); ++j) y_vec[j] = grad_next[j] - grad[j];
    bb.b_s = flat_dot(step_vec, y_vec);

    st = std::move(next);
    grad = std::move(grad_next);
    ++report.sweeps;
    report.step_norm_sum += step_norm;
    report.objective_trace.push_back(objective_h(bs, dg, horst, st));

    gamma = bb_step(bb, cfg, step_cap);
  }

  if (!report.converged) {
    // One more fixed-point evaluation at the final step size.
    CoefState probe = propose(st, grad, gamma, nullptr);
    std::vector<Vector> step_vec(st.a.size());
    for (std::size_t j = 0; j < st.a.size(); ++j) step_vec[j] = probe.a[j] - st.a[j];
    residual = flat_norm(step_vec);
  }
  report.stationarity_residual = residual;
  report.step_size_final = gamma;
  report.final_state = std::move(st);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace sgcca
