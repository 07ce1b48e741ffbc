#pragma once

#include <cstdint>
#include <vector>

#include "sgcca/bcd_solver.hpp"
#include "sgcca/model.hpp"
#include "sgcca/types.hpp"

namespace sgcca {

// Gradient-projected solver for the Horst scheme with Barzilai-Borwein step
// sizes: a^{s+1} = P_Omega(a^s + gamma_s grad h(a^s)) on the product of the
// per-block constraint sets. Raw BB ratios <s,s>/<s,y> can exceed the safe
// step bound 1/L_h of the projected-gradient theory, so every step is
// additionally capped at step_cap_factor / L_h.

struct GpConfig {
  Variant variant = Variant::P3;
  std::vector<double> sparsity;
  double gamma_min = 1e-6;
  double gamma_max = 1e6;
  double step_cap_factor = 0.99;  // fraction of 1/L_h
  double tol = 1e-6;              // stationarity tolerance
  std::size_t max_iters = 10000;
  std::uint64_t seed = 0;
};

// Iterate difference s^s, gradient difference y^s and their inner products
// a_s = <s,s>, b_s = <s,y> from one step.
struct BbState {
  Vector s_vec;
  Vector y_vec;
  double a_s = 0.0;
  double b_s = 0.0;
};

// Step update rule: gamma_max when b_s <= 0, otherwise a_s/b_s clamped to
// [gamma_min, gamma_max]; the result is always capped at step_cap.
double bb_step(const BbState& bb, const GpConfig& cfg, double step_cap);

// Per-block gradient of h under the Horst scheme:
// grad_l = (2/n) sum_{k != l} c_lk X_l' X_k a_k. Other schemes are rejected.
std::vector<Vector> gradient_h(const BlockSet& bs, const DesignGraph& dg, const Scheme& sch,
                               const CoefState& st);

// L_h = (2/n) (J-1)^{3/2} sqrt(J) max_{j != k} c_jk ||X_j' X_k||_2, the
// spectral norms computed by power iteration to relative 1e-8.
double lipschitz_bound(const BlockSet& bs, const DesignGraph& dg);

// Blockwise projection; equals the projection onto the product set because
// the squared distance separates over blocks.
CoefState project_product(const std::vector<Vector>& raw, const std::vector<double>& sparsity,
                          Variant variant);

SolverReport fit_gp(const BlockSet& bs, const DesignGraph& dg, const GpConfig& cfg);

}  // namespace sgcca
