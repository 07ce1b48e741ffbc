#include "sgcca/algo.hpp"

namespace sgcca {

std::string_view algo_name(Algo algo) {
  switch (algo) {
    case Algo::Baseline: return "baseline";
    case Algo::Bcd1: return "bcd1";
    case Algo::Bcd2: return "bcd2";
    case Algo::Bcd3: return "bcd3";
    case Algo::Gp1: return "gp1";
    case Algo::Gp2: return "gp2";
    case Algo::Gp3: return "gp3";
  }
  return "?";
}

Algo algo_from_name(std::string_view name) {
  if (name == "baseline") return Algo::Baseline;
  if (name == "bcd1") return Algo::Bcd1;
  if (name == "bcd2") return Algo::Bcd2;
  if (name == "bcd3") return Algo::Bcd3;
  if (name == "gp1") return Algo::Gp1;
  if (name == "gp2") return Algo::Gp2;
  if (name == "gp3") return Algo::Gp3;
  raise(ErrorCode::InvalidArgument,
        "unknown algorithm '" + std::string(name) +
            "' (expected baseline, bcd1, bcd2, bcd3, gp1, gp2 or gp3)");
}

bool algo_is_gp(Algo algo) {
  return algo == Algo::Gp1 || algo == Algo::Gp2 || algo == Algo::Gp3;
}

Variant algo_variant(Algo algo) {
  switch (algo) {
    case Algo::Bcd1:
    case Algo::Gp1: return Variant::P1;
    case Algo::Bcd2:
    case Algo::Gp2: return Variant::P2;
    case Algo::Baseline:
    case Algo::Bcd3:
    case Algo::Gp3: return Variant::P3;
  }
  return Variant::P3;
}

SolverReport run_algo(const BlockSet& bs, const DesignGraph& dg, Algo algo, const Scheme& scheme,
                      const std::vector<double>& sparsity, const RunOptions& options) {
  if (algo_is_gp(algo)) {
    if (scheme.kind != SchemeKind::Horst)
      raise(ErrorCode::UnsupportedScheme,
            std::string(algo_name(algo)) + " requires the horst scheme, got " +
                std::string(scheme.name()));
    GpConfig cfg;
    cfg.variant = algo_variant(algo);
    cfg.sparsity = sparsity;
    cfg.tol = options.tol;
    cfg.max_iters = options.max_iters;
    cfg.seed = options.seed;
    return fit_gp(bs, dg, cfg);
  }

  BcdConfig cfg;
  cfg.variant = algo_variant(algo);
  cfg.scheme = scheme;
  cfg.sparsity = sparsity;
  cfg.epsilon = options.epsilon;
  cfg.max_sweeps = options.max_sweeps;
  cfg.seed = options.seed;
  return algo == Algo::Baseline ? fit_baseline(bs, dg, cfg) : fit_bcd(bs, dg, cfg);
}

}  // namespace sgcca
