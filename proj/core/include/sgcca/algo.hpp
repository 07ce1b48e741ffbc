#pragma once

#include <cstdint>
#include <string_view>

#include "sgcca/bcd_solver.hpp"
#include "sgcca/gp_solver.hpp"
#include "sgcca/model.hpp"

namespace sgcca {

// Solver families exposed by the CLI and the grid/bench drivers: the
// baseline iterative algorithm, the exact-LM block-coordinate solvers and
// the gradient-projected solvers, each tied to a constraint variant.
enum class Algo { Baseline, Bcd1, Bcd2, Bcd3, Gp1, Gp2, Gp3 };

std::string_view algo_name(Algo algo);
Algo algo_from_name(std::string_view name);
bool algo_is_gp(Algo algo);
Variant algo_variant(Algo algo);  // the baseline is implicitly P3

struct RunOptions {
  double epsilon = 1e-8;          // BCD relative improvement tolerance
  double tol = 1e-6;              // GP stationarity tolerance
  std::size_t max_sweeps = 1000;  // BCD sweep cap
  std::size_t max_iters = 10000;  // GP iteration cap
  std::uint64_t seed = 0;
};

// Dispatch one fit. Gradient-projected algorithms require the Horst scheme
// and raise ErrorCode::UnsupportedScheme otherwise.
SolverReport run_algo(const BlockSet& bs, const DesignGraph& dg, Algo algo, const Scheme& scheme,
                      const std::vector<double>& sparsity, const RunOptions& options);

}  // namespace sgcca
