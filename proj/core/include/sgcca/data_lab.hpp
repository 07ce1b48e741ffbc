#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string_view>
#include <utility>
#include <vector>

#include "sgcca/algo.hpp"
#include "sgcca/model.hpp"
#include "sgcca/rng.hpp"
#include "sgcca/types.hpp"

namespace sgcca {

// Synthetic multiblock lab: rank-one-plus-noise block generator
// X_j = u_j w_j' + E_j, support-recovery metrics, the three J = 3 design
// presets, sparsity grid search and CSV block ingestion.

struct GenSpec {
  Index n = 50;
  std::vector<Index> dims{200, 500, 700};
  Index support_size = 75;       // leading indices carry the signal
  double loading_min = 0.2;      // magnitude interval of nonzero loadings
  double loading_max = 0.3;
  Matrix u_cov;                  // J x J latent-score covariance
  double noise_var = 0.2;        // residual variance (not a std deviation)
  std::uint64_t seed = 0;

  // n = 50, dims (200, 500, 700), support 75, loadings in [0.2, 0.3],
  // noise variance 0.2, latent correlations cov(u1,u3) = cov(u2,u3) = 0.7,
  // cov(u1,u2) = 0 with unit variances.
  static GenSpec defaults();
};

struct GroundTruth {
  std::vector<Vector> loadings;              // w_j, zeros off the support
  std::vector<std::vector<Index>> supports;  // nonzero index sets, ascending
};

// n x J matrix of latent scores, rows i.i.d. N(0, u_cov). The covariance
// must be symmetric positive semidefinite.
Matrix sample_latent_scores(Index n, const Matrix& u_cov, Rng& rng);

// Deterministic per seed; two runs with equal specs are bit-identical.
std::pair<BlockSet, GroundTruth> generate(const GenSpec& spec);

// |supp(a) n supp(w)| / |supp(w)| with exact-zero support detection.
double sensitivity(const Vector& a, const Vector& w);

// |zeros(a) n zeros(w)| / |zeros(w)|.
double specificity(const Vector& a, const Vector& w);

// The three J = 3 connection presets: complete (all pairs), hierarchical
// (1-3 and 2-3), cascade (1-2 and 1-3).
DesignGraph design_preset(std::string_view name);

struct GridSearchOptions {
  RunOptions run;                    // solver options shared by all fits
  std::size_t cartesian_cap = 1000;  // full product up to this many tuples
};

struct GridSearchResult {
  std::vector<double> sparsity;
  double score = 0.0;
  std::size_t evaluations = 0;
};

// Maximizes score over per-block candidate budgets: the full Cartesian
// product while it fits under the cap, cyclic coordinate search above it.
// Ties break toward the lexicographically smallest tuple. The callback
// scores a finished fit of the requested algorithm.
GridSearchResult grid_search(const BlockSet& bs, const DesignGraph& dg, Algo algo,
                             const Scheme& scheme, const std::vector<std::vector<double>>& grids,
                             const std::function<double(const SolverReport&)>& score,
                             const GridSearchOptions& options);

// CSV matrix with a header row of variable names; errors name file and line.
Matrix load_csv_matrix(const std::filesystem::path& path);

void save_csv_matrix(const std::filesystem::path& path, const Matrix& m,
                     std::string_view column_prefix = "v");

// One CSV per block; row counts must agree across files.
BlockSet load_blocks(const std::vector<std::filesystem::path>& paths, bool standardize);

}  // namespace sgcca
