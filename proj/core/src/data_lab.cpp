#include "sgcca/data_lab.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "sgcca/keyval.hpp"

namespace sgcca {

GenSpec GenSpec::defaults() {
  GenSpec spec;
  spec.u_cov.resize(3, 3);
  spec.u_cov << 1.0, 0.0, 0.7,
                0.0, 1.0, 0.7,
                0.7, 0.7, 1.0;
  return spec;
}

namespace {

void validate_spec(const GenSpec& spec) {
  if (spec.n < 1) raise(ErrorCode::InvalidArgument, "sample count must be positive");
  if (spec.dims.size() < 2) raise(ErrorCode::InvalidArgument, "need at least two blocks");
  Index min_dim = spec.dims.front();
  for (Index p : spec.dims) {
    if (p < 1) raise(ErrorCode::InvalidArgument, "block dimensions must be positive");
    min_dim = std::min(min_dim, p);
  }
  if (spec.support_size < 1 || spec.support_size > min_dim)
    raise(ErrorCode::InvalidArgument,
          "support size " + std::to_string(spec.support_size) +
              " must lie in [1, min p_j] = [1, " + std::to_string(min_dim) + "]");
  if (!(spec.loading_min > 0.0) || !(spec.loading_min <= spec.loading_max))
    raise(ErrorCode::InvalidArgument, "loading range must satisfy 0 < min <= max");
  if (!(spec.noise_var > 0.0))
    raise(ErrorCode::InvalidArgument, "noise variance must be positive");
  if (spec.u_cov.rows() != static_cast<Index>(spec.dims.size()) ||
      spec.u_cov.cols() != spec.u_cov.rows())
    raise(ErrorCode::InvalidArgument, "latent covariance must be J x J");
}

}  // namespace

Matrix sample_latent_scores(Index n, const Matrix& u_cov, Rng& rng) {
  if (u_cov.rows() != u_cov.cols() || u_cov.rows() < 1)
    raise(ErrorCode::InvalidArgument, "latent covariance must be square");
  if (!u_cov.isApprox(u_cov.transpose(), 1e-12))
    raise(ErrorCode::InvalidArgument, "latent covariance must be symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> eigen(u_cov);
  if (eigen.info() != Eigen::Success)
    raise(ErrorCode::InvalidArgument, "latent covariance eigendecomposition failed");
  const Vector values = eigen.eigenvalues();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  Vector clipped(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    if (values[i] < -1e-10 * scale)
      raise(ErrorCode::InvalidArgument,
            "latent covariance is not positive semidefinite (eigenvalue " +
                std::to_string(values[i]) + ")");
    clipped[i] = std::max(values[i], 0.0);
  }
  const Matrix factor = eigen.eigenvectors() * clipped.cwiseSqrt().asDiagonal();

  const Index J = u_cov.rows();
  Matrix scores(n, J);
  Vector z(J);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < J; ++j) z[j] = rng.normal();
    scores.row(i) = (factor * z).transpose();
  }
  return scores;
}

std::pair<BlockSet, GroundTruth> generate(const GenSpec& spec) {
  validate_spec(spec);
  const std::size_t J = spec.dims.size();
  Rng rng(spec.seed);

  // Draw order is fixed: latent scores, then per block the loadings
  // (magnitude, then sign) and the noise matrix column by column.
  const Matrix scores = sample_latent_scores(spec.n, spec.u_cov, rng);

  GroundTruth truth;
  std::vector<Matrix> blocks;
  truth.loadings.reserve(J);
  truth.supports.reserve(J);
  blocks.reserve(J);
  const double noise_sd = std::sqrt(spec.noise_var);

  for (std::size_t j = 0; j < J; ++j) {
    const Index p = spec.dims[j];
    Vector w = Vector::Zero(p);
    std::vector<Index> support;
    support.reserve(spec.support_size);
    for (Index i = 0; i < spec.support_size; ++i) {
      const double magnitude = rng.uniform(spec.loading_min, spec.loading_max);
      const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
      w[i] = sign * magnitude;
      support.push_back(i);
    }

    Matrix noise(spec.n, p);
    for (Index c = 0; c < p; ++c)
      for (Index r = 0; r < spec.n; ++r) noise(r, c) = noise_sd * rng.normal();

    blocks.push_back(scores.col(static_cast<Index>(j)) * w.transpose() + noise);
    truth.loadings.push_back(std::move(w));
    truth.supports.push_back(std::move(support));
  }
  return {BlockSet(std::move(blocks)), std::move(truth)};
}

double sensitivity(const Vector& a, const Vector& w) {
  if (a.size() != w.size())
    raise(ErrorCode::DimensionMismatch, "sensitivity: vectors differ in length");
  Index true_nonzero = 0;
  Index hits = 0;
  for (Index i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    ++true_nonzero;
    if (a[i] != 0.0) ++hits;
  }
  if (true_nonzero == 0)
    raise(ErrorCode::InvalidArgument, "sensitivity: ground truth has no nonzero entries");
  return static_cast<double>(hits) / static_cast<double>(true_nonzero);
}

double specificity(const Vector& a, const Vector& w) {
  if (a.size() != w.size())
    raise(ErrorCode::DimensionMismatch, "specificity: vectors differ in length");
  Index true_zero = 0;
  Index kept = 0;
  for (Index i = 0; i < w.size(); ++i) {
    if (w[i] != 0.0) continue;
    ++true_zero;
    if (a[i] == 0.0) ++kept;
  }
  if (true_zero == 0)
    raise(ErrorCode::InvalidArgument, "specificity: ground truth has no zero entries");
  return static_cast<double>(kept) / static_cast<double>(true_zero);
}

DesignGraph design_preset(std::string_view name) {
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(3, 3);
  if (name == "complete") {
    c.setOnes();
    c.diagonal().setZero();
  } else if (name == "hierarchical") {
    c(0, 2) = c(2, 0) = 1;
    c(1, 2) = c(2, 1) = 1;
  } else if (name == "cascade") {
    c(0, 1) = c(1, 0) = 1;
    c(0, 2) = c(2, 0) = 1;
  } else {
    raise(ErrorCode::UnknownDesign,
          "unknown design preset '" + std::string(name) +
              "' (expected complete, hierarchical or cascade)");
  }
  return DesignGraph(std::move(c));
}

namespace {

bool lex_less(const std::vector<double>& lhs, const std::vector<double>& rhs) {
  return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
}

}  // namespace

GridSearchResult grid_search(const BlockSet& bs, const DesignGraph& dg, Algo algo,
                             const Scheme& scheme, const std::vector<std::vector<double>>& grids,
                             const std::function<double(const SolverReport&)>& score,
                             const GridSearchOptions& options) {
  if (grids.size() != bs.count())
    raise(ErrorCode::InvalidArgument, "grid_search: one candidate list per block required");
  std::size_t combinations = 1;
  for (std::size_t j = 0; j < grids.size(); ++j) {
    if (grids[j].empty())
      raise(ErrorCode::EmptyGrid, "grid_search: empty candidate list for block " + std::to_string(j + 1));
    const double root = std::sqrt(static_cast<double>(bs.dim(j)));
    for (double s : grids[j])
      if (!(s > 1.0) || !(s < root))
        raise(ErrorCode::InfeasibleBudget,
              "grid_search: candidate " + format_g9(s) + " for block " + std::to_string(j + 1) +
                  " must lie in (1, " + format_g9(root) + ")");
    if (combinations <= options.cartesian_cap) combinations *= grids[j].size();
  }

  GridSearchResult result;
  std::map<std::vector<double>, double> seen;
  const auto evaluate = [&](const std::vector<double>& tuple) {
    const auto cached = seen.find(tuple);
    if (cached != seen.end()) return cached->second;
    const double value = score(run_algo(bs, dg, algo, scheme, tuple, options.run));
    seen.emplace(tuple, value);
    ++result.evaluations;
    return value;
  };

  std::vector<double> best(grids.size());
  for (std::size_t j = 0; j < grids.size(); ++j) best[j] = grids[j].front();
  double best_score = evaluate(best);

  if (combinations <= options.cartesian_cap) {
    // Full product; ties break toward the value-lexicographically smallest
    // tuple regardless of candidate-list order.
    std::vector<std::size_t> idx(grids.size(), 0);
    std::vector<double> tuple(grids.size());
    while (true) {
      for (std::size_t j = 0; j < grids.size(); ++j) tuple[j] = grids[j][idx[j]];
      const double value = evaluate(tuple);
      if (value > best_score || (value == best_score && lex_less(tuple, best))) {
        best_score = value;
        best = tuple;
      }
      std::size_t axis = grids.size();
      while (axis > 0) {
        --axis;
        if (++idx[axis] < grids[axis].size()) break;
        idx[axis] = 0;
        if (axis == 0) {
          result.sparsity = best;
          result.score = best_score;
          return result;
        }
      }
    }
  }

  // Cyclic coordinate search from the lexicographically smallest tuple;
  // moves need a strictly better score, or an equal score with a
  // lexicographically smaller tuple.
  bool changed = true;
  std::size_t passes = 0;
  while (changed && passes < 100) {
    changed = false;
    ++passes;
    for (std::size_t axis = 0; axis < grids.size(); ++axis) {
      for (double candidate : grids[axis]) {
        if (candidate == best[axis]) continue;
        std::vector<double> tuple = best;
        tuple[axis] = candidate;
        const double value = evaluate(tuple);
        if (value > best_score || (value == best_score && lex_less(tuple, best))) {
          best_score = value;
          best = std::move(tuple);
          changed = true;
        }
      }
    }
  }
  result.sparsity = best;
  result.score = best_score;
  return result;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma == std::string_view::npos ? line.size() - pos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

Matrix load_csv_matrix(const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream) raise(ErrorCode::IoError, "cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(stream, line))
    raise(ErrorCode::ParseError, path.string() + ":1: missing header row");
  const std::size_t columns = split_fields(strip_cr(line)).size();
  if (columns == 0) raise(ErrorCode::ParseError, path.string() + ":1: empty header row");

  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::string_view content = strip_cr(line);
    if (content.empty()) continue;
    const auto fields = split_fields(content);
    if (fields.size() != columns)
      raise(ErrorCode::ParseError,
            path.string() + ":" + std::to_string(line_no) + ": expected " +
                std::to_string(columns) + " fields, got " + std::to_string(fields.size()));
    for (std::string_view field : fields) {
      while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
      while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc{} || ptr != field.data() + field.size())
        raise(ErrorCode::ParseError,
              path.string() + ":" + std::to_string(line_no) + ": '" + std::string(field) +
                  "' is not a number");
      values.push_back(value);
    }
    ++rows;
  }
  if (rows == 0) raise(ErrorCode::ParseError, path.string() + ": no data rows");

  Matrix m(static_cast<Index>(rows), static_cast<Index>(columns));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < columns; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = values[r * columns + c];
  return m;
}

void save_csv_matrix(const std::filesystem::path& path, const Matrix& m,
                     std::string_view column_prefix) {
  std::ofstream stream(path);
  if (!stream) raise(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  for (Index c = 0; c < m.cols(); ++c) {
    if (c > 0) stream << ',';
    stream << column_prefix << (c + 1);
  }
  stream << '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c > 0) stream << ',';
      stream << format_g9(m(r, c));
    }
    stream << '\n';
  }
  if (!stream.good()) raise(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

BlockSet load_blocks(const std::vector<std::filesystem::path>& paths, bool standardize) {
  if (paths.size() < 2)
    raise(ErrorCode::InvalidArgument, "need at least two block files");
  std::vector<Matrix> blocks;
  blocks.reserve(paths.size());
  for (std::size_t j = 0; j < paths.size(); ++j) {
    Matrix m = load_csv_matrix(paths[j]);
    if (j > 0 && m.rows() != blocks.front().rows())
      raise(ErrorCode::DimensionMismatch,
            "'" + paths[j].string() + "' has " + std::to_string(m.rows()) + " rows but '" +
                paths.front().string() + "' has " + std::to_string(blocks.front().rows()));
    if (standardize) {
      try {
        m = standardize_columns(m);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateColumn)
          raise(ErrorCode::DegenerateColumn, "'" + paths[j].string() + "': " + e.what());
        throw;
      }
    }
    blocks.push_back(std::move(m));
  }
  return BlockSet(std::move(blocks));
}

}  // namespace sgcca
