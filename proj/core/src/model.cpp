#include "sgcca/model.hpp"

#include <cmath>

namespace sgcca {

BlockSet::BlockSet(std::vector<Matrix> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.size() < 2)
    raise(ErrorCode::InvalidArgument,
          "BlockSet needs at least two blocks, got " + std::to_string(blocks_.size()));
  samples_ = blocks_.front().rows();
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (blocks_[j].rows() != samples_)
      raise(ErrorCode::DimensionMismatch,
            "block " + std::to_string(j) + " has " + std::to_string(blocks_[j].rows()) +
                " rows, expected " + std::to_string(samples_));
    if (blocks_[j].cols() < 1)
      raise(ErrorCode::InvalidArgument, "block " + std::to_string(j) + " has no columns");
    if (!blocks_[j].allFinite())
      raise(ErrorCode::InvalidArgument,
            "block " + std::to_string(j) + " contains non-finite values");
  }
  if (samples_ < 1) raise(ErrorCode::InvalidArgument, "blocks have no rows");
}

DesignGraph::DesignGraph(Eigen::MatrixXi connections) : c_(std::move(connections)) {
  if (c_.rows() != c_.cols() || c_.rows() < 2)
    raise(ErrorCode::InvalidArgument, "design matrix must be square with at least two blocks");
  int edges = 0;
  for (Index j = 0; j < c_.rows(); ++j) {
    if (c_(j, j) != 0)
      raise(ErrorCode::InvalidArgument, "design matrix must have a zero diagonal");
    for (Index k = 0; k < c_.cols(); ++k) {
      if (c_(j, k) != 0 && c_(j, k) != 1)
        raise(ErrorCode::InvalidArgument, "design matrix entries must be 0 or 1");
      if (c_(j, k) != c_(k, j))
        raise(ErrorCode::InvalidArgument, "design matrix must be symmetric");
      edges += c_(j, k);
    }
  }
  if (edges == 0)
    raise(ErrorCode::InvalidArgument, "design matrix must connect at least one pair of blocks");
}

DesignGraph DesignGraph::complete(std::size_t block_count) {
  const Index n = static_cast<Index>(block_count);
  Eigen::MatrixXi c = Eigen::MatrixXi::Ones(n, n);
  c.diagonal().setZero();
  return DesignGraph(std::move(c));
}

Scheme Scheme::from_name(std::string_view name) {
  if (name == "horst") return horst();
  if (name == "centroid") return centroid();
  if (name == "factorial") return factorial();
  raise(ErrorCode::UnsupportedScheme,
        "unknown scheme '" + std::string(name) + "' (expected horst, centroid or factorial)");
}

double Scheme::g(double x) const {
  switch (kind) {
    case SchemeKind::Horst: return x;
    case SchemeKind::Centroid: return std::abs(x);
    case SchemeKind::Factorial: return x * x;
  }
  return x;
}

double Scheme::w(double x) const {
  switch (kind) {
    case SchemeKind::Horst: return 1.0;
    case SchemeKind::Centroid: return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    case SchemeKind::Factorial: return x;  // g'(x)/2
  }
  return 1.0;
}

std::string_view Scheme::name() const {
  switch (kind) {
    case SchemeKind::Horst: return "horst";
    case SchemeKind::Centroid: return "centroid";
    case SchemeKind::Factorial: return "factorial";
  }
  return "?";
}

void validate_sparsity(const std::vector<double>& sparsity, const std::vector<Index>& dims) {
  if (sparsity.size() != dims.size())
    raise(ErrorCode::InvalidArgument,
          "expected " + std::to_string(dims.size()) + " sparsity budgets, got " +
              std::to_string(sparsity.size()));
  for (std::size_t j = 0; j < sparsity.size(); ++j) {
    const double s = sparsity[j];
    const double root = std::sqrt(static_cast<double>(dims[j]));
    if (!(s > 1.0) || !(s < root))
      raise(ErrorCode::InfeasibleBudget,
            "sparsity budget s_" + std::to_string(j + 1) + " = " + std::to_string(s) +
                " must lie in (1, sqrt(p)) = (1, " + std::to_string(root) + ")");
  }
}

CoefState::CoefState(std::vector<Vector> coefs, Variant variant_in,
                     std::vector<double> sparsity_in)
    : a(std::move(coefs)), variant(variant_in), sparsity(std::move(sparsity_in)) {
  if (a.empty()) raise(ErrorCode::InvalidArgument, "CoefState needs at least one block");
  std::vector<Index> dims;
  dims.reserve(a.size());
  for (const Vector& aj : a) dims.push_back(aj.size());
  validate_sparsity(sparsity, dims);
}

double block_cov(const Matrix& Xj, const Vector& aj, const Matrix& Xk, const Vector& ak) {
  if (Xj.rows() != Xk.rows())
    raise(ErrorCode::DimensionMismatch, "blocks have different sample counts");
  if (Xj.cols() != aj.size() || Xk.cols() != ak.size())
    raise(ErrorCode::DimensionMismatch, "coefficient length does not match block width");
  const double n = static_cast<double>(Xj.rows());
  return (Xj * aj).dot(Xk * ak) / n;
}

namespace {

void check_state(const BlockSet& bs, const DesignGraph& dg, const CoefState& st) {
  if (dg.size() != bs.count())
    raise(ErrorCode::DimensionMismatch, "design matrix size does not match block count");
  if (st.a.size() != bs.count())
    raise(ErrorCode::DimensionMismatch, "coefficient tuple size does not match block count");
  for (std::size_t j = 0; j < bs.count(); ++j)
    if (st.a[j].size() != bs.dim(j))
      raise(ErrorCode::DimensionMismatch,
            "coefficient " + std::to_string(j) + " length does not match block width");
}

}  // namespace

double objective_h(const BlockSet& bs, const DesignGraph& dg, const Scheme& sch,
                   const CoefState& st) {
  check_state(bs, dg, st);
  const double n = static_cast<double>(bs.samples());
  std::vector<Vector> scores(bs.count());
  for (std::size_t j = 0; j < bs.count(); ++j) scores[j] = bs.block(j) * st.a[j];
  double h = 0.0;
  for (std::size_t j = 0; j < bs.count(); ++j)
    for (std::size_t k = 0; k < bs.count(); ++k) {
      if (j == k || !dg.connected(j, k)) continue;
      h += sch.g(scores[j].dot(scores[k]) / n);
    }
  return h;
}

Vector inner_components(const BlockSet& bs, const DesignGraph& dg, const Scheme& sch,
                        const CoefState& st, std::size_t j, std::size_t split) {
  check_state(bs, dg, st);
  if (j >= bs.count())
    raise(ErrorCode::InvalidArgument, "block index " + std::to_string(j) + " out of range");
  if (split > bs.count())
    raise(ErrorCode::InvalidArgument, "split " + std::to_string(split) + " out of range");
  const double n = static_cast<double>(bs.samples());
  const Vector score_j = bs.block(j) * st.a[j];
  Vector z = Vector::Zero(bs.samples());
  for (std::size_t k = 0; k < bs.count(); ++k) {
    if (k == j || !dg.connected(j, k)) continue;
    const Vector score_k = bs.block(k) * st.a[k];
    z += sch.w(score_j.dot(score_k) / n) * score_k;
  }
  return z;
}

std::pair<double, double> identity_22_check(const BlockSet& bs, const DesignGraph& dg,
                                            const Scheme& sch, const CoefState& st) {
  const double lhs = objective_h(bs, dg, sch, st);
  const double n = static_cast<double>(bs.samples());
  double rhs = 0.0;
  for (std::size_t j = 0; j < bs.count(); ++j) {
    const Vector z = inner_components(bs, dg, sch, st, j, 0);
    rhs += (bs.block(j) * st.a[j]).dot(z) / n;
  }
  return {lhs, rhs};
}

Matrix standardize_columns(const Matrix& X) {
  if (X.rows() < 2)
    raise(ErrorCode::InvalidArgument, "standardize_columns needs at least two rows");
  const double n = static_cast<double>(X.rows());
  Matrix out(X.rows(), X.cols());
  for (Index c = 0; c < X.cols(); ++c) {
    const double mean = X.col(c).mean();
    Vector centered = X.col(c).array() - mean;
    const double var = centered.squaredNorm() / n;
    const double sd = std::sqrt(var);
    if (sd <= 1e-12 * (1.0 + std::abs(mean)))
      raise(ErrorCode::DegenerateColumn,
            "column " + std::to_string(c) + " is constant (variance " + std::to_string(var) +
                "); remove it before standardizing");
    out.col(c) = centered / sd;
  }
  return out;
}

}  // namespace sgcca
