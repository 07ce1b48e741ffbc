#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "sgcca/errors.hpp"
#include "sgcca/types.hpp"

namespace sgcca {

// Multiblock data model: J sample-aligned blocks X_j (n x p_j), a binary
// design graph declaring which pairs are connected, the scheme function g
// applied to covariances, and the coefficient tuple (a_1, ..., a_J).
//
// Covariances use the 1/n convention throughout: cov(X_j a_j, X_k a_k)
// = (1/n) a_j' X_j' X_k a_k. Column standardization matches it (variance
// with the 1/n divisor), so standardized columns have exactly unit 1/n
// variance.

class BlockSet {
 public:
  explicit BlockSet(std::vector<Matrix> blocks);

  const std::vector<Matrix>& blocks() const { return blocks_; }
  const Matrix& block(std::size_t j) const { return blocks_[j]; }
  std::size_t count() const { return blocks_.size(); }  // J
  Index samples() const { return samples_; }            // n
  Index dim(std::size_t j) const { return blocks_[j].cols(); }

 private:
  std::vector<Matrix> blocks_;
  Index samples_ = 0;
};

// Symmetric 0/1 connection matrix with zero diagonal and at least one edge.
class DesignGraph {
 public:
  explicit DesignGraph(Eigen::MatrixXi connections);

  static DesignGraph complete(std::size_t block_count);

  const Eigen::MatrixXi& matrix() const { return c_; }
  std::size_t size() const { return static_cast<std::size_t>(c_.rows()); }
  bool connected(std::size_t j, std::size_t k) const {
    return c_(static_cast<Index>(j), static_cast<Index>(k)) != 0;
  }

 private:
  Eigen::MatrixXi c_;
};

enum class SchemeKind { Horst, Centroid, Factorial };

// Scheme g applied to covariances in the objective, its derivative-based
// weight w(x) = g'(x) / phi_scheme, and the divisor phi_scheme.
//   Horst:     g(x) = x,    w(x) = 1,       phi = 1
//   Centroid:  g(x) = |x|,  w(x) = sign(x), phi = 1
//   Factorial: g(x) = x^2,  w(x) = x,       phi = 2
struct Scheme {
  SchemeKind kind = SchemeKind::Horst;

  static Scheme horst() { return {SchemeKind::Horst}; }
  static Scheme centroid() { return {SchemeKind::Centroid}; }
  static Scheme factorial() { return {SchemeKind::Factorial}; }
  static Scheme from_name(std::string_view name);

  double g(double x) const;
  double w(double x) const;
  double phi_scheme() const { return kind == SchemeKind::Factorial ? 2.0 : 1.0; }
  std::string_view name() const;
};

// Coefficient tuple with its constraint variant and per-block l1 budgets.
// Construction checks 1 < s_j < sqrt(p_j); feasibility of each a_j for the
// variant set is the producer's contract (projections and solver updates
// only ever emit feasible blocks).
struct CoefState {
  std::vector<Vector> a;
  Variant variant = Variant::P3;
  std::vector<double> sparsity;

  CoefState(std::vector<Vector> coefs, Variant variant_in, std::vector<double> sparsity_in);
};

// Budgets must satisfy 1 < s_j < sqrt(p_j); dims are the block dimensions.
void validate_sparsity(const std::vector<double>& sparsity, const std::vector<Index>& dims);

double block_cov(const Matrix& Xj, const Vector& aj, const Matrix& Xk, const Vector& ak);

// h = sum over ordered pairs j != k of c_jk g(cov_jk); symmetry of the
// design graph makes every unordered pair count twice.
double objective_h(const BlockSet& bs, const DesignGraph& dg, const Scheme& sch,
                   const CoefState& st);

// Inner component z_j = sum_{k != j} c_jk w(cov_jk) X_k a_k evaluated on the
// state as stored. During a Gauss-Seidel sweep the caller keeps blocks
// before `split` at their new values and blocks from `split` on at the old
// ones; `split` documents that convention and is bounds-checked only.
Vector inner_components(const BlockSet& bs, const DesignGraph& dg, const Scheme& sch,
                        const CoefState& st, std::size_t j, std::size_t split);

// Both sides of the objective identity: lhs the double sum of g(cov), rhs
// sum_j cov(X_j a_j, z_j). The weights w already carry the 1/phi divisor, so
// the raw sum balances for all three schemes.
std::pair<double, double> identity_22_check(const BlockSet& bs, const DesignGraph& dg,
                                            const Scheme& sch, const CoefState& st);

// Center and scale every column to mean 0, variance 1 (1/n divisor).
// A constant column is an error naming the column, not a silent drop.
Matrix standardize_columns(const Matrix& X);

}  // namespace sgcca
