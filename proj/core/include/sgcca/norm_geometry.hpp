#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "sgcca/errors.hpp"
#include "sgcca/types.hpp"

namespace sgcca {

// Exact solvers for linear maximization and Euclidean projection on the
// intersections of an l1 ball/sphere with the unit l2 ball/sphere (the P1,
// P2 and P3 constraint sets), plus the scalar machinery behind them: the
// soft-thresholding operator and the piecewise-quadratic function
//   phi(lambda) = ||(v - lambda 1)+||_1^2 - t^2 ||(v - lambda 1)+||_2^2
// whose root gives the active threshold level.
//
// All functions are pure; identical inputs give bit-identical outputs.

// A vector paired with its l1 budget t. Construction applies the budget
// rules shared by all constraint-bound problems: within 1 < t < sqrt(n) the
// closed forms apply directly, t = 1 and t >= sqrt(n) degrade gracefully to
// 1-sparse / scale-only solutions, and t < 1 is rejected because the sphere
// variants have an empty feasible set there.
struct ScoredVector {
  Vector v;
  double t;

  ScoredVector(Vector v_in, double t_in);
};

// Throws ErrorCode::InfeasibleBudget for t < 1, ErrorCode::InvalidArgument
// for non-finite t or empty vectors.
void validate_budget(double t, Index n);

// Level set of the largest entry of |v|: v_max, its multiplicity I_1 and the
// attaining indices in ascending order. Ties are detected by exact compare.
struct MaxLevelSet {
  double v_max = 0.0;
  Index count = 0;
  std::vector<Index> indices;
};

MaxLevelSet max_level_set(const Vector& v);

enum class LmBranch {
  UniqueRoot,    // normalized soft-threshold at the phi root
  Unnormalized,  // v / ||v||_2, threshold level zero
  TiedFace,      // I_1 > t^2, mass concentrated on the top level set
  ZeroInput,     // v = 0 under P1: every feasible point is optimal
};

std::string_view lm_branch_name(LmBranch branch);

struct LmSolution {
  Vector x;
  std::optional<double> lambda_star;  // active soft-threshold level
  std::optional<double> mu_star;      // dual of the l2 constraint
  LmBranch branch = LmBranch::UniqueRoot;

  double objective(const Vector& v) const { return v.dot(x); }
};

// Componentwise sign(v_i) * max(0, |v_i| - lam). lam must be >= 0.
Vector soft_threshold(const Vector& v, double lam);

// phi(lam) = ||(v - lam 1)+||_1^2 - t^2 ||(v - lam 1)+||_2^2 for v >= 0.
double phi(const Vector& v, double t, double lam);

// Domain of the root search: [0, v_max) for the ball-constrained variants,
// (-inf, v_max) for the l1-sphere variant where the level can be negative.
enum class PhiDomain { NonnegativeHalf, FullLine };

// Exact root of phi on the requested domain: phi is piecewise quadratic with
// breakpoints at the distinct entries of v, so the bracketing piece is
// located by a scan and solved in closed form. Deterministic; raises
// ErrorCode::BranchConditionViolated when phi has no root on the domain
// (the caller dispatched the wrong branch).
double find_phi_root(const Vector& v, double t, PhiDomain domain);

// Linear maximization max <v, x> over the nonnegative part of each
// constraint set; v must be componentwise nonnegative.
LmSolution solve_lm_p1_plus(const Vector& v, double t);
LmSolution solve_lm_p2_plus(const Vector& v, double t);  // v = 0 is degenerate
LmSolution solve_lm_p3_plus(const Vector& v, double t);  // v = 0 is degenerate

// Signed problem: solves the nonnegative problem on |v| and lifts the signs
// back onto the solution. Entries with v_i = 0 keep the nonnegative
// solution's value: the l1-sphere variant can place mass there through a
// negative threshold level, and dropping it would leave the sphere.
LmSolution solve_lm(const Vector& v, double t, Variant variant);

// Euclidean projection onto the l1 ball of radius t (t > 0), by the exact
// sort-and-scan threshold.
Vector project_l1_ball(const Vector& v, double t);

// Euclidean projection onto the variant constraint set. For P2/P3 this is
// the linear-maximization solution (the two problems coincide on spheres);
// for P1 a four-case active-set dispatch.
Vector project_omega(const Vector& v, double t, Variant variant);

}  // namespace sgcca
