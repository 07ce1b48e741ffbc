#include "sgcca/norm_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sgcca {

namespace {

void require_finite(const Vector& v, const char* who) {
  if (!v.allFinite())
    raise(ErrorCode::InvalidArgument, std::string(who) + ": vector has non-finite entries");
}

void require_nonnegative(const Vector& v, const char* who) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] < 0.0)
      raise(ErrorCode::InvalidArgument,
            std::string(who) + ": component " + std::to_string(i) + " is negative");
}

// Sorted description of a nonnegative vector with suffix statistics. Within
// each interval between consecutive distinct entries the active set
// {i : v_i > lambda} is constant, so phi restricts to the quadratic
//   m(m - t^2) lambda^2 + 2 S1 (t^2 - m) lambda + (S1^2 - t^2 S2)
// with m the active count and S1, S2 the active sum and sum of squares.
struct PhiPieces {
  std::vector<double> desc;   // entries sorted descending
  std::vector<double> sum;    // sum[k]   = sum of the k largest entries
  std::vector<double> sumsq;  // sumsq[k] = sum of their squares
  std::vector<double> cuts;   // distinct entries ascending

  explicit PhiPieces(const Vector& v) {
    desc.assign(v.data(), v.data() + v.size());
    std::sort(desc.begin(), desc.end(), std::greater<double>());
    sum.resize(desc.size() + 1);
    sumsq.resize(desc.size() + 1);
    sum[0] = sumsq[0] = 0.0;
    for (std::size_t i = 0; i < desc.size(); ++i) {
      sum[i + 1] = sum[i] + desc[i];
      sumsq[i + 1] = sumsq[i] + desc[i] * desc[i];
    }
    cuts.assign(desc.rbegin(), desc.rend());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }

  double v_max() const { return desc.front(); }
  double l1() const { return sum.back(); }
  double l2sq() const { return sumsq.back(); }

  // Multiplicity of the largest entry (exact ties).
  std::size_t top_count() const {
    std::size_t count = 1;
    while (count < desc.size() && desc[count] == desc.front()) ++count;
    return count;
  }

  // Entries strictly greater than lam form a prefix of desc.
  std::size_t active_count(double lam) const {
    return static_cast<std::size_t>(
        std::lower_bound(desc.begin(), desc.end(), lam, std::greater<double>()) - desc.begin());
  }

  struct Quad {
    double a2, a1, a0;
  };

  Quad quad_for(std::size_t m, double t2) const {
    const double md = static_cast<double>(m);
    const double s1 = sum[m];
    const double s2 = sumsq[m];
    return {md * (md - t2), 2.0 * s1 * (t2 - md), s1 * s1 - t2 * s2};
  }

  double phi_at(double lam, double t2) const {
    const std::size_t m = active_count(lam);
    const double md = static_cast<double>(m);
    const double part_l1 = sum[m] - md * lam;
    const double part_l2sq = sumsq[m] - 2.0 * lam * sum[m] + md * lam * lam;
    return part_l1 * part_l1 - t2 * part_l2sq;
  }

  // Roundoff scale of phi_at near lam, for plateau detection.
  double phi_scale(double lam, double t2) const {
    const std::size_t m = active_count(lam);
    const double md = static_cast<double>(m);
    const double part_l1 = sum[m] - md * lam;
    const double part_l2sq = sumsq[m] - 2.0 * lam * sum[m] + md * lam * lam;
    return std::max(1.0, part_l1 * part_l1 + t2 * std::abs(part_l2sq));
  }
};

// Real roots in ascending order; returns the count.
int quad_roots(double a2, double a1, double a0, double out[2]) {
  if (a2 == 0.0) {
    if (a1 == 0.0) return 0;
    out[0] = -a0 / a1;
    return 1;
  }
  const double disc = a1 * a1 - 4.0 * a2 * a0;
  if (disc < 0.0) return 0;
  const double sq = std::sqrt(disc);
  const double q = (a1 >= 0.0) ? -0.5 * (a1 + sq) : -0.5 * (a1 - sq);
  double r0 = (q != 0.0) ? a0 / q : 0.0;
  double r1 = (q != 0.0) ? q / a2 : 0.0;
  if (r0 > r1) std::swap(r0, r1);
  out[0] = r0;
  out[1] = r1;
  return (r0 == r1) ? 1 : 2;
}

[[noreturn]] void no_sign_change() {
  raise(ErrorCode::BranchConditionViolated,
        "find_phi_root: phi has no sign change on the requested domain");
}

// Exact quadratic solve on one bracketing piece [lo, hi] with
// phi(lo) > 0 >= phi(hi); plain bisection as the numerical fallback.
double solve_piece(const PhiPieces& pieces, double t2, double lo, double hi) {
  const PhiPieces::Quad q = pieces.quad_for(pieces.active_count(lo), t2);
  if (q.a2 == 0.0 && q.a1 == 0.0 && q.a0 == 0.0) return lo;  // exact plateau
  double roots[2];
  const int count = quad_roots(q.a2, q.a1, q.a0, roots);
  const double slack = 1e-13 * (1.0 + std::abs(lo));
  for (int i = 0; i < count; ++i)
    if (roots[i] >= lo - slack && roots[i] <= hi + slack)
      return std::min(std::max(roots[i], lo), hi);
  // Near-degenerate coefficients: fall back to bisection on the bracket.
  double a = lo;
  double b = hi;
  for (int iter = 0; iter < 200 && b - a > 1e-16 * (1.0 + std::abs(b)); ++iter) {
    const double mid = 0.5 * (a + b);
    if (pieces.phi_at(mid, t2) > 0.0)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

// Root of phi on the requested domain: bisection over the sorted
// breakpoints locates the bracketing piece (the crossing is unique under
// the callers' branch conditions), then the piece quadratic is solved in
// closed form.
double root_from_pieces(const PhiPieces& pieces, double t, PhiDomain domain) {
  const double t2 = t * t;
  const double top = pieces.v_max();

  // Breakpoints strictly inside the domain, ascending.
  const std::vector<double>& cuts = pieces.cuts;
  std::size_t first = 0;
  const std::size_t last = cuts.size() - 1;  // cuts[last] == v_max, excluded
  if (domain == PhiDomain::NonnegativeHalf)
    while (first < last && cuts[first] <= 0.0) ++first;

  const double anchor = domain == PhiDomain::NonnegativeHalf ? 0.0 : -1.0;  // -1 unused
  if (domain == PhiDomain::NonnegativeHalf) {
    const double at_anchor = pieces.phi_at(0.0, t2);
    if (at_anchor == 0.0) return 0.0;
    if (at_anchor < 0.0) no_sign_change();
  } else if (first < last) {
    // Unbounded piece: phi tends to +inf on the far left, so a nonpositive
    // value at the lowest breakpoint brackets the crossing below it.
    const double at_first = pieces.phi_at(cuts[first], t2);
    if (at_first == 0.0) return cuts[first];
    if (at_first < 0.0) {
      const PhiPieces::Quad q = pieces.quad_for(pieces.desc.size(), t2);
      double roots[2];
      const int count = quad_roots(q.a2, q.a1, q.a0, roots);
      const double slack = 1e-13 * (1.0 + std::abs(cuts[first]));
      for (int i = 0; i < count; ++i)
        if (roots[i] <= cuts[first] + slack) return std::min(roots[i], cuts[first]);
      no_sign_change();
    }
  }

  // Smallest breakpoint with phi <= 0; the predicate flips once.
  std::size_t lo_idx = first;
  std::size_t hi_idx = last;  // sentinel: "no nonpositive breakpoint found"
  while (lo_idx < hi_idx) {
    const std::size_t mid = lo_idx + (hi_idx - lo_idx) / 2;
    if (pieces.phi_at(cuts[mid], t2) <= 0.0)
      hi_idx = mid;
    else
      lo_idx = mid + 1;
  }

  if (hi_idx == last) {
    // Crossing, if any, lies in the top piece [left, v_max).
    const double left = (last > first) ? cuts[last - 1]
                        : (domain == PhiDomain::NonnegativeHalf ? anchor : cuts[first]);
    if (domain == PhiDomain::FullLine && last == first) {
      // Flat vector: single unbounded piece up to v_max.
      const PhiPieces::Quad q = pieces.quad_for(pieces.desc.size(), t2);
      double roots[2];
      const int count = quad_roots(q.a2, q.a1, q.a0, roots);
      for (int i = 0; i < count; ++i)
        if (roots[i] < top) return roots[i];
      no_sign_change();
    }
    const PhiPieces::Quad q = pieces.quad_for(pieces.active_count(left), t2);
    if (q.a2 == 0.0 && q.a1 == 0.0 && q.a0 == 0.0) return left;  // plateau to v_max
    double roots[2];
    const int count = quad_roots(q.a2, q.a1, q.a0, roots);
    const double slack = 1e-13 * (1.0 + std::abs(left));
    for (int i = 0; i < count; ++i)
      if (roots[i] >= left - slack && roots[i] < top)
        return std::min(std::max(roots[i], left), top);
    // Plateau obscured by roundoff: accept the left edge when phi vanishes
    // there relative to its own scale.
    if (std::abs(pieces.phi_at(left, t2)) <= 1e-12 * pieces.phi_scale(left, t2)) return left;
    no_sign_change();
  }

  const double right = cuts[hi_idx];
  if (pieces.phi_at(right, t2) == 0.0) return right;
  const double left = (hi_idx > first) ? cuts[hi_idx - 1] : anchor;
  return solve_piece(pieces, t2, left, right);
}

LmSolution tied_face_solution(const Vector& v, double v_max, std::size_t count_in, double t) {
  // I_1 > t^2 >= 1 implies I_1 >= 2.
  const double count = static_cast<double>(count_in);
  const double beta = std::sqrt((count - t * t) / (count - 1.0));
  const double alpha = (t - beta) / count;
  LmSolution sol;
  sol.x = Vector::Zero(v.size());
  Index leader = -1;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] == v_max) {
      sol.x[i] = alpha;
      if (leader < 0) leader = i;
    }
  sol.x[leader] += beta;
  sol.lambda_star = v_max;
  sol.mu_star = 0.0;
  sol.branch = LmBranch::TiedFace;
  return sol;
}

LmSolution normalized_threshold_solution(const Vector& v, double lam) {
  Vector s = (v.array() - lam).max(0.0);
  const double ns = s.norm();  // positive: lam < v_max
  LmSolution sol;
  sol.x = s / ns;
  sol.lambda_star = lam;
  sol.mu_star = ns;
  sol.branch = LmBranch::UniqueRoot;
  return sol;
}

// Shared dispatch for LM-P1+ and LM-P3+ (their solutions coincide); the
// caller has already handled v = 0 and budget validation.
LmSolution solve_plus_ball_or_sphere(const Vector& v, double t) {
  const PhiPieces pieces(v);
  const double t2 = t * t;
  const std::size_t top = pieces.top_count();
  if (static_cast<double>(top) > t2) return tied_face_solution(v, pieces.v_max(), top, t);

  const double l1 = pieces.l1();
  const double l2 = std::sqrt(pieces.l2sq());
  if (l1 > t * l2)
    return normalized_threshold_solution(v, root_from_pieces(pieces, t, PhiDomain::NonnegativeHalf));

  LmSolution sol;
  sol.x = v / l2;
  sol.lambda_star = 0.0;
  sol.mu_star = l2;
  sol.branch = LmBranch::Unnormalized;
  return sol;
}

}  // namespace

void validate_budget(double t, Index n) {
  if (n <= 0) raise(ErrorCode::InvalidArgument, "empty vector");
  if (!std::isfinite(t))
    raise(ErrorCode::InvalidArgument, "l1 budget must be finite, got " + std::to_string(t));
  if (t < 1.0)
    raise(ErrorCode::InfeasibleBudget,
          "l1 budget t = " + std::to_string(t) +
              " is below 1; the unit l2 sphere forces ||x||_1 >= 1");
}

ScoredVector::ScoredVector(Vector v_in, double t_in) : v(std::move(v_in)), t(t_in) {
  require_finite(v, "ScoredVector");
  validate_budget(t, v.size());
}

MaxLevelSet max_level_set(const Vector& v) {
  require_finite(v, "max_level_set");
  if (v.size() == 0) raise(ErrorCode::InvalidArgument, "max_level_set: empty vector");
  const Vector a = v.cwiseAbs();
  MaxLevelSet out;
  out.v_max = a.maxCoeff();
  for (Index i = 0; i < a.size(); ++i)
    if (a[i] == out.v_max) out.indices.push_back(i);
  out.count = static_cast<Index>(out.indices.size());
  return out;
}

std::string_view lm_branch_name(LmBranch branch) {
  switch (branch) {
    case LmBranch::UniqueRoot: return "unique-root";
    case LmBranch::Unnormalized: return "unnormalized";
    case LmBranch::TiedFace: return "tied-face";
    case LmBranch::ZeroInput: return "zero-input";
  }
  return "?";
}

Vector soft_threshold(const Vector& v, double lam) {
  if (!(lam >= 0.0))
    raise(ErrorCode::InvalidArgument,
          "soft_threshold: threshold must be nonnegative, got " + std::to_string(lam));
  require_finite(v, "soft_threshold");
  return v.array().sign() * (v.array().abs() - lam).max(0.0);
}

double phi(const Vector& v, double t, double lam) {
  require_finite(v, "phi");
  require_nonnegative(v, "phi");
  const Eigen::ArrayXd w = (v.array() - lam).max(0.0);
  const double l1 = w.sum();
  const double l2sq = w.square().sum();
  return l1 * l1 - t * t * l2sq;
}

double find_phi_root(const Vector& v, double t, PhiDomain domain) {
  require_finite(v, "find_phi_root");
  require_nonnegative(v, "find_phi_root");
  if (v.size() == 0) raise(ErrorCode::InvalidArgument, "find_phi_root: empty vector");
  if (!(t > 0.0) || !std::isfinite(t))
    raise(ErrorCode::InvalidArgument, "find_phi_root: t must be positive and finite");
  const PhiPieces pieces(v);
  if (pieces.v_max() <= 0.0)
    raise(ErrorCode::BranchConditionViolated, "find_phi_root: zero vector has no threshold root");
  return root_from_pieces(pieces, t, domain);
}

LmSolution solve_lm_p1_plus(const Vector& v, double t) {
  require_finite(v, "solve_lm_p1_plus");
  require_nonnegative(v, "solve_lm_p1_plus");
  validate_budget(t, v.size());
  if (v.isZero(0.0)) {
    // Every feasible point is optimal; the origin is the canonical pick.
    LmSolution sol;
    sol.x = Vector::Zero(v.size());
    sol.branch = LmBranch::ZeroInput;
    return sol;
  }
  return solve_plus_ball_or_sphere(v, t);
}

LmSolution solve_lm_p2_plus(const Vector& v, double t) {
  require_finite(v, "solve_lm_p2_plus");
  require_nonnegative(v, "solve_lm_p2_plus");
  validate_budget(t, v.size());
  if (v.isZero(0.0))
    raise(ErrorCode::DegenerateInput,
          "solve_lm_p2_plus: zero vector has no preferred maximizer on the l1/l2 sphere");

  const Index n = v.size();
  const double t2 = t * t;
  const double nd = static_cast<double>(n);
  // The l1 sphere meets the l2 sphere only for t <= sqrt(n); at equality the
  // flat vector is the single feasible point.
  if (t2 > nd)
    raise(ErrorCode::InfeasibleBudget,
          "l1 budget t = " + std::to_string(t) + " exceeds sqrt(n); the l1 sphere misses the l2 sphere");
  if (t2 == nd) {
    LmSolution sol;
    sol.x = Vector::Constant(n, 1.0 / std::sqrt(nd));
    sol.branch = LmBranch::TiedFace;
    return sol;
  }

  const PhiPieces pieces(v);
  const std::size_t top = pieces.top_count();
  const double count = static_cast<double>(top);
  if (count > t2) return tied_face_solution(v, pieces.v_max(), top, t);
  if (count == t2) {
    // Exact plateau: the normalized indicator of the top level set. Any
    // level in [second distinct value, v_max) reproduces it; report the
    // left edge.
    LmSolution sol;
    sol.x = Vector::Zero(n);
    const double value = 1.0 / std::sqrt(count);
    for (Index i = 0; i < n; ++i)
      if (v[i] == pieces.v_max()) sol.x[i] = value;
    const double second = pieces.cuts.size() > 1 ? pieces.cuts[pieces.cuts.size() - 2] : 0.0;
    sol.lambda_star = second;
    sol.mu_star = (pieces.v_max() - second) * std::sqrt(count);
    sol.branch = LmBranch::TiedFace;
    return sol;
  }
  return normalized_threshold_solution(v, root_from_pieces(pieces, t, PhiDomain::FullLine));
}

LmSolution solve_lm_p3_plus(const Vector& v, double t) {
  require_finite(v, "solve_lm_p3_plus");
  require_nonnegative(v, "solve_lm_p3_plus");
  validate_budget(t, v.size());
  if (v.isZero(0.0))
    raise(ErrorCode::DegenerateInput,
          "solve_lm_p3_plus: zero vector has no preferred maximizer on the l2 sphere");
  return solve_plus_ball_or_sphere(v, t);
}

LmSolution solve_lm(const Vector& v, double t, Variant variant) {
  const Vector a = v.cwiseAbs();
  LmSolution sol;
  switch (variant) {
    case Variant::P1: sol = solve_lm_p1_plus(a, t); break;
    case Variant::P2: sol = solve_lm_p2_plus(a, t); break;
    case Variant::P3: sol = solve_lm_p3_plus(a, t); break;
  }
  // Sign lift. Entries with v_i = 0 keep the nonnegative solution's value;
  // see the header note on the l1-sphere variant.
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] < 0.0) sol.x[i] = -sol.x[i];
  return sol;
}

Vector project_l1_ball(const Vector& v, double t) {
  require_finite(v, "project_l1_ball");
  if (v.size() == 0) raise(ErrorCode::InvalidArgument, "project_l1_ball: empty vector");
  if (!(t > 0.0) || !std::isfinite(t))
    raise(ErrorCode::InvalidArgument,
          "project_l1_ball: radius must be positive, got " + std::to_string(t));

  const Vector a = v.cwiseAbs();
  if (a.sum() <= t) return v;

  std::vector<double> u(a.data(), a.data() + a.size());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double cand = (cum - t) / static_cast<double>(k + 1);
    if (u[k] - cand > 0.0)
      theta = cand;
    else
      break;
  }
  return soft_threshold(v, std::max(theta, 0.0));
}

Vector project_omega(const Vector& v, double t, Variant variant) {
  if (variant != Variant::P1) return solve_lm(v, t, variant).x;

  require_finite(v, "project_omega");
  validate_budget(t, v.size());
  const Vector a = v.cwiseAbs();
  const double l1 = a.sum();
  const double l2 = a.norm();
  if (l1 <= t && l2 <= 1.0) return v;  // already feasible
  if (l1 <= t * l2) return v / l2;     // only the l2 ball binds (l2 > 1 here)
  Vector w = project_l1_ball(v, t);
  if (w.norm() <= 1.0) return w;       // only the l1 ball binds
  // Both constraints bind: same threshold level as the linear maximizer.
  const double lam = find_phi_root(a, t, PhiDomain::NonnegativeHalf);
  const Vector s = soft_threshold(v, lam);
  return s / s.norm();
}

}  // namespace sgcca
