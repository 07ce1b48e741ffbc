#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include <sgcca/gp_solver.hpp>
#include <sgcca/norm_geometry.hpp>
#include <sgcca/rng.hpp>

#include "oracles.hpp"
#include "test_util.hpp"

using namespace sgcca;
using sgcca::testing::random_instance;
using sgcca::testing::random_matrix;
using sgcca::testing::random_vector;
using sgcca::testing::vec;

namespace {

CoefState unit_state(const BlockSet& bs, Rng& rng, Variant variant,
                     const std::vector<double>& sparsity) {
  std::vector<Vector> a;
  for (std::size_t j = 0; j < bs.count(); ++j) {
    Vector g = random_vector(bs.dim(j), rng);
    a.push_back(project_omega(g, sparsity[j], variant));
  }
  return CoefState(std::move(a), variant, sparsity);
}

}  // namespace

TEST_CASE("gradient_h closed form on a toy pair") {
  Matrix x1(1, 2), x2(1, 2);
  x1 << 1.0, 0.0;
  x2 << 2.0, 0.0;
  BlockSet bs({x1, x2});
  DesignGraph dg = DesignGraph::complete(2);
  CoefState st({vec({1.0, 0.0}), vec({1.0, 0.0})}, Variant::P3, {1.2, 1.2});

  const auto grad = gradient_h(bs, dg, Scheme::horst(), st);
  // (2/n) X_1' X_2 a_2 with n = 1: first component 4.
  CHECK(grad[0][0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(grad[0][1] == 0.0);
  CHECK(grad[1][0] == doctest::Approx(4.0).epsilon(1e-14));

  // Zero coefficients give a zero gradient.
  CoefState zero({Vector::Zero(2), Vector::Zero(2)}, Variant::P3, {1.2, 1.2});
  for (const Vector& g : gradient_h(bs, dg, Scheme::horst(), zero)) CHECK(g.norm() == 0.0);

  CHECK_THROWS_AS(gradient_h(bs, dg, Scheme::centroid(), st), Error);
  try {
    gradient_h(bs, dg, Scheme::factorial(), st);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedScheme);
  }
}

TEST_CASE("gradient matches central finite differences") {
  Rng rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = random_instance(rng);
    const CoefState st = unit_state(inst.blocks, rng, Variant::P3, inst.sparsity);
    const auto grad = gradient_h(inst.blocks, inst.design, Scheme::horst(), st);
    const double step = 1e-5;
    for (std::size_t j = 0; j < st.a.size(); ++j) {
      for (Index i = 0; i < st.a[j].size(); ++i) {
        CoefState plus = st;
        CoefState minus = st;
        plus.a[j][i] += step;
        minus.a[j][i] -= step;
        const double fd = (objective_h(inst.blocks, inst.design, Scheme::horst(), plus) -
                           objective_h(inst.blocks, inst.design, Scheme::horst(), minus)) /
                          (2.0 * step);
        const double scale = std::max(1.0, std::abs(grad[j][i]));
        CHECK(std::abs(grad[j][i] - fd) <= 1e-6 * scale);
      }
    }
  }
}

TEST_CASE("lipschitz_bound") {
  SUBCASE("single-entry toy value") {
    Matrix x1(1, 1), x2(1, 1);
    x1 << 1.0;
    x2 << 2.0;
    BlockSet bs({x1, x2});
    const double bound = lipschitz_bound(bs, DesignGraph::complete(2));
    CHECK(bound == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-9));
  }

  SUBCASE("only connected pairs count") {
    Rng rng(5);
    std::vector<Matrix> blocks{random_matrix(6, 3, rng), random_matrix(6, 4, rng),
                               random_matrix(6, 5, rng)};
    BlockSet bs(std::move(blocks));
    Eigen::MatrixXi c = Eigen::MatrixXi::Zero(3, 3);
    c(0, 1) = c(1, 0) = 1;
    DesignGraph dg{std::move(c)};
    const double bound = lipschitz_bound(bs, dg);
    Eigen::JacobiSVD<Matrix> svd(bs.block(0).transpose() * bs.block(1));
    const double sigma = svd.singularValues()[0];
    CHECK(bound ==
          doctest::Approx((2.0 / 6.0) * std::pow(2.0, 1.5) * std::sqrt(3.0) * sigma).epsilon(1e-7));
  }

  SUBCASE("bounds the gradient variation") {
    Rng rng(7);
    const auto inst = random_instance(rng);
    const double bound = lipschitz_bound(inst.blocks, inst.design);
    for (int rep = 0; rep < 50; ++rep) {
      const CoefState a = unit_state(inst.blocks, rng, Variant::P3, inst.sparsity);
      const CoefState b = unit_state(inst.blocks, rng, Variant::P3, inst.sparsity);
      const auto ga = gradient_h(inst.blocks, inst.design, Scheme::horst(), a);
      const auto gb = gradient_h(inst.blocks, inst.design, Scheme::horst(), b);
      double diff_sq = 0.0;
      double dist_sq = 0.0;
      for (std::size_t j = 0; j < a.a.size(); ++j) {
        diff_sq += (ga[j] - gb[j]).squaredNorm();
        dist_sq += (a.a[j] - b.a[j]).squaredNorm();
      }
      CHECK(std::sqrt(diff_sq) <= bound * std::sqrt(dist_sq) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("project_product is blockwise") {
  Rng rng(9);
  const std::vector<double> sparsity{1.5, 1.8, 2.0};

  SUBCASE("feasible input is unchanged") {
    std::vector<Vector> feasible;
    for (Index p : {4, 5, 6})
      feasible.push_back(project_omega(random_vector(p, rng), sparsity[feasible.size()], Variant::P3));
    const CoefState out = project_product(feasible, sparsity, Variant::P3);
    for (std::size_t j = 0; j < 3; ++j) CHECK((out.a[j] - feasible[j]).norm() <= 1e-9);
  }

  SUBCASE("only the infeasible block moves") {
    std::vector<Vector> raw;
    for (Index p : {4, 5, 6})
      raw.push_back(project_omega(random_vector(p, rng), sparsity[raw.size()], Variant::P3));
    std::vector<Vector> bumped = raw;
    bumped[1] *= 3.0;
    const CoefState out = project_product(bumped, sparsity, Variant::P3);
    CHECK((out.a[0] - raw[0]).norm() <= 1e-9);
    CHECK((out.a[2] - raw[2]).norm() <= 1e-9);
    CHECK((out.a[1] - bumped[1]).norm() > 0.1);
  }

  SUBCASE("matches the joint enumeration oracle on tiny dims") {
    const std::vector<double> budgets{1.3, 1.5, 1.6};
    for (int rep = 0; rep < 25; ++rep) {
      std::vector<Vector> raw{random_vector(3, rng, 1.5), random_vector(4, rng, 1.5),
                              random_vector(4, rng, 1.5)};
      for (Variant variant : {Variant::P1, Variant::P2, Variant::P3}) {
        const CoefState out = project_product(raw, budgets, variant);
        for (std::size_t j = 0; j < raw.size(); ++j) {
          const Vector reference = sgcca::testing::oracle_project(raw[j], budgets[j], variant);
          CHECK((out.a[j] - reference).norm() <= 1e-8);
        }
      }
    }
  }
}

TEST_CASE("bb_step branches") {
  GpConfig cfg;
  cfg.gamma_min = 1e-4;
  cfg.gamma_max = 10.0;
  const double cap = 0.5;

  BbState bb;
  bb.s_vec = vec({1.0, 0.0});
  bb.y_vec = vec({-1.0, 0.0});
  bb.a_s = 1.0;
  bb.b_s = -1.0;  // concave direction: gamma_max, then the cap
  CHECK(bb_step(bb, cfg, cap) == cap);
  CHECK(bb_step(bb, cfg, 20.0) == cfg.gamma_max);

  bb.b_s = 4.0;  // ratio 0.25 inside the bounds and below the cap
  CHECK(bb_step(bb, cfg, cap) == doctest::Approx(0.25).epsilon(1e-15));

  bb.b_s = 1e9;  // tiny ratio clamps to gamma_min
  CHECK(bb_step(bb, cfg, cap) == cfg.gamma_min);
}

TEST_CASE("fit_gp") {
  SUBCASE("zero gradient stops immediately") {
    // Orthogonal blocks: the objective is identically zero and every
    // feasible point is stationary.
    Matrix x1(2, 2), x2(2, 2);
    x1 << 1.0, 1.0, 0.0, 0.0;
    x2 << 0.0, 0.0, 1.0, 1.0;
    BlockSet bs({x1, x2});
    GpConfig cfg;
    cfg.variant = Variant::P3;
    cfg.sparsity = {1.2, 1.2};
    const SolverReport report = fit_gp(bs, DesignGraph::complete(2), cfg);
    CHECK(report.converged);
    CHECK(report.sweeps == 0);
    CHECK(report.stationarity_residual <= cfg.tol);
  }

  SUBCASE("converges on random instances with feasible iterates") {
    Rng rng(11);
    int converged = 0;
    for (int rep = 0; rep < 10; ++rep) {
      const auto inst = random_instance(rng, 15, {6, 8, 10});
      for (Variant variant : {Variant::P1, Variant::P2, Variant::P3}) {
        GpConfig cfg;
        cfg.variant = variant;
        cfg.sparsity = inst.sparsity;
        cfg.seed = static_cast<std::uint64_t>(rep);
        const SolverReport report = fit_gp(inst.blocks, inst.design, cfg);
        if (report.converged) ++converged;
        CHECK(report.stationarity_residual ==
              doctest::Approx(report.stationarity_residual));  // finite
        CHECK(std::isfinite(report.step_norm_sum));
        const CoefState& st = report.final_state;
        for (std::size_t j = 0; j < st.a.size(); ++j) {
          const double l2 = st.a[j].norm();
          if (variant != Variant::P1) CHECK(std::abs(l2 - 1.0) <= 1e-9);
          CHECK(st.a[j].lpNorm<1>() <= inst.sparsity[j] + 1e-8);
        }
      }
    }
    CHECK(converged >= 27);  // 90% of 30
  }

  SUBCASE("deterministic replay") {
    Rng rng(13);
    const auto inst = random_instance(rng, 15, {6, 8, 10});
    GpConfig cfg;
    cfg.sparsity = inst.sparsity;
    cfg.seed = 5;
    const SolverReport a = fit_gp(inst.blocks, inst.design, cfg);
    const SolverReport b = fit_gp(inst.blocks, inst.design, cfg);
    CHECK(a.sweeps == b.sweeps);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK(a.step_norm_sum == b.step_norm_sum);
  }

  SUBCASE("step-norm partial sums flatten on converged runs") {
    Rng rng(17);
    const auto inst = random_instance(rng, 15, {6, 8, 10});
    GpConfig cfg;
    cfg.sparsity = inst.sparsity;
    cfg.seed = 21;
    const SolverReport report = fit_gp(inst.blocks, inst.design, cfg);
    if (report.converged) {
      // The tail steps are tiny relative to the accumulated path length.
      CHECK(report.stationarity_residual <= cfg.tol);
      CHECK(report.step_norm_sum < 1e3);
    }
  }
}
