#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <sgcca/data_lab.hpp>
#include <sgcca/keyval.hpp>

#include "test_util.hpp"

using namespace sgcca;
using sgcca::testing::vec;

namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "sgcca_data_lab_tests";
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("generate shapes and determinism") {
  GenSpec spec = GenSpec::defaults();
  spec.seed = 42;
  auto [blocks, truth] = generate(spec);
  CHECK(blocks.count() == 3);
  CHECK(blocks.samples() == 50);
  CHECK(blocks.block(0).cols() == 200);
  CHECK(blocks.block(1).cols() == 500);
  CHECK(blocks.block(2).cols() == 700);

  auto [again, truth2] = generate(spec);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK((blocks.block(j) - again.block(j)).norm() == 0.0);
    CHECK((truth.loadings[j] - truth2.loadings[j]).norm() == 0.0);
  }

  // Loadings live on the first 75 indices with magnitudes in [0.2, 0.3].
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(truth.supports[j].size() == 75);
    for (Index i = 0; i < truth.loadings[j].size(); ++i) {
      const double magnitude = std::abs(truth.loadings[j][i]);
      if (i < 75) {
        CHECK(magnitude >= 0.2);
        CHECK(magnitude <= 0.3);
      } else {
        CHECK(magnitude == 0.0);
      }
    }
  }
}

TEST_CASE("generate approaches rank one as the noise vanishes") {
  GenSpec spec = GenSpec::defaults();
  spec.n = 20;
  spec.dims = {10, 12, 14};
  spec.support_size = 8;
  spec.noise_var = 1e-20;
  spec.seed = 3;
  auto [blocks, truth] = generate(spec);
  for (std::size_t j = 0; j < 3; ++j) {
    Eigen::JacobiSVD<Matrix> svd(blocks.block(j));
    const auto& sv = svd.singularValues();
    CHECK(sv[1] / sv[0] <= 1e-8);
  }
}

TEST_CASE("latent scores reproduce the requested covariance") {
  GenSpec spec = GenSpec::defaults();
  Rng rng(7);
  const Matrix u = sample_latent_scores(10000, spec.u_cov, rng);
  const Index n = u.rows();
  Matrix centered = u;
  for (Index c = 0; c < u.cols(); ++c) centered.col(c).array() -= u.col(c).mean();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(n);
  CHECK(cov(0, 2) == doctest::Approx(0.7).epsilon(0.075));
  CHECK(cov(1, 2) == doctest::Approx(0.7).epsilon(0.075));
  CHECK(std::abs(cov(0, 1)) <= 0.05);
  for (Index j = 0; j < 3; ++j) CHECK(cov(j, j) == doctest::Approx(1.0).epsilon(0.06));

  // Non-PSD covariance is rejected.
  Matrix bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(sample_latent_scores(10, bad, rng), Error);
}

TEST_CASE("sensitivity and specificity") {
  CHECK(sensitivity(vec({0.5, 0.0, 0.3}), vec({1.0, 0.0, 2.0})) == 1.0);
  CHECK(sensitivity(Vector::Zero(3), vec({1.0, 0.0, 2.0})) == 0.0);
  CHECK(sensitivity(vec({0.5, 0.1, 0.0}), vec({1.0, 0.0, 2.0})) == 0.5);

  CHECK(specificity(vec({0.5, 0.0, 0.3}), vec({1.0, 0.0, 2.0})) == 1.0);
  CHECK(specificity(vec({0.5, 0.1, 0.3}), vec({1.0, 0.0, 2.0})) == 0.0);
  CHECK(specificity(vec({0.5, 0.1, 0.0}), vec({1.0, 0.0, 0.0})) == 0.5);

  // Self-comparison is perfect.
  const Vector w = vec({0.4, 0.0, -0.2, 0.0});
  CHECK(sensitivity(w, w) == 1.0);
  CHECK(specificity(w, w) == 1.0);

  CHECK_THROWS_AS(sensitivity(Vector::Zero(2), Vector::Zero(2)), Error);
  CHECK_THROWS_AS(specificity(vec({1.0, 1.0}), vec({1.0, 2.0})), Error);
  CHECK_THROWS_AS(sensitivity(Vector::Zero(2), vec({1.0, 0.0, 1.0})), Error);
}

TEST_CASE("design presets") {
  const DesignGraph complete = design_preset("complete");
  CHECK(complete.connected(0, 1));
  CHECK(complete.connected(0, 2));
  CHECK(complete.connected(1, 2));

  const DesignGraph hierarchical = design_preset("hierarchical");
  CHECK(!hierarchical.connected(0, 1));
  CHECK(hierarchical.connected(0, 2));
  CHECK(hierarchical.connected(1, 2));

  const DesignGraph cascade = design_preset("cascade");
  CHECK(cascade.connected(0, 1));
  CHECK(cascade.connected(0, 2));
  CHECK(!cascade.connected(1, 2));

  CHECK_THROWS_AS(design_preset("ring"), Error);
}

TEST_CASE("grid_search") {
  Rng rng(11);
  const auto inst = sgcca::testing::random_instance(rng, 14, {6, 8, 10});
  GridSearchOptions options;
  options.run.seed = 3;

  SUBCASE("single-candidate grids return that tuple") {
    const std::vector<std::vector<double>> grids{{1.4}, {1.6}, {1.8}};
    const auto result = grid_search(inst.blocks, inst.design, Algo::Bcd3, Scheme::horst(), grids,
                                    [](const SolverReport&) { return 1.0; }, options);
    CHECK(result.sparsity == std::vector<double>{1.4, 1.6, 1.8});
    CHECK(result.evaluations == 1);
  }

  SUBCASE("constant score picks the lexicographically smallest tuple") {
    const std::vector<std::vector<double>> grids{{1.8, 1.4}, {1.9, 1.6}, {2.1, 1.8}};
    const auto constant = [](const SolverReport&) { return 0.5; };
    const auto product = grid_search(inst.blocks, inst.design, Algo::Bcd3, Scheme::horst(), grids,
                                     constant, options);
    CHECK(product.sparsity == std::vector<double>{1.4, 1.6, 1.8});

    GridSearchOptions coordinate = options;
    coordinate.cartesian_cap = 1;  // force the coordinate-search path
    const auto cyclic = grid_search(inst.blocks, inst.design, Algo::Bcd3, Scheme::horst(), grids,
                                    constant, coordinate);
    CHECK(cyclic.sparsity == std::vector<double>{1.4, 1.6, 1.8});
  }

  SUBCASE("argmax of the objective matches brute force") {
    const std::vector<std::vector<double>> grids{{1.3, 1.9}, {1.5, 2.1}, {1.7, 2.3}};
    const auto score = [](const SolverReport& report) { return report.objective_trace.back(); };
    const auto result = grid_search(inst.blocks, inst.design, Algo::Bcd3, Scheme::horst(), grids,
                                    score, options);
    double best = -1e300;
    std::vector<double> best_tuple;
    for (double s1 : grids[0])
      for (double s2 : grids[1])
        for (double s3 : grids[2]) {
          const std::vector<double> tuple{s1, s2, s3};
          const double value = score(run_algo(inst.blocks, inst.design, Algo::Bcd3,
                                              Scheme::horst(), tuple, options.run));
          if (value > best) {
            best = value;
            best_tuple = tuple;
          }
        }
    CHECK(result.sparsity == best_tuple);
    CHECK(result.score == doctest::Approx(best).epsilon(1e-12));
    CHECK(result.evaluations == 8);
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(grid_search(inst.blocks, inst.design, Algo::Bcd3, Scheme::horst(),
                                {{1.4}, {}, {1.8}}, [](const SolverReport&) { return 0.0; },
                                options),
                    Error);
    try {
      grid_search(inst.blocks, inst.design, Algo::Bcd3, Scheme::horst(), {{1.4}, {9.0}, {1.8}},
                  [](const SolverReport&) { return 0.0; }, options);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InfeasibleBudget);
    }
  }
}

TEST_CASE("csv round trip and block loading") {
  const fs::path dir = temp_dir();

  SUBCASE("well-formed blocks load with matching rows") {
    Rng rng(13);
    const Matrix a = sgcca::testing::random_matrix(50, 4, rng);
    const Matrix b = sgcca::testing::random_matrix(50, 3, rng);
    save_csv_matrix(dir / "a.csv", a);
    save_csv_matrix(dir / "b.csv", b);
    const BlockSet bs = load_blocks({dir / "a.csv", dir / "b.csv"}, false);
    CHECK(bs.samples() == 50);
    CHECK(bs.dim(0) == 4);
    CHECK(bs.dim(1) == 3);
    // Values survive the 9-significant-digit round trip.
    CHECK((bs.block(0) - a).lpNorm<Eigen::Infinity>() <= 1e-7);
  }

  SUBCASE("mismatched row counts name both files") {
    write_text(dir / "r2.csv", "x1,x2\n1,2\n3,4\n");
    write_text(dir / "r3.csv", "x1\n1\n2\n3\n");
    try {
      load_blocks({dir / "r2.csv", dir / "r3.csv"}, false);
      CHECK(false);
    } catch (const Error& e) {
      const std::string message = e.what();
      CHECK(message.find("r2.csv") != std::string::npos);
      CHECK(message.find("r3.csv") != std::string::npos);
    }
  }

  SUBCASE("ragged and non-numeric rows name file and line") {
    write_text(dir / "ragged.csv", "x1,x2\n1,2\n3\n");
    try {
      load_csv_matrix(dir / "ragged.csv");
      CHECK(false);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("ragged.csv:3") != std::string::npos);
    }

    write_text(dir / "words.csv", "x1,x2\n1,two\n");
    try {
      load_csv_matrix(dir / "words.csv");
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
      CHECK(std::string(e.what()).find("words.csv:2") != std::string::npos);
    }
  }

  SUBCASE("constant column under standardization is a named error") {
    write_text(dir / "const.csv", "x1,x2\n1,5\n2,5\n3,5\n");
    write_text(dir / "ok.csv", "x1\n1\n2\n0\n");
    try {
      load_blocks({dir / "ok.csv", dir / "const.csv"}, true);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateColumn);
      CHECK(std::string(e.what()).find("const.csv") != std::string::npos);
      CHECK(std::string(e.what()).find("column 1") != std::string::npos);
    }
  }

  SUBCASE("missing files are io errors") {
    CHECK_THROWS_AS(load_csv_matrix(dir / "absent.csv"), Error);
  }
}

TEST_CASE("key-value documents") {
  KeyValueDoc doc;
  doc.set("algo", "bcd3");
  doc.set_double("tol", 1.25e-7);
  doc.set_int("sweeps", 17);
  doc.set_bool("converged", true);
  const std::string text = doc.to_string();
  CHECK(text.find("algo = bcd3") != std::string::npos);
  CHECK(text.find("tol = 1.25e-07") != std::string::npos);

  const KeyValueDoc parsed = KeyValueDoc::parse(text);
  CHECK(parsed.get("algo") == "bcd3");
  CHECK(parsed.get_double("tol") == doctest::Approx(1.25e-7));
  CHECK(parsed.get_int("sweeps") == 17);
  CHECK(parsed.get_bool("converged"));

  const KeyValueDoc commented = KeyValueDoc::parse("# header\n\nkey = value\n");
  CHECK(commented.get("key") == "value");
  CHECK_THROWS_AS(KeyValueDoc::parse("not a pair\n"), Error);

  CHECK(parse_double_list("7.6, 8.7,8.05", "sparsity") ==
        std::vector<double>{7.6, 8.7, 8.05});
  CHECK_THROWS_AS(parse_double_list("1,zzz", "sparsity"), Error);
}
