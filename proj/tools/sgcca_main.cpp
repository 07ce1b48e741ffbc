// Command line for the sparse multiblock solvers: data generation, fitting,
// projection, sparsity grid search and benchmark tables.
//
// Flags can also come from a config file (`--config file`, one `key = value`
// per line, '#' comments); command-line flags override file entries. Every
// error exits nonzero with a single machine-parsable line on stderr:
//   error: <code>: <message>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <sgcca/algo.hpp>
#include <sgcca/data_lab.hpp>
#include <sgcca/keyval.hpp>
#include <sgcca/norm_geometry.hpp>
#include <sgcca/rng.hpp>

namespace fs = std::filesystem;
using namespace sgcca;

namespace {

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == separator) {
      out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(current);
  return out;
}

std::vector<fs::path> parse_paths(const std::string& list) {
  std::vector<fs::path> out;
  for (const std::string& item : split(list, ','))
    if (!item.empty()) out.emplace_back(item);
  return out;
}

// Design graph from a preset name or a CSV file of 0/1 rows.
DesignGraph load_design(const std::string& spec, std::size_t blocks) {
  if (spec == "complete" || spec == "hierarchical" || spec == "cascade") {
    if (blocks != 3 && spec != "complete")
      raise(ErrorCode::ConfigError,
            "design preset '" + spec + "' is defined for 3 blocks, got " + std::to_string(blocks));
    if (spec == "complete") return DesignGraph::complete(blocks);
    return design_preset(spec);
  }
  const Matrix raw = load_csv_matrix(spec);
  if (raw.rows() != raw.cols())
    raise(ErrorCode::ConfigError, "design file '" + spec + "' must hold a square 0/1 matrix");
  Eigen::MatrixXi c(raw.rows(), raw.cols());
  for (Index j = 0; j < raw.rows(); ++j)
    for (Index k = 0; k < raw.cols(); ++k) {
      if (raw(j, k) != 0.0 && raw(j, k) != 1.0)
        raise(ErrorCode::ConfigError, "design file '" + spec + "' must hold only 0 or 1");
      c(j, k) = static_cast<int>(raw(j, k));
    }
  if (static_cast<std::size_t>(c.rows()) != blocks)
    raise(ErrorCode::ConfigError,
          "design file '" + spec + "' is " + std::to_string(c.rows()) + "x" +
              std::to_string(c.cols()) + " but there are " + std::to_string(blocks) + " blocks");
  return DesignGraph(std::move(c));
}

Vector load_vector_file(const fs::path& path) {
  std::ifstream stream(path);
  if (!stream) raise(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::vector<double> values;
  std::string token;
  while (stream >> token) {
    for (const std::string& piece : split(token, ','))
      if (!piece.empty()) {
        try {
          std::size_t used = 0;
          const double value = std::stod(piece, &used);
          if (used != piece.size()) throw std::invalid_argument(piece);
          values.push_back(value);
        } catch (const std::exception&) {
          raise(ErrorCode::ParseError,
                "'" + path.string() + "': token '" + piece + "' is not a number");
        }
      }
  }
  if (values.empty()) raise(ErrorCode::ParseError, "'" + path.string() + "' holds no numbers");
  Vector v(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Index>(i)] = values[i];
  return v;
}

// Ground truth as written by `gen`: CSV block,index,value with 1-based
// indices, zeros implied. Reconstructed against the fitted block widths.
std::vector<Vector> load_ground_truth(const fs::path& path, const BlockSet& bs) {
  const Matrix raw = load_csv_matrix(path);
  if (raw.cols() != 3)
    raise(ErrorCode::ParseError, "'" + path.string() + "': expected columns block,index,value");
  std::vector<Vector> loadings;
  for (std::size_t j = 0; j < bs.count(); ++j) loadings.push_back(Vector::Zero(bs.dim(j)));
  for (Index r = 0; r < raw.rows(); ++r) {
    const auto block = static_cast<std::size_t>(raw(r, 0));
    const auto index = static_cast<Index>(raw(r, 1));
    if (block < 1 || block > bs.count())
      raise(ErrorCode::ParseError,
            "'" + path.string() + "': block " + std::to_string(block) + " out of range");
    if (index < 1 || index > bs.dim(block - 1))
      raise(ErrorCode::ParseError,
            "'" + path.string() + "': index " + std::to_string(index) + " out of range for block " +
                std::to_string(block));
    loadings[block - 1][index - 1] = raw(r, 2);
  }
  return loadings;
}

void emit_document(const KeyValueDoc& doc, const std::string& out_path) {
  if (out_path.empty())
    std::cout << doc.to_string();
  else
    doc.write_file(out_path);
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string out;
  std::uint64_t seed = 0;
  std::int64_t n = 50;
  std::string dims = "200,500,700";
  std::int64_t support = 75;
  double loading_min = 0.2;
  double loading_max = 0.3;
  double noise_var = 0.2;
  std::string u_cov;  // row-major comma list; default wired for 3 blocks
};

int run_gen(const GenArgs& args) {
  GenSpec spec;
  spec.seed = args.seed;
  spec.n = args.n;
  spec.dims.clear();
  for (std::int64_t p : parse_int_list(args.dims, "dims")) spec.dims.push_back(p);
  spec.support_size = args.support;
  spec.loading_min = args.loading_min;
  spec.loading_max = args.loading_max;
  spec.noise_var = args.noise_var;

  const auto J = static_cast<Index>(spec.dims.size());
  if (!args.u_cov.empty()) {
    const std::vector<double> entries = parse_double_list(args.u_cov, "u-cov");
    if (static_cast<Index>(entries.size()) != J * J)
      raise(ErrorCode::ConfigError,
            "u-cov needs " + std::to_string(J * J) + " row-major entries, got " +
                std::to_string(entries.size()));
    spec.u_cov.resize(J, J);
    for (Index r = 0; r < J; ++r)
      for (Index c = 0; c < J; ++c) spec.u_cov(r, c) = entries[r * J + c];
  } else if (J == 3) {
    spec.u_cov = GenSpec::defaults().u_cov;
  } else {
    raise(ErrorCode::ConfigError, "--u-cov is required when the block count is not 3");
  }

  const fs::path dir(args.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir))
    raise(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "'");

  auto [blocks, truth] = generate(spec);

  KeyValueDoc manifest;
  manifest.set("command", "gen");
  manifest.set_uint("seed", spec.seed);
  manifest.set_int("n", spec.n);
  manifest.set("dims", args.dims);
  manifest.set_int("support_size", spec.support_size);
  manifest.set_double("loading_min", spec.loading_min);
  manifest.set_double("loading_max", spec.loading_max);
  manifest.set_double("noise_var", spec.noise_var);
  std::string cov_text;
  for (Index r = 0; r < J; ++r)
    for (Index c = 0; c < J; ++c) {
      if (!cov_text.empty()) cov_text += ',';
      cov_text += format_g9(spec.u_cov(r, c));
    }
  manifest.set("u_cov", cov_text);

  for (std::size_t j = 0; j < blocks.count(); ++j) {
    const fs::path file = dir / ("block_" + std::to_string(j + 1) + ".csv");
    save_csv_matrix(file, blocks.block(j));
    manifest.set("block_file_" + std::to_string(j + 1), file.filename().string());
  }

  const fs::path truth_path = dir / "truth.csv";
  {
    std::ofstream out(truth_path);
    if (!out) raise(ErrorCode::IoError, "cannot open '" + truth_path.string() + "' for writing");
    out << "block,index,value\n";
    for (std::size_t j = 0; j < truth.loadings.size(); ++j)
      for (Index i : truth.supports[j])
        out << (j + 1) << ',' << (i + 1) << ',' << format_g9(truth.loadings[j][i]) << '\n';
    if (!out.good()) raise(ErrorCode::IoError, "write failed for '" + truth_path.string() + "'");
  }
  manifest.set("truth_file", truth_path.filename().string());
  manifest.write_file(dir / "manifest.txt");

  std::cout << "wrote " << blocks.count() << " blocks + truth + manifest to " << dir.string()
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string blocks;
  std::string design;
  std::string algo = "bcd3";
  std::string scheme = "horst";
  std::string sparsity;
  std::uint64_t seed = 0;
  double tol = 0.0;  // 0 keeps the per-family default
  std::int64_t max_iters = 0;
  bool standardize = false;
  std::string ground_truth;
  std::string out;
};

RunOptions make_run_options(const std::string& algo_name_in, double tol, std::int64_t max_iters,
                            std::uint64_t seed) {
  RunOptions options;
  options.seed = seed;
  const Algo algo = algo_from_name(algo_name_in);
  if (tol > 0.0) {
    options.epsilon = tol;
    options.tol = tol;
  }
  if (max_iters > 0) {
    options.max_sweeps = static_cast<std::size_t>(max_iters);
    options.max_iters = static_cast<std::size_t>(max_iters);
  }
  (void)algo;
  return options;
}

int run_fit(const FitArgs& args) {
  const Algo algo = algo_from_name(args.algo);
  const Scheme scheme = Scheme::from_name(args.scheme);
  if (algo_is_gp(algo) && scheme.kind != SchemeKind::Horst)
    raise(ErrorCode::UnsupportedScheme,
          args.algo + " requires the horst scheme, got " + args.scheme);

  const std::vector<fs::path> paths = parse_paths(args.blocks);
  if (paths.empty()) raise(ErrorCode::ConfigError, "--blocks is required");
  if (args.design.empty()) raise(ErrorCode::ConfigError, "--design is required");
  if (args.sparsity.empty()) raise(ErrorCode::ConfigError, "--sparsity is required");

  const BlockSet blocks = load_blocks(paths, args.standardize);
  const DesignGraph design = load_design(args.design, blocks.count());
  const std::vector<double> sparsity = parse_double_list(args.sparsity, "sparsity");
  if (sparsity.size() != blocks.count())
    raise(ErrorCode::ConfigError,
          "expected " + std::to_string(blocks.count()) + " sparsity budgets, got " +
              std::to_string(sparsity.size()));

  const RunOptions options = make_run_options(args.algo, args.tol, args.max_iters, args.seed);
  const SolverReport report = run_algo(blocks, design, algo, scheme, sparsity, options);

  KeyValueDoc doc;
  doc.set("command", "fit");
  doc.set("algo", args.algo);
  doc.set("scheme", args.scheme);
  doc.set("variant", variant_name(algo_variant(algo)));
  doc.set("blocks", args.blocks);
  doc.set("design", args.design);
  doc.set("sparsity", join_g9(sparsity));
  doc.set_bool("standardize", args.standardize);
  doc.set_uint("seed", args.seed);
  doc.set_double(algo_is_gp(algo) ? "tol" : "epsilon",
                 algo_is_gp(algo) ? options.tol : options.epsilon);
  doc.set_uint("max_iters", algo_is_gp(algo) ? options.max_iters : options.max_sweeps);
  doc.set_bool("converged", report.converged);
  doc.set_uint(algo_is_gp(algo) ? "iterations" : "sweeps", report.sweeps);
  doc.set_double("wall_time_s", report.wall_time_s);
  doc.set_double("objective", report.objective_trace.back());
  doc.set("objective_trace", join_g9(report.objective_trace));
  doc.set_double("stationarity_residual", report.stationarity_residual);
  doc.set_uint("degenerate_updates", report.degenerate_updates);
  if (algo == Algo::Baseline) doc.set_uint("search_failures", report.search_failures);
  if (algo_is_gp(algo)) {
    doc.set_double("step_norm_sum", report.step_norm_sum);
    doc.set_double("step_size_final", report.step_size_final);
  }

  for (std::size_t j = 0; j < blocks.count(); ++j) {
    Index nonzeros = 0;
    for (Index i = 0; i < report.final_state.a[j].size(); ++i)
      if (report.final_state.a[j][i] != 0.0) ++nonzeros;
    doc.set_int("block" + std::to_string(j + 1) + "_nonzeros", nonzeros);
  }

  if (!args.ground_truth.empty()) {
    const std::vector<Vector> truth = load_ground_truth(args.ground_truth, blocks);
    doc.set("ground_truth", args.ground_truth);
    for (std::size_t j = 0; j < blocks.count(); ++j) {
      doc.set_double("block" + std::to_string(j + 1) + "_sensitivity",
                     sensitivity(report.final_state.a[j], truth[j]));
      doc.set_double("block" + std::to_string(j + 1) + "_specificity",
                     specificity(report.final_state.a[j], truth[j]));
    }
  }

  if (!args.out.empty()) {
    const fs::path out_path(args.out);
    const std::string stem = (out_path.parent_path() / out_path.stem()).string();
    for (std::size_t j = 0; j < blocks.count(); ++j) {
      const fs::path coef_path = stem + "_block" + std::to_string(j + 1) + ".csv";
      std::ofstream coef(coef_path);
      if (!coef) raise(ErrorCode::IoError, "cannot open '" + coef_path.string() + "' for writing");
      coef << "index,value\n";
      for (Index i = 0; i < report.final_state.a[j].size(); ++i)
        coef << (i + 1) << ',' << format_g9(report.final_state.a[j][i]) << '\n';
      doc.set("coef_file_" + std::to_string(j + 1), coef_path.string());
    }
  }

  emit_document(doc, args.out);
  return 0;
}

// ---------------------------------------------------------------------------
// project

struct ProjectArgs {
  std::string input;
  double t = 0.0;
  std::string variant = "p3";
  std::string out;
};

int run_project(const ProjectArgs& args) {
  const Variant variant = variant_from_name(args.variant);
  const ScoredVector scored(load_vector_file(args.input), args.t);

  const LmSolution lm = solve_lm(scored.v, scored.t, variant);
  const Vector projection = project_omega(scored.v, scored.t, variant);

  KeyValueDoc doc;
  doc.set("command", "project");
  doc.set("input", args.input);
  doc.set("variant", args.variant);
  doc.set_double("t", scored.t);
  doc.set_int("n", scored.v.size());
  doc.set("lm_branch", std::string(lm_branch_name(lm.branch)));
  if (lm.lambda_star) doc.set_double("lm_lambda_star", *lm.lambda_star);
  if (lm.mu_star) doc.set_double("lm_mu_star", *lm.mu_star);
  doc.set_double("lm_objective", lm.objective(scored.v));
  doc.set("lm_x", join_g9(lm.x));
  doc.set("projection_x", join_g9(projection));
  emit_document(doc, args.out);
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string algos = "baseline,bcd1,bcd2,bcd3";
  std::int64_t repeats = 10;
  std::uint64_t seed = 0;
  std::string scheme = "horst";
  std::string design = "hierarchical";
  std::string sparsity = "7.6,8.7,8.05";
  double tol = 0.0;
  std::int64_t max_iters = 0;
  std::string out;
  GenArgs gen;  // generator knobs (out/seed unused here)
};

int run_bench(const BenchArgs& args) {
  if (args.repeats < 1) raise(ErrorCode::ConfigError, "--repeats must be at least 1");
  std::vector<Algo> algos;
  for (const std::string& name : split(args.algos, ','))
    if (!name.empty()) algos.push_back(algo_from_name(name));
  if (algos.empty()) raise(ErrorCode::ConfigError, "--algos must name at least one algorithm");
  const Scheme scheme = Scheme::from_name(args.scheme);
  for (Algo algo : algos)
    if (algo_is_gp(algo) && scheme.kind != SchemeKind::Horst)
      raise(ErrorCode::UnsupportedScheme,
            std::string(algo_name(algo)) + " requires the horst scheme, got " + args.scheme);

  GenSpec spec = GenSpec::defaults();
  spec.n = args.gen.n;
  spec.dims.clear();
  for (std::int64_t p : parse_int_list(args.gen.dims, "dims")) spec.dims.push_back(p);
  spec.support_size = args.gen.support;
  spec.loading_min = args.gen.loading_min;
  spec.loading_max = args.gen.loading_max;
  spec.noise_var = args.gen.noise_var;
  if (!args.gen.u_cov.empty()) {
    const auto J = static_cast<Index>(spec.dims.size());
    const std::vector<double> entries = parse_double_list(args.gen.u_cov, "u-cov");
    if (static_cast<Index>(entries.size()) != J * J)
      raise(ErrorCode::ConfigError, "u-cov needs " + std::to_string(J * J) + " entries");
    spec.u_cov.resize(J, J);
    for (Index r = 0; r < J; ++r)
      for (Index c = 0; c < J; ++c) spec.u_cov(r, c) = entries[r * J + c];
  } else if (spec.dims.size() != 3) {
    raise(ErrorCode::ConfigError, "--u-cov is required when the block count is not 3");
  }

  const std::vector<double> sparsity = parse_double_list(args.sparsity, "sparsity");
  if (sparsity.size() != spec.dims.size())
    raise(ErrorCode::ConfigError, "sparsity length must match the block count");

  const std::size_t J = spec.dims.size();
  struct Accumulator {
    std::vector<double> sens, spec;
    double total_time = 0.0;
  };
  std::vector<Accumulator> acc(algos.size());
  for (auto& a : acc) {
    a.sens.assign(J, 0.0);
    a.spec.assign(J, 0.0);
  }

  // Same data and the same init stream for every algorithm at each repeat.
  for (std::int64_t rep = 0; rep < args.repeats; ++rep) {
    GenSpec rep_spec = spec;
    rep_spec.seed = args.seed + static_cast<std::uint64_t>(rep);
    auto [blocks, truth] = generate(rep_spec);
    const DesignGraph design = load_design(args.design, blocks.count());
    RunOptions options = make_run_options("bcd3", args.tol, args.max_iters, 0);
    options.seed = derive_seed(rep_spec.seed, 1);
    for (std::size_t a = 0; a < algos.size(); ++a) {
      const SolverReport report = run_algo(blocks, design, algos[a], scheme, sparsity, options);
      acc[a].total_time += report.wall_time_s;
      for (std::size_t j = 0; j < J; ++j) {
        acc[a].sens[j] += sensitivity(report.final_state.a[j], truth.loadings[j]);
        acc[a].spec[j] += specificity(report.final_state.a[j], truth.loadings[j]);
      }
    }
  }

  std::optional<double> baseline_avg;
  for (std::size_t a = 0; a < algos.size(); ++a)
    if (algos[a] == Algo::Baseline)
      baseline_avg = acc[a].total_time / static_cast<double>(args.repeats);

  std::ostringstream table;
  table << "algo";
  for (std::size_t j = 1; j <= J; ++j) table << ",sens_" << j;
  for (std::size_t j = 1; j <= J; ++j) table << ",spec_" << j;
  table << ",total_time_s,avg_time_s,speedup_vs_baseline_pct\n";
  for (std::size_t a = 0; a < algos.size(); ++a) {
    const double reps = static_cast<double>(args.repeats);
    table << algo_name(algos[a]);
    for (std::size_t j = 0; j < J; ++j) table << ',' << format_g9(acc[a].sens[j] / reps);
    for (std::size_t j = 0; j < J; ++j) table << ',' << format_g9(acc[a].spec[j] / reps);
    const double avg = acc[a].total_time / reps;
    table << ',' << format_g9(acc[a].total_time) << ',' << format_g9(avg) << ',';
    if (baseline_avg && algos[a] != Algo::Baseline)
      table << format_g9((*baseline_avg - avg) / *baseline_avg * 100.0);
    table << '\n';
  }

  if (args.out.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(args.out);
    if (!out) raise(ErrorCode::IoError, "cannot open '" + args.out + "' for writing");
    out << table.str();
  }
  return 0;
}

// ---------------------------------------------------------------------------
// grid

struct GridArgs {
  std::string blocks;
  std::string design;
  std::string algo = "bcd3";
  std::string scheme = "horst";
  std::vector<std::string> grids;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::int64_t max_iters = 0;
  bool standardize = false;
  std::string ground_truth;
  std::string out;
};

int run_grid(const GridArgs& args) {
  const Algo algo = algo_from_name(args.algo);
  const Scheme scheme = Scheme::from_name(args.scheme);
  if (algo_is_gp(algo) && scheme.kind != SchemeKind::Horst)
    raise(ErrorCode::UnsupportedScheme,
          args.algo + " requires the horst scheme, got " + args.scheme);

  const std::vector<fs::path> paths = parse_paths(args.blocks);
  if (paths.empty()) raise(ErrorCode::ConfigError, "--blocks is required");
  if (args.design.empty()) raise(ErrorCode::ConfigError, "--design is required");
  const BlockSet blocks = load_blocks(paths, args.standardize);
  const DesignGraph design = load_design(args.design, blocks.count());

  // Candidate lists: one --grid per block, or one semicolon-joined string.
  std::vector<std::string> lists = args.grids;
  if (lists.size() == 1 && lists.front().find(';') != std::string::npos)
    lists = split(lists.front(), ';');
  if (lists.size() != blocks.count())
    raise(ErrorCode::ConfigError,
          "expected " + std::to_string(blocks.count()) + " --grid lists, got " +
              std::to_string(lists.size()));
  std::vector<std::vector<double>> grids;
  for (const std::string& list : lists) grids.push_back(parse_double_list(list, "grid"));

  GridSearchOptions options;
  options.run = make_run_options(args.algo, args.tol, args.max_iters, args.seed);

  std::function<double(const SolverReport&)> score;
  std::vector<Vector> truth;
  if (!args.ground_truth.empty()) {
    truth = load_ground_truth(args.ground_truth, blocks);
    score = [&truth](const SolverReport& report) {
      double total = 0.0;
      for (std::size_t j = 0; j < truth.size(); ++j)
        total += 0.5 * (sensitivity(report.final_state.a[j], truth[j]) +
                        specificity(report.final_state.a[j], truth[j]));
      return total / static_cast<double>(truth.size());
    };
  } else {
    score = [](const SolverReport& report) { return report.objective_trace.back(); };
  }

  const GridSearchResult result = grid_search(blocks, design, algo, scheme, grids, score, options);

  KeyValueDoc doc;
  doc.set("command", "grid");
  doc.set("algo", args.algo);
  doc.set("scheme", args.scheme);
  doc.set("blocks", args.blocks);
  doc.set("design", args.design);
  doc.set_bool("standardize", args.standardize);
  doc.set_uint("seed", args.seed);
  for (std::size_t j = 0; j < grids.size(); ++j)
    doc.set("grid_" + std::to_string(j + 1), join_g9(grids[j]));
  doc.set("score", args.ground_truth.empty() ? "objective" : "mean_sensitivity_specificity");
  if (!args.ground_truth.empty()) doc.set("ground_truth", args.ground_truth);
  doc.set("best_sparsity", join_g9(result.sparsity));
  doc.set_double("best_score", result.score);
  doc.set_uint("evaluations", result.evaluations);
  emit_document(doc, args.out);
  return 0;
}

// ---------------------------------------------------------------------------
// config-file merge: entries become flags placed before the real command
// line, and every option takes the last occurrence.

std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) raise(ErrorCode::ConfigError, "--config needs a file path");
      config_path = args[++i];
      continue;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      continue;
    }
    out.push_back(args[i]);
  }
  if (config_path.empty()) return out;
  if (out.empty())
    raise(ErrorCode::ConfigError, "--config requires a subcommand");

  const KeyValueDoc doc = KeyValueDoc::parse_file(config_path);
  std::vector<std::string> merged;
  merged.push_back(out.front());  // subcommand first
  for (const auto& [key, value] : doc.entries()) {
    if (key == "grid") {
      for (const std::string& list : split(value, ';')) {
        merged.push_back("--grid");
        merged.push_back(list);
      }
      continue;
    }
    merged.push_back("--" + key);
    if (value == "true") {
      merged.back() += "=true";
    } else {
      merged.push_back(value);
    }
  }
  merged.insert(merged.end(), out.begin() + 1, out.end());
  return merged;
}

void add_take_last(CLI::App* cmd) {
  for (CLI::Option* option : cmd->get_options())
    if (option->get_expected_min() > 0 && option->get_items_expected_max() == 1)
      option->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse generalized canonical correlation toolkit"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate synthetic blocks with ground truth");
  gen->add_option("--out", gen_args.out, "output directory")->required();
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--n", gen_args.n, "sample count");
  gen->add_option("--dims", gen_args.dims, "comma list of block widths");
  gen->add_option("--support", gen_args.support, "nonzero loadings per block");
  gen->add_option("--loading-min", gen_args.loading_min, "loading magnitude lower edge");
  gen->add_option("--loading-max", gen_args.loading_max, "loading magnitude upper edge");
  gen->add_option("--noise-var", gen_args.noise_var, "residual variance");
  gen->add_option("--u-cov", gen_args.u_cov, "row-major latent covariance entries");

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "fit one solver on CSV blocks");
  fit->add_option("--blocks", fit_args.blocks, "comma list of block CSV files");
  fit->add_option("--design", fit_args.design, "design preset name or CSV file");
  fit->add_option("--algo", fit_args.algo, "baseline|bcd1|bcd2|bcd3|gp1|gp2|gp3");
  fit->add_option("--scheme", fit_args.scheme, "horst|centroid|factorial");
  fit->add_option("--sparsity", fit_args.sparsity, "comma list of l1 budgets");
  fit->add_option("--seed", fit_args.seed, "initialization seed");
  fit->add_option("--tol", fit_args.tol, "convergence tolerance");
  fit->add_option("--max-iters", fit_args.max_iters, "sweep/iteration cap");
  fit->add_flag("--standardize", fit_args.standardize, "standardize columns on load");
  fit->add_option("--ground-truth", fit_args.ground_truth, "truth CSV for support metrics");
  fit->add_option("--out", fit_args.out, "report path (also writes per-block coefficient CSVs)");

  ProjectArgs project_args;
  CLI::App* project = app.add_subcommand("project", "solve LM and projection for one vector");
  project->add_option("input", project_args.input, "vector file (numbers)")->required();
  project->add_option("--t", project_args.t, "l1 budget")->required();
  project->add_option("--variant", project_args.variant, "p1|p2|p3");
  project->add_option("--out", project_args.out, "report path");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "benchmark algorithms on generated data");
  bench->add_option("--algos", bench_args.algos, "comma list of algorithms");
  bench->add_option("--repeats", bench_args.repeats, "number of seeds");
  bench->add_option("--seed", bench_args.seed, "base seed");
  bench->add_option("--scheme", bench_args.scheme, "horst|centroid|factorial");
  bench->add_option("--design", bench_args.design, "design preset name or CSV file");
  bench->add_option("--sparsity", bench_args.sparsity, "comma list of l1 budgets");
  bench->add_option("--tol", bench_args.tol, "convergence tolerance");
  bench->add_option("--max-iters", bench_args.max_iters, "sweep/iteration cap");
  bench->add_option("--n", bench_args.gen.n, "sample count");
  bench->add_option("--dims", bench_args.gen.dims, "comma list of block widths");
  bench->add_option("--support", bench_args.gen.support, "nonzero loadings per block");
  bench->add_option("--loading-min", bench_args.gen.loading_min, "loading magnitude lower edge");
  bench->add_option("--loading-max", bench_args.gen.loading_max, "loading magnitude upper edge");
  bench->add_option("--noise-var", bench_args.gen.noise_var, "residual variance");
  bench->add_option("--u-cov", bench_args.gen.u_cov, "row-major latent covariance entries");
  bench->add_option("--out", bench_args.out, "table CSV path (default stdout)");

  GridArgs grid_args;
  CLI::App* grid = app.add_subcommand("grid", "grid-search sparsity budgets");
  grid->add_option("--blocks", grid_args.blocks, "comma list of block CSV files");
  grid->add_option("--design", grid_args.design, "design preset name or CSV file");
  grid->add_option("--algo", grid_args.algo, "algorithm to fit per candidate");
  grid->add_option("--scheme", grid_args.scheme, "horst|centroid|factorial");
  grid->add_option("--grid", grid_args.grids, "candidate list per block (repeat per block)");
  grid->add_option("--seed", grid_args.seed, "initialization seed");
  grid->add_option("--tol", grid_args.tol, "convergence tolerance");
  grid->add_option("--max-iters", grid_args.max_iters, "sweep/iteration cap");
  grid->add_flag("--standardize", grid_args.standardize, "standardize columns on load");
  grid->add_option("--ground-truth", grid_args.ground_truth, "truth CSV; scores support recovery");
  grid->add_option("--out", grid_args.out, "report path");

  for (CLI::App* cmd : {gen, fit, project, bench, grid}) add_take_last(cmd);

  try {
    std::vector<std::string> raw(argv + 1, argv + argc);
    const std::vector<std::string> merged = merge_config(raw);
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const std::string& arg : merged) cargs.push_back(arg.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());

    if (*gen) return run_gen(gen_args);
    if (*fit) return run_fit(fit_args);
    if (*project) return run_project(project_args);
    if (*bench) return run_bench(bench_args);
    if (*grid) return run_grid(grid_args);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: cli-usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 3;
  }
}
