#include "geoimpute/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "geoimpute/diagnostics.hpp"
#include "geoimpute/error.hpp"
#include "geoimpute/evaluation.hpp"
#include "geoimpute/imputer.hpp"
#include "geoimpute/io.hpp"
#include "geoimpute/simd.hpp"

namespace geoimpute {
namespace {

using nlohmann::ordered_json;

std::array<double, 5> parse_five(const std::string& text, const char* what) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) items.push_back(item);
  if (items.size() != 5) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " needs exactly five comma-separated values");
  }
  std::array<double, 5> out{};
  for (std::size_t i = 0; i < 5; ++i) {
    try {
      std::size_t used = 0;
      out[i] = std::stod(items[i], &used);
      if (used != items[i].size()) throw std::invalid_argument(items[i]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": '" + items[i] + "' is not a number");
    }
  }
  return out;
}

std::size_t parse_workers(const std::string& text) {
  if (text == "auto") return 0;
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used == text.size() && v >= 1) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, "--workers expects a positive integer or 'auto'");
}

DedupePolicy parse_dedupe(const std::string& text) {
  if (text == "reject") return DedupePolicy::Reject;
  if (text == "mean") return DedupePolicy::Mean;
  throw Error(ErrorCode::InvalidArgument, "--dedupe expects 'reject' or 'mean'");
}

void apply_simd(const std::string& text) {
  if (text == "auto") return;
  if (text == "scalar") return simd::set_active_level(simd::Level::Scalar);
  if (text == "avx2") return simd::set_active_level(simd::Level::Avx2);
  throw Error(ErrorCode::InvalidArgument, "--simd expects auto, scalar or avx2");
}

/// Options shared by the estimating subcommands.
struct EstimatorOptions {
  std::size_t k = 20;
  std::string levels;
  std::string power_levels;
  double snap_tolerance = 1e-12;
  std::string workers = "auto";
  std::string dedupe = "reject";

  void attach(CLI::App* app) {
    app->add_option("--k", k, "Neighbors per local dataset")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--levels", levels, "Shape-factor levels c1,c2,c3,c4,c5 (default: from point spacing)");
    app->add_option("--power-levels", power_levels, "AIDW exponents a1,...,a5")
        ->default_str("1,1.5,2,2.5,3");
    app->add_option("--snap-tolerance", snap_tolerance,
                    "Relative distance under which a query takes a known value")
        ->capture_default_str();
    app->add_option("--workers", workers, "Worker threads or 'auto'")->capture_default_str();
    app->add_option("--dedupe", dedupe, "Duplicate coordinates: reject or mean")->capture_default_str();
  }

  EstimatorSettings settings() const {
    EstimatorSettings s;
    s.n_loc = k;
    if (!levels.empty()) s.shape_levels = ShapeFactorLevels(parse_five(levels, "--levels"));
    if (!power_levels.empty()) s.power_levels = PowerLevels(parse_five(power_levels, "--power-levels"));
    s.snap_tolerance = snap_tolerance;
    return s;
  }
};

ordered_json levels_json(const std::array<double, 5>& v) { return ordered_json(v); }

int run_impute(const std::string& known_path, const std::string& targets_path, const std::string& method_name,
               const std::string& out_path, bool keep_going, bool diagnostics,
               const EstimatorOptions& opts, std::ostream& err) {
  const Method method = parse_method(method_name);
  LoadedData data = load_dataset(known_path, parse_dedupe(opts.dedupe));
  std::vector<QueryPoint> targets;
  if (!targets_path.empty()) {
    targets = load_targets(targets_path);
  } else if (!data.missing.empty()) {
    targets = data.missing;
  } else {
    throw Error(ErrorCode::InvalidArgument, "--targets is required unless --known is a grid with NODATA cells");
  }

  const ImputationContext ctx(data.known, opts.settings());
  const BatchResult batch =
      impute_batch(ctx, targets, method, BatchOptions{parse_workers(opts.workers), true});
  if (!batch.failures.empty()) {
    const auto& f = batch.failures.front();
    if (!keep_going) {
      throw Error(f.code, std::to_string(batch.failures.size()) + " targets failed; first at target " +
                              std::to_string(f.index) + ": " + f.message);
    }
    err << "geoimpute: warning: " << batch.failures.size() << " targets failed; first at target "
        << f.index << ": " << f.message << '\n';
  }

  OutputFile file(out_path);
  auto& out = file.stream();
  out << "x,y,value";
  if (diagnostics) out << ",mu,parameter,snapped";
  out << '\n';
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& e = batch.estimates[i];
    out << format_double(targets[i].x) << ',' << format_double(targets[i].y) << ','
        << format_double(e.value);
    if (diagnostics) {
      out << ',' << format_double(e.mu) << ',' << format_double(e.parameter) << ','
          << (e.snapped ? 1 : 0);
    }
    out << '\n';
  }
  file.commit();
  return kExitOk;
}

int run_split(const std::string& input, double fraction, std::uint64_t seed, const std::string& known_path,
              const std::string& missing_path, const std::string& dedupe) {
  const LoadedData data = load_dataset(input, parse_dedupe(dedupe));
  const HoldoutSplit split = holdout_split(data.known, fraction, seed);
  std::vector<SamplePoint> missing;
  missing.reserve(split.missing.size());
  for (std::size_t i = 0; i < split.missing.size(); ++i) {
    missing.push_back({split.missing[i].x, split.missing[i].y, split.truths[i]});
  }
  OutputFile known_file(known_path);
  OutputFile missing_file(missing_path);
  write_xyz(known_file.stream(), split.known.points());
  write_xyz(missing_file.stream(), missing);
  known_file.commit();
  missing_file.commit();
  return kExitOk;
}

void write_table(std::ostream& out, const EvaluationReport& r) {
  out << "hold-out: " << r.missing << " of " << r.total << " samples (fraction " << r.fraction
      << ", seed " << r.seed << "), k = " << r.k << ", workers = " << r.workers << '\n';
  out << "index build: " << std::fixed << std::setprecision(6) << r.index_build_seconds << " s\n";
  out << std::left << std::setw(8) << "method" << std::right << std::setw(18) << "rmse"
      << std::setw(14) << "seconds" << std::setw(10) << "points" << std::setw(10) << "failures" << '\n';
  for (const auto& row : r.results) {
    out << std::left << std::setw(8) << row.name << std::right << std::setw(18)
        << std::setprecision(9) << row.rmse << std::setw(14) << std::setprecision(6) << row.seconds
        << std::setw(10) << row.points << std::setw(10) << row.failures << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

int run_benchmark_cmd(const std::string& input, double fraction, std::uint64_t seed,
                      const std::vector<std::string>& method_names, const std::string& report_path,
                      const std::string& table_path, const std::string& estimates_path,
                      const EstimatorOptions& opts, const std::string& simd_name, std::ostream& out) {
  const LoadedData data = load_dataset(input, parse_dedupe(opts.dedupe));
  BenchmarkOptions bo;
  bo.fraction = fraction;
  bo.seed = seed;
  bo.methods.clear();
  for (const auto& m : method_names) bo.methods.push_back(parse_method(m));
  bo.settings = opts.settings();
  bo.workers = parse_workers(opts.workers);
  bo.keep_estimates = !estimates_path.empty();
  const EvaluationReport report = run_benchmark(data.known, bo);

  ordered_json j;
  j["command"] = "benchmark";
  j["input"] = input;
  j["dataset"] = {{"total", report.total}, {"known", report.known}, {"missing", report.missing}};
  ordered_json cfg;
  cfg["n_loc"] = bo.settings.n_loc;
  cfg["k"] = report.k;
  cfg["shape_levels"] = bo.settings.shape_levels ? levels_json(bo.settings.shape_levels->values())
                                                 : ordered_json("auto");
  cfg["resolved_shape_levels"] =
      report.shape_levels ? levels_json(report.shape_levels->values()) : ordered_json(nullptr);
  cfg["power_levels"] = levels_json(report.power_levels.values());
  cfg["snap_tolerance"] = bo.settings.snap_tolerance;
  cfg["workers"] = report.workers;
  cfg["seed"] = report.seed;
  cfg["holdout_fraction"] = report.fraction;
  cfg["dedupe"] = opts.dedupe;
  cfg["simd"] = simd_name == "auto" ? std::string(simd::to_string(simd::active_level())) : simd_name;
  j["config"] = cfg;
  j["index_build_seconds"] = report.index_build_seconds;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.results) {
    rows.push_back({{"method", row.name},
                    {"rmse", row.rmse},
                    {"seconds", row.seconds},
                    {"points", row.points},
                    {"failures", row.failures},
                    {"ill_conditioned", row.ill_conditioned}});
  }
  j["results"] = rows;

  std::optional<OutputFile> estimates;
  if (!estimates_path.empty()) {
    estimates.emplace(estimates_path);
    auto& e = estimates->stream();
    e << "x,y,truth";
    for (const auto& row : report.results) e << ',' << row.name;
    e << '\n';
    for (std::size_t i = 0; i < report.missing_points.size(); ++i) {
      e << format_double(report.missing_points[i].x) << ',' << format_double(report.missing_points[i].y)
        << ',' << format_double(report.truths[i]);
      for (const auto& row : report.results) e << ',' << format_double(row.estimates[i]);
      e << '\n';
    }
  }

  OutputFile report_file(report_path);
  report_file.stream() << j.dump(2) << '\n';
  std::optional<OutputFile> table_file;
  if (!table_path.empty()) {
    table_file.emplace(table_path);
    write_table(table_file->stream(), report);
  }
  if (estimates) estimates->commit();
  report_file.commit();
  if (table_file) {
    table_file->commit();
  } else {
    write_table(out, report);
  }
  return kExitOk;
}

int run_synth(const std::string& kind, std::size_t n, std::uint64_t seed, double extent,
              const std::string& out_path) {
  const SampleSet set = synth_surface(parse_surface_spec(kind), extent, n, seed);
  OutputFile file(out_path);
  write_xyz(file.stream(), set.points());
  file.commit();
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Usage: return kExitUsage;
    case ErrorCategory::Numerical: return kExitNumerical;
    case ErrorCategory::Data: return kExitData;
  }
  return kExitData;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive multiquadric RBF imputation of scattered geographic data"};
  app.require_subcommand(1);
  std::string simd_name = "auto";
  app.add_option("--simd", simd_name, "Kernel level: auto, scalar or avx2")->capture_default_str();

  // impute
  auto* impute = app.add_subcommand("impute", "Estimate values at target locations");
  std::string known, targets, method = "rbf", out_path;
  bool keep_going = false, no_diagnostics = false;
  EstimatorOptions impute_opts;
  impute->add_option("--known", known, "Known samples (XYZ text or ESRI ASCII grid)")->required();
  impute->add_option("--targets", targets, "Target locations x,y (default: grid NODATA cells)");
  impute->add_option("--method", method, "rbf, knn or aidw")->capture_default_str();
  impute->add_option("--out", out_path, "Output CSV")->required();
  impute->add_flag("--keep-going", keep_going, "Write NaN for failed targets instead of aborting");
  impute->add_flag("--no-diagnostics", no_diagnostics, "Omit the mu, parameter and snapped columns");
  impute_opts.attach(impute);

  // split
  auto* split = app.add_subcommand("split", "Seeded hold-out split");
  std::string split_input, out_known, out_missing, split_dedupe = "reject";
  double split_fraction = 0.1;
  std::uint64_t split_seed = 0;
  split->add_option("--input", split_input, "Samples (XYZ text or ESRI ASCII grid)")->required();
  split->add_option("--fraction", split_fraction, "Fraction held out as missing")->capture_default_str();
  split->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
  split->add_option("--out-known", out_known, "Known part (XYZ)")->required();
  split->add_option("--out-missing", out_missing, "Held-out part with true values (XYZ)")->required();
  split->add_option("--dedupe", split_dedupe, "Duplicate coordinates: reject or mean")->capture_default_str();

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Hold-out RMSE and timing of the estimators");
  std::string bench_input, report_path, table_path, estimates_path;
  double bench_fraction = 0.1;
  std::uint64_t bench_seed = 0;
  std::vector<std::string> methods = {"rbf", "knn", "aidw"};
  EstimatorOptions bench_opts;
  bench->add_option("--input", bench_input, "Samples (XYZ text or ESRI ASCII grid)")->required();
  bench->add_option("--fraction", bench_fraction, "Fraction held out as missing")->capture_default_str();
  bench->add_option("--seed", bench_seed, "Shuffle seed")->capture_default_str();
  bench->add_option("--methods", methods, "Estimators to compare")->delimiter(',')->capture_default_str();
  bench->add_option("--report", report_path, "Machine-readable JSON report")->required();
  bench->add_option("--table", table_path, "Write the human-readable table here instead of stdout");
  bench->add_option("--estimates", estimates_path, "Per-point estimates CSV");
  bench_opts.attach(bench);

  // synth
  auto* synth = app.add_subcommand("synth", "Sample an analytic test surface");
  std::string kind = "hills", synth_out;
  std::size_t n = 10000;
  std::uint64_t synth_seed = 0;
  double extent = 1000.0;
  synth->add_option("--kind", kind, "hills, constant[:v] or ramp[:a,b]")->capture_default_str();
  synth->add_option("--n", n, "Number of points")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Placement seed")->capture_default_str();
  synth->add_option("--extent", extent, "Side of the square domain")->capture_default_str();
  synth->add_option("--out", synth_out, "Output XYZ")->required();

  std::vector<char*> argv;
  std::vector<std::string> storage(args);
  if (storage.empty()) storage.emplace_back("geoimpute");
  for (auto& a : storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const WarningHandler previous = set_warning_handler(
      [&err](std::string_view msg) { err << "geoimpute: warning: " << msg << '\n'; });
  struct Restore {
    WarningHandler h;
    ~Restore() { set_warning_handler(std::move(h)); }
  } restore{previous};

  const simd::Level level_before = simd::active_level();
  struct RestoreLevel {
    simd::Level level;
    ~RestoreLevel() { simd::set_active_level(level); }
  } restore_level{level_before};

  try {
    apply_simd(simd_name);
    if (*impute) {
      return run_impute(known, targets, method, out_path, keep_going, !no_diagnostics, impute_opts, err);
    }
    if (*split) {
      return run_split(split_input, split_fraction, split_seed, out_known, out_missing, split_dedupe);
    }
    if (*bench) {
      return run_benchmark_cmd(bench_input, bench_fraction, bench_seed, methods, report_path, table_path,
                               estimates_path, bench_opts, simd_name, out);
    }
    if (*synth) return run_synth(kind, n, synth_seed, extent, synth_out);
  } catch (const Error& e) {
    err << "geoimpute: error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "geoimpute: error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace geoimpute
