#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grid_oracles.hpp"
#include "semcom/config_io.hpp"
#include "semcom/matching.hpp"
#include "semcom/output.hpp"

namespace {

// Exit codes (also documented in the README):
//   0 success, 1 runtime failure, 2 missing config file, 3 config parse
//   error, 4 unknown config key, 5 value out of range, 6 bad flags or
//   unknown scheme/sweep, 7 output write failure.
enum ExitCode {
  kOk = 0,
  kRuntime = 1,
  kMissingFile = 2,
  kParseError = 3,
  kUnknownKey = 4,
  kRangeError = 5,
  kUsage = 6,
  kOutputError = 7,
};

int exit_code_for(const semcom::ConfigError& e) {
  switch (e.kind) {
    case semcom::ConfigErrorKind::kMissingFile: return kMissingFile;
    case semcom::ConfigErrorKind::kParse: return kParseError;
    case semcom::ConfigErrorKind::kUnknownKey: return kUnknownKey;
    case semcom::ConfigErrorKind::kRange: return kRangeError;
  }
  return kRuntime;
}

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
};

semcom::ScenarioConfig load_config(const CommonOptions& options) {
  semcom::ScenarioConfig config;
  if (!options.config_path.empty())
    config = semcom::parse_config_file(options.config_path);
  if (options.seed) config.seed = *options.seed;
  if (options.trials) config.trials = *options.trials;
  const std::string error = semcom::validate_config(config);
  if (!error.empty())
    throw semcom::ConfigError(semcom::ConfigErrorKind::kRange, error);
  return config;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path.string());
  out << body;
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
}

std::filesystem::path ensure_out_dir(const std::string& dir) {
  std::filesystem::path path(dir);
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec && !std::filesystem::is_directory(path))
    throw std::ios_base::failure("cannot create output directory " + dir);
  return path;
}

std::vector<semcom::Scheme> schemes_for(const std::string& name) {
  if (name == "all")
    return {semcom::Scheme::kProposed, semcom::Scheme::kFopg,
            semcom::Scheme::kFodpg, semcom::Scheme::kSuo};
  const auto scheme = semcom::scheme_from_name(name);
  if (!scheme) throw CLI::ValidationError("--scheme", "unknown scheme " + name);
  return {*scheme};
}

int cmd_run(const CommonOptions& options, const std::string& scheme_name) {
  const semcom::ScenarioConfig config = load_config(options);
  const auto schemes = schemes_for(scheme_name);
  const auto result =
      semcom::run_trials(config, schemes, semcom::ExecutionMode::kParallel);

  const auto out_dir = ensure_out_dir(options.out_dir);
  std::ostringstream csv;
  semcom::write_results_csv(csv, result, config.n_pairs);
  write_file(out_dir / "results.csv", csv.str());
  write_file(out_dir / "summary.json",
             semcom::summary_json("run", config, result));

  for (semcom::Scheme scheme : schemes) {
    const auto& agg = result.aggregates.at(scheme);
    std::printf("%-9s mean max-CCQ %.6g  mean max-latency %.6g s  "
                "offloaded %.2f  infeasible %d/%d\n",
                semcom::scheme_name(scheme).c_str(), agg.mean_max_ccq,
                agg.mean_max_latency_s, agg.mean_offloaded,
                agg.trials_total - agg.trials_feasible, agg.trials_total);
  }
  return kOk;
}

int cmd_sweep(const CommonOptions& options, const std::string& sweep_spec) {
  const auto eq = sweep_spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= sweep_spec.size())
    throw CLI::ValidationError("--sweep", "expected KEY=v1,v2,...");
  const std::string key = sweep_spec.substr(0, eq);
  std::vector<std::string> values;
  {
    std::stringstream ss(sweep_spec.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(item);
  }
  if (values.empty())
    throw CLI::ValidationError("--sweep", "no values given");

  const semcom::ScenarioConfig base = load_config(options);
  std::vector<semcom::ScenarioConfig> points;
  std::vector<std::pair<std::string, double>> labels;
  for (const std::string& value : values) {
    semcom::ScenarioConfig point = base;
    semcom::apply_config_key(point, key, value);
    const std::string error = semcom::validate_config(point);
    if (!error.empty())
      throw semcom::ConfigError(semcom::ConfigErrorKind::kRange, error);
    points.push_back(point);
    labels.emplace_back(value, std::strtod(value.c_str(), nullptr));
  }

  const auto schemes = schemes_for("all");
  const auto sweep =
      semcom::run_sweep(points, schemes, semcom::ExecutionMode::kParallel);

  const auto out_dir = ensure_out_dir(options.out_dir);
  std::ostringstream results_csv;
  for (std::size_t i = 0; i < sweep.size(); ++i)
    semcom::write_results_csv(results_csv, sweep[i].result, base.n_pairs,
                              static_cast<int>(i) * base.trials, i == 0);
  write_file(out_dir / "results.csv", results_csv.str());
  std::ostringstream sweep_csv;
  semcom::write_sweep_csv(sweep_csv, key, sweep, labels);
  write_file(out_dir / "sweep.csv", sweep_csv.str());
  write_file(out_dir / "summary.json",
             semcom::sweep_summary_json(base, key, sweep));

  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& agg = sweep[i].result.aggregates.at(semcom::Scheme::kProposed);
    std::printf("%s=%s  proposed mean max-CCQ %.6g\n", key.c_str(),
                labels[i].first.c_str(), agg.mean_max_ccq);
  }
  return kOk;
}

int cmd_compare(const CommonOptions& options) {
  const semcom::ScenarioConfig config = load_config(options);
  const auto schemes = schemes_for("all");
  const auto result =
      semcom::run_trials(config, schemes, semcom::ExecutionMode::kParallel);

  const auto out_dir = ensure_out_dir(options.out_dir);
  std::ostringstream csv;
  semcom::write_results_csv(csv, result, config.n_pairs);
  write_file(out_dir / "results.csv", csv.str());
  write_file(out_dir / "summary.json",
             semcom::summary_json("compare", config, result));

  std::printf("%-9s %14s %18s %14s\n", "scheme", "mean CIDEr*",
              "mean latency* (s)", "mean max-CCQ");
  for (semcom::Scheme scheme : schemes) {
    const auto& agg = result.aggregates.at(scheme);
    std::printf("%-9s %14.4g %18.4g %14.4g\n",
                semcom::scheme_name(scheme).c_str(),
                agg.mean_bottleneck_quality, agg.mean_max_latency_s,
                agg.mean_max_ccq);
  }
  std::printf("* CIDEr of the max-CCQ pair, averaged over feasible trials\n");
  return kOk;
}

int cmd_oracle_check(const CommonOptions& options) {
  using namespace semcom;
  const std::uint64_t seed = options.seed.value_or(1);
  SolverSettings settings;
  int failures = 0;

  {  // inner solver vs exhaustive grid on small random instances
    RandomSource rng(derive_stream(seed, 0, 100));
    int compared = 0;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto inst = oracles::random_small_instance(rng, 2, 1);
      const InnerSolution sol =
          solve_inner(inst.assignment, inst.net, settings);
      const double oracle = oracles::assignment_minmax_ccq_grid(
          inst.assignment, inst.net, {300, 1e4, 2});
      if (sol.status != SolveStatus::kOptimal) continue;
      ++compared;
      worst = std::max(worst, std::abs(sol.utility - oracle) / oracle);
    }
    const bool ok = compared >= 15 && worst <= 0.015;
    std::printf("[%s] inner solver vs grid oracle: %d instances, worst %.3g\n",
                ok ? "PASS" : "FAIL", compared, worst);
    if (!ok) ++failures;
  }
  {  // slj vs enumeration on small reference realizations
    ScenarioConfig config;
    config.n_pairs = 3;
    config.n_servers = 3;
    config.seed = seed;
    int stable = 0, dominated = 0;
    const int realizations = 5;
    for (int t = 0; t < realizations; ++t) {
      RandomSource rng(derive_stream(config.seed, t, 0));
      const NetworkRealization net = build_realization(config, rng);
      RandomSource slj_rng(derive_stream(config.seed, t, 1));
      const SljResult slj = slj_match(net, settings, slj_rng);
      AssignmentEvaluator evaluator(net, settings);
      if (slj.stable && is_two_sided_stable(slj.matching, evaluator)) ++stable;
      const auto oracle = enumerate_optimal(net, settings);
      if (oracle &&
          oracle->matching.utility <= slj.matching.utility * (1.0 + 1e-12))
        ++dominated;
    }
    const bool ok = stable == realizations && dominated == realizations;
    std::printf("[%s] slj stability and enumeration dominance: %d/%d stable, "
                "%d/%d dominated\n",
                ok ? "PASS" : "FAIL", stable, realizations, dominated,
                realizations);
    if (!ok) ++failures;
  }
  return failures == 0 ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-device generative semantic communication simulator"};
  app.require_subcommand(1);

  CommonOptions options;
  std::string scheme = "all";
  std::string sweep_spec;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config_path, "scenario config file");
    cmd->add_option("--seed", options.seed, "master seed override");
    cmd->add_option("--trials", options.trials, "Monte-Carlo trials override");
    cmd->add_option("--out", options.out_dir, "output directory");
  };

  CLI::App* run = app.add_subcommand("run", "run trials for one or all schemes");
  add_common(run);
  run->add_option("--scheme", scheme, "proposed|fopg|fodpg|suo|all");

  CLI::App* sweep = app.add_subcommand("sweep", "vary one config key");
  add_common(sweep);
  sweep->add_option("--sweep", sweep_spec, "KEY=v1,v2,...")->required();

  CLI::App* compare =
      app.add_subcommand("compare", "per-scheme CIDEr/latency summary");
  add_common(compare);

  CLI::App* oracle =
      app.add_subcommand("oracle-check", "run the small-instance oracle suites");
  add_common(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (run->parsed()) return cmd_run(options, scheme);
    if (sweep->parsed()) return cmd_sweep(options, sweep_spec);
    if (compare->parsed()) return cmd_compare(options);
    if (oracle->parsed()) return cmd_oracle_check(options);
    return kUsage;
  } catch (const semcom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kOutputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
