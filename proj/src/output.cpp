#include "semcom/output.hpp"

#include <limits>
#include <ostream>

#include "json.hpp"

namespace semcom {

namespace {

nlohmann::json aggregate_json(const SchemeAggregate& agg) {
  return {
      {"trials", agg.trials_total},
      {"feasible_trials", agg.trials_feasible},
      {"infeasible_trials", agg.trials_total - agg.trials_feasible},
      {"mean_max_ccq", agg.mean_max_ccq},
      {"max_max_ccq", agg.max_max_ccq},
      {"mean_offloaded", agg.mean_offloaded},
      {"pair_ccq_mean", agg.pair_ccq_mean},
      {"pair_ccq_variance", agg.pair_ccq_variance},
      {"mean_max_latency_s", agg.mean_max_latency_s},
      {"mean_bottleneck_cider", agg.mean_bottleneck_quality},
      {"mean_min_cider", agg.mean_min_quality},
      {"mean_cider", agg.mean_mean_quality},
  };
}

nlohmann::json schemes_json(const ExperimentResult& result) {
  nlohmann::json out = nlohmann::json::object();
  for (Scheme scheme : result.schemes)
    out[scheme_name(scheme)] = aggregate_json(result.aggregates.at(scheme));
  return out;
}

nlohmann::json config_json(const ScenarioConfig& config) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : echo_config(config)) out[key] = value;
  return out;
}

}  // namespace

void write_results_csv(std::ostream& os, const ExperimentResult& result,
                       int n_pairs, int trial_offset, bool with_header) {
  if (with_header) {
    os << "trial,scheme,max_ccq,max_latency,min_cider,offloaded_count";
    for (int n = 0; n < n_pairs; ++n) os << ",ccq_" << n;
    os << "\n";
  }
  for (const TrialRecord& record : result.records) {
    for (std::size_t s = 0; s < result.schemes.size(); ++s) {
      const SchemeOutcome& out = record.outcomes[s];
      os << (record.trial + trial_offset) << ','
         << scheme_name(result.schemes[s]) << ',';
      if (out.feasible) {
        os << format_double(out.max_ccq) << ','
           << format_double(out.max_latency_s) << ','
           << format_double(out.min_quality) << ',' << out.offloaded;
        for (const auto& pair : out.outcomes)
          os << ',' << format_double(pair.ccq);
      } else {
        os << "nan,nan,nan,0";
        for (int n = 0; n < n_pairs; ++n) os << ",nan";
      }
      os << "\n";
    }
  }
}

void write_sweep_csv(std::ostream& os, const std::string& key,
                     const std::vector<SweepPoint>& points,
                     const std::vector<std::pair<std::string, double>>& values) {
  os << "key,value,scheme,trials,feasible_trials,mean_max_ccq,"
        "mean_max_latency,mean_offloaded,pair_ccq_mean,pair_ccq_variance,"
        "mean_bottleneck_cider,mean_min_cider\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ExperimentResult& result = points[i].result;
    for (Scheme scheme : result.schemes) {
      const SchemeAggregate& agg = result.aggregates.at(scheme);
      os << key << ',' << values[i].first << ',' << scheme_name(scheme) << ','
         << agg.trials_total << ',' << agg.trials_feasible << ','
         << format_double(agg.mean_max_ccq) << ','
         << format_double(agg.mean_max_latency_s) << ','
         << format_double(agg.mean_offloaded) << ','
         << format_double(agg.pair_ccq_mean) << ','
         << format_double(agg.pair_ccq_variance) << ','
         << format_double(agg.mean_bottleneck_quality) << ','
         << format_double(agg.mean_min_quality) << "\n";
    }
  }
}

std::string summary_json(const std::string& command,
                         const ScenarioConfig& config,
                         const ExperimentResult& result) {
  nlohmann::json out;
  out["version"] = kVersionString;
  out["command"] = command;
  out["seed"] = config.seed;
  out["config"] = config_json(config);
  out["schemes"] = schemes_json(result);
  return out.dump(2) + "\n";
}

std::string sweep_summary_json(const ScenarioConfig& base_config,
                               const std::string& key,
                               const std::vector<SweepPoint>& points) {
  nlohmann::json out;
  out["version"] = kVersionString;
  out["command"] = "sweep";
  out["seed"] = base_config.seed;
  out["config"] = config_json(base_config);
  out["sweep_key"] = key;
  nlohmann::json sweep = nlohmann::json::array();
  for (const SweepPoint& point : points) {
    nlohmann::json entry;
    entry["config"] = config_json(point.config);
    entry["schemes"] = schemes_json(point.result);
    sweep.push_back(std::move(entry));
  }
  out["sweep"] = std::move(sweep);
  return out.dump(2) + "\n";
}

}  // namespace semcom
