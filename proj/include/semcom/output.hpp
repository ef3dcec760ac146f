#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "semcom/config_io.hpp"

namespace semcom {

inline constexpr const char* kVersionString = "semcom 0.1.0";

/// results.csv: header then one row per (trial, scheme), trial-major:
///   trial,scheme,max_ccq,max_latency,min_cider,offloaded_count,ccq_0..ccq_{N-1}
/// Numbers use shortest round-trip decimal formatting; infeasible scheme rows
/// carry nan in the numeric fields. `trial_offset` shifts trial ids (used to
/// concatenate sweep points).
void write_results_csv(std::ostream& os, const ExperimentResult& result,
                       int n_pairs, int trial_offset = 0,
                       bool with_header = true);

/// sweep.csv: one aggregate row per (sweep point, scheme):
///   key,value,scheme,trials,feasible_trials,mean_max_ccq,mean_max_latency,
///   mean_offloaded,pair_ccq_mean,pair_ccq_variance,mean_bottleneck_cider,
///   mean_min_cider
void write_sweep_csv(std::ostream& os, const std::string& key,
                     const std::vector<SweepPoint>& points,
                     const std::vector<std::pair<std::string, double>>& values);

/// summary.json for a plain run or compare.
std::string summary_json(const std::string& command,
                         const ScenarioConfig& config,
                         const ExperimentResult& result);

/// summary.json for a sweep (per-point aggregates under "sweep").
std::string sweep_summary_json(const ScenarioConfig& base_config,
                               const std::string& key,
                               const std::vector<SweepPoint>& points);

}  // namespace semcom
