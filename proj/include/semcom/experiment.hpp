#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semcom/benchmarks.hpp"

namespace semcom {

/// One M/VLM architecture row: workload plus CIDEr per prompt length.
struct ArchSpec {
  double flops = 0.0;
  std::map<int, double> cider_by_prompt_bits;

  bool operator==(const ArchSpec&) const = default;
};

using ModelTable = std::map<std::string, ArchSpec>;

/// Built-in captioning-model profiles: S/16, M/16, B/16, L/14 with CIDEr
/// scores at prompt lengths 400 and 600 bits.
ModelTable default_model_table();

/// Full experiment parameterization. Defaults reproduce the reference
/// scenario: N=K=4, capacity 3, B=2 MHz, -174 dBm/Hz, 20/30 dBm power caps,
/// kappa=1e-27, 0.9 J budget, discs (250,250)/200, (0,0)/100, (0,400)/100.
struct ScenarioConfig {
  int n_pairs = 4;
  int n_servers = 4;
  int server_capacity = 3;
  int trials = 200;
  std::uint64_t seed = 1;
  int slj_restarts = 1;

  double bandwidth_hz = 2e6;
  double noise_psd_dbm_per_hz = -174.0;
  double tx_power_max_dbm = 20.0;
  double server_power_max_dbm = 30.0;
  double rate_exponent_cap = 60.0;

  PathLossConfig pathloss;
  Disc server_disc{{250.0, 250.0}, 200.0};
  Disc tx_disc{{0.0, 0.0}, 100.0};
  Disc rx_disc{{0.0, 400.0}, 100.0};

  double intensity_cpf = 0.01;
  double kappa_eff = 1e-27;
  double device_energy_budget_j = 0.9;
  double f_local_min_hz = 3e9;
  double f_local_max_hz = 6e9;
  double f_edge_min_hz = 11e9;
  double f_edge_max_hz = 14e9;

  double source_bits = 2e4;
  int prompt_bits = 400;
  std::vector<std::string> device_pool{"S/16", "M/16"};
  std::vector<std::string> edge_pool{"B/16", "L/14"};
  ModelTable model_table = default_model_table();

  SolverSettings solver;

  bool operator==(const ScenarioConfig&) const = default;
};

inline bool operator==(const SolverSettings& a, const SolverSettings& b) {
  return a.phi_tolerance == b.phi_tolerance &&
         a.dual_tolerance == b.dual_tolerance &&
         a.max_iterations == b.max_iterations &&
         a.scalar_search_tolerance == b.scalar_search_tolerance;
}

/// Empty string when valid, else a message naming the offending field.
std::string validate_config(const ScenarioConfig& config);

/// Samples one fading block: geometry, gains, per-transmitter frequency cap
/// and device architecture, per-server frequency cap and edge architecture,
/// with Table values attached for the configured prompt length. Throws
/// std::runtime_error naming the (architecture, prompt length) pair when the
/// model table has no entry for it.
NetworkRealization build_realization(const ScenarioConfig& config,
                                     RandomSource& rng);

struct TrialRecord {
  int trial = 0;
  std::vector<SchemeOutcome> outcomes;  // parallel to requested schemes
};

struct SchemeAggregate {
  int trials_total = 0;
  int trials_feasible = 0;
  double mean_max_ccq = 0.0;
  double max_max_ccq = 0.0;
  double mean_offloaded = 0.0;
  double pair_ccq_mean = 0.0;
  double pair_ccq_variance = 0.0;  // population variance, pooled pairs*trials
  double mean_max_latency_s = 0.0;
  double mean_bottleneck_quality = 0.0;
  double mean_min_quality = 0.0;
  double mean_mean_quality = 0.0;
};

struct ExperimentResult {
  std::vector<Scheme> schemes;
  std::vector<TrialRecord> records;
  std::map<Scheme, SchemeAggregate> aggregates;
};

enum class ExecutionMode { kSerial, kParallel };

/// Monte-Carlo loop: one fresh realization per trial (independent substreams
/// of the master seed), every requested scheme run on it. The parallel mode
/// distributes trials over OpenMP threads and is bit-identical to the serial
/// reference: records land in trial order and aggregation is a deterministic
/// reduction.
ExperimentResult run_trials(const ScenarioConfig& config,
                            const std::vector<Scheme>& schemes,
                            ExecutionMode mode = ExecutionMode::kSerial);

/// Aggregates recomputed from records (sorted by trial id first, so the
/// result is invariant to record order). Infeasible trials are counted and
/// excluded from the means.
std::map<Scheme, SchemeAggregate> aggregate_records(
    const std::vector<Scheme>& schemes,
    const std::vector<TrialRecord>& records);

/// Pooled per-pair CCQ mean and population variance for one scheme. Throws
/// std::invalid_argument when no feasible record exists.
std::pair<double, double> fairness_stats(const std::vector<TrialRecord>& records,
                                         Scheme scheme);

struct SweepPoint {
  ScenarioConfig config;
  ExperimentResult result;
};

/// Runs the trial loop for each pre-built configuration point.
std::vector<SweepPoint> run_sweep(const std::vector<ScenarioConfig>& points,
                                  const std::vector<Scheme>& schemes,
                                  ExecutionMode mode = ExecutionMode::kSerial);

}  // namespace semcom
