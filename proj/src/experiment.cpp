#include "semcom/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace semcom {

namespace {

// Substream purposes: realization sampling is stream 0, each scheme's
// matching initialization gets its own stream.
constexpr std::uint64_t kRealizationStream = 0;

std::uint64_t scheme_stream(Scheme scheme) {
  switch (scheme) {
    case Scheme::kProposed: return 1;
    case Scheme::kFopg: return 2;
    case Scheme::kFodpg: return 3;
    case Scheme::kSuo: return 4;
  }
  return 5;
}

const ArchSpec& table_entry(const ModelTable& table, const std::string& arch) {
  const auto it = table.find(arch);
  if (it == table.end())
    throw std::runtime_error("model table has no architecture '" + arch + "'");
  return it->second;
}

ModelProfile make_profile(const ModelTable& table, const std::string& arch,
                          double intensity_cpf, int prompt_bits) {
  const ArchSpec& spec = table_entry(table, arch);
  const auto it = spec.cider_by_prompt_bits.find(prompt_bits);
  if (it == spec.cider_by_prompt_bits.end())
    throw std::runtime_error("model table has no CIDEr entry for (" + arch +
                             ", L_p=" + std::to_string(prompt_bits) + ")");
  return {arch, spec.flops, intensity_cpf, it->second};
}

template <typename T>
const T& pick_uniform(const std::vector<T>& pool, RandomSource& rng) {
  const auto idx = static_cast<std::size_t>(rng.uniform01() *
                                            static_cast<double>(pool.size()));
  return pool[std::min(idx, pool.size() - 1)];
}

SchemeOutcome run_scheme(Scheme scheme, const NetworkRealization& net,
                         const ScenarioConfig& config, int trial) {
  switch (scheme) {
    case Scheme::kProposed: {
      RandomSource rng(derive_stream(config.seed, trial, scheme_stream(scheme)));
      return run_proposed(net, config.solver, rng, config.slj_restarts);
    }
    case Scheme::kFopg:
      return run_fopg(net, config.solver);
    case Scheme::kFodpg:
      return run_fodpg(net, config.solver);
    case Scheme::kSuo: {
      RandomSource rng(derive_stream(config.seed, trial, scheme_stream(scheme)));
      return run_suo(net, config.solver, rng, config.slj_restarts);
    }
  }
  throw std::logic_error("unknown scheme");
}

}  // namespace

ModelTable default_model_table() {
  return {
      {"S/16", {9.2e9, {{400, 57.1}, {600, 65.9}}}},
      {"M/16", {16.0e9, {{400, 62.0}, {600, 71.4}}}},
      {"B/16", {35.1e9, {{400, 69.3}, {600, 80.5}}}},
      {"L/14", {161.8e9, {{400, 76.6}, {600, 89.3}}}},
  };
}

std::string validate_config(const ScenarioConfig& c) {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (c.n_pairs < 1) return "scenario.pairs must be >= 1";
  if (c.n_servers < 1) return "scenario.servers must be >= 1";
  if (c.server_capacity < 1) return "scenario.server_capacity must be >= 1";
  if (c.trials < 1) return "scenario.trials must be >= 1";
  if (c.slj_restarts < 1) return "scenario.slj_restarts must be >= 1";
  if (!positive(c.bandwidth_hz)) return "radio.bandwidth_hz must be positive";
  if (!std::isfinite(c.noise_psd_dbm_per_hz))
    return "radio.noise_psd_dbm_per_hz must be finite";
  if (!std::isfinite(c.tx_power_max_dbm))
    return "radio.tx_power_max_dbm must be finite";
  if (!std::isfinite(c.server_power_max_dbm))
    return "radio.server_power_max_dbm must be finite";
  if (!positive(c.rate_exponent_cap))
    return "radio.rate_exponent_cap must be positive";
  if (!positive(c.pathloss.reference_distance_m))
    return "pathloss.reference_distance_m must be positive";
  if (!positive(c.pathloss.exponent)) return "pathloss.exponent must be positive";
  for (const auto& [name, disc] :
       {std::pair<const char*, const Disc&>{"geometry.servers", c.server_disc},
        {"geometry.tx", c.tx_disc},
        {"geometry.rx", c.rx_disc}}) {
    if (disc.radius_m < 0.0 || !std::isfinite(disc.radius_m))
      return std::string(name) + ".radius_m must be non-negative";
  }
  if (!positive(c.intensity_cpf))
    return "compute.intensity_cycles_per_flop must be positive";
  if (!positive(c.kappa_eff)) return "compute.kappa_eff must be positive";
  if (!positive(c.device_energy_budget_j))
    return "compute.device_energy_budget_j must be positive";
  if (!positive(c.f_local_min_hz) || !positive(c.f_local_max_hz) ||
      c.f_local_min_hz > c.f_local_max_hz)
    return "compute.f_local range must be positive with min <= max";
  if (!positive(c.f_edge_min_hz) || !positive(c.f_edge_max_hz) ||
      c.f_edge_min_hz > c.f_edge_max_hz)
    return "compute.f_edge range must be positive with min <= max";
  if (!positive(c.source_bits)) return "task.source_bits must be positive";
  if (c.prompt_bits < 1) return "task.prompt_bits must be >= 1";
  if (static_cast<double>(c.prompt_bits) >= c.source_bits)
    return "task.prompt_bits must be smaller than task.source_bits";
  if (c.device_pool.empty()) return "models.device_pool must be non-empty";
  if (c.edge_pool.empty()) return "models.edge_pool must be non-empty";
  for (const auto& pool : {c.device_pool, c.edge_pool}) {
    for (const auto& arch : pool) {
      const auto it = c.model_table.find(arch);
      if (it == c.model_table.end())
        return "model table has no architecture '" + arch + "'";
      if (!positive(it->second.flops))
        return "models.arch." + arch + ".flops must be positive";
      const auto q = it->second.cider_by_prompt_bits.find(c.prompt_bits);
      if (q == it->second.cider_by_prompt_bits.end())
        return "model table has no CIDEr entry for (" + arch +
               ", L_p=" + std::to_string(c.prompt_bits) + ")";
      if (!positive(q->second))
        return "models.arch." + arch + ".cider must be positive";
    }
  }
  if (c.solver.phi_tolerance <= 0.0 || c.solver.dual_tolerance <= 0.0 ||
      c.solver.scalar_search_tolerance <= 0.0)
    return "solver tolerances must be positive";
  if (c.solver.max_iterations < 1) return "solver.max_iterations must be >= 1";
  return {};
}

NetworkRealization build_realization(const ScenarioConfig& config,
                                     RandomSource& rng) {
  NetworkRealization net;
  GeometryConfig geom_config{config.n_pairs, config.n_servers,
                             config.server_disc, config.tx_disc,
                             config.rx_disc};
  net.geometry = sample_geometry(geom_config, rng);
  net.gains = sample_gains(net.geometry, config.pathloss, rng);
  net.bandwidth_hz = config.bandwidth_hz;
  net.noise_w = noise_power_w(config.noise_psd_dbm_per_hz, config.bandwidth_hz);
  net.exponent_cap = config.rate_exponent_cap;

  const double p_max_w = dbm_to_watts(config.tx_power_max_dbm);
  const double p_hat_max_w = dbm_to_watts(config.server_power_max_dbm);

  std::vector<double> f_local(config.n_pairs);
  for (auto& f : f_local)
    f = rng.uniform(config.f_local_min_hz, config.f_local_max_hz);
  std::vector<double> f_edge(config.n_servers);
  for (auto& f : f_edge)
    f = rng.uniform(config.f_edge_min_hz, config.f_edge_max_hz);

  net.transmitters.resize(config.n_pairs);
  for (int n = 0; n < config.n_pairs; ++n) {
    const std::string& arch = pick_uniform(config.device_pool, rng);
    TransmitterProfile& tx = net.transmitters[n];
    tx.source_bits = config.source_bits;
    tx.prompt_bits = static_cast<double>(config.prompt_bits);
    tx.device = make_profile(config.model_table, arch, config.intensity_cpf,
                             config.prompt_bits);
    tx.p_max_w = p_max_w;
    tx.f_max_local_hz = f_local[n];
    tx.kappa_eff = config.kappa_eff;
    tx.e_max_j = config.device_energy_budget_j;
  }
  net.servers.resize(config.n_servers);
  for (int k = 0; k < config.n_servers; ++k) {
    const std::string& arch = pick_uniform(config.edge_pool, rng);
    ServerProfile& server = net.servers[k];
    server.edge = make_profile(config.model_table, arch, config.intensity_cpf,
                               config.prompt_bits);
    server.quality.assign(config.n_pairs, server.edge.quality);
    server.p_hat_max_w = p_hat_max_w;
    server.f_max_edge_hz = f_edge[k];
    server.capacity = config.server_capacity;
  }
  return net;
}

ExperimentResult run_trials(const ScenarioConfig& config,
                            const std::vector<Scheme>& schemes,
                            ExecutionMode mode) {
  const std::string error = validate_config(config);
  if (!error.empty()) throw std::invalid_argument(error);

  ExperimentResult result;
  result.schemes = schemes;
  result.records.resize(config.trials);

  auto run_one = [&](int trial) {
    RandomSource rng(derive_stream(config.seed, trial, kRealizationStream));
    const NetworkRealization net = build_realization(config, rng);
    TrialRecord record;
    record.trial = trial;
    record.outcomes.reserve(schemes.size());
    for (Scheme scheme : schemes)
      record.outcomes.push_back(run_scheme(scheme, net, config, trial));
    result.records[trial] = std::move(record);
  };

  if (mode == ExecutionMode::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (int trial = 0; trial < config.trials; ++trial) run_one(trial);
  } else {
    for (int trial = 0; trial < config.trials; ++trial) run_one(trial);
  }

  result.aggregates = aggregate_records(schemes, result.records);
  return result;
}

std::map<Scheme, SchemeAggregate> aggregate_records(
    const std::vector<Scheme>& schemes,
    const std::vector<TrialRecord>& records) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].trial < records[b].trial;
  });

  std::map<Scheme, SchemeAggregate> aggregates;
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    SchemeAggregate agg;
    agg.trials_total = static_cast<int>(records.size());
    double ccq_sum = 0.0;
    std::int64_t ccq_count = 0;
    for (std::size_t idx : order) {
      const SchemeOutcome& out = records[idx].outcomes[s];
      if (!out.feasible) continue;
      ++agg.trials_feasible;
      agg.mean_max_ccq += out.max_ccq;
      agg.max_max_ccq = std::max(agg.max_max_ccq, out.max_ccq);
      agg.mean_offloaded += out.offloaded;
      agg.mean_max_latency_s += out.max_latency_s;
      agg.mean_bottleneck_quality += out.bottleneck_quality;
      agg.mean_min_quality += out.min_quality;
      agg.mean_mean_quality += out.mean_quality;
      for (const auto& pair : out.outcomes) {
        ccq_sum += pair.ccq;
        ++ccq_count;
      }
    }
    if (agg.trials_feasible > 0) {
      const double t = agg.trials_feasible;
      agg.mean_max_ccq /= t;
      agg.mean_offloaded /= t;
      agg.mean_max_latency_s /= t;
      agg.mean_bottleneck_quality /= t;
      agg.mean_min_quality /= t;
      agg.mean_mean_quality /= t;
      agg.pair_ccq_mean = ccq_sum / static_cast<double>(ccq_count);
      double sq = 0.0;
      for (std::size_t idx : order) {
        const SchemeOutcome& out = records[idx].outcomes[s];
        if (!out.feasible) continue;
        for (const auto& pair : out.outcomes) {
          const double d = pair.ccq - agg.pair_ccq_mean;
          sq += d * d;
        }
      }
      agg.pair_ccq_variance = sq / static_cast<double>(ccq_count);
    }
    aggregates[schemes[s]] = agg;
  }
  return aggregates;
}

std::pair<double, double> fairness_stats(const std::vector<TrialRecord>& records,
                                         Scheme scheme) {
  std::size_t column = records.empty() ? 0 : records.front().outcomes.size();
  for (std::size_t s = 0; s < column; ++s) {
    if (records.front().outcomes[s].scheme != scheme) continue;
    const auto aggregates = aggregate_records({scheme}, [&] {
      std::vector<TrialRecord> filtered;
      filtered.reserve(records.size());
      for (const auto& r : records) {
        TrialRecord one;
        one.trial = r.trial;
        one.outcomes.push_back(r.outcomes[s]);
        filtered.push_back(std::move(one));
      }
      return filtered;
    }());
    const SchemeAggregate& agg = aggregates.at(scheme);
    if (agg.trials_feasible == 0)
      throw std::invalid_argument("fairness_stats: no feasible record");
    return {agg.pair_ccq_mean, agg.pair_ccq_variance};
  }
  throw std::invalid_argument("fairness_stats: scheme not present in records");
}

std::vector<SweepPoint> run_sweep(const std::vector<ScenarioConfig>& points,
                                  const std::vector<Scheme>& schemes,
                                  ExecutionMode mode) {
  std::vector<SweepPoint> result;
  result.reserve(points.size());
  for (const auto& config : points)
    result.push_back({config, run_trials(config, schemes, mode)});
  return result;
}

}  // namespace semcom
