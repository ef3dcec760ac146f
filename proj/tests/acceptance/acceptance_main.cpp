// Acceptance suite: each criterion prints one [PASS]/[FAIL] line (plus
// indented details) and the process exits non-zero if any requested
// criterion fails. Run all with no arguments or one with --criterion N.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "grid_oracles.hpp"
#include "semcom/matching.hpp"
#include "semcom/output.hpp"

using namespace semcom;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Checker {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      notes.push_back(what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

void report(int criterion, const char* title, const Checker& checker) {
  std::printf("[%s] criterion %d: %s\n", checker.ok ? "PASS" : "FAIL",
              criterion, title);
  for (const auto& note : checker.notes)
    std::printf("        %s\n", note.c_str());
  std::fflush(stdout);
}

bool close_rel(double value, double expected, double rel) {
  return std::abs(value - expected) <= rel * std::abs(expected);
}

// ---------------------------------------------------------------------------
// 1. Formula fidelity: closed-form operations hit the hand-derived values.
bool criterion1() {
  Checker c;
  const ModelProfile s16{"S/16", 9.2e9, 0.01, 57.1};
  const ModelProfile l14{"L/14", 161.8e9, 0.01, 76.6};

  c.expect(close_rel(local_compute_latency(s16, 9.2e9), 0.01, 1e-10),
           "local latency S/16 at 9.2 GHz");
  c.expect(close_rel(local_compute_latency(l14, 12e9), 1.618e9 / 12e9, 1e-10),
           "local latency L/14 at 12 GHz");
  c.expect(close_rel(local_compute_energy(s16, 3e9, 1e-27), 0.828, 1e-10),
           "local energy at 3 GHz");
  c.expect(close_rel(local_compute_energy(s16, 9e9, 1e-27), 7.452, 1e-10),
           "local energy at 9 GHz");

  const Link unit{1.0, 1.0, 2e6, 60.0};
  c.expect(close_rel(shannon_rate(1023.0, unit), 2e7, 1e-10),
           "rate at SNR 1023");
  c.expect(close_rel(shannon_rate(1.0, unit), 2e6, 1e-10), "rate at SNR 1");
  const auto p = power_for_latency(400.0, 2e-4, unit);
  c.expect(p && close_rel(*p, 1.0, 1e-10), "power at unit exponent");

  c.expect(close_rel(noise_power_w(-174.0, 2e6), std::pow(10.0, -20.4) * 2e6,
                     1e-10),
           "noise at -174 dBm/Hz x 2 MHz");
  c.expect(close_rel(noise_power_w(-30.0, 1.0), 1e-6, 1e-10),
           "noise at -30 dBm/Hz x 1 Hz");
  c.expect(close_rel(noise_power_w(-174.0, 1.0), std::pow(10.0, -20.4), 1e-10),
           "noise at -174 dBm/Hz x 1 Hz");

  c.expect(close_rel(path_loss(10.0, 10.0, 2.7), std::pow(2.0, -2.7), 1e-10),
           "path loss at d = d0");
  c.expect(close_rel(path_loss(990.0, 10.0, 2.7), std::pow(10.0, -5.4), 1e-10),
           "path loss at d = 99 d0");

  report(1, "formula fidelity (rel err <= 1e-10)", c);
  return c.ok;
}

// ---------------------------------------------------------------------------
// 2. Inner solver within 1.5% of the exhaustive grid oracle on 200 random
// N=2, K=1 instances (grids >= 300 points per dimension, log-spaced).
bool criterion2() {
  Checker c;
  SolverSettings settings;
  RandomSource rng(20240901);
  const oracles::GridSpec grid{300, 1e4, 2};
  int compared = 0, infeasible = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto inst = oracles::random_small_instance(rng, 2, 1);
    const InnerSolution sol = solve_inner(inst.assignment, inst.net, settings);
    if (sol.status != SolveStatus::kOptimal) {
      ++infeasible;
      continue;
    }
    const double oracle =
        oracles::assignment_minmax_ccq_grid(inst.assignment, inst.net, grid);
    if (!std::isfinite(oracle)) {
      c.expect(false, "oracle infeasible where solver is optimal, instance " +
                          std::to_string(i));
      continue;
    }
    const double deviation = std::abs(sol.utility - oracle) / oracle;
    worst = std::max(worst, deviation);
    c.expect(deviation <= 0.015,
             "instance " + std::to_string(i) + " deviates " +
                 std::to_string(deviation));
    ++compared;
  }
  c.note("compared " + std::to_string(compared) + " instances (" +
         std::to_string(infeasible) + " infeasible), worst deviation " +
         std::to_string(worst));
  c.expect(compared >= 150, "too few comparable instances");
  report(2, "inner solver within 1.5% of the grid oracle", c);
  return c.ok;
}

// ---------------------------------------------------------------------------
// 3. SLJ stability and quality against enumeration on 20 random N=K=3
// realizations with reference-scenario constants.
bool criterion3() {
  Checker c;
  SolverSettings settings;
  ScenarioConfig config;
  config.n_pairs = 3;
  config.n_servers = 3;
  config.seed = 3;
  const int realizations = 20;
  int stable = 0, dominated = 0, within10 = 0;
  for (int t = 0; t < realizations; ++t) {
    RandomSource rng(derive_stream(config.seed, t, 0));
    const NetworkRealization net = build_realization(config, rng);
    RandomSource slj_rng(derive_stream(config.seed, t, 1));
    const SljResult slj = slj_match(net, settings, slj_rng);
    AssignmentEvaluator evaluator(net, settings);
    if (slj.stable && is_two_sided_stable(slj.matching, evaluator)) ++stable;
    const auto oracle = enumerate_optimal(net, settings);
    if (!oracle) {
      c.expect(false, "enumeration refused a desk-scale instance");
      continue;
    }
    if (oracle->matching.utility <= slj.matching.utility * (1.0 + 1e-12))
      ++dominated;
    if (slj.matching.utility <= 1.10 * oracle->matching.utility) ++within10;
  }
  c.note("stable " + std::to_string(stable) + "/20, dominated " +
         std::to_string(dominated) + "/20, within 10% " +
         std::to_string(within10) + "/20");
  c.expect(stable == realizations, "a run failed the no-blocking scan");
  c.expect(dominated == realizations, "enumeration beaten (impossible)");
  c.expect(within10 >= 18, "slj worse than 1.10x optimum on > 10% of runs");
  report(3, "slj stability and quality vs enumeration", c);
  return c.ok;
}

// ---------------------------------------------------------------------------
// 4. Max-CCQ trend over the device frequency sweep {3,5,7,9,11} Gcycles/s.
bool criterion4() {
  Checker c;
  const std::vector<double> freqs{3e9, 5e9, 7e9, 9e9, 11e9};
  std::vector<ScenarioConfig> points;
  for (double f : freqs) {
    ScenarioConfig config;
    config.trials = 100;
    config.seed = 4;
    config.f_local_min_hz = f;
    config.f_local_max_hz = f;
    points.push_back(config);
  }
  const std::vector<Scheme> schemes{Scheme::kProposed, Scheme::kFopg,
                                    Scheme::kFodpg, Scheme::kSuo};
  const auto sweep = run_sweep(points, schemes, ExecutionMode::kParallel);

  double prev = kInf;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& aggs = sweep[i].result.aggregates;
    const double proposed = aggs.at(Scheme::kProposed).mean_max_ccq;
    char line[160];
    std::snprintf(line, sizeof line,
                  "f=%4.1f G: proposed %.4g fopg %.4g fodpg %.4g suo %.4g",
                  freqs[i] / 1e9, proposed,
                  aggs.at(Scheme::kFopg).mean_max_ccq,
                  aggs.at(Scheme::kFodpg).mean_max_ccq,
                  aggs.at(Scheme::kSuo).mean_max_ccq);
    c.note(line);
    c.expect(proposed <= prev * 1.02,
             "proposed mean max-CCQ rose beyond the 2% slack at point " +
                 std::to_string(i));
    prev = proposed;
    for (Scheme s : {Scheme::kFopg, Scheme::kFodpg, Scheme::kSuo})
      c.expect(proposed <= aggs.at(s).mean_max_ccq,
               "proposed above " + scheme_name(s) + " at point " +
                   std::to_string(i));
  }
  report(4, "frequency-sweep trend (non-increasing, proposed lowest)", c);
  return c.ok;
}

// ---------------------------------------------------------------------------
// 5. Mean latency and achieved-CIDEr orderings at f_local = 9 Gcycles/s.
// Reference point values (0.010/0.016/0.018/0.145 s; 61.02 CIDEr) are
// printed for comparison but not asserted.
bool criterion5() {
  Checker c;
  ScenarioConfig config;
  config.trials = 200;
  config.seed = 5;
  config.f_local_min_hz = 9e9;
  config.f_local_max_hz = 9e9;
  const std::vector<Scheme> schemes{Scheme::kProposed, Scheme::kFopg,
                                    Scheme::kFodpg, Scheme::kSuo};
  const auto result = run_trials(config, schemes, ExecutionMode::kParallel);
  const auto& aggs = result.aggregates;
  const double lat_p = aggs.at(Scheme::kProposed).mean_max_latency_s;
  const double lat_fopg = aggs.at(Scheme::kFopg).mean_max_latency_s;
  const double lat_fodpg = aggs.at(Scheme::kFodpg).mean_max_latency_s;
  const double lat_suo = aggs.at(Scheme::kSuo).mean_max_latency_s;
  const double q_p = aggs.at(Scheme::kProposed).mean_bottleneck_quality;
  const double q_fopg = aggs.at(Scheme::kFopg).mean_bottleneck_quality;
  const double q_fodpg = aggs.at(Scheme::kFodpg).mean_bottleneck_quality;
  const double q_suo = aggs.at(Scheme::kSuo).mean_bottleneck_quality;

  char line[200];
  std::snprintf(line, sizeof line,
                "mean max-latency s: fodpg %.4g proposed %.4g suo %.4g "
                "fopg %.4g (reference 0.010/0.016/0.018/0.145)",
                lat_fodpg, lat_p, lat_suo, lat_fopg);
  c.note(line);
  std::snprintf(line, sizeof line,
                "mean achieved CIDEr: fopg %.4g proposed %.4g suo %.4g "
                "fodpg %.4g (reference 76.6/61.02/57.1/57.1)",
                q_fopg, q_p, q_suo, q_fodpg);
  c.note(line);

  c.expect(lat_fodpg <= lat_p, "latency ordering fodpg <= proposed");
  c.expect(lat_p <= lat_suo, "latency ordering proposed <= suo");
  c.expect(lat_suo <= lat_fopg, "latency ordering suo <= fopg");
  c.expect(q_fopg >= q_p, "cider ordering fopg >= proposed");
  c.expect(q_p >= q_suo, "cider ordering proposed >= suo");
  c.expect(q_suo >= 57.1 && q_suo <= 62.0, "suo cider in the device band");
  c.expect(q_fodpg >= 57.1 && q_fodpg <= 62.0, "fodpg cider in the device band");
  report(5, "comparison-table orderings at 9 Gcycles/s", c);
  return c.ok;
}

// ---------------------------------------------------------------------------
// 6. Fairness: proposed per-pair CCQ mean and variance lowest, f in [3,6].
bool criterion6() {
  Checker c;
  ScenarioConfig config;
  config.trials = 200;
  config.seed = 6;
  const std::vector<Scheme> schemes{Scheme::kProposed, Scheme::kFopg,
                                    Scheme::kFodpg, Scheme::kSuo};
  const auto result = run_trials(config, schemes, ExecutionMode::kParallel);
  const auto [mean_p, var_p] =
      fairness_stats(result.records, Scheme::kProposed);
  char line[160];
  std::snprintf(line, sizeof line, "proposed mean %.4g var %.4g", mean_p,
                var_p);
  c.note(line);
  for (Scheme s : {Scheme::kFopg, Scheme::kFodpg, Scheme::kSuo}) {
    const auto [mean, variance] = fairness_stats(result.records, s);
    std::snprintf(line, sizeof line, "%-8s mean %.4g var %.4g",
                  scheme_name(s).c_str(), mean, variance);
    c.note(line);
    c.expect(mean_p <= mean, "proposed mean above " + scheme_name(s));
    c.expect(var_p <= variance, "proposed variance above " + scheme_name(s));
  }
  report(6, "per-pair CCQ fairness (mean and variance lowest)", c);
  return c.ok;
}

// ---------------------------------------------------------------------------
// 7. Property battery: the module invariants on randomized inputs.
bool criterion7() {
  Checker c;
  SolverSettings settings;

  {  // rate/power inversion round trip
    const Link link{3.7e-6, 7.96e-15, 2e6, 60.0};
    for (double tau = 1e-3; tau < 1e4; tau *= 2.1) {
      const auto p = power_for_latency(2e4, tau, link);
      const double back = p ? shannon_rate(*p, link) * tau : -1.0;
      c.expect(close_rel(back, 2e4, 1e-10), "round trip at tau");
    }
  }
  {  // communication energy strictly decreasing in tau
    const Link link{1e-6, 8e-15, 2e6, 60.0};
    double prev = comm_energy(400.0, 2e-5, link);
    for (double tau = 4e-5; tau < 100.0; tau *= 1.7) {
      const double cur = comm_energy(400.0, tau, link);
      c.expect(cur < prev, "comm energy not decreasing");
      prev = cur;
    }
  }
  {  // latency monotone in each resource; ccq scale law
    const NetworkRealization net = [] {
      ScenarioConfig config;
      config.n_pairs = 2;
      config.n_servers = 1;
      config.seed = 7;
      RandomSource rng(derive_stream(config.seed, 0, 0));
      return build_realization(config, rng);
    }();
    const Assignment a{{kLocal, 0}};
    ResourceAllocation res;
    res.pairs.resize(2);
    res.pairs[0] = {false, 3e9, 1e-3, 0, 0, 0};
    res.pairs[1] = {true, 0, 0, 1e-3, 5e9, 1e-3};
    const double base0 = pair_outcome(0, a, res, net)->latency_s;
    const double base1 = pair_outcome(1, a, res, net)->latency_s;
    ResourceAllocation faster = res;
    faster.pairs[0].f_local_hz *= 1.5;
    c.expect(pair_outcome(0, a, faster, net)->latency_s < base0,
             "latency not decreasing in f_local");
    faster = res;
    faster.pairs[1].f_edge_hz *= 1.5;
    c.expect(pair_outcome(1, a, faster, net)->latency_s < base1,
             "latency not decreasing in f_edge");
    faster = res;
    faster.pairs[1].tau_down_s *= 0.5;
    c.expect(pair_outcome(1, a, faster, net)->latency_s < base1,
             "latency not decreasing in downlink power");
    ResourceAllocation scaled = res;
    const double k = 2.75;
    scaled.pairs[0].f_local_hz /= k;
    scaled.pairs[0].tau_tr_s *= k;
    const auto base = pair_outcome(0, a, res, net);
    const auto big = pair_outcome(0, a, scaled, net);
    c.expect(close_rel(big->ccq, k * base->ccq, 1e-10), "ccq scale law");
  }
  {  // bisection certificate and dual budget matching on 2-user groups
    RandomSource rng(707);
    int certified = 0;
    for (int i = 0; i < 10; ++i) {
      const auto inst = oracles::random_small_instance(rng, 2, 1);
      const GroupSolution group =
          solve_server_group({0, 1}, 0, inst.net, settings);
      if (!group.feasible) continue;
      auto feasible_at = [&](double phi) {
        std::vector<double> deadlines{phi * inst.net.servers[0].quality[0],
                                      phi * inst.net.servers[0].quality[1]};
        return server_group_feasible({0, 1}, deadlines, 0, inst.net, settings)
            .feasible;
      };
      c.expect(feasible_at(group.phi), "returned phi infeasible");
      c.expect(!feasible_at(group.phi * (1.0 - 3.0 * settings.phi_tolerance)),
               "phi not tight");
      const double budget = inst.net.servers[0].f_max_edge_hz;
      c.expect(group.split.freq_sum_hz <= budget * (1.0 + 1e-12) &&
                   group.split.freq_sum_hz >= budget * (1.0 - 1e-5),
               "frequency budget not matched");
      ++certified;
    }
    c.expect(certified >= 6, "too few certified groups");
  }
  {  // determinism and substream isolation
    ScenarioConfig config;
    config.n_pairs = 3;
    config.n_servers = 3;
    config.trials = 4;
    config.seed = 77;
    const auto a = run_trials(config, {Scheme::kProposed, Scheme::kSuo});
    const auto b = run_trials(config, {Scheme::kProposed, Scheme::kSuo},
                              ExecutionMode::kParallel);
    c.expect(a.aggregates.at(Scheme::kProposed).mean_max_ccq ==
                 b.aggregates.at(Scheme::kProposed).mean_max_ccq,
             "serial/parallel mismatch");
    ScenarioConfig more = config;
    more.trials = 5;
    const auto d = run_trials(more, {Scheme::kProposed, Scheme::kSuo});
    bool prefix = true;
    for (int t = 0; t < config.trials; ++t)
      prefix = prefix && a.records[t].outcomes[0].assignment ==
                             d.records[t].outcomes[0].assignment &&
               a.records[t].outcomes[0].max_ccq ==
                   d.records[t].outcomes[0].max_ccq;
    c.expect(prefix, "substreams not append-only");
  }
  {  // local-pair optimality band against the 2-D grid oracle
    RandomSource rng(706);
    int compared = 0;
    for (int i = 0; i < 200; ++i) {
      const auto inst = oracles::random_small_instance(rng, 1, 1);
      const TransmitterProfile& tx = inst.net.transmitters[0];
      const Link direct = inst.net.direct_link(0);
      const LocalPairSolution sol = solve_local_pair(tx, direct, settings);
      if (!sol.feasible) continue;
      const double oracle = oracles::local_pair_grid_ccq(tx, direct);
      c.expect(std::isfinite(oracle), "oracle infeasible on feasible pair");
      c.expect(sol.outcome.ccq <= oracle * 1.005,
               "local pair above grid + 0.5%");
      c.expect(sol.outcome.ccq >= oracle * 0.95,
               "local pair below grid - 5% (grid range too narrow)");
      ++compared;
    }
    c.expect(compared >= 180, "too few feasible local pairs");
  }
  {  // stability certificate, monotone trace, termination cap
    for (int n_pairs : {3, 6, 8}) {
      ScenarioConfig config;
      config.n_pairs = n_pairs;
      config.n_servers = n_pairs > 3 ? (n_pairs > 6 ? 8 : 4) : 3;
      config.seed = 7000 + n_pairs;
      RandomSource rng(derive_stream(config.seed, 0, 0));
      const NetworkRealization net = build_realization(config, rng);
      RandomSource slj_rng(derive_stream(config.seed, 0, 1));
      const SljResult slj = slj_match(net, settings, slj_rng);
      AssignmentEvaluator evaluator(net, settings);
      c.expect(slj.stable && is_two_sided_stable(slj.matching, evaluator),
               "stability scan failed");
      c.expect(static_cast<int>(slj.trace.size()) <=
                   10 * net.n_pairs() * (net.n_pairs() + net.n_servers()),
               "operation cap exceeded");
      double prev = kInf;
      for (const auto& op : slj.trace) {
        c.expect(op.utility_after < op.utility_before &&
                     op.utility_before <= prev,
                 "trace not strictly decreasing");
        prev = op.utility_after;
      }
    }
  }
  {  // feasibility slack of optimal inner solutions
    RandomSource rng(708);
    for (int i = 0; i < 20; ++i) {
      const auto inst = oracles::random_small_instance(rng, 2, 1);
      const InnerSolution sol =
          solve_inner(inst.assignment, inst.net, settings);
      if (sol.status != SolveStatus::kOptimal) continue;
      c.expect(check_feasible(inst.assignment, sol.resources, inst.net, 1e-9)
                   .feasible,
               "optimal solution violates a constraint");
    }
  }
  {  // geometry containment, gain support, fading mean
    GeometryConfig geometry{4, 4, {{250, 250}, 200}, {{0, 0}, 100},
                            {{0, 400}, 100}};
    const PathLossConfig pl;
    RandomSource rng(709);
    const Geometry geom = sample_geometry(geometry, rng);
    for (const Point& p : geom.servers)
      c.expect(distance(p, {250, 250}) <= 200.0, "server outside disc");
    const double expected =
        path_loss(distance(geom.transmitters[1], geom.servers[2]),
                  pl.reference_distance_m, pl.exponent);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      const ChannelGains gains = sample_gains(geom, pl, rng);
      sum += gains.up[1][2];
      if (i < 100) {
        for (double g : gains.direct)
          c.expect(g > 0.0, "non-positive gain");
      }
    }
    const double ratio = sum / draws / expected;
    c.expect(ratio > 0.98 && ratio < 1.02, "fading mean outside [0.98, 1.02]");
  }
  report(7, "module property suites", c);
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[++i]);
  }
  bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                          criterion5, criterion6, criterion7};
  bool all_ok = true;
  for (int k = 1; k <= 7; ++k) {
    if (only != 0 && only != k) continue;
    all_ok = criteria[k - 1]() && all_ok;
  }
  return all_ok ? 0 : 1;
}
