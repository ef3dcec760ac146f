#include "semcom/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace semcom {

namespace {

void summarize(SchemeOutcome& out) {
  out.max_ccq = 0.0;
  out.max_latency_s = 0.0;
  out.min_quality = std::numeric_limits<double>::infinity();
  out.mean_quality = 0.0;
  int bottleneck = 0;
  for (std::size_t n = 0; n < out.outcomes.size(); ++n) {
    const PairOutcome& p = out.outcomes[n];
    if (p.ccq > out.max_ccq) {
      out.max_ccq = p.ccq;
      bottleneck = static_cast<int>(n);
    }
    out.max_latency_s = std::max(out.max_latency_s, p.latency_s);
    out.min_quality = std::min(out.min_quality, p.quality);
    out.mean_quality += p.quality;
  }
  out.mean_quality /= static_cast<double>(out.outcomes.size());
  out.bottleneck_quality = out.outcomes[bottleneck].quality;
  out.offloaded = out.assignment.offloaded_count();
}

SchemeOutcome from_inner(Scheme scheme, Assignment assignment,
                         InnerSolution inner) {
  SchemeOutcome out;
  out.scheme = scheme;
  out.assignment = std::move(assignment);
  if (inner.status != SolveStatus::kOptimal) {
    out.detail = inner.detail;
    return out;
  }
  out.feasible = true;
  out.resources = std::move(inner.resources);
  out.outcomes = std::move(inner.outcomes);
  out.objective = inner.utility;
  summarize(out);
  return out;
}

}  // namespace

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::kProposed: return "proposed";
    case Scheme::kFopg: return "fopg";
    case Scheme::kFodpg: return "fodpg";
    case Scheme::kSuo: return "suo";
  }
  return "unknown";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
  for (Scheme s : kAllSchemes)
    if (scheme_name(s) == name) return s;
  return std::nullopt;
}

SchemeOutcome run_proposed(const NetworkRealization& net,
                           const SolverSettings& settings, RandomSource& rng,
                           int restarts) {
  AssignmentEvaluator evaluator(net, settings);
  Matching best;
  best.utility = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    SljResult run = slj_match(net, settings, rng);
    if (run.matching.utility < best.utility) best = run.matching;
  }
  InnerSolution inner = evaluator.solve(best.assignment);
  return from_inner(Scheme::kProposed, best.assignment, std::move(inner));
}

SchemeOutcome run_fopg(const NetworkRealization& net,
                       const SolverSettings& settings) {
  const int n_pairs = net.n_pairs();
  const int n_servers = net.n_servers();
  Assignment a;
  a.server_of.assign(n_pairs, kLocal);
  std::vector<int> load(n_servers, 0);
  for (int n = 0; n < n_pairs; ++n) {
    std::vector<int> order(n_servers);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int ka, int kb) {
      return net.gains.up[n][ka] > net.gains.up[n][kb];
    });
    for (int k : order) {
      if (load[k] < net.servers[k].capacity) {
        a.server_of[n] = k;
        ++load[k];
        break;
      }
    }
    if (a.server_of[n] == kLocal) {
      SchemeOutcome out;
      out.scheme = Scheme::kFopg;
      out.detail = "capacities cannot host all transmitters";
      out.assignment = std::move(a);
      return out;
    }
  }
  return from_inner(Scheme::kFopg, a, solve_inner(a, net, settings));
}

SchemeOutcome run_fodpg(const NetworkRealization& net,
                        const SolverSettings& settings) {
  Assignment a;
  a.server_of.assign(net.n_pairs(), kLocal);
  return from_inner(Scheme::kFodpg, a, solve_inner(a, net, settings));
}

NetworkRealization with_unit_quality(const NetworkRealization& net) {
  NetworkRealization unit = net;
  for (auto& tx : unit.transmitters) tx.device.quality = 1.0;
  for (auto& server : unit.servers) {
    server.edge.quality = 1.0;
    std::fill(server.quality.begin(), server.quality.end(), 1.0);
  }
  return unit;
}

SchemeOutcome run_suo(const NetworkRealization& net,
                      const SolverSettings& settings, RandomSource& rng,
                      int restarts) {
  const NetworkRealization unit = with_unit_quality(net);
  AssignmentEvaluator evaluator(unit, settings);
  Matching best;
  best.utility = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    SljResult run = slj_match(unit, settings, rng);
    if (run.matching.utility < best.utility) best = run.matching;
  }
  InnerSolution inner = evaluator.solve(best.assignment);

  SchemeOutcome out;
  out.scheme = Scheme::kSuo;
  out.assignment = best.assignment;
  if (inner.status != SolveStatus::kOptimal) {
    out.detail = inner.detail;
    return out;
  }
  out.feasible = true;
  out.resources = std::move(inner.resources);
  out.objective = inner.utility;  // max latency
  // Re-score the latency-optimal allocation with the real qualities.
  out.outcomes.resize(net.n_pairs());
  for (int n = 0; n < net.n_pairs(); ++n)
    out.outcomes[n] =
        pair_outcome(n, out.assignment, out.resources, net).value();
  summarize(out);
  return out;
}

}  // namespace semcom
