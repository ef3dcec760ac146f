#include "semcom/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semcom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453;
constexpr double kGolden = 0.6180339887498949;  // 1/phi

// Golden-section minimizer for a quasi-convex objective; +inf values are
// allowed at the walls. Returns the argmin of the final bracket.
template <typename F>
double golden_section_min(F&& f, double lo, double hi, double rel_tol,
                          int max_iter) {
  double a = lo, b = hi;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > rel_tol * (hi - lo); ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

double safe_div(double num, double den) { return den > 0.0 ? num / den : kInf; }

}  // namespace

double min_latency_for_bits(double bits, const Link& link, double p_cap_w,
                            double energy_budget_j, double rel_tol) {
  if (p_cap_w <= 0.0 || energy_budget_j <= 0.0) return kInf;
  // Nudged off the cap so the implied exponent stays representably below it.
  const double tau_cap =
      bits / (link.bandwidth_hz * link.exponent_cap) * (1.0 + 1e-12);
  const double rate_cap = shannon_rate(p_cap_w, link);
  const double tau_power = bits / rate_cap;
  double tau = std::max(tau_power, tau_cap);
  if (comm_energy(bits, tau, link) <= energy_budget_j) return tau;
  if (energy_budget_j <= comm_energy_floor(bits, link)) return kInf;
  // Energy is the binding constraint: bisect the strictly decreasing
  // comm_energy for the smallest latency within budget.
  double lo = tau, hi = tau;
  do {
    hi *= 2.0;
  } while (comm_energy(bits, hi, link) > energy_budget_j);
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (comm_energy(bits, mid, link) <= energy_budget_j)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double min_uplink_latency(const TransmitterProfile& tx, const Link& up) {
  return min_latency_for_bits(tx.source_bits, up, tx.p_max_w, tx.e_max_j);
}

LocalPairSolution solve_local_pair(const TransmitterProfile& tx,
                                   const Link& direct,
                                   const SolverSettings& settings) {
  LocalPairSolution sol;
  const double cycles = tx.device.cycles();
  if (tx.e_max_j <= comm_energy_floor(tx.prompt_bits, direct) ||
      tx.f_max_local_hz <= 0.0 || tx.p_max_w <= 0.0)
    return sol;  // pair cannot operate locally

  auto freq_for_share = [&](double e_c) {
    if (e_c <= 0.0) return 0.0;
    const double f_energy =
        tx.kappa_eff > 0.0 ? std::sqrt(e_c / (tx.kappa_eff * cycles)) : kInf;
    return std::min(tx.f_max_local_hz, f_energy);
  };
  auto link_latency_for_share = [&](double e_c) {
    return min_latency_for_bits(tx.prompt_bits, direct, tx.p_max_w,
                                tx.e_max_j - e_c);
  };
  auto objective = [&](double e_c) {
    return safe_div(cycles, freq_for_share(e_c)) + link_latency_for_share(e_c);
  };

  const double e_best =
      golden_section_min(objective, 0.0, tx.e_max_j,
                         settings.scalar_search_tolerance,
                         settings.max_iterations);
  if (!std::isfinite(objective(e_best))) return sol;

  sol.feasible = true;
  sol.f_local_hz = freq_for_share(e_best);
  sol.tau_tr_s = link_latency_for_share(e_best);
  const double p_tr =
      power_for_latency(tx.prompt_bits, sol.tau_tr_s, direct).value();
  sol.outcome.latency_s = cycles / sol.f_local_hz + sol.tau_tr_s;
  sol.outcome.energy_j =
      local_compute_energy(tx.device, sol.f_local_hz, tx.kappa_eff) +
      p_tr * sol.tau_tr_s;
  sol.outcome.quality = tx.device.quality;
  sol.outcome.ccq = sol.outcome.latency_s / sol.outcome.quality;
  return sol;
}

namespace {

// Per-user state of the dual subproblem on one server.
struct GroupUser {
  double tau_up = 0.0;
  double p_up = 0.0;
  double remaining = 0.0;  // deadline minus uplink latency
  double tau_floor = 0.0;  // exponent-cap latency floor of the downlink
  Link down;
  double bits_down = 0.0;  // prompt bits
  double a_bits = 0.0;     // prompt_bits / B
};

// Minimizer of p_down(tau) + mu * cycles/(remaining - tau) over
// [tau_floor, remaining). The objective is strictly convex; the derivative
// sign is compared in log space so the 2^x term cannot overflow.
double user_tau_down(const GroupUser& u, double mu, double cycles_e) {
  const double c = u.down.noise_w / u.down.gain;
  const double log_power_term = std::log(c * kLn2 * u.a_bits);
  auto derivative_positive = [&](double tau) {
    const double lhs = std::log(mu * cycles_e) - 2.0 * std::log(u.remaining - tau);
    const double rhs =
        log_power_term + (u.a_bits / tau) * kLn2 - 2.0 * std::log(tau);
    return lhs > rhs;
  };
  if (mu <= 0.0) return u.remaining * (1.0 - 1e-12);
  if (derivative_positive(u.tau_floor)) return u.tau_floor;
  double lo = u.tau_floor;
  double hi = u.remaining * (1.0 - 1e-15);
  for (int i = 0; i < 200 && hi - lo > 1e-13 * u.remaining; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (derivative_positive(mid))
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

}  // namespace

GroupFeasibility server_group_feasible(const std::vector<int>& users,
                                       const std::vector<double>& deadlines_s,
                                       int server_index,
                                       const NetworkRealization& net,
                                       const SolverSettings& settings) {
  GroupFeasibility result;
  const std::size_t m = users.size();
  if (m == 0) {
    result.feasible = true;
    return result;
  }
  const ServerProfile& server = net.servers[server_index];
  const double cycles_e = server.edge.cycles();
  const double f_budget = server.f_max_edge_hz;

  std::vector<GroupUser> group(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int n = users[i];
    const TransmitterProfile& tx = net.transmitters[n];
    GroupUser& u = group[i];
    u.down = net.downlink(server_index, n);
    u.bits_down = tx.prompt_bits;
    u.a_bits = tx.prompt_bits / net.bandwidth_hz;
    u.tau_up = min_uplink_latency(tx, net.uplink(n, server_index));
    if (!std::isfinite(u.tau_up)) {
      result.failed = GroupBudget::kTime;
      return result;
    }
    u.p_up = power_for_latency(tx.source_bits, u.tau_up,
                               net.uplink(n, server_index))
                 .value();
    u.remaining = deadlines_s[i] - u.tau_up;
    u.tau_floor = tx.prompt_bits / (net.bandwidth_hz * net.exponent_cap) *
                  (1.0 + 1e-12);
    if (u.remaining <= u.tau_floor) {
      result.failed = GroupBudget::kTime;
      return result;
    }
  }

  // Least possible frequency demand (every downlink at its latency floor).
  double demand_floor = 0.0;
  for (const auto& u : group) demand_floor += cycles_e / (u.remaining - u.tau_floor);
  if (demand_floor > f_budget) {
    result.failed = GroupBudget::kFrequency;
    return result;
  }

  auto demand_at = [&](double mu, std::vector<double>& taus) {
    double demand = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      taus[i] = user_tau_down(group[i], mu, cycles_e);
      demand += cycles_e / (group[i].remaining - taus[i]);
    }
    return demand;
  };

  std::vector<double> taus(m), taus_hi(m);
  double mu_lo = 0.0;  // demand(0+) -> +inf, never evaluated
  double mu_hi = 1e-30;
  double demand_hi = demand_at(mu_hi, taus_hi);
  int guard = 0;
  while (demand_hi > f_budget && guard++ < 600) {
    mu_lo = mu_hi;
    mu_hi *= 16.0;
    demand_hi = demand_at(mu_hi, taus_hi);
  }
  if (demand_hi > f_budget) {
    result.failed = GroupBudget::kFrequency;  // unreachable with sane budgets
    return result;
  }
  const double dual_gap = settings.dual_tolerance * f_budget;
  for (int i = 0; i < settings.max_iterations; ++i) {
    if (mu_hi - mu_lo <= 1e-14 * mu_hi) break;
    const double mu_mid = 0.5 * (mu_lo + mu_hi);
    const double demand_mid = demand_at(mu_mid, taus);
    if (demand_mid <= f_budget) {
      mu_hi = mu_mid;
      taus_hi = taus;
      demand_hi = demand_mid;
      if (f_budget - demand_mid <= dual_gap) break;
    } else {
      mu_lo = mu_mid;
    }
  }

  GroupSplit split;
  split.tau_up_s.resize(m);
  split.f_edge_hz.resize(m);
  split.tau_down_s.resize(m);
  split.p_up_w.resize(m);
  split.p_down_w.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const GroupUser& u = group[i];
    split.tau_up_s[i] = u.tau_up;
    split.p_up_w[i] = u.p_up;
    split.tau_down_s[i] = taus_hi[i];
    split.f_edge_hz[i] = cycles_e / (u.remaining - taus_hi[i]);
    split.p_down_w[i] =
        power_for_latency(u.bits_down, taus_hi[i], u.down).value();
    split.freq_sum_hz += split.f_edge_hz[i];
    split.power_sum_w += split.p_down_w[i];
  }
  result.split = std::move(split);
  if (result.split.power_sum_w > server.p_hat_max_w * (1.0 + 1e-9)) {
    result.failed = GroupBudget::kPower;
    return result;
  }
  result.feasible = true;
  return result;
}

GroupSolution solve_server_group(const std::vector<int>& users,
                                 int server_index,
                                 const NetworkRealization& net,
                                 const SolverSettings& settings) {
  GroupSolution sol;
  if (users.empty()) {
    sol.feasible = true;
    return sol;
  }
  const ServerProfile& server = net.servers[server_index];
  const double cycles_e = server.edge.cycles();

  // Lower bracket: each user alone with every budget granted to it.
  double phi_lo = 0.0;
  for (int n : users) {
    const TransmitterProfile& tx = net.transmitters[n];
    const double tau_up = min_uplink_latency(tx, net.uplink(n, server_index));
    if (!std::isfinite(tau_up)) return sol;
    const double tau_down =
        min_latency_for_bits(tx.prompt_bits, net.downlink(server_index, n),
                             server.p_hat_max_w, kInf);
    const double solo =
        tau_up + cycles_e / server.f_max_edge_hz + tau_down;
    phi_lo = std::max(phi_lo, solo / server.quality[n]);
  }

  auto feasible_at = [&](double phi) {
    std::vector<double> deadlines(users.size());
    for (std::size_t i = 0; i < users.size(); ++i)
      deadlines[i] = phi * server.quality[users[i]];
    return server_group_feasible(users, deadlines, server_index, net,
                                 settings);
  };

  GroupFeasibility witness = feasible_at(phi_lo);
  double phi_hi = phi_lo;
  if (!witness.feasible) {
    bool found = false;
    for (int i = 0; i < settings.max_iterations; ++i) {
      phi_hi *= 2.0;
      witness = feasible_at(phi_hi);
      if (witness.feasible) {
        found = true;
        break;
      }
    }
    if (!found) return sol;  // oversubscribed beyond any deadline
    double lo = phi_hi / 2.0;
    while (phi_hi - lo > settings.phi_tolerance * phi_hi) {
      const double mid = 0.5 * (lo + phi_hi);
      GroupFeasibility mid_result = feasible_at(mid);
      if (mid_result.feasible) {
        phi_hi = mid;
        witness = std::move(mid_result);
      } else {
        lo = mid;
      }
    }
  }

  sol.feasible = true;
  sol.phi = phi_hi;
  sol.split = witness.split;
  sol.outcomes.resize(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    const int n = users[i];
    PairOutcome& out = sol.outcomes[i];
    out.latency_s = sol.split.tau_up_s[i] +
                    cycles_e / sol.split.f_edge_hz[i] +
                    sol.split.tau_down_s[i];
    out.energy_j = sol.split.p_up_w[i] * sol.split.tau_up_s[i];
    out.quality = server.quality[n];
    out.ccq = out.latency_s / out.quality;
  }
  return sol;
}

InnerSolution solve_inner(const Assignment& assignment,
                          const NetworkRealization& net,
                          const SolverSettings& settings) {
  if (!assignment.respects_capacities(net.servers))
    throw std::invalid_argument("solve_inner: assignment exceeds capacities");
  const int n_pairs = net.n_pairs();
  InnerSolution sol;
  sol.resources.pairs.resize(n_pairs);
  sol.outcomes.resize(n_pairs);

  for (int n = 0; n < n_pairs; ++n) {
    if (!assignment.is_local(n)) continue;
    const LocalPairSolution lp =
        solve_local_pair(net.transmitters[n], net.direct_link(n), settings);
    if (!lp.feasible) {
      sol.status = SolveStatus::kInfeasible;
      sol.detail = "local pair " + std::to_string(n);
      return sol;
    }
    sol.resources.pairs[n] = {false, lp.f_local_hz, lp.tau_tr_s, 0.0, 0.0, 0.0};
    sol.outcomes[n] = lp.outcome;
  }
  for (int k = 0; k < net.n_servers(); ++k) {
    const std::vector<int> users = assignment.users_of(k);
    if (users.empty()) continue;
    const GroupSolution gs = solve_server_group(users, k, net, settings);
    if (!gs.feasible) {
      sol.status = SolveStatus::kInfeasible;
      sol.detail = "server " + std::to_string(k);
      return sol;
    }
    for (std::size_t i = 0; i < users.size(); ++i) {
      const int n = users[i];
      sol.resources.pairs[n] = {true, 0.0, 0.0, gs.split.tau_up_s[i],
                                gs.split.f_edge_hz[i], gs.split.tau_down_s[i]};
      sol.outcomes[n] = gs.outcomes[i];
    }
  }
  sol.utility = 0.0;
  for (const auto& out : sol.outcomes) sol.utility = std::max(sol.utility, out.ccq);
  sol.status = SolveStatus::kOptimal;
  return sol;
}

}  // namespace semcom
