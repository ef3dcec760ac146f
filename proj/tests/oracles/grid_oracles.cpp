#include "grid_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semcom::oracles {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> grid(points);
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = lo * std::exp(step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

// Latency below which the link cannot operate: exponent cap or power cap.
double latency_floor(double bits, const Link& link, double p_cap_w) {
  const double tau_cap =
      bits / (link.bandwidth_hz * link.exponent_cap) * (1.0 + 1e-12);
  const double tau_power = bits / shannon_rate(p_cap_w, link);
  return std::max(tau_cap, tau_power);
}

}  // namespace

double grid_min_latency(double bits, const Link& link, double p_cap_w,
                        double energy_budget_j, const GridSpec& spec) {
  if (p_cap_w <= 0.0 || energy_budget_j <= comm_energy_floor(bits, link))
    return kInf;
  const double tau0 = latency_floor(bits, link, p_cap_w);
  if (comm_energy(bits, tau0, link) <= energy_budget_j) return tau0;
  double lo = tau0, hi = tau0 * spec.span;
  for (int expand = 0; comm_energy(bits, hi, link) > energy_budget_j; ++expand) {
    if (expand > 50) return kInf;
    hi *= spec.span;
  }
  double best = hi;
  for (int round = 0; round <= spec.zoom_rounds; ++round) {
    const auto taus = log_grid(lo, hi, spec.points);
    int first_ok = -1;
    for (int i = 0; i < spec.points; ++i) {
      if (comm_energy(bits, taus[i], link) <= energy_budget_j) {
        first_ok = i;
        break;
      }
    }
    if (first_ok < 0) return best;  // all infeasible: keep previous bracket end
    best = taus[first_ok];
    if (first_ok == 0) break;
    lo = taus[first_ok - 1];
    hi = taus[first_ok];
  }
  return best;
}

double local_pair_grid_ccq(const TransmitterProfile& tx, const Link& direct,
                           const GridSpec& spec) {
  const double cycles = tx.device.cycles();
  const double f_cap_energy =
      std::sqrt(tx.e_max_j / (tx.kappa_eff * cycles));
  const double f_top = std::min(tx.f_max_local_hz, f_cap_energy);
  if (!(f_top > 0.0)) return kInf;
  if (tx.e_max_j <= comm_energy_floor(tx.prompt_bits, direct)) return kInf;
  const double tau_floor = latency_floor(tx.prompt_bits, direct, tx.p_max_w);

  double f_lo = f_top / 1e3, f_hi = f_top;
  double tau_lo = tau_floor, tau_hi = tau_floor * spec.span;
  double best = kInf;
  int expansions = 0;
  for (int round = 0; round <= spec.zoom_rounds; ++round) {
    const auto fs = log_grid(f_lo, f_hi, spec.points);
    const auto taus = log_grid(tau_lo, tau_hi, spec.points);
    std::vector<double> e_tr(spec.points);
    for (int t = 0; t < spec.points; ++t)
      e_tr[t] = comm_energy(tx.prompt_bits, taus[t], direct);
    int best_f = -1, best_t = -1;
    double round_best = kInf;
    for (int i = 0; i < spec.points; ++i) {
      const double e_c = tx.kappa_eff * cycles * fs[i] * fs[i];
      if (e_c >= tx.e_max_j) continue;
      const double tau_c = cycles / fs[i];
      for (int t = 0; t < spec.points; ++t) {
        if (e_c + e_tr[t] > tx.e_max_j) continue;
        const double latency = tau_c + taus[t];
        if (latency < round_best) {
          round_best = latency;
          best_f = i;
          best_t = t;
        }
        break;  // objective grows with tau; first feasible tau is best for this f
      }
    }
    if (best_f < 0) {
      // Nothing feasible yet: widen the latency range and retry this round.
      if (++expansions > 6) return kInf;
      tau_hi *= spec.span;
      --round;
      continue;
    }
    best = std::min(best, round_best);
    // Boundary argmin means the range clipped the optimum: widen and retry.
    if (best_t == spec.points - 1 && expansions++ < 6) {
      tau_hi *= spec.span;
      --round;
      continue;
    }
    if (best_f == 0 && expansions++ < 6) {
      f_lo /= 10.0;
      --round;
      continue;
    }
    const auto clamp_lo = [](const std::vector<double>& g, int i) {
      return g[std::max(0, i - 2)];
    };
    const auto clamp_hi = [](const std::vector<double>& g, int i) {
      return g[std::min(static_cast<int>(g.size()) - 1, i + 2)];
    };
    f_lo = clamp_lo(fs, best_f);
    f_hi = clamp_hi(fs, best_f);
    tau_lo = clamp_lo(taus, best_t);
    tau_hi = clamp_hi(taus, best_t);
  }
  return best / tx.device.quality;
}

GroupPowerOracle group_min_power_grid(const std::vector<int>& users,
                                      const std::vector<double>& deadlines_s,
                                      int server_index,
                                      const NetworkRealization& net,
                                      const GridSpec& spec) {
  GroupPowerOracle result;
  const std::size_t m = users.size();
  if (m > 2) throw std::invalid_argument("group oracle supports <= 2 users");
  if (m == 0) {
    result.feasible = true;
    return result;
  }
  const ServerProfile& server = net.servers[server_index];
  const double cycles = server.edge.cycles();

  struct User {
    double remaining;
    double tau_lo;
    double tau_hi;
    Link down;
    double bits;
  };
  std::vector<User> u(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int n = users[i];
    const TransmitterProfile& tx = net.transmitters[n];
    const double tau_up = grid_min_latency(tx.source_bits,
                                           net.uplink(n, server_index),
                                           tx.p_max_w, tx.e_max_j, spec);
    if (!std::isfinite(tau_up)) return result;
    u[i].remaining = deadlines_s[i] - tau_up;
    u[i].down = net.downlink(server_index, n);
    u[i].bits = tx.prompt_bits;
    u[i].tau_lo = latency_floor(tx.prompt_bits, u[i].down, server.p_hat_max_w);
    u[i].tau_hi = u[i].remaining * (1.0 - 1e-9);
    if (u[i].tau_lo >= u[i].tau_hi) return result;
  }

  double best_power = kInf;
  std::vector<std::vector<double>> range(m);
  for (std::size_t i = 0; i < m; ++i) range[i] = {u[i].tau_lo, u[i].tau_hi};

  for (int round = 0; round <= spec.zoom_rounds; ++round) {
    std::vector<std::vector<double>> taus(m), powers(m), freqs(m);
    for (std::size_t i = 0; i < m; ++i) {
      taus[i] = log_grid(range[i][0], range[i][1], spec.points);
      powers[i].resize(spec.points);
      freqs[i].resize(spec.points);
      for (int t = 0; t < spec.points; ++t) {
        const auto p = power_for_latency(u[i].bits, taus[i][t], u[i].down);
        powers[i][t] = p ? *p : kInf;
        freqs[i][t] = cycles / (u[i].remaining - taus[i][t]);
      }
    }
    int arg0 = -1, arg1 = -1;
    double round_best = kInf;
    if (m == 1) {
      for (int t = 0; t < spec.points; ++t) {
        if (freqs[0][t] > server.f_max_edge_hz) continue;
        if (powers[0][t] < round_best) {
          round_best = powers[0][t];
          arg0 = t;
        }
      }
    } else {
      for (int t0 = 0; t0 < spec.points; ++t0)
        for (int t1 = 0; t1 < spec.points; ++t1) {
          if (freqs[0][t0] + freqs[1][t1] > server.f_max_edge_hz) continue;
          const double power = powers[0][t0] + powers[1][t1];
          if (power < round_best) {
            round_best = power;
            arg0 = t0;
            arg1 = t1;
          }
        }
    }
    if (arg0 < 0) return result;  // frequency budget unreachable on the grid
    best_power = round_best;
    auto narrow = [&](std::vector<double>& r, const std::vector<double>& grid,
                      int idx) {
      r[0] = grid[std::max(0, idx - 2)];
      r[1] = grid[std::min(spec.points - 1, idx + 2)];
    };
    narrow(range[0], taus[0], arg0);
    if (m == 2) narrow(range[1], taus[1], arg1);
  }
  result.min_power_sum_w = best_power;
  result.feasible = best_power <= server.p_hat_max_w;
  return result;
}

double group_minmax_ccq_grid(const std::vector<int>& users, int server_index,
                             const NetworkRealization& net,
                             const GridSpec& spec) {
  const std::size_t m = users.size();
  if (m > 2) throw std::invalid_argument("group oracle supports <= 2 users");
  if (m == 0) return 0.0;
  const ServerProfile& server = net.servers[server_index];
  const double cycles = server.edge.cycles();
  const double f_budget = server.f_max_edge_hz;

  struct User {
    double base;  // min uplink latency
    double tau_lo;
    Link down;
    double bits;
    double quality;
  };
  std::vector<User> u(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int n = users[i];
    const TransmitterProfile& tx = net.transmitters[n];
    u[i].base = grid_min_latency(tx.source_bits, net.uplink(n, server_index),
                                 tx.p_max_w, tx.e_max_j, spec);
    if (!std::isfinite(u[i].base)) return kInf;
    u[i].down = net.downlink(server_index, n);
    u[i].bits = tx.prompt_bits;
    u[i].quality = server.quality[n];
    u[i].tau_lo = latency_floor(tx.prompt_bits, u[i].down, server.p_hat_max_w);
  }

  if (m == 1) {
    // All shared budget to the single user; smallest power-feasible tau wins.
    double tau_lo = u[0].tau_lo, tau_hi = u[0].tau_lo * spec.span;
    double best = kInf;
    int expansions = 0;
    for (int round = 0; round <= spec.zoom_rounds; ++round) {
      const auto taus = log_grid(tau_lo, tau_hi, spec.points);
      int arg = -1;
      for (int t = 0; t < spec.points; ++t) {
        const auto p = power_for_latency(u[0].bits, taus[t], u[0].down);
        if (p && *p <= server.p_hat_max_w) {
          arg = t;
          break;
        }
      }
      if (arg < 0) {
        if (++expansions > 6) return kInf;
        tau_hi *= spec.span;
        --round;
        continue;
      }
      best = (u[0].base + cycles / f_budget + taus[arg]) / u[0].quality;
      if (arg == 0) break;
      tau_lo = taus[arg - 1];
      tau_hi = taus[arg];
    }
    return best;
  }

  double f_lo = f_budget * 1e-4, f_hi = f_budget * (1.0 - 1e-4);
  std::vector<std::vector<double>> tau_range(2);
  for (std::size_t i = 0; i < 2; ++i)
    tau_range[i] = {u[i].tau_lo, u[i].tau_lo * spec.span};
  double best = kInf;
  int expansions = 0;
  for (int round = 0; round <= spec.zoom_rounds; ++round) {
    const auto fs = log_grid(f_lo, f_hi, spec.points);
    std::vector<std::vector<double>> taus(2), powers(2), ccq_base(2);
    for (std::size_t i = 0; i < 2; ++i) {
      taus[i] = log_grid(tau_range[i][0], tau_range[i][1], spec.points);
      powers[i].resize(spec.points);
      ccq_base[i].resize(spec.points);
      for (int t = 0; t < spec.points; ++t) {
        const auto p = power_for_latency(u[i].bits, taus[i][t], u[i].down);
        powers[i][t] = p ? *p : kInf;
        ccq_base[i][t] = (u[i].base + taus[i][t]) / u[i].quality;
      }
    }
    std::vector<double> lat0(spec.points), lat1(spec.points);
    for (int j = 0; j < spec.points; ++j) {
      lat0[j] = cycles / fs[j] / u[0].quality;
      lat1[j] = cycles / (f_budget - fs[j]) / u[1].quality;
    }
    double round_best = kInf;
    int argf = -1, arg0 = -1, arg1 = -1;
    for (int t0 = 0; t0 < spec.points; ++t0) {
      for (int t1 = 0; t1 < spec.points; ++t1) {
        if (powers[0][t0] + powers[1][t1] > server.p_hat_max_w) continue;
        const double a0 = ccq_base[0][t0];
        const double a1 = ccq_base[1][t1];
        for (int j = 0; j < spec.points; ++j) {
          const double v = std::max(a0 + lat0[j], a1 + lat1[j]);
          if (v < round_best) {
            round_best = v;
            argf = j;
            arg0 = t0;
            arg1 = t1;
          }
        }
      }
    }
    if (argf < 0) {
      if (++expansions > 6) return kInf;
      tau_range[0][1] *= spec.span;
      tau_range[1][1] *= spec.span;
      --round;
      continue;
    }
    best = std::min(best, round_best);
    bool widened = false;
    for (std::size_t i = 0; i < 2; ++i) {
      const int arg = i == 0 ? arg0 : arg1;
      if (arg == spec.points - 1 && expansions < 6) {
        tau_range[i][1] *= spec.span;
        widened = true;
      }
    }
    if (widened) {
      ++expansions;
      --round;
      continue;
    }
    auto narrow = [&](double& lo, double& hi, const std::vector<double>& grid,
                      int idx) {
      lo = grid[std::max(0, idx - 2)];
      hi = grid[std::min(spec.points - 1, idx + 2)];
    };
    narrow(f_lo, f_hi, fs, argf);
    narrow(tau_range[0][0], tau_range[0][1], taus[0], arg0);
    narrow(tau_range[1][0], tau_range[1][1], taus[1], arg1);
  }
  return best;
}

double assignment_minmax_ccq_grid(const Assignment& assignment,
                                  const NetworkRealization& net,
                                  const GridSpec& spec) {
  double utility = 0.0;
  for (int n = 0; n < net.n_pairs(); ++n) {
    if (!assignment.is_local(n)) continue;
    utility = std::max(utility, local_pair_grid_ccq(net.transmitters[n],
                                                    net.direct_link(n), spec));
  }
  for (int k = 0; k < net.n_servers(); ++k) {
    const auto users = assignment.users_of(k);
    if (users.empty()) continue;
    utility = std::max(utility, group_minmax_ccq_grid(users, k, net, spec));
  }
  return utility;
}

SmallInstance random_small_instance(RandomSource& rng, int n_pairs,
                                    int n_servers) {
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(rng.uniform(std::log(lo), std::log(hi)));
  };
  const PathLossConfig pl;
  auto gain = [&]() {
    const double d = rng.uniform(50.0, 600.0);
    return path_loss(d, pl.reference_distance_m, pl.exponent) *
           rng.exponential();
  };
  const ModelTable table = default_model_table();
  const std::vector<std::string> device_pool{"S/16", "M/16"};
  const std::vector<std::string> edge_pool{"B/16", "L/14"};

  SmallInstance inst;
  NetworkRealization& net = inst.net;
  net.bandwidth_hz = 2e6;
  net.noise_w = noise_power_w(-174.0, net.bandwidth_hz);
  net.exponent_cap = 60.0;
  const int prompt_bits = rng.uniform01() < 0.5 ? 400 : 600;

  net.gains.direct.resize(n_pairs);
  net.gains.up.assign(n_pairs, std::vector<double>(n_servers));
  net.gains.down.assign(n_servers, std::vector<double>(n_pairs));
  for (int n = 0; n < n_pairs; ++n) net.gains.direct[n] = gain();
  for (int n = 0; n < n_pairs; ++n)
    for (int k = 0; k < n_servers; ++k) net.gains.up[n][k] = gain();
  for (int k = 0; k < n_servers; ++k)
    for (int n = 0; n < n_pairs; ++n) net.gains.down[k][n] = gain();

  net.transmitters.resize(n_pairs);
  for (int n = 0; n < n_pairs; ++n) {
    TransmitterProfile& tx = net.transmitters[n];
    const std::string& arch =
        device_pool[rng.uniform01() < 0.5 ? 0 : 1];
    const ArchSpec& spec = table.at(arch);
    tx.source_bits = 2e4;
    tx.prompt_bits = prompt_bits;
    tx.device = {arch, spec.flops, 0.01, spec.cider_by_prompt_bits.at(prompt_bits)};
    tx.p_max_w = dbm_to_watts(rng.uniform(10.0, 23.0));
    tx.f_max_local_hz = log_uniform(1e9, 12e9);
    tx.kappa_eff = 1e-27;
    tx.e_max_j = log_uniform(0.05, 2.0);
  }
  net.servers.resize(n_servers);
  for (int k = 0; k < n_servers; ++k) {
    ServerProfile& server = net.servers[k];
    const std::string& arch = edge_pool[rng.uniform01() < 0.5 ? 0 : 1];
    const ArchSpec& spec = table.at(arch);
    server.edge = {arch, spec.flops, 0.01,
                   spec.cider_by_prompt_bits.at(prompt_bits)};
    server.quality.assign(n_pairs, server.edge.quality);
    server.p_hat_max_w = dbm_to_watts(rng.uniform(27.0, 33.0));
    server.f_max_edge_hz = log_uniform(8e9, 16e9);
    server.capacity = n_pairs;
  }

  inst.assignment.server_of.resize(n_pairs);
  for (int n = 0; n < n_pairs; ++n) {
    if (rng.uniform01() < 0.5)
      inst.assignment.server_of[n] = kLocal;
    else
      inst.assignment.server_of[n] =
          std::min(n_servers - 1,
                   static_cast<int>(rng.uniform01() * n_servers));
  }
  return inst;
}

}  // namespace semcom::oracles
