#include "semcom/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semcom {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453;
}  // namespace

int Assignment::offloaded_count() const {
  return static_cast<int>(
      std::count_if(server_of.begin(), server_of.end(),
                    [](int k) { return k != kLocal; }));
}

std::vector<int> Assignment::users_of(int k) const {
  std::vector<int> users;
  for (int n = 0; n < n_pairs(); ++n)
    if (server_of[n] == k) users.push_back(n);
  return users;
}

std::vector<int> Assignment::server_load(int n_servers) const {
  std::vector<int> load(n_servers, 0);
  for (int k : server_of)
    if (k != kLocal) ++load[k];
  return load;
}

bool Assignment::respects_capacities(
    const std::vector<ServerProfile>& servers) const {
  const auto load = server_load(static_cast<int>(servers.size()));
  for (std::size_t k = 0; k < servers.size(); ++k)
    if (load[k] > servers[k].capacity) return false;
  return true;
}

double local_compute_latency(const ModelProfile& model, double f_local_hz) {
  if (f_local_hz <= 0.0)
    throw std::domain_error("local_compute_latency: non-positive frequency");
  return model.cycles() / f_local_hz;
}

double local_compute_energy(const ModelProfile& model, double f_local_hz,
                            double kappa_eff) {
  return kappa_eff * model.cycles() * f_local_hz * f_local_hz;
}

double shannon_rate(double p_w, const Link& link) {
  const double snr = p_w * link.gain / link.noise_w;
  return link.bandwidth_hz * std::log1p(snr) / kLn2;
}

std::optional<double> power_for_latency(double bits, double tau_s,
                                        const Link& link) {
  if (tau_s <= 0.0) throw std::domain_error("power_for_latency: tau <= 0");
  const double exponent = bits / (link.bandwidth_hz * tau_s);
  if (exponent > link.exponent_cap) return std::nullopt;
  // expm1 keeps precision when the exponent is small.
  return std::expm1(exponent * kLn2) * link.noise_w / link.gain;
}

double comm_energy(double bits, double tau_s, const Link& link) {
  const auto p = power_for_latency(bits, tau_s, link);
  if (!p) return kInf;
  return *p * tau_s;
}

double comm_energy_floor(double bits, const Link& link) {
  return link.noise_w / link.gain * bits / link.bandwidth_hz * kLn2;
}

std::optional<PairOutcome> pair_outcome(int n, const Assignment& assignment,
                                        const ResourceAllocation& resources,
                                        const NetworkRealization& net) {
  const PairResources& res = resources.pairs[n];
  const TransmitterProfile& tx = net.transmitters[n];
  PairOutcome out;
  if (assignment.is_local(n)) {
    const double tau_c = local_compute_latency(tx.device, res.f_local_hz);
    const auto p_tr =
        power_for_latency(tx.prompt_bits, res.tau_tr_s, net.direct_link(n));
    if (!p_tr) return std::nullopt;
    out.latency_s = tau_c + res.tau_tr_s;
    out.energy_j = local_compute_energy(tx.device, res.f_local_hz,
                                        tx.kappa_eff) +
                   *p_tr * res.tau_tr_s;
    out.quality = tx.device.quality;
  } else {
    const int k = assignment.server_of[n];
    const ServerProfile& server = net.servers[k];
    const auto p_up =
        power_for_latency(tx.source_bits, res.tau_up_s, net.uplink(n, k));
    const auto p_down =
        power_for_latency(tx.prompt_bits, res.tau_down_s, net.downlink(k, n));
    if (!p_up || !p_down) return std::nullopt;
    const double tau_e = local_compute_latency(server.edge, res.f_edge_hz);
    out.latency_s = res.tau_up_s + tau_e + res.tau_down_s;
    // Edge-side energy is not accounted; only the device's uplink spend.
    out.energy_j = *p_up * res.tau_up_s;
    out.quality = server.quality[n];
  }
  out.ccq = out.latency_s / out.quality;
  return out;
}

const ConstraintCheck* FeasibilityReport::first_violation() const {
  for (const auto& c : checks)
    if (!c.ok) return &c;
  return nullptr;
}

FeasibilityReport check_feasible(const Assignment& assignment,
                                 const ResourceAllocation& resources,
                                 const NetworkRealization& net,
                                 double rel_tol) {
  FeasibilityReport report;
  report.feasible = true;
  auto add = [&](std::string name, int index, double value, double bound) {
    ConstraintCheck c;
    c.name = std::move(name);
    c.index = index;
    c.value = value;
    c.bound = bound;
    c.slack = bound - value;
    c.ok = value <= bound + rel_tol * std::max(std::abs(bound), 1.0);
    if (!c.ok) report.feasible = false;
    report.checks.push_back(std::move(c));
  };

  const int n_pairs = net.n_pairs();
  const int n_servers = net.n_servers();
  std::vector<double> server_freq(n_servers, 0.0);
  std::vector<double> server_power(n_servers, 0.0);

  for (int n = 0; n < n_pairs; ++n) {
    const PairResources& res = resources.pairs[n];
    const TransmitterProfile& tx = net.transmitters[n];
    if (assignment.is_local(n)) {
      const auto p_tr =
          power_for_latency(tx.prompt_bits, res.tau_tr_s, net.direct_link(n));
      const double p = p_tr ? *p_tr : kInf;
      add("tx_power", n, p, tx.p_max_w);
      add("local_freq", n, res.f_local_hz, tx.f_max_local_hz);
      add("energy", n,
          local_compute_energy(tx.device, res.f_local_hz, tx.kappa_eff) +
              p * res.tau_tr_s,
          tx.e_max_j);
    } else {
      const int k = assignment.server_of[n];
      const auto p_up =
          power_for_latency(tx.source_bits, res.tau_up_s, net.uplink(n, k));
      const auto p_down = power_for_latency(tx.prompt_bits, res.tau_down_s,
                                            net.downlink(k, n));
      const double pu = p_up ? *p_up : kInf;
      const double pd = p_down ? *p_down : kInf;
      add("tx_power", n, pu, tx.p_max_w);
      add("energy", n, pu * res.tau_up_s, tx.e_max_j);
      server_freq[k] += res.f_edge_hz;
      server_power[k] += pd;
    }
  }
  const auto load = assignment.server_load(n_servers);
  for (int k = 0; k < n_servers; ++k) {
    add("server_capacity", k, static_cast<double>(load[k]),
        static_cast<double>(net.servers[k].capacity));
    if (load[k] == 0) continue;
    add("server_freq", k, server_freq[k], net.servers[k].f_max_edge_hz);
    add("server_power", k, server_power[k], net.servers[k].p_hat_max_w);
  }
  return report;
}

}  // namespace semcom
