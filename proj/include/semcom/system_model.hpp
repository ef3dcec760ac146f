#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semcom/channel_model.hpp"

namespace semcom {

/// One M/VLM variant reduced to the three quantities that matter here:
/// workload, cycle cost per FLOP, and the CIDEr score of its prompts.
struct ModelProfile {
  std::string arch;
  double flops = 0.0;              // F, FLOPs per prompt generation
  double intensity_cpf = 0.0;      // I, cycles per FLOP
  double quality = 0.0;            // Q, CIDEr

  double cycles() const { return flops * intensity_cpf; }

  bool operator==(const ModelProfile&) const = default;
};

struct TransmitterProfile {
  double source_bits = 0.0;   // X_n, compressed source size
  double prompt_bits = 0.0;   // X'_n, generated prompt size
  ModelProfile device;        // on-device lightweight model
  double p_max_w = 0.0;       // transmit power cap
  double f_max_local_hz = 0.0;
  double kappa_eff = 0.0;     // effective capacitance coefficient
  double e_max_j = 0.0;       // device energy budget
};

struct ServerProfile {
  ModelProfile edge;            // large edge model (quality field unused here)
  std::vector<double> quality;  // Q'_{n,k} per transmitter, length N
  double p_hat_max_w = 0.0;     // shared downlink power budget
  double f_max_edge_hz = 0.0;   // shared compute budget
  int capacity = 0;             // N_k^max
};

/// One point-to-point radio link as the rate formulas see it.
struct Link {
  double gain = 0.0;          // |h|^2 power gain, dimensionless
  double noise_w = 0.0;
  double bandwidth_hz = 0.0;
  double exponent_cap = 60.0; // bits/(B*tau) above this is declared infeasible
};

inline constexpr int kLocal = -1;

/// Discrete decision: server index per transmitter, kLocal for on-device
/// generation. Encodes alpha_n and the one-hot beta_{n,.} row jointly.
struct Assignment {
  std::vector<int> server_of;

  int n_pairs() const { return static_cast<int>(server_of.size()); }
  bool is_local(int n) const { return server_of[n] == kLocal; }
  int offloaded_count() const;
  std::vector<int> users_of(int k) const;
  std::vector<int> server_load(int n_servers) const;
  bool respects_capacities(const std::vector<ServerProfile>& servers) const;

  bool operator==(const Assignment&) const = default;
};

/// Continuous decision per pair. Local pairs use {f_local_hz, tau_tr_s};
/// offloaded pairs use {tau_up_s, f_edge_hz, tau_down_s}.
struct PairResources {
  bool offloaded = false;
  double f_local_hz = 0.0;
  double tau_tr_s = 0.0;
  double tau_up_s = 0.0;
  double f_edge_hz = 0.0;
  double tau_down_s = 0.0;
};

struct ResourceAllocation {
  std::vector<PairResources> pairs;
};

struct PairOutcome {
  double latency_s = 0.0;
  double energy_j = 0.0;
  double quality = 0.0;
  double ccq = 0.0;  // latency / quality
};

/// One fading block: everything the solvers need for a single trial.
struct NetworkRealization {
  Geometry geometry;
  ChannelGains gains;
  std::vector<TransmitterProfile> transmitters;
  std::vector<ServerProfile> servers;
  double bandwidth_hz = 0.0;
  double noise_w = 0.0;
  double exponent_cap = 60.0;

  int n_pairs() const { return static_cast<int>(transmitters.size()); }
  int n_servers() const { return static_cast<int>(servers.size()); }

  Link direct_link(int n) const {
    return {gains.direct[n], noise_w, bandwidth_hz, exponent_cap};
  }
  Link uplink(int n, int k) const {
    return {gains.up[n][k], noise_w, bandwidth_hz, exponent_cap};
  }
  Link downlink(int k, int n) const {
    return {gains.down[k][n], noise_w, bandwidth_hz, exponent_cap};
  }
};

/// F*I / f.
double local_compute_latency(const ModelProfile& model, double f_local_hz);

/// kappa * F*I * f^2.
double local_compute_energy(const ModelProfile& model, double f_local_hz,
                            double kappa_eff);

/// B * log2(1 + p*gain/noise), bits/s.
double shannon_rate(double p_w, const Link& link);

/// Transmit power that delivers `bits` within `tau_s` over `link`; exact
/// inverse of the Shannon rate composed with latency = bits/rate. Empty when
/// bits/(B*tau) exceeds the link's exponent cap.
std::optional<double> power_for_latency(double bits, double tau_s,
                                        const Link& link);

/// p(tau)*tau at fixed bits; +inf past the exponent cap. Strictly decreasing
/// in tau with infimum (noise/gain)*(bits/B)*ln2.
double comm_energy(double bits, double tau_s, const Link& link);

/// Smallest energy at which `bits` can still be delivered over `link` for
/// some finite latency (the tau -> inf limit of comm_energy).
double comm_energy_floor(double bits, const Link& link);

/// Evaluates latency, device energy, quality, and CCQ for pair n under the
/// given assignment and resources. Empty when a required power is past the
/// exponent cap.
std::optional<PairOutcome> pair_outcome(int n, const Assignment& assignment,
                                        const ResourceAllocation& resources,
                                        const NetworkRealization& net);

struct ConstraintCheck {
  std::string name;  // e.g. "tx_power", "server_freq"
  int index = 0;     // pair or server index
  double value = 0.0;
  double bound = 0.0;
  bool ok = false;
  double slack = 0.0;  // bound - value
};

struct FeasibilityReport {
  bool feasible = false;
  std::vector<ConstraintCheck> checks;

  const ConstraintCheck* first_violation() const;
};

/// Verifies every constraint of the joint problem for a full allocation:
/// per-pair power/frequency/energy caps, per-server frequency/power budgets,
/// and server capacities. Tolerates `rel_tol` relative slack deficit.
FeasibilityReport check_feasible(const Assignment& assignment,
                                 const ResourceAllocation& resources,
                                 const NetworkRealization& net,
                                 double rel_tol = 1e-9);

}  // namespace semcom
