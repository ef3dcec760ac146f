#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semcom/system_model.hpp"

namespace semcom {

struct SolverSettings {
  double phi_tolerance = 1e-4;         // relative, min-max bisection
  double dual_tolerance = 1e-6;        // relative to f_max_edge
  int max_iterations = 200;
  double scalar_search_tolerance = 1e-6;  // relative, 1-D searches
};

enum class SolveStatus { kOptimal, kInfeasible };

struct InnerSolution {
  ResourceAllocation resources;
  std::vector<PairOutcome> outcomes;
  double utility = 0.0;  // max CCQ over pairs
  SolveStatus status = SolveStatus::kInfeasible;
  std::string detail;    // names the failing pair/server when infeasible
};

struct LocalPairSolution {
  bool feasible = false;
  double f_local_hz = 0.0;
  double tau_tr_s = 0.0;
  PairOutcome outcome;
};

/// Smallest latency at which `bits` can be sent over `link` subject to the
/// power cap and the communication energy budget. Both constraints are
/// strictly decreasing in tau, so the answer is the larger of the two roots
/// (power root is closed form, energy root is bisected). Returns +inf when
/// the energy budget is below the link's energy floor.
double min_latency_for_bits(double bits, const Link& link, double p_cap_w,
                            double energy_budget_j, double rel_tol = 1e-12);

/// Minimum uplink latency for transmitter `tx`: min_latency_for_bits with the
/// source size, the transmit power cap, and the whole device energy budget
/// (offloaded pairs spend energy on the uplink only).
double min_uplink_latency(const TransmitterProfile& tx, const Link& up);

/// Minimizes (compute latency + prompt link latency)/Q over the device
/// frequency and the link latency, subject to f <= f_max, p <= p_max and the
/// device energy budget, by a golden-section search over the compute share of
/// the energy budget.
LocalPairSolution solve_local_pair(const TransmitterProfile& tx,
                                   const Link& direct,
                                   const SolverSettings& settings);

enum class GroupBudget { kNone, kTime, kFrequency, kPower };

struct GroupSplit {
  std::vector<double> tau_up_s;
  std::vector<double> f_edge_hz;
  std::vector<double> tau_down_s;
  std::vector<double> p_up_w;
  std::vector<double> p_down_w;
  double freq_sum_hz = 0.0;
  double power_sum_w = 0.0;
};

struct GroupFeasibility {
  bool feasible = false;
  GroupBudget failed = GroupBudget::kNone;
  GroupSplit split;  // valid when feasible
};

/// Decides whether every offloaded user of server k can finish within its
/// deadline under the shared frequency and downlink power budgets. Uplinks
/// are fixed at their individual minima (they consume no shared resource);
/// the remaining min-power split is found by dualizing the frequency budget
/// with a multiplier and bisecting it until the budget matches.
GroupFeasibility server_group_feasible(const std::vector<int>& users,
                                       const std::vector<double>& deadlines_s,
                                       int server_index,
                                       const NetworkRealization& net,
                                       const SolverSettings& settings);

struct GroupSolution {
  bool feasible = false;
  double phi = 0.0;  // smallest feasible max-CCQ for the group
  GroupSplit split;
  std::vector<PairOutcome> outcomes;  // parallel to users
};

/// Bisection on the auxiliary max-CCQ variable: at each phi the deadlines
/// phi*Q'_{n,k} feed server_group_feasible. The lower bracket comes from
/// single-user relaxations, the upper one from doubling until feasible.
GroupSolution solve_server_group(const std::vector<int>& users,
                                 int server_index,
                                 const NetworkRealization& net,
                                 const SolverSettings& settings);

/// Full inner-level solve for a fixed assignment. Resource constraints couple
/// only inside a server group, so local pairs and groups are solved
/// independently and the utility is the max of their CCQs.
InnerSolution solve_inner(const Assignment& assignment,
                          const NetworkRealization& net,
                          const SolverSettings& settings);

}  // namespace semcom
