#include "semcom/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semcom {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t user_mask(const std::vector<int>& users) {
  std::uint64_t mask = 0;
  for (int n : users) mask |= std::uint64_t{1} << n;
  return mask;
}
}  // namespace

AssignmentEvaluator::AssignmentEvaluator(const NetworkRealization& net,
                                         const SolverSettings& settings)
    : net_(&net), settings_(settings), local_(net.n_pairs()) {
  if (net.n_pairs() > 63)
    throw std::invalid_argument("AssignmentEvaluator: N > 63 unsupported");
}

const LocalPairSolution& AssignmentEvaluator::local_pair(int n) {
  if (!local_[n])
    local_[n] =
        solve_local_pair(net_->transmitters[n], net_->direct_link(n), settings_);
  return *local_[n];
}

const GroupSolution& AssignmentEvaluator::group(int k,
                                                const std::vector<int>& users) {
  const auto key = std::make_pair(k, user_mask(users));
  auto it = groups_.find(key);
  if (it == groups_.end()) {
    ++group_solves_;
    it = groups_.emplace(key, solve_server_group(users, k, *net_, settings_))
             .first;
  }
  return it->second;
}

double AssignmentEvaluator::utility(const Assignment& assignment) {
  double utility = 0.0;
  for (int n = 0; n < net_->n_pairs(); ++n) {
    if (!assignment.is_local(n)) continue;
    const LocalPairSolution& lp = local_pair(n);
    if (!lp.feasible) return kInf;
    utility = std::max(utility, lp.outcome.ccq);
  }
  for (int k = 0; k < net_->n_servers(); ++k) {
    const std::vector<int> users = assignment.users_of(k);
    if (users.empty()) continue;
    const GroupSolution& gs = group(k, users);
    if (!gs.feasible) return kInf;
    for (const auto& out : gs.outcomes)
      utility = std::max(utility, out.ccq);
  }
  return utility;
}

InnerSolution AssignmentEvaluator::solve(const Assignment& assignment) {
  InnerSolution sol;
  const int n_pairs = net_->n_pairs();
  sol.resources.pairs.resize(n_pairs);
  sol.outcomes.resize(n_pairs);
  for (int n = 0; n < n_pairs; ++n) {
    if (!assignment.is_local(n)) continue;
    const LocalPairSolution& lp = local_pair(n);
    if (!lp.feasible) {
      sol.status = SolveStatus::kInfeasible;
      sol.detail = "local pair " + std::to_string(n);
      return sol;
    }
    sol.resources.pairs[n] = {false, lp.f_local_hz, lp.tau_tr_s, 0.0, 0.0, 0.0};
    sol.outcomes[n] = lp.outcome;
  }
  for (int k = 0; k < net_->n_servers(); ++k) {
    const std::vector<int> users = assignment.users_of(k);
    if (users.empty()) continue;
    const GroupSolution& gs = group(k, users);
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

double matching_utility(const Assignment& assignment,
                        AssignmentEvaluator& evaluator) {
  return evaluator.utility(assignment);
}

std::optional<BlockingOperation> try_swap(Matching& matching, int n, int n2,
                                          AssignmentEvaluator& evaluator) {
  if (n == n2) return std::nullopt;
  Assignment& a = matching.assignment;
  if (a.is_local(n) && a.is_local(n2)) return std::nullopt;
  if (a.server_of[n] == a.server_of[n2]) return std::nullopt;
  Assignment candidate = a;
  std::swap(candidate.server_of[n], candidate.server_of[n2]);
  const double after = evaluator.utility(candidate);
  if (!(after < matching.utility)) return std::nullopt;
  BlockingOperation op{OpKind::kSwap, n, n2, matching.utility, after};
  matching.assignment = std::move(candidate);
  matching.utility = after;
  return op;
}

std::optional<BlockingOperation> try_leave(Matching& matching, int n,
                                           AssignmentEvaluator& evaluator) {
  Assignment& a = matching.assignment;
  if (a.is_local(n)) return std::nullopt;
  Assignment candidate = a;
  const int k = candidate.server_of[n];
  candidate.server_of[n] = kLocal;
  const double after = evaluator.utility(candidate);
  if (!(after < matching.utility)) return std::nullopt;
  BlockingOperation op{OpKind::kLeave, n, k, matching.utility, after};
  matching.assignment = std::move(candidate);
  matching.utility = after;
  return op;
}

std::optional<BlockingOperation> try_join(Matching& matching, int n, int k,
                                          AssignmentEvaluator& evaluator) {
  Assignment& a = matching.assignment;
  if (!a.is_local(n)) return std::nullopt;
  const auto load = a.server_load(evaluator.net().n_servers());
  if (load[k] >= evaluator.net().servers[k].capacity) return std::nullopt;
  Assignment candidate = a;
  candidate.server_of[n] = k;
  const double after = evaluator.utility(candidate);
  if (!(after < matching.utility)) return std::nullopt;
  BlockingOperation op{OpKind::kJoin, n, k, matching.utility, after};
  matching.assignment = std::move(candidate);
  matching.utility = after;
  return op;
}

std::optional<BlockingOperation> try_relocate(Matching& matching, int n, int k,
                                              AssignmentEvaluator& evaluator) {
  Assignment& a = matching.assignment;
  if (a.is_local(n) || a.server_of[n] == k) return std::nullopt;
  const auto load = a.server_load(evaluator.net().n_servers());
  if (load[k] >= evaluator.net().servers[k].capacity) return std::nullopt;
  Assignment candidate = a;
  candidate.server_of[n] = k;
  const double after = evaluator.utility(candidate);
  if (!(after < matching.utility)) return std::nullopt;
  BlockingOperation op{OpKind::kRelocate, n, k, matching.utility, after};
  matching.assignment = std::move(candidate);
  matching.utility = after;
  return op;
}

Assignment random_feasible_assignment(const NetworkRealization& net,
                                      RandomSource& rng) {
  const int n_pairs = net.n_pairs();
  const int n_servers = net.n_servers();
  Assignment a;
  a.server_of.assign(n_pairs, kLocal);
  std::vector<int> load(n_servers, 0);
  std::vector<int> choices;
  for (int n = 0; n < n_pairs; ++n) {
    choices.clear();
    choices.push_back(kLocal);
    for (int k = 0; k < n_servers; ++k)
      if (load[k] < net.servers[k].capacity) choices.push_back(k);
    const auto idx = static_cast<std::size_t>(rng.uniform01() *
                                              static_cast<double>(choices.size()));
    const int pick = choices[std::min(idx, choices.size() - 1)];
    a.server_of[n] = pick;
    if (pick != kLocal) ++load[pick];
  }
  return a;
}

SljResult slj_match(const NetworkRealization& net,
                    const SolverSettings& settings, RandomSource& rng,
                    const SljOptions& options) {
  const int n_pairs = net.n_pairs();
  const int n_servers = net.n_servers();
  const int op_cap = options.max_accepted_ops > 0
                         ? options.max_accepted_ops
                         : 10 * n_pairs * (n_pairs + n_servers);

  AssignmentEvaluator evaluator(net, settings);
  SljResult result;
  result.matching.assignment = random_feasible_assignment(net, rng);
  result.matching.utility = evaluator.utility(result.matching.assignment);

  bool changed = true;
  while (changed && static_cast<int>(result.trace.size()) < op_cap) {
    changed = false;
    ++result.sweeps;
    for (int n = 0; n < n_pairs; ++n)
      for (int n2 = n + 1; n2 < n_pairs; ++n2)
        if (auto op = try_swap(result.matching, n, n2, evaluator)) {
          result.trace.push_back(*op);
          changed = true;
        }
    for (int n = 0; n < n_pairs; ++n)
      if (auto op = try_leave(result.matching, n, evaluator)) {
        result.trace.push_back(*op);
        changed = true;
      }
    for (int n = 0; n < n_pairs; ++n)
      for (int k = 0; k < n_servers; ++k)
        if (auto op = try_join(result.matching, n, k, evaluator)) {
          result.trace.push_back(*op);
          changed = true;
        }
    for (int n = 0; n < n_pairs; ++n)
      for (int k = 0; k < n_servers; ++k)
        if (auto op = try_relocate(result.matching, n, k, evaluator)) {
          result.trace.push_back(*op);
          changed = true;
        }
  }
  result.stable = !changed;
  return result;
}

bool is_two_sided_stable(const Matching& matching,
                         AssignmentEvaluator& evaluator) {
  const int n_pairs = evaluator.net().n_pairs();
  const int n_servers = evaluator.net().n_servers();
  Matching probe = matching;
  for (int n = 0; n < n_pairs; ++n)
    for (int n2 = n + 1; n2 < n_pairs; ++n2) {
      if (try_swap(probe, n, n2, evaluator)) return false;
    }
  for (int n = 0; n < n_pairs; ++n)
    if (try_leave(probe, n, evaluator)) return false;
  for (int n = 0; n < n_pairs; ++n)
    for (int k = 0; k < n_servers; ++k) {
      if (try_join(probe, n, k, evaluator)) return false;
      if (try_relocate(probe, n, k, evaluator)) return false;
    }
  return true;
}

std::optional<EnumerationResult> enumerate_optimal(
    const NetworkRealization& net, const SolverSettings& settings,
    std::int64_t cap) {
  const int n_pairs = net.n_pairs();
  const int n_servers = net.n_servers();
  std::int64_t total = 1;
  for (int n = 0; n < n_pairs; ++n) {
    total *= n_servers + 1;
    if (total > cap) return std::nullopt;
  }

  AssignmentEvaluator evaluator(net, settings);
  EnumerationResult best;
  best.matching.utility = kInf;
  Assignment a;
  a.server_of.assign(n_pairs, kLocal);
  // Digits run -1 (local), 0, ..., K-1; rightmost fastest, so assignments are
  // visited in lexicographic order and the first minimum wins ties.
  bool done = false;
  while (!done) {
    if (a.respects_capacities(net.servers)) {
      ++best.evaluated;
      const double u = evaluator.utility(a);
      if (u < best.matching.utility) {
        best.matching.assignment = a;
        best.matching.utility = u;
      }
    }
    int pos = n_pairs - 1;
    while (pos >= 0) {
      if (a.server_of[pos] + 1 < n_servers) {
        ++a.server_of[pos];
        break;
      }
      a.server_of[pos] = kLocal;
      --pos;
    }
    done = pos < 0;
  }
  return best;
}

}  // namespace semcom
