#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "semcom/inner_solver.hpp"
#include "semcom/rng.hpp"

namespace semcom {

/// A transmitter-to-server matching with its cached min-max CCQ utility.
/// Infeasible inner problems carry utility +inf.
struct Matching {
  Assignment assignment;
  double utility = 0.0;
};

enum class OpKind { kSwap, kLeave, kJoin, kRelocate };

struct BlockingOperation {
  OpKind kind = OpKind::kSwap;
  int n = 0;      // acting transmitter
  int other = 0;  // swap partner, or the server left/joined
  double utility_before = 0.0;
  double utility_after = 0.0;
};

/// Inner-solver front end memoized per realization: local pairs are solved
/// once each, server groups once per (server, user-set). The matching search
/// revisits the same groups constantly, so this is where the time goes.
class AssignmentEvaluator {
 public:
  AssignmentEvaluator(const NetworkRealization& net,
                      const SolverSettings& settings);

  /// Min-max CCQ of the assignment; +inf when any subproblem is infeasible.
  double utility(const Assignment& assignment);

  /// Full inner solution assembled from the caches; agrees with solve_inner.
  InnerSolution solve(const Assignment& assignment);

  const LocalPairSolution& local_pair(int n);
  const GroupSolution& group(int k, const std::vector<int>& users);

  const NetworkRealization& net() const { return *net_; }
  const SolverSettings& settings() const { return settings_; }
  std::int64_t group_solves() const { return group_solves_; }

 private:
  const NetworkRealization* net_;
  SolverSettings settings_;
  std::vector<std::optional<LocalPairSolution>> local_;
  std::map<std::pair<int, std::uint64_t>, GroupSolution> groups_;
  std::int64_t group_solves_ = 0;
};

/// Utility oracle of the outer level (max CCQ at inner-optimal resources).
double matching_utility(const Assignment& assignment,
                        AssignmentEvaluator& evaluator);

/// Swap of two transmitters' positions (set difference/union on the pairs):
/// both matched exchange servers; a matched/unmatched pair exchanges the
/// server against the local slot. Accepted (matching updated, operation
/// returned) iff the utility strictly drops. Skipped when both are unmatched
/// or both sit on the same server.
std::optional<BlockingOperation> try_swap(Matching& matching, int n, int n2,
                                          AssignmentEvaluator& evaluator);

/// Matched transmitter n reverts to on-device generation if that strictly
/// lowers the utility.
std::optional<BlockingOperation> try_leave(Matching& matching, int n,
                                           AssignmentEvaluator& evaluator);

/// Unmatched transmitter n joins server k (if k has residual capacity) when
/// that strictly lowers the utility.
std::optional<BlockingOperation> try_join(Matching& matching, int n, int k,
                                          AssignmentEvaluator& evaluator);

/// Vacancy swap: matched transmitter n moves to another server k that has an
/// open slot, when that strictly lowers the utility. This is the standard
/// swap-with-open-spot of one-to-many swap matching; without it the search
/// cannot relocate a matched transmitter whose through-local path is blocked.
std::optional<BlockingOperation> try_relocate(Matching& matching, int n, int k,
                                              AssignmentEvaluator& evaluator);

/// Uniform capacity-respecting assignment: each transmitter picks local or a
/// server with residual capacity, sequentially.
Assignment random_feasible_assignment(const NetworkRealization& net,
                                      RandomSource& rng);

struct SljOptions {
  int max_accepted_ops = 0;  // 0: default 10*N*(N+K)
};

struct SljResult {
  Matching matching;
  std::vector<BlockingOperation> trace;
  bool stable = false;  // certified by a full sweep that accepted nothing
  int sweeps = 0;
};

/// Swap/leave/join local search: seeds a random feasible matching, then
/// sweeps all candidate operations in a fixed order (swaps by (n, n'), leaves
/// by n, joins by (n, k), vacancy swaps by (n, k)), applying any blocking
/// operation immediately, until a full sweep accepts nothing. Utility
/// strictly decreases along the trace, so termination is guaranteed on the
/// finite matching space.
SljResult slj_match(const NetworkRealization& net,
                    const SolverSettings& settings, RandomSource& rng,
                    const SljOptions& options = {});

/// Re-scan of every swap/leave/join/vacancy-swap candidate; true iff none
/// strictly lowers the utility (the two-sided stability certificate).
bool is_two_sided_stable(const Matching& matching,
                         AssignmentEvaluator& evaluator);

struct EnumerationResult {
  Matching matching;
  std::int64_t evaluated = 0;
};

/// Exhaustive minimum over every capacity-feasible assignment; ties broken by
/// lexicographic assignment order (local before server 0). Refuses (empty)
/// when (K+1)^N exceeds `cap`.
std::optional<EnumerationResult> enumerate_optimal(
    const NetworkRealization& net, const SolverSettings& settings,
    std::int64_t cap = 4096);

}  // namespace semcom
