#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semcom/matching.hpp"

namespace semcom {

enum class Scheme { kProposed, kFopg, kFodpg, kSuo };

inline constexpr Scheme kAllSchemes[] = {Scheme::kProposed, Scheme::kFopg,
                                         Scheme::kFodpg, Scheme::kSuo};

std::string scheme_name(Scheme scheme);
std::optional<Scheme> scheme_from_name(const std::string& name);

/// Per-realization result of one scheme. Outcomes always carry the real
/// qualities and CCQs, whatever objective the scheme itself optimized.
struct SchemeOutcome {
  Scheme scheme = Scheme::kProposed;
  bool feasible = false;
  std::string detail;  // failure description when infeasible
  Assignment assignment;
  ResourceAllocation resources;
  std::vector<PairOutcome> outcomes;
  double objective = 0.0;           // scheme's own utility value
  double max_ccq = 0.0;
  double max_latency_s = 0.0;
  double min_quality = 0.0;
  double bottleneck_quality = 0.0;  // quality of the max-CCQ pair
  double mean_quality = 0.0;
  int offloaded = 0;
};

/// Proposed scheme: SLJ matching with the min-max CCQ utility. `restarts`
/// independent starts (>= 1) keep the best final utility.
SchemeOutcome run_proposed(const NetworkRealization& net,
                           const SolverSettings& settings, RandomSource& rng,
                           int restarts = 1);

/// Fully offloaded prompt generation: every transmitter is pre-assigned to
/// its strongest-uplink server, overflowing greedily to next-best servers
/// when capacities fill; resources come from the inner solver.
SchemeOutcome run_fopg(const NetworkRealization& net,
                       const SolverSettings& settings);

/// Full on-device prompt generation: the all-local assignment.
SchemeOutcome run_fodpg(const NetworkRealization& net,
                        const SolverSettings& settings);

/// Semantic-unaware offloading: the proposed pipeline run on a copy of the
/// realization with every quality forced to 1, so the utility degenerates to
/// the maximal latency; outcomes are then re-scored with the real qualities.
SchemeOutcome run_suo(const NetworkRealization& net,
                      const SolverSettings& settings, RandomSource& rng,
                      int restarts = 1);

/// Copy with all device and edge qualities set to 1.
NetworkRealization with_unit_quality(const NetworkRealization& net);

}  // namespace semcom
