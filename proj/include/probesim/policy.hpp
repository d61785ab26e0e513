#pragma once

#include "probesim/model.hpp"

namespace probesim {

// Baseline: probe whenever the AoI strictly exceeds D slots.
struct DelayPolicy {
  int d_threshold = 1;
};

inline Action delay_decide(const DelayPolicy& policy, int aoi) {
  return aoi > policy.d_threshold ? Action::probe : Action::no_probe;
}

enum class Combiner { conjunctive, disjunctive };

// Semantics-aware single-threshold policy on (health entropy, normalized
// AoI). The conjunctive combiner probes on the upward-closed corner region
// {H >= theta_h and AoI_norm >= theta_d}; the disjunctive variant probes
// when either coordinate crosses, kept as an ablation option.
struct ThresholdPolicy {
  double theta_h = 0.5;
  double theta_d = 0.5;
  Combiner combiner = Combiner::conjunctive;
};

inline Action threshold_decide(const ThresholdPolicy& policy, double entropy, double aoi_norm) {
  const bool h = entropy >= policy.theta_h;
  const bool d = aoi_norm >= policy.theta_d;
  const bool go = policy.combiner == Combiner::conjunctive ? (h && d) : (h || d);
  return go ? Action::probe : Action::no_probe;
}

}  // namespace probesim
