#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "probesim/belief.hpp"
#include "probesim/dp.hpp"
#include "probesim/parallel.hpp"
#include "probesim/policy.hpp"
#include "probesim/rng.hpp"
#include "probesim/scenario.hpp"

namespace probesim {

using Policy = std::variant<DelayPolicy, ThresholdPolicy, DpTreePolicy>;

inline std::string policy_id(const Policy& policy) {
  if (const auto* d = std::get_if<DelayPolicy>(&policy)) {
    return "delay_D" + std::to_string(d->d_threshold);
  }
  if (std::holds_alternative<ThresholdPolicy>(policy)) return "threshold";
  return "dp_optimal";
}

struct SlotRecord {
  int t = 0;
  int state_index = 0;
  Action action = Action::no_probe;
  int obs = -1;  // -1 on a bootstrap slot without an observation
  int aoi = 1;
  double entropy = 0.0;
  double voi = 0.0;
  double stage_cost = 0.0;
};

struct CostBreakdown {
  double entropy_cost = 0.0;
  double aoi_cost = 0.0;
  double probe_cost_total = 0.0;
  double total = 0.0;
};

struct TrajectoryRecord {
  std::vector<SlotRecord> slots;
  CostBreakdown totals;
};

struct EvalReport {
  double j_hat = 0.0;
  double std_error = 0.0;
  int replications = 0;
  CostBreakdown breakdown;  // per-episode means
};

namespace detail {

template <class Rng>
SystemState draw_initial_state(const ScenarioConfig& cfg, Rng& rng) {
  switch (cfg.initial_state_mode) {
    case InitialStateMode::random_half: {
      const Health ms = rng.bernoulli(0.5) ? Health::faulty : Health::healthy;
      const Health sensor = rng.bernoulli(0.5) ? Health::faulty : Health::healthy;
      const Health sm = rng.bernoulli(0.5) ? Health::faulty : Health::healthy;
      return SystemState{ms, sensor, sm};
    }
    case InitialStateMode::stationary: {
      auto draw = [&](const SubsystemKernel& k) {
        return rng.bernoulli(stationary_fault_prob(k)) ? Health::faulty : Health::healthy;
      };
      return SystemState{draw(cfg.transition.ms), draw(cfg.transition.sensor),
                         draw(cfg.transition.sm)};
    }
    case InitialStateMode::from_belief: {
      const double u = rng.uniform();
      double acc = 0.0;
      for (int j = 0; j < kStateCount; ++j) {
        acc += cfg.initial_belief.probs[static_cast<std::size_t>(j)];
        if (u < acc) return decode_state(j);
      }
      return decode_state(kStateCount - 1);
    }
  }
  throw std::logic_error("unknown initial state mode");
}

}  // namespace detail

// Simulates one episode of the ground-truth chain coupled with the agent's
// belief tracker. Slots run t = 0..N; within a slot the system transitions,
// the observation is realized from the new state and the previous action,
// AoI and belief are updated, the policy picks an action (except at t = N,
// which only accrues the terminal VoI), and the stage cost is charged.
// With the decision-state bootstrap, slot 0 skips the transition and
// observation and decides directly at the configured (belief, AoI).
inline TrajectoryRecord run_episode(const ScenarioConfig& cfg, const Policy& policy,
                                    RandomStream rng) {
  const int n = cfg.horizon;
  const DpNode* cursor = nullptr;
  if (const auto* dp = std::get_if<DpTreePolicy>(&policy)) {
    if (dp->solution == nullptr || dp->solution->root == nullptr) {
      throw std::invalid_argument("dp tree policy has no solved tree");
    }
    if (cfg.bootstrap != BeliefBootstrap::decision_state) {
      throw std::invalid_argument("dp tree policy requires the decision-state bootstrap");
    }
    if (dp->solution->horizon != n || dp->solution->aoi_horizon != n) {
      throw std::invalid_argument("dp tree was solved for a different horizon");
    }
    cursor = dp->solution->root.get();
  }

  SystemState state = detail::draw_initial_state(cfg, rng);
  BeliefState belief = cfg.initial_belief;
  int aoi = cfg.initial_aoi;
  Action prev = Action::no_probe;

  TrajectoryRecord rec;
  rec.slots.reserve(static_cast<std::size_t>(n) + 1);
  for (int t = 0; t <= n; ++t) {
    int obs = -1;
    const bool bootstrap_slot = t == 0 && cfg.bootstrap == BeliefBootstrap::decision_state;
    if (!bootstrap_slot) {
      state = sample_transition(rng, state, cfg.transition);
      obs = sample_observation(rng, state, prev, cfg.p_g);
      belief = belief_update(belief, prev, obs, cfg.transition, cfg.p_g);
      aoi = aoi_update(aoi, obs, n);
      if (cursor != nullptr) {
        const auto& child =
            cursor->children[static_cast<std::size_t>(value(prev))][static_cast<std::size_t>(obs)];
        if (!child.node) {
          throw ImpossibleObservationError("observed a branch pruned from the dp tree");
        }
        cursor = child.node.get();
      }
    }
    const double h = health_entropy(health_projection(belief));
    const double aoi_norm = static_cast<double>(aoi) / n;
    const double v = voi(h, aoi_norm, cfg.lambda1, cfg.lambda2);
    Action a = Action::no_probe;
    if (t < n) {
      if (const auto* delay = std::get_if<DelayPolicy>(&policy)) {
        a = delay_decide(*delay, aoi);
      } else if (const auto* threshold = std::get_if<ThresholdPolicy>(&policy)) {
        a = threshold_decide(*threshold, h, aoi_norm);
      } else {
        a = cursor->optimal_action;
      }
    }
    const double g = stage_cost(a, v, cfg.probe_cost);
    rec.totals.entropy_cost += cfg.lambda1 * h;
    rec.totals.aoi_cost += cfg.lambda2 * aoi_norm;
    if (a == Action::probe) rec.totals.probe_cost_total += cfg.probe_cost;
    rec.totals.total += g;
    rec.slots.push_back(SlotRecord{t, state.index(), a, obs, aoi, h, v, g});
    prev = a;
  }
  return rec;
}

// Sample mean and standard error of the episode total over independently
// seeded replications, with the mean cost breakdown. Episode m always runs
// on rng.child(m), so parallel and serial execution agree bit for bit.
inline EvalReport monte_carlo_eval(const ScenarioConfig& cfg, const Policy& policy,
                                   int replications, const RandomStream& rng,
                                   unsigned max_threads = 0) {
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  std::vector<CostBreakdown> totals(static_cast<std::size_t>(replications));
  parallel_for_index(
      replications,
      [&](int m) {
        totals[static_cast<std::size_t>(m)] =
            run_episode(cfg, policy, rng.child(static_cast<std::uint64_t>(m))).totals;
      },
      max_threads);
  EvalReport report;
  report.replications = replications;
  for (const auto& t : totals) {
    report.j_hat += t.total;
    report.breakdown.entropy_cost += t.entropy_cost;
    report.breakdown.aoi_cost += t.aoi_cost;
    report.breakdown.probe_cost_total += t.probe_cost_total;
    report.breakdown.total += t.total;
  }
  const double m = static_cast<double>(replications);
  report.j_hat /= m;
  report.breakdown.entropy_cost /= m;
  report.breakdown.aoi_cost /= m;
  report.breakdown.probe_cost_total /= m;
  report.breakdown.total /= m;
  if (replications >= 2) {
    double ss = 0.0;
    for (const auto& t : totals) {
      const double d = t.total - report.j_hat;
      ss += d * d;
    }
    report.std_error = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  }
  return report;
}

}  // namespace probesim
