#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "probesim/belief.hpp"
#include "probesim/policy.hpp"
#include "probesim/scenario.hpp"

namespace probesim {

inline constexpr int kDefaultDpHorizonCap = 10;

struct DpNode;

struct DpChild {
  double prob = 0.0;
  std::unique_ptr<DpNode> node;
};

// One reachable augmented state in the belief tree. Interior nodes carry
// the cost-to-go of both actions and up to four (action, observation)
// children; zero-probability observation branches are pruned.
struct DpNode {
  BeliefState belief;
  int aoi = 1;
  int stage = 0;
  std::array<double, 2> action_cost{};
  double optimal_cost = 0.0;
  Action optimal_action = Action::no_probe;
  std::array<std::array<DpChild, 2>, 2> children;  // [action][observation]
  bool leaf = true;
};

struct DpSolution {
  std::unique_ptr<DpNode> root;
  int horizon = 0;      // number of decision stages in the tree
  int aoi_horizon = 1;  // the N used for AoI clamping and normalization
  std::size_t node_count = 0;
};

namespace detail {

struct DpBuilder {
  const ScenarioConfig& cfg;
  int depth;
  int aoi_horizon;
  std::size_t node_count = 0;

  double terminal_cost(const BeliefState& b, int aoi) const {
    return voi(health_entropy(health_projection(b)), static_cast<double>(aoi) / aoi_horizon,
               cfg.lambda1, cfg.lambda2);
  }

  std::unique_ptr<DpNode> build(const BeliefState& belief, int aoi, int stage) {
    auto node = std::make_unique<DpNode>();
    ++node_count;
    node->belief = belief;
    node->aoi = aoi;
    node->stage = stage;
    if (stage == depth) {
      node->optimal_cost = terminal_cost(belief, aoi);
      node->optimal_action = Action::no_probe;
      return node;
    }
    node->leaf = false;
    const auto q = predictive(belief, cfg.transition);
    const double stage_voi = terminal_cost(belief, aoi);
    for (int a = 0; a < 2; ++a) {
      const Action action = static_cast<Action>(a);
      double expected_future = 0.0;
      for (int z = 0; z < 2; ++z) {
        double pz = 0.0;
        for (int s = 0; s < kStateCount; ++s) {
          pz += q[static_cast<std::size_t>(s)] * observation_prob(decode_state(s), action, z, cfg.p_g);
        }
        if (pz <= 0.0) continue;
        auto& slot = node->children[static_cast<std::size_t>(a)][static_cast<std::size_t>(z)];
        slot.prob = pz;
        slot.node = build(belief_update(belief, action, z, cfg.transition, cfg.p_g),
                          aoi_update(aoi, z, aoi_horizon), stage + 1);
        expected_future += pz * slot.node->optimal_cost;
      }
      node->action_cost[static_cast<std::size_t>(a)] =
          stage_cost(action, stage_voi, cfg.probe_cost) + expected_future;
    }
    // Ties resolve toward probing so the Bellman argmin matches the
    // probe-advantage inequality c <= advantage at equality.
    if (node->action_cost[1] <= node->action_cost[0]) {
      node->optimal_action = Action::probe;
      node->optimal_cost = node->action_cost[1];
    } else {
      node->optimal_action = Action::no_probe;
      node->optimal_cost = node->action_cost[0];
    }
    return node;
  }
};

}  // namespace detail

// Exact backward induction over the tree of beliefs reachable from the
// initial augmented state; `horizon` is the number of decision stages and
// must stay under the cap (the tree grows as 4^horizon).
inline DpSolution dp_solve(const AugmentedState& initial, const ScenarioConfig& cfg, int horizon,
                           int horizon_cap = kDefaultDpHorizonCap) {
  if (horizon < 0) throw std::invalid_argument("dp horizon must be >= 0");
  if (horizon > horizon_cap) {
    throw std::invalid_argument("dp horizon " + std::to_string(horizon) +
                                " exceeds the configured cap " + std::to_string(horizon_cap));
  }
  if (initial.horizon < 1 || initial.aoi < 1 || initial.aoi > initial.horizon) {
    throw std::invalid_argument("initial augmented state must satisfy 1 <= aoi <= horizon");
  }
  detail::DpBuilder builder{cfg, horizon, initial.horizon};
  DpSolution solution;
  solution.root = builder.build(initial.belief, initial.aoi, 0);
  solution.horizon = horizon;
  solution.aoi_horizon = initial.horizon;
  solution.node_count = builder.node_count;
  return solution;
}

// Right-hand side of the probe-optimality inequality at an interior node:
// the expected cost-to-go of not probing minus that of probing, excluding
// the probing charge itself. The node's optimal action is probe iff
// c <= probe_advantage(node).
inline double probe_advantage(const DpNode& node, const ScenarioConfig&) {
  if (node.leaf) throw std::invalid_argument("probe_advantage is undefined on a leaf node");
  double expected[2] = {0.0, 0.0};
  for (int a = 0; a < 2; ++a) {
    for (int z = 0; z < 2; ++z) {
      const auto& child = node.children[static_cast<std::size_t>(a)][static_cast<std::size_t>(z)];
      if (child.node) expected[a] += child.prob * child.node->optimal_cost;
    }
  }
  return expected[0] - expected[1];
}

// Walks every node of a solved tree.
template <class Fn>
void visit_nodes(const DpNode& node, Fn&& fn) {
  fn(node);
  for (const auto& per_action : node.children) {
    for (const auto& child : per_action) {
      if (child.node) visit_nodes(*child.node, fn);
    }
  }
}

struct AoiMonotonicityReport {
  std::vector<double> j_values;  // J_0(P, aoi) for aoi = 1..horizon
  int violations = 0;
  double max_drop = 0.0;
};

// Lemma-3 style check: J_0(P, aoi) must be nondecreasing in the AoI.
inline AoiMonotonicityReport verify_aoi_monotonicity(const ScenarioConfig& cfg,
                                                     const BeliefState& belief, int horizon,
                                                     int horizon_cap = kDefaultDpHorizonCap) {
  AoiMonotonicityReport report;
  for (int aoi = 1; aoi <= horizon; ++aoi) {
    const auto solution = dp_solve(AugmentedState{belief, aoi, horizon}, cfg, horizon, horizon_cap);
    report.j_values.push_back(solution.root->optimal_cost);
  }
  for (std::size_t i = 1; i < report.j_values.size(); ++i) {
    const double drop = report.j_values[i - 1] - report.j_values[i];
    if (drop > 1e-10) {
      ++report.violations;
      if (drop > report.max_drop) report.max_drop = drop;
    }
  }
  return report;
}

struct ThresholdStructurePoint {
  double entropy = 0.0;
  double aoi_norm = 0.0;
  Action optimal_action = Action::no_probe;
  bool assumption2_holds = false;
};

struct ThresholdStructureReport {
  std::vector<ThresholdStructurePoint> points;
  // Pairs (i, j) where point j dominates point i componentwise, probing is
  // optimal at i but not at j.
  std::vector<std::pair<std::size_t, std::size_t>> violations;
  bool assumption2_all_hold = true;
};

// Theorem-1 check: collects the root decisions over a grid of augmented
// states and reports every violation of upward-closedness of the probe
// region in the (entropy, normalized AoI) componentwise order. Purely
// diagnostic when Assumption 2 fails on the grid.
inline ThresholdStructureReport verify_threshold_structure(
    const ScenarioConfig& cfg, int horizon, const std::vector<AugmentedState>& grid,
    int horizon_cap = kDefaultDpHorizonCap) {
  ThresholdStructureReport report;
  report.points.reserve(grid.size());
  for (const auto& state : grid) {
    const auto solution = dp_solve(state, cfg, horizon, horizon_cap);
    ThresholdStructurePoint point;
    point.entropy = health_entropy(health_projection(state.belief));
    point.aoi_norm = state.aoi_norm();
    point.optimal_action = solution.root->optimal_action;
    point.assumption2_holds = assumption2_check(state.belief, cfg.transition, cfg.p_g).holds;
    report.assumption2_all_hold = report.assumption2_all_hold && point.assumption2_holds;
    report.points.push_back(point);
  }
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    if (report.points[i].optimal_action != Action::probe) continue;
    for (std::size_t j = 0; j < report.points.size(); ++j) {
      const bool dominates = report.points[j].entropy >= report.points[i].entropy &&
                             report.points[j].aoi_norm >= report.points[i].aoi_norm;
      if (dominates && report.points[j].optimal_action == Action::no_probe) {
        report.violations.emplace_back(i, j);
      }
    }
  }
  return report;
}

// Follows the optimal actions of a solved tree during simulation; only
// meaningful with the decision-state bootstrap, whose slots map one-to-one
// onto tree levels.
struct DpTreePolicy {
  const DpSolution* solution = nullptr;
};

}  // namespace probesim
