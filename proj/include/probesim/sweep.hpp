#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "probesim/spsa.hpp"

namespace probesim {

// One scenario family: a base configuration, the parameter swept across it,
// and the policy roster evaluated at every point (SPSA-derived threshold
// policy plus fixed-D delay baselines).
struct SweepSpec {
  ScenarioConfig base;
  std::string parameter = "sm_p11";  // sm_p11 | sm_p01 | horizon
  std::vector<double> values;
  std::vector<int> delay_thresholds;
  bool include_threshold = true;
  SpsaConfig spsa;
  std::vector<std::array<double, 2>> spsa_starts = default_spsa_starts();
  int selection_reps = 400;
  int replications = 2000;  // M episodes per evaluation
};

struct SweepRow {
  double sweep_value = 0.0;
  double tau_sm_f = 0.0;
  std::string policy;
  EvalReport report;
  std::optional<std::array<double, 2>> theta;  // set on threshold rows
};

struct HorizonGapRow {
  int horizon = 0;
  double j_threshold = 0.0;
  double j_delay = 0.0;
  double relative_reduction = 0.0;  // (j_delay - j_threshold) / j_delay
  double combined_std_error = 0.0;
};

struct SweepResult {
  std::string name;
  std::vector<SweepRow> rows;
  std::vector<HorizonGapRow> gaps;  // filled by horizon sweeps
};

inline ScenarioConfig apply_sweep_parameter(const ScenarioConfig& base, const std::string& parameter,
                                            double v) {
  ScenarioConfig cfg = base;
  if (parameter == "sm_p11") {
    cfg.transition =
        build_joint_kernel(base.transition.ms, base.transition.sensor,
                           SubsystemKernel{base.transition.sm.p00, base.transition.sm.p01,
                                           1.0 - v, v});
  } else if (parameter == "sm_p01") {
    cfg.transition = build_joint_kernel(base.transition.ms, base.transition.sensor,
                                        SubsystemKernel{1.0 - v, v, base.transition.sm.p10,
                                                        base.transition.sm.p11});
  } else if (parameter == "horizon") {
    cfg.horizon = static_cast<int>(v);
  } else {
    throw std::invalid_argument("unknown sweep parameter: " + parameter);
  }
  return cfg;
}

namespace detail {

inline void evaluate_roster(const SweepSpec& spec, const ScenarioConfig& cfg, double sweep_value,
                            const RandomStream& point_stream, std::vector<SweepRow>& rows,
                            unsigned max_threads) {
  const double tau = stationary_fault_prob(cfg.transition.sm);
  if (spec.include_threshold) {
    const auto search = spsa_multistart(spec.spsa, cfg, spec.spsa_starts, point_stream.child(0),
                                        spec.selection_reps, max_threads);
    const ThresholdPolicy policy{search.theta[0], search.theta[1], spec.spsa.combiner};
    SweepRow row;
    row.sweep_value = sweep_value;
    row.tau_sm_f = tau;
    row.policy = policy_id(Policy{policy});
    row.report = monte_carlo_eval(cfg, Policy{policy}, spec.replications, point_stream.child(1),
                                  max_threads);
    row.theta = search.theta;
    rows.push_back(std::move(row));
  }
  for (std::size_t d = 0; d < spec.delay_thresholds.size(); ++d) {
    const DelayPolicy policy{spec.delay_thresholds[d]};
    SweepRow row;
    row.sweep_value = sweep_value;
    row.tau_sm_f = tau;
    row.policy = policy_id(Policy{policy});
    row.report = monte_carlo_eval(cfg, Policy{policy}, spec.replications,
                                  point_stream.child(2 + d), max_threads);
    rows.push_back(std::move(row));
  }
}

}  // namespace detail

// Evaluates the full roster at every sweep point; the threshold policy is
// re-optimized per point before its evaluation. Point i draws all of its
// randomness from rng.child(i).
inline SweepResult sweep_scenarios(const SweepSpec& spec, const RandomStream& rng,
                                   unsigned max_threads = 0) {
  if (spec.values.empty()) throw std::invalid_argument("sweep needs a nonempty value list");
  if (!spec.include_threshold && spec.delay_thresholds.empty()) {
    throw std::invalid_argument("sweep needs a nonempty policy roster");
  }
  SweepResult result;
  result.name = spec.parameter;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const ScenarioConfig cfg = apply_sweep_parameter(spec.base, spec.parameter, spec.values[i]);
    detail::evaluate_roster(spec, cfg, spec.values[i], rng.child(i), result.rows, max_threads);
  }
  return result;
}

// Horizon study: for each N the scenario is re-derived with lambda2 = N/100
// and the SM kernel pinned at p11 = 0.9, every policy is evaluated, and the
// threshold policy's relative cost reduction against the largest-D delay
// baseline is reported alongside.
inline SweepResult horizon_sweep(const SweepSpec& spec, const std::vector<int>& horizons,
                                 const RandomStream& rng, unsigned max_threads = 0) {
  if (horizons.empty()) throw std::invalid_argument("horizon sweep needs a nonempty horizon list");
  if (!spec.include_threshold && spec.delay_thresholds.empty()) {
    throw std::invalid_argument("horizon sweep needs a nonempty policy roster");
  }
  SweepResult result;
  result.name = "horizon";
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    const int n = horizons[i];
    ScenarioConfig cfg = spec.base;
    cfg.horizon = n;
    cfg.lambda2 = static_cast<double>(n) / 100.0;
    cfg.transition = build_joint_kernel(
        spec.base.transition.ms, spec.base.transition.sensor,
        SubsystemKernel{spec.base.transition.sm.p00, spec.base.transition.sm.p01, 0.1, 0.9});
    const std::size_t first_row = result.rows.size();
    detail::evaluate_roster(spec, cfg, static_cast<double>(n), rng.child(i), result.rows,
                            max_threads);
    if (spec.include_threshold && !spec.delay_thresholds.empty()) {
      int largest_d = spec.delay_thresholds.front();
      for (int d : spec.delay_thresholds) largest_d = std::max(largest_d, d);
      const SweepRow* threshold_row = nullptr;
      const SweepRow* delay_row = nullptr;
      for (std::size_t r = first_row; r < result.rows.size(); ++r) {
        if (result.rows[r].policy == "threshold") threshold_row = &result.rows[r];
        if (result.rows[r].policy == "delay_D" + std::to_string(largest_d)) {
          delay_row = &result.rows[r];
        }
      }
      if (threshold_row != nullptr && delay_row != nullptr) {
        HorizonGapRow gap;
        gap.horizon = n;
        gap.j_threshold = threshold_row->report.j_hat;
        gap.j_delay = delay_row->report.j_hat;
        gap.relative_reduction = (gap.j_delay - gap.j_threshold) / gap.j_delay;
        gap.combined_std_error = std::sqrt(threshold_row->report.std_error * threshold_row->report.std_error +
                                           delay_row->report.std_error * delay_row->report.std_error);
        result.gaps.push_back(gap);
      }
    }
  }
  return result;
}

}  // namespace probesim
