#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "probesim/sim.hpp"

namespace probesim {

// Parameters of the simultaneous-perturbation threshold search. One
// perturbation gain eta_k = eta / k^zeta drives both the +/- probes and the
// gradient denominator; gamma_k = gamma / (k + A)^beta is the step size.
struct SpsaConfig {
  double gamma = 1e-3;
  double stability_offset = 1.0;  // A
  double eta = 1.0;
  double beta = 1.0;
  double zeta = 1.0;
  int iterations = 20;  // K
  int eval_reps = 100;  // M_s episodes per cost estimate
  Combiner combiner = Combiner::conjunctive;
  bool common_random_numbers = false;
  std::array<double, 2> initial_theta{0.5, 0.5};
};

inline void validate_spsa(const SpsaConfig& cfg) {
  if (!(cfg.gamma > 0.0 && cfg.stability_offset > 0.0 && cfg.eta > 0.0 && cfg.beta > 0.0 &&
        cfg.zeta > 0.0)) {
    throw std::invalid_argument("spsa gains (gamma, stability_offset, eta, beta, zeta) must be > 0");
  }
  if (cfg.iterations < 1) throw std::invalid_argument("spsa iterations must be >= 1");
  if (cfg.eval_reps < 1) throw std::invalid_argument("spsa eval_reps must be >= 1");
  for (double t : cfg.initial_theta) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("initial_theta must lie in [0, 1]^2");
  }
}

struct SpsaIterate {
  int k = 0;
  double gamma_k = 0.0;
  double eta_k = 0.0;
  std::array<double, 2> omega{};
  std::array<double, 2> theta_plus{};
  std::array<double, 2> theta_minus{};
  double y_plus = 0.0;
  double y_minus = 0.0;
  std::array<double, 2> gradient{};
  std::array<double, 2> theta{};  // iterate after the update
};

struct SpsaTrace {
  std::vector<SpsaIterate> iterations;
};

struct SpsaResult {
  std::array<double, 2> theta{};
  SpsaTrace trace;
};

inline std::pair<double, double> gain_sequences(const SpsaConfig& cfg, int k) {
  const double gamma_k = cfg.gamma / std::pow(k + cfg.stability_offset, cfg.beta);
  const double eta_k = cfg.eta / std::pow(static_cast<double>(k), cfg.zeta);
  return {gamma_k, eta_k};
}

inline std::array<double, 2> clamp01(std::array<double, 2> theta) {
  for (double& t : theta) t = std::clamp(t, 0.0, 1.0);
  return theta;
}

inline std::pair<std::array<double, 2>, std::array<double, 2>> perturb(
    const std::array<double, 2>& theta, double eta_k, const std::array<double, 2>& omega) {
  std::array<double, 2> plus{};
  std::array<double, 2> minus{};
  for (std::size_t i = 0; i < 2; ++i) {
    plus[i] = theta[i] + eta_k * omega[i];
    minus[i] = theta[i] - eta_k * omega[i];
  }
  return {clamp01(plus), clamp01(minus)};
}

// Mean total episode cost of the threshold policy over `reps` episodes.
inline double estimate_cost(const std::array<double, 2>& theta, Combiner combiner,
                            const ScenarioConfig& scenario, int reps, const RandomStream& rng,
                            unsigned max_threads = 0) {
  const ThresholdPolicy policy{theta[0], theta[1], combiner};
  return monte_carlo_eval(scenario, Policy{policy}, reps, rng, max_threads).j_hat;
}

// One SPSA run: perturb along a random +/-1 direction, estimate both costs,
// form the two-sided gradient estimate by elementwise division, step and
// clamp. The master stream is consumed only for the direction draws;
// iteration k evaluates on child streams 2k / 2k+1 (shared when common
// random numbers are on), so the trace is reproducible from the seed.
inline SpsaResult spsa_run(const SpsaConfig& cfg, const ScenarioConfig& scenario,
                           RandomStream rng, unsigned max_threads = 0) {
  std::array<double, 2> theta = clamp01(cfg.initial_theta);
  SpsaResult result;
  result.trace.iterations.reserve(static_cast<std::size_t>(cfg.iterations));
  for (int k = 1; k <= cfg.iterations; ++k) {
    SpsaIterate it;
    it.k = k;
    std::tie(it.gamma_k, it.eta_k) = gain_sequences(cfg, k);
    for (double& w : it.omega) w = rng.bernoulli(0.5) ? 1.0 : -1.0;
    std::tie(it.theta_plus, it.theta_minus) = perturb(theta, it.eta_k, it.omega);
    const auto plus_stream = rng.child(static_cast<std::uint64_t>(2 * k));
    const auto minus_stream =
        cfg.common_random_numbers ? plus_stream : rng.child(static_cast<std::uint64_t>(2 * k + 1));
    it.y_plus = estimate_cost(it.theta_plus, cfg.combiner, scenario, cfg.eval_reps, plus_stream,
                              max_threads);
    it.y_minus = estimate_cost(it.theta_minus, cfg.combiner, scenario, cfg.eval_reps, minus_stream,
                               max_threads);
    for (std::size_t i = 0; i < 2; ++i) {
      it.gradient[i] = (it.y_plus - it.y_minus) / (2.0 * it.eta_k * it.omega[i]);
      theta[i] -= it.gamma_k * it.gradient[i];
    }
    theta = clamp01(theta);
    it.theta = theta;
    result.trace.iterations.push_back(it);
  }
  result.theta = theta;
  return result;
}

struct SpsaStartOutcome {
  std::array<double, 2> start{};
  SpsaResult result;
  double selection_cost = 0.0;
};

struct SpsaMultistartResult {
  std::array<double, 2> theta{};
  double selection_cost = 0.0;
  std::vector<SpsaStartOutcome> starts;
};

inline std::vector<std::array<double, 2>> default_spsa_starts() {
  std::vector<std::array<double, 2>> starts;
  for (double h : {0.25, 0.5, 0.75}) {
    for (double d : {0.25, 0.5, 0.75}) starts.push_back({h, d});
  }
  return starts;
}

// SPSA converges to local optima, so the search is restarted from a grid of
// initial thresholds; every final candidate is then re-estimated on one
// shared stream (common random numbers) and the cheapest wins.
inline SpsaMultistartResult spsa_multistart(const SpsaConfig& cfg, const ScenarioConfig& scenario,
                                            const std::vector<std::array<double, 2>>& starts,
                                            const RandomStream& rng, int selection_reps = 400,
                                            unsigned max_threads = 0) {
  if (starts.empty()) throw std::invalid_argument("spsa_multistart needs at least one start");
  SpsaMultistartResult out;
  const auto selection_stream = rng.child(0);
  for (std::size_t s = 0; s < starts.size(); ++s) {
    SpsaConfig local = cfg;
    local.initial_theta = starts[s];
    SpsaStartOutcome outcome;
    outcome.start = starts[s];
    outcome.result = spsa_run(local, scenario, rng.child(s + 1), max_threads);
    outcome.selection_cost = estimate_cost(outcome.result.theta, cfg.combiner, scenario,
                                           selection_reps, selection_stream, max_threads);
    out.starts.push_back(std::move(outcome));
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < out.starts.size(); ++s) {
    if (out.starts[s].selection_cost < out.starts[best].selection_cost) best = s;
  }
  out.theta = out.starts[best].result.theta;
  out.selection_cost = out.starts[best].selection_cost;
  return out;
}

}  // namespace probesim
