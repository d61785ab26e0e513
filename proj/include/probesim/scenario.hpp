#pragma once

#include <cstdint>
#include <stdexcept>

#include "probesim/belief.hpp"
#include "probesim/model.hpp"

namespace probesim {

// How the true component states are initialized at the start of an episode.
enum class InitialStateMode {
  random_half,  // independent Bernoulli(0.5) healthy/faulty per component
  stationary,   // each component drawn from its kernel's stationary law
  from_belief,  // joint state drawn from the initial belief
};

// Where the episode starts relative to the first observation. With
// prior_observation the first slot transitions the system and realizes z_0
// against the initial belief (the previous action defaults to no-probe);
// with decision_state the initial (belief, AoI) pair is the first decision
// state itself and the first observation is z_1. The latter couples
// episodes to the dynamic program's root exactly.
enum class BeliefBootstrap {
  prior_observation,
  decision_state,
};

struct ScenarioConfig {
  TransitionModel transition;
  double p_g = 0.1;
  double probe_cost = 1.0;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  int horizon = 100;
  BeliefState initial_belief = uniform_belief();
  int initial_aoi = 1;
  InitialStateMode initial_state_mode = InitialStateMode::random_half;
  BeliefBootstrap bootstrap = BeliefBootstrap::prior_observation;
  std::uint64_t seed = 1;
};

// Validates the invariants a scenario file must satisfy. Direct struct
// construction is left unchecked so degenerate setups stay expressible in
// tests.
inline void validate_scenario(const ScenarioConfig& cfg) {
  validate_kernel(cfg.transition.ms, "ms");
  validate_kernel(cfg.transition.sensor, "sensor");
  validate_kernel(cfg.transition.sm, "sm");
  if (!(cfg.p_g >= 0.0 && cfg.p_g < 1.0)) {
    throw std::invalid_argument("p_g must satisfy 0 <= p_g < 1");
  }
  if (cfg.probe_cost < 0.0) throw std::invalid_argument("probe_cost must be >= 0");
  if (cfg.lambda1 < 0.0 || cfg.lambda2 < 0.0) {
    throw std::invalid_argument("lambda1 and lambda2 must be >= 0");
  }
  if (cfg.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (cfg.initial_aoi < 1 || cfg.initial_aoi > cfg.horizon) {
    throw std::invalid_argument("initial_aoi must be in [1, horizon]");
  }
  double total = 0.0;
  for (double p : cfg.initial_belief.probs) {
    if (p < 0.0 || p > 1.0) {
      throw std::invalid_argument("initial_belief entries must be in [0, 1]");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kStochasticTol) {
    throw std::invalid_argument("initial_belief must sum to 1 within 1e-12");
  }
}

}  // namespace probesim
