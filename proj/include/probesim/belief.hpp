#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "probesim/model.hpp"

namespace probesim {

// Raised when a belief update conditions on an observation the belief
// assigns probability zero. In a simulation this indicates the generative
// sampler and the tracked belief have diverged; it is never renormalized
// away silently.
class ImpossibleObservationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Probability distribution over the eight joint health states.
struct BeliefState {
  std::array<double, kStateCount> probs{};

  double operator[](int i) const { return probs[static_cast<std::size_t>(i)]; }

  friend bool operator==(const BeliefState&, const BeliefState&) = default;
};

inline BeliefState uniform_belief() {
  BeliefState b;
  b.probs.fill(1.0 / kStateCount);
  return b;
}

inline BeliefState point_mass(int state_index) {
  BeliefState b;
  b.probs[static_cast<std::size_t>(decode_state(state_index).index())] = 1.0;
  return b;
}

// Two-state belief over the generation-transmission subsystem
// (sensor + SM link): healthy iff both components are healthy.
struct HealthBelief {
  double healthy = 1.0;
  double faulty = 0.0;
};

// Belief augmented with the AoI needed for decisions; horizon is the N
// used both for AoI clamping and normalization.
struct AugmentedState {
  BeliefState belief;
  int aoi = 1;
  int horizon = 1;

  double aoi_norm() const { return static_cast<double>(aoi) / horizon; }
};

// The closed-form posterior building blocks of the z = 0 cases:
//   xi1  = sum_i p^i p_{i0} (1 - P_g)
//   xi2  = sum_i p^i p_{i4} (1 - P_g)
//   phi  = [sum_i p^i p_{ij}] for j in {1, 2, 3, 5, 6, 7}
// These are also exactly the quantities the Assumption-2 equivalence
// (xi1 + xi2 <= phi_s) is stated in.
struct ClosedFormComponents {
  double xi1 = 0.0;
  double xi2 = 0.0;
  std::array<double, 6> phi{};
  double phi_s = 0.0;
};

inline constexpr std::array<int, 6> kFaultyStates = {1, 2, 3, 5, 6, 7};

namespace detail {

// Predictive distribution q_j = sum_i p^i p_{ij}.
inline std::array<double, kStateCount> predictive(const BeliefState& b,
                                                  const TransitionModel& model) {
  std::array<double, kStateCount> q{};
  for (int i = 0; i < kStateCount; ++i) {
    const double p = b.probs[static_cast<std::size_t>(i)];
    if (p == 0.0) continue;
    for (int j = 0; j < kStateCount; ++j) {
      q[static_cast<std::size_t>(j)] += p * model.joint[i][j];
    }
  }
  return q;
}

// Divides by the total mass and pins the largest entry so the entries sum
// to one exactly; keeps degenerate posteriors (e.g. supported on {0, 4})
// exactly normalized.
inline BeliefState normalize(const std::array<double, kStateCount>& unnormalized, Action action,
                             int obs) {
  double total = 0.0;
  for (double u : unnormalized) total += u;
  if (!(total > 0.0)) {
    throw ImpossibleObservationError("belief update conditioned on an impossible observation (a=" +
                                     std::to_string(value(action)) +
                                     ", z=" + std::to_string(obs) + ")");
  }
  BeliefState out;
  std::size_t argmax = 0;
  for (std::size_t j = 0; j < kStateCount; ++j) {
    out.probs[j] = unnormalized[j] / total;
    if (out.probs[j] > out.probs[argmax]) argmax = j;
  }
  double rest = 0.0;
  for (std::size_t j = 0; j < kStateCount; ++j) {
    if (j != argmax) rest += out.probs[j];
  }
  out.probs[argmax] = 1.0 - rest;
  return out;
}

}  // namespace detail

// Exact Bayes recursion: posterior_j proportional to
// (sum_i p^i p_{ij}) * r_j(a, z). Throws ImpossibleObservationError when
// the belief assigns zero probability to the observation.
inline BeliefState belief_update(const BeliefState& belief, Action action, int obs,
                                 const TransitionModel& model, double p_g) {
  const auto q = detail::predictive(belief, model);
  std::array<double, kStateCount> u{};
  for (int j = 0; j < kStateCount; ++j) {
    u[static_cast<std::size_t>(j)] =
        q[static_cast<std::size_t>(j)] * observation_prob(decode_state(j), action, obs, p_g);
  }
  return detail::normalize(u, action, obs);
}

inline ClosedFormComponents closed_form_components(const BeliefState& belief,
                                                   const TransitionModel& model, double p_g) {
  ClosedFormComponents c;
  for (int i = 0; i < kStateCount; ++i) {
    const double p = belief.probs[static_cast<std::size_t>(i)];
    if (p == 0.0) continue;
    c.xi1 += p * model.joint[i][0] * (1.0 - p_g);
    c.xi2 += p * model.joint[i][4] * (1.0 - p_g);
    for (std::size_t k = 0; k < kFaultyStates.size(); ++k) {
      c.phi[k] += p * model.joint[i][static_cast<std::size_t>(kFaultyStates[k])];
    }
  }
  for (double f : c.phi) c.phi_s += f;
  return c;
}

// Posterior via the closed-form expressions, case by case:
//   (a=0, z=1): [phi1, 0, 0, 0, phi2, 0, 0, 0] / (phi1 + phi2), phi = P_g-scaled masses
//   (a=1, z=1): [xi1, 0, 0, 0, xi2, 0, 0, 0] / (xi1 + xi2), xi1 unscaled, xi2 P_g-scaled
//   (a=0, z=0): [xi1, phi_1, .., xi2, .., phi_7] / (xi1 + xi2 + phi_s)
//   (a=1, z=0): state-0 coordinate is zero; normalizer xi2 + phi_s
// Returns the posterior together with the z=0 components used by the
// Assumption-2 equivalence.
inline std::pair<BeliefState, ClosedFormComponents> closed_form_posterior(
    const BeliefState& belief, Action action, int obs, const TransitionModel& model, double p_g) {
  const ClosedFormComponents comp = closed_form_components(belief, model, p_g);
  std::array<double, kStateCount> u{};
  if (obs == 1) {
    double mass0 = 0.0;
    double mass4 = 0.0;
    for (int i = 0; i < kStateCount; ++i) {
      const double p = belief.probs[static_cast<std::size_t>(i)];
      mass0 += p * model.joint[i][0];
      mass4 += p * model.joint[i][4];
    }
    u[0] = action == Action::probe ? mass0 : mass0 * p_g;
    u[4] = mass4 * p_g;
  } else {
    u[0] = action == Action::probe ? 0.0 : comp.xi1;
    u[4] = comp.xi2;
    for (std::size_t k = 0; k < kFaultyStates.size(); ++k) {
      u[static_cast<std::size_t>(kFaultyStates[k])] = comp.phi[k];
    }
  }
  return {detail::normalize(u, action, obs), comp};
}

// Projects the 8-state belief onto the GT-subsystem health: states 0 and 4
// are the only ones with both the sensor and the SM link healthy.
inline HealthBelief health_projection(const BeliefState& b) {
  HealthBelief hb;
  hb.healthy = b.probs[0] + b.probs[4];
  hb.faulty = 0.0;
  for (int j : kFaultyStates) hb.faulty += b.probs[static_cast<std::size_t>(j)];
  return hb;
}

// Binary Shannon entropy in bits, with 0 * log2(0) == 0.
inline double health_entropy(const HealthBelief& hb) {
  auto plogp = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
  const double t = plogp(hb.healthy) + plogp(hb.faulty);
  return t == 0.0 ? 0.0 : -t;
}

// AoI recursion: reset on reception, otherwise increment clamped at the
// horizon.
inline int aoi_update(int aoi, int obs, int horizon) {
  return obs == 1 ? 1 : std::min(horizon, aoi + 1);
}

// Value of information: lambda1 * H + lambda2 * normalized AoI.
inline double voi(double hb_entropy, double aoi_norm, double lambda1, double lambda2) {
  return lambda1 * hb_entropy + lambda2 * aoi_norm;
}

// Per-slot cost: probing charge plus the VoI.
inline double stage_cost(Action action, double voi_value, double probe_cost) {
  return (action == Action::probe ? probe_cost : 0.0) + voi_value;
}

struct Assumption2Result {
  bool holds = false;
  double lhs = 0.0;
};

// Left-hand side of the probing-never-increases-entropy condition:
//   sum_i p^i [ p^S_{i1,0} p^SM_{i2,0} (2 - P_g) - 1 ] <= 0.
inline Assumption2Result assumption2_check(const BeliefState& belief, const TransitionModel& model,
                                           double p_g) {
  Assumption2Result r;
  for (int i = 0; i < kStateCount; ++i) {
    const SystemState s = decode_state(i);
    const double bracket = model.sensor.to_healthy(value(s.sensor)) *
                               model.sm.to_healthy(value(s.sm)) * (2.0 - p_g) -
                           1.0;
    r.lhs += belief.probs[static_cast<std::size_t>(i)] * bracket;
  }
  r.holds = r.lhs <= 0.0;
  return r;
}

// Self-test of the equivalence between the condition above and
// xi1 + xi2 <= phi_s, each side computed through its own route. Ties
// within 1e-12 of zero count as agreement.
inline bool assumption2_equivalence(const BeliefState& belief, const TransitionModel& model,
                                    double p_g) {
  constexpr double tol = 1e-12;
  const double lhs = assumption2_check(belief, model, p_g).lhs;
  const ClosedFormComponents c = closed_form_components(belief, model, p_g);
  const double diff = c.xi1 + c.xi2 - c.phi_s;
  auto sign = [&](double x) { return x > tol ? 1 : (x < -tol ? -1 : 0); };
  return sign(lhs) == sign(diff) || sign(lhs) == 0 || sign(diff) == 0;
}

}  // namespace probesim
