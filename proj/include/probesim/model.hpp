#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "probesim/rng.hpp"

namespace probesim {

inline constexpr int kStateCount = 8;
inline constexpr double kStochasticTol = 1e-12;

// Health status of one subsystem: 0 = healthy, 1 = faulty.
enum class Health : int { healthy = 0, faulty = 1 };

// Monitor actions: request a mandatory status update or stay silent.
enum class Action : int { no_probe = 0, probe = 1 };

inline int value(Health h) { return static_cast<int>(h); }
inline int value(Action a) { return static_cast<int>(a); }

// Joint health state of (MS link, sensor, SM link). The index packs the
// three flags as 4*ms + 2*sensor + sm, so index 0 is the all-healthy state
// and index 7 the all-faulty one.
struct SystemState {
  Health ms = Health::healthy;
  Health sensor = Health::healthy;
  Health sm = Health::healthy;

  int index() const { return 4 * value(ms) + 2 * value(sensor) + value(sm); }

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

inline SystemState encode_state(Health ms, Health sensor, Health sm) {
  return SystemState{ms, sensor, sm};
}

inline SystemState decode_state(int index) {
  if (index < 0 || index >= kStateCount) {
    throw std::out_of_range("state index must be in [0, 7], got " + std::to_string(index));
  }
  return SystemState{static_cast<Health>((index >> 2) & 1),
                     static_cast<Health>((index >> 1) & 1),
                     static_cast<Health>(index & 1)};
}

// Per-slot transition probabilities of one two-state subsystem.
// Row 0 is the healthy state, row 1 the faulty state.
struct SubsystemKernel {
  double p00 = 1.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 1.0;

  double prob(int from, int to) const {
    return from == 0 ? (to == 0 ? p00 : p01) : (to == 0 ? p10 : p11);
  }
  // Probability of being healthy next slot given the current status.
  double to_healthy(int from) const { return from == 0 ? p00 : p10; }
};

inline void validate_kernel(const SubsystemKernel& k, const std::string& name) {
  auto check_row = [&](double a, double b, int row) {
    if (a < -kStochasticTol || a > 1.0 + kStochasticTol || b < -kStochasticTol ||
        b > 1.0 + kStochasticTol) {
      throw std::invalid_argument(name + " kernel row " + std::to_string(row) +
                                  " has an entry outside [0, 1]");
    }
    if (std::abs(a + b - 1.0) > kStochasticTol) {
      throw std::invalid_argument(name + " kernel row " + std::to_string(row) + " sums to " +
                                  std::to_string(a + b) + " (must be 1 within 1e-12)");
    }
  };
  check_row(k.p00, k.p01, 0);
  check_row(k.p10, k.p11, 1);
}

// Three subsystem kernels plus the derived 8x8 joint kernel. Entry (i, j)
// of the joint kernel is the product of the three per-subsystem transition
// probabilities for the bit decompositions of i and j.
struct TransitionModel {
  SubsystemKernel ms;
  SubsystemKernel sensor;
  SubsystemKernel sm;
  std::array<std::array<double, kStateCount>, kStateCount> joint{};
};

inline TransitionModel build_joint_kernel(const SubsystemKernel& ms, const SubsystemKernel& sensor,
                                          const SubsystemKernel& sm) {
  validate_kernel(ms, "ms");
  validate_kernel(sensor, "sensor");
  validate_kernel(sm, "sm");
  TransitionModel model{ms, sensor, sm, {}};
  for (int i = 0; i < kStateCount; ++i) {
    const SystemState from = decode_state(i);
    for (int j = 0; j < kStateCount; ++j) {
      const SystemState to = decode_state(j);
      model.joint[i][j] = ms.prob(value(from.ms), value(to.ms)) *
                          sensor.prob(value(from.sensor), value(to.sensor)) *
                          sm.prob(value(from.sm), value(to.sm));
    }
  }
  return model;
}

// Probability r_s(a, z) of observing z given the current state and the
// action of the previous slot. Composed from the slot's three events in
// causal order: probe delivery over the MS link, update generation at the
// sensor, delivery over the SM link. A probe only forces generation when
// it actually reached the sensor.
inline double observation_prob(const SystemState& s, Action prev_action, int obs, double p_g) {
  const bool probe_delivered = prev_action == Action::probe && s.ms == Health::healthy;
  double generated;  // P[W^g = 1]
  if (s.sensor == Health::faulty) {
    generated = 0.0;
  } else {
    generated = probe_delivered ? 1.0 : p_g;
  }
  const double arrived = s.sm == Health::healthy ? generated : 0.0;  // P[z = 1]
  return obs == 1 ? arrived : 1.0 - arrived;
}

// Next state drawn from row state.index() of the joint kernel.
template <class Rng>
SystemState sample_transition(Rng& rng, const SystemState& state, const TransitionModel& model) {
  const auto& row = model.joint[state.index()];
  const double u = rng.uniform();
  double acc = 0.0;
  for (int j = 0; j < kStateCount; ++j) {
    acc += row[j];
    if (u < acc) return decode_state(j);
  }
  return decode_state(kStateCount - 1);
}

// Realizes the slot's W variables in causal order and returns z.
template <class Rng>
int sample_observation(Rng& rng, const SystemState& state, Action prev_action, double p_g) {
  const bool probe_delivered = prev_action == Action::probe && state.ms == Health::healthy;
  bool generated;
  if (state.sensor == Health::faulty) {
    generated = false;
  } else {
    generated = probe_delivered ? true : rng.bernoulli(p_g);
  }
  return (generated && state.sm == Health::healthy) ? 1 : 0;
}

// Stationary probability of the faulty state, p01 / (1 - p11 + p01).
inline double stationary_fault_prob(const SubsystemKernel& k) {
  const double denom = 1.0 - k.p11 + k.p01;
  if (denom <= 0.0) {
    throw std::domain_error(
        "stationary fault probability undefined: faulty state is absorbing (p01 = 0, p11 = 1)");
  }
  return k.p01 / denom;
}

}  // namespace probesim
