#pragma once

#include <stdexcept>

#include "probesim/model.hpp"

namespace test_support {

// The observation probabilities transcribed row by row as an independent
// oracle for the composed implementation. Rows are indexed by
// 4*F_MS + 2*F_S + F_SM; the value returned is P[z = 1].
inline double table1_hit_prob(int state_index, probesim::Action a, double p_g) {
  const bool probe = a == probesim::Action::probe;
  switch (state_index) {
    case 0: return probe ? 1.0 : p_g;
    case 1: return 0.0;
    case 2: return 0.0;
    case 3: return 0.0;
    case 4: return p_g;
    case 5: return 0.0;
    case 6: return 0.0;
    case 7: return 0.0;
    default: throw std::out_of_range("state index");
  }
}

inline double table1_observation_prob(int state_index, probesim::Action a, int z, double p_g) {
  const double hit = table1_hit_prob(state_index, a, p_g);
  return z == 1 ? hit : 1.0 - hit;
}

}  // namespace test_support
