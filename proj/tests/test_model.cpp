#include <catch2/catch_amalgamated.hpp>

#include "probesim/model.hpp"
#include "probesim/verify.hpp"
#include "support/table1.hpp"

using namespace probesim;

namespace {

SubsystemKernel basic_kernel() { return SubsystemKernel{0.9, 0.1, 0.9, 0.1}; }

TransitionModel basic_model() {
  return build_joint_kernel(basic_kernel(), basic_kernel(), basic_kernel());
}

}  // namespace

TEST_CASE("state encoding matches the observation-table row order") {
  CHECK(encode_state(Health::healthy, Health::healthy, Health::healthy).index() == 0);
  CHECK(encode_state(Health::faulty, Health::healthy, Health::healthy).index() == 4);
  CHECK(encode_state(Health::faulty, Health::faulty, Health::faulty).index() == 7);
  CHECK(encode_state(Health::healthy, Health::faulty, Health::healthy).index() == 2);
  for (int i = 0; i < kStateCount; ++i) {
    CHECK(decode_state(i).index() == i);
  }
  CHECK_THROWS_AS(decode_state(8), std::out_of_range);
}

TEST_CASE("joint kernel entries are products of the subsystem entries") {
  const TransitionModel model = basic_model();
  CHECK(model.joint[0][0] == Catch::Approx(0.729).margin(1e-15));
  // spot-check a mixed transition: (1,0,1) -> (0,1,1)
  const int from = encode_state(Health::faulty, Health::healthy, Health::faulty).index();
  const int to = encode_state(Health::healthy, Health::faulty, Health::faulty).index();
  CHECK(model.joint[from][to] == Catch::Approx(0.9 * 0.1 * 0.1).margin(1e-15));
}

TEST_CASE("identity kernels give the identity joint kernel") {
  const SubsystemKernel id{1.0, 0.0, 0.0, 1.0};
  const TransitionModel model = build_joint_kernel(id, id, id);
  for (int i = 0; i < kStateCount; ++i) {
    for (int j = 0; j < kStateCount; ++j) {
      CHECK(model.joint[i][j] == (i == j ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("joint kernel rows are stochastic for random kernel triples") {
  RandomStream rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const TransitionModel model = random_model(rng);
    for (int i = 0; i < kStateCount; ++i) {
      double row = 0.0;
      for (int j = 0; j < kStateCount; ++j) row += model.joint[i][j];
      REQUIRE(row == Catch::Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("non-stochastic kernels are rejected") {
  CHECK_THROWS_AS(build_joint_kernel(SubsystemKernel{0.9, 0.05, 0.9, 0.1}, basic_kernel(),
                                     basic_kernel()),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_joint_kernel(basic_kernel(), SubsystemKernel{1.2, -0.2, 0.9, 0.1},
                                     basic_kernel()),
                  std::invalid_argument);
}

TEST_CASE("observation probabilities match the hard-coded table") {
  const double p_g = 0.1;
  CHECK(observation_prob(decode_state(0), Action::no_probe, 1, p_g) == p_g);
  CHECK(observation_prob(decode_state(4), Action::probe, 1, p_g) == p_g);
  CHECK(observation_prob(decode_state(2), Action::probe, 0, p_g) == 1.0);
  CHECK(observation_prob(decode_state(0), Action::probe, 1, p_g) == 1.0);
  for (double pg : {0.0, 0.1, 0.5, 0.93}) {
    for (int i = 0; i < kStateCount; ++i) {
      for (Action a : {Action::no_probe, Action::probe}) {
        for (int z : {0, 1}) {
          CAPTURE(pg, i, value(a), z);
          REQUIRE(observation_prob(decode_state(i), a, z, pg) ==
                  test_support::table1_observation_prob(i, a, z, pg));
        }
      }
    }
  }
}

TEST_CASE("observation probabilities sum to one over z") {
  RandomStream rng(7);
  for (int t = 0; t < 200; ++t) {
    const double pg = rng.uniform();
    for (int i = 0; i < kStateCount; ++i) {
      for (Action a : {Action::no_probe, Action::probe}) {
        const double total = observation_prob(decode_state(i), a, 0, pg) +
                             observation_prob(decode_state(i), a, 1, pg);
        REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
      }
    }
  }
}

TEST_CASE("transition sampling follows the joint kernel") {
  RandomStream rng(11);
  SECTION("identity kernels are absorbing") {
    const SubsystemKernel id{1.0, 0.0, 0.0, 1.0};
    const TransitionModel model = build_joint_kernel(id, id, id);
    for (int i = 0; i < kStateCount; ++i) {
      CHECK(sample_transition(rng, decode_state(i), model).index() == i);
    }
  }
  SECTION("all-to-healthy kernels force state zero") {
    const SubsystemKernel heal{1.0, 0.0, 1.0, 0.0};
    const TransitionModel model = build_joint_kernel(heal, heal, heal);
    for (int i = 0; i < kStateCount; ++i) {
      CHECK(sample_transition(rng, decode_state(i), model).index() == 0);
    }
  }
  SECTION("empirical frequency matches joint[0][0] on the basic kernels") {
    const TransitionModel model = basic_model();
    const int draws = 100000;
    int hits = 0;
    for (int t = 0; t < draws; ++t) {
      if (sample_transition(rng, decode_state(0), model).index() == 0) ++hits;
    }
    const double p = 0.729;
    const double sigma = std::sqrt(p * (1.0 - p) / draws);
    CHECK(std::abs(static_cast<double>(hits) / draws - p) < 3.0 * sigma);
  }
}

TEST_CASE("observation sampling matches the table probabilities") {
  RandomStream rng(13);
  SECTION("all-faulty state never delivers") {
    for (int t = 0; t < 100; ++t) {
      CHECK(sample_observation(rng, decode_state(7), Action::no_probe, 0.5) == 0);
      CHECK(sample_observation(rng, decode_state(7), Action::probe, 0.5) == 0);
    }
  }
  SECTION("probing the all-healthy state always delivers") {
    for (int t = 0; t < 100; ++t) {
      CHECK(sample_observation(rng, decode_state(0), Action::probe, 0.1) == 1);
    }
  }
  SECTION("unprobed all-healthy state delivers at the generation rate") {
    const int draws = 100000;
    const double p_g = 0.1;
    int hits = 0;
    for (int t = 0; t < draws; ++t) {
      hits += sample_observation(rng, decode_state(0), Action::no_probe, p_g);
    }
    const double sigma = std::sqrt(p_g * (1.0 - p_g) / draws);
    CHECK(std::abs(static_cast<double>(hits) / draws - p_g) < 3.0 * sigma);
  }
}

TEST_CASE("stationary fault probability") {
  CHECK(stationary_fault_prob(SubsystemKernel{0.9, 0.1, 0.9, 0.1}) ==
        Catch::Approx(0.1).margin(1e-15));
  CHECK(stationary_fault_prob(SubsystemKernel{0.8, 0.2, 0.1, 0.9}) ==
        Catch::Approx(0.2 / 0.3).margin(1e-12));
  CHECK(stationary_fault_prob(SubsystemKernel{1.0, 0.0, 0.5, 0.5}) == 0.0);
  CHECK_THROWS_AS(stationary_fault_prob(SubsystemKernel{1.0, 0.0, 0.0, 1.0}), std::domain_error);
}

TEST_CASE("random streams are reproducible and children independent") {
  RandomStream a(42);
  RandomStream b(42);
  for (int i = 0; i < 64; ++i) REQUIRE(a() == b());
  RandomStream c0 = a.child(0);
  RandomStream c1 = a.child(1);
  CHECK(c0() != c1());
  RandomStream c0_again = b.child(0);
  // child identity depends only on (seed, index), not on stream position
  CHECK(c0_again() == RandomStream(42).child(0)());
}
