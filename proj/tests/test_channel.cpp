#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "biorarsa/channel.hpp"

using namespace biorarsa;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ChannelRealization make_channel(std::vector<double> gains, double power = 1.0) {
  ChannelRealization ch;
  ch.gains = std::move(gains);
  ch.channel_phases.assign(ch.gains.size(), 0.0);
  ch.power = power;
  return ch;
}

constexpr double pi = std::numbers::pi;

}  // namespace

TEST_CASE("magnitude of aligned and opposed phase pairs") {
  const ChannelRealization ch = make_channel({1.0, 1.0});
  CHECK_THAT(magnitude(ch, std::vector<double>{0.0, 0.0}), WithinRel(2.0, 1e-15));
  CHECK_THAT(magnitude(ch, std::vector<double>{0.0, pi}), WithinAbs(0.0, 1e-15));
}

TEST_CASE("magnitude of a quadrature pair") {
  const ChannelRealization ch = make_channel({3.0, 4.0});
  CHECK_THAT(magnitude(ch, std::vector<double>{0.0, pi / 2.0}), WithinRel(5.0, 1e-15));
}

TEST_CASE("magnitude scales with the square root of power") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    ChannelRealization ch = make_channel({rng.rayleigh(), rng.rayleigh(), rng.rayleigh()});
    const std::vector<double> thetas = {rng.angle(), rng.angle(), rng.angle()};
    const double base = magnitude(ch, thetas);
    ch.power = 4.0;
    CHECK_THAT(magnitude(ch, thetas), WithinRel(2.0 * base, 1e-12));
  }
}

TEST_CASE("magnitude rejects a wrong-length phase vector") {
  const ChannelRealization ch = make_channel({1.0, 1.0});
  CHECK_THROWS_AS(magnitude(ch, std::vector<double>{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(magnitude(ch, std::vector<double>{0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("offset evaluation matches evaluating the shifted vector") {
  Rng rng(11);
  const ChannelRealization ch =
      generate_channel(8, 2.5, AmplitudeModel::rayleigh, 99);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> thetas(8), delta(8), shifted(8);
    for (int i = 0; i < 8; ++i) {
      thetas[i] = rng.angle();
      delta[i] = rng.uniform(-0.3, 0.3);
    }
    const double scale = rng.uniform(-2.0, 2.0);
    for (int i = 0; i < 8; ++i) shifted[i] = thetas[i] + scale * delta[i];
    CHECK(magnitude_with_offset(ch, thetas, delta, scale) == magnitude(ch, shifted));
  }
}

TEST_CASE("optimal magnitude is the weighted gain sum") {
  CHECK_THAT(optimal_magnitude(make_channel({1.0, 2.0, 3.0})), WithinRel(6.0, 1e-15));
  CHECK_THAT(optimal_magnitude(make_channel({1.0}, 4.0)), WithinRel(2.0, 1e-15));
  CHECK_THAT(optimal_magnitude(make_channel({0.5, 0.5})), WithinRel(1.0, 1e-15));
}

TEST_CASE("no phase vector beats the coherent optimum") {
  Rng rng(23);
  for (int rep = 0; rep < 200; ++rep) {
    const ChannelRealization ch =
        generate_channel(12, 1.0, AmplitudeModel::rayleigh, 1000 + rep);
    std::vector<double> thetas(12);
    for (double& t : thetas) t = rng.angle();
    CHECK(magnitude(ch, thetas) <= optimal_magnitude(ch) * (1.0 + 1e-12));
  }
}

TEST_CASE("magnitude is invariant under a common phase shift") {
  Rng rng(31);
  const ChannelRealization ch = generate_channel(10, 1.0, AmplitudeModel::rayleigh, 5);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> thetas(10), shifted(10);
    for (double& t : thetas) t = rng.angle();
    const double common = rng.uniform(-6.0, 6.0);
    for (int i = 0; i < 10; ++i) shifted[i] = thetas[i] + common;
    CHECK_THAT(magnitude(ch, shifted), WithinRel(magnitude(ch, thetas), 1e-12));
  }
}

TEST_CASE("feedback bit is 1 only on strict improvement") {
  FeedbackState state;
  state.best_magnitude = 5.0;
  CHECK(feedback_bit(state, 5.0000001));
  CHECK_FALSE(feedback_bit(state, 5.0));
  CHECK_FALSE(feedback_bit(state, 4.9999999));
}

TEST_CASE("channel generation is deterministic in the seed") {
  const ChannelRealization a = generate_channel(50, 1.0, AmplitudeModel::rayleigh, 42);
  const ChannelRealization b = generate_channel(50, 1.0, AmplitudeModel::rayleigh, 42);
  const ChannelRealization c = generate_channel(50, 1.0, AmplitudeModel::rayleigh, 43);
  CHECK(a.gains == b.gains);
  CHECK(a.channel_phases == b.channel_phases);
  CHECK(a.gains != c.gains);
}

TEST_CASE("unit amplitude model pins every gain to one") {
  const ChannelRealization ch = generate_channel(64, 1.0, AmplitudeModel::unit, 7);
  for (const double g : ch.gains) CHECK(g == 1.0);
  for (const double p : ch.channel_phases) {
    CHECK(p >= 0.0);
    CHECK(p < two_pi);
  }
}

TEST_CASE("rayleigh amplitudes have the expected mean") {
  const ChannelRealization ch = generate_channel(1000, 1.0, AmplitudeModel::rayleigh, 1234);
  double sum = 0.0;
  for (const double g : ch.gains) {
    CHECK(g >= 0.0);
    sum += g;
  }
  const double mean = sum / 1000.0;
  const double expected = std::sqrt(pi) / 2.0;
  CHECK_THAT(mean, WithinRel(expected, 0.05));
}

TEST_CASE("channel generation rejects degenerate inputs") {
  CHECK_THROWS_AS(generate_channel(0, 1.0, AmplitudeModel::unit, 1), std::domain_error);
  CHECK_THROWS_AS(generate_channel(4, 0.0, AmplitudeModel::unit, 1), std::domain_error);
  CHECK_THROWS_AS(generate_channel(4, -1.0, AmplitudeModel::unit, 1), std::domain_error);
}
