#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "biorarsa/rng.hpp"
#include "biorarsa/stats.hpp"

using namespace biorarsa;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("mean and standard error of a small sample") {
  const std::vector<double> xs = {2.0, 4.0, 6.0};
  const MeanStderr ms = mean_stderr(xs);
  CHECK(ms.n == 3);
  CHECK_THAT(ms.mean, WithinRel(4.0, 1e-15));
  CHECK_THAT(ms.se, WithinRel(2.0 / std::sqrt(3.0), 1e-12));

  const std::vector<double> one = {7.5};
  const MeanStderr single = mean_stderr(one);
  CHECK(single.mean == 7.5);
  CHECK(single.se == 0.0);

  CHECK_THROWS_AS(mean_stderr(std::vector<double>{}), std::domain_error);
}

TEST_CASE("least squares recovers an exact line") {
  const std::vector<std::pair<double, double>> points = {{1.0, 8.0}, {2.0, 11.0}, {3.0, 14.0}};
  const LinearFit fit = linear_fit(points);
  CHECK_THAT(fit.slope, WithinRel(3.0, 1e-12));
  CHECK_THAT(fit.intercept, WithinRel(5.0, 1e-12));
  CHECK_THAT(fit.r_squared, WithinRel(1.0, 1e-12));
}

TEST_CASE("two distinct points always fit perfectly") {
  const std::vector<std::pair<double, double>> points = {{10.0, 3.0}, {20.0, -4.0}};
  const LinearFit fit = linear_fit(points);
  CHECK_THAT(fit.slope, WithinRel(-0.7, 1e-12));
  CHECK_THAT(fit.r_squared, WithinRel(1.0, 1e-12));
}

TEST_CASE("a constant target fits with unit r squared") {
  const std::vector<std::pair<double, double>> points = {{1.0, 5.0}, {2.0, 5.0}, {3.0, 5.0}};
  const LinearFit fit = linear_fit(points);
  CHECK_THAT(fit.slope, WithinAbs(0.0, 1e-12));
  CHECK_THAT(fit.intercept, WithinRel(5.0, 1e-12));
  CHECK(fit.r_squared == 1.0);
}

TEST_CASE("degenerate fits are rejected") {
  CHECK_THROWS_AS(linear_fit(std::vector<std::pair<double, double>>{{1.0, 2.0}}),
                  std::domain_error);
  CHECK_THROWS_AS(
      linear_fit(std::vector<std::pair<double, double>>{{2.0, 1.0}, {2.0, 3.0}, {2.0, 9.0}}),
      std::domain_error);
}

TEST_CASE("r squared stays within the unit interval on noisy data") {
  Rng rng(77);
  std::vector<std::pair<double, double>> points;
  for (int i = 0; i < 40; ++i) {
    points.emplace_back(static_cast<double>(i), 2.0 * i + rng.uniform(-30.0, 30.0));
  }
  const LinearFit fit = linear_fit(points);
  CHECK(fit.r_squared >= 0.0);
  CHECK(fit.r_squared <= 1.0);
}

TEST_CASE("gain percentage against a baseline") {
  CHECK_THAT(gain_percent(100.0, 70.0), WithinRel(30.0, 1e-12));
  CHECK_THAT(gain_percent(100.0, 108.7), WithinRel(-8.7, 1e-12));
  CHECK_THROWS_AS(gain_percent(0.0, 50.0), std::domain_error);
  CHECK_THROWS_AS(gain_percent(-10.0, 50.0), std::domain_error);
}

TEST_CASE("robustness spread is the worst-to-best cost ratio") {
  const std::map<double, double> flat = {{3.0, 100.0}, {9.0, 100.0}};
  CHECK_THAT(robustness_spread(flat), WithinRel(1.0, 1e-12));

  const std::map<double, double> tilted = {{3.0, 100.0}, {9.0, 160.0}};
  CHECK_THAT(robustness_spread(tilted), WithinRel(1.6, 1e-12));

  const std::map<double, double> wide = {{1.0, 80.0}, {5.0, 400.0}, {11.0, 120.0}};
  CHECK_THAT(robustness_spread(wide), WithinRel(5.0, 1e-12));
}

TEST_CASE("robustness spread rejects unusable inputs") {
  CHECK_THROWS_AS(robustness_spread({}), std::domain_error);
  CHECK_THROWS_AS(robustness_spread({{3.0, 100.0}}), std::domain_error);
  CHECK_THROWS_AS(robustness_spread({{3.0, 0.0}, {9.0, 10.0}}), std::domain_error);
}
