#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace biorarsa {

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean, sample stddev / sqrt(n)
  std::size_t n = 0;
};

inline MeanStderr mean_stderr(std::span<const double> xs) {
  if (xs.empty()) throw std::domain_error("mean_stderr: empty sample");
  MeanStderr out;
  out.n = xs.size();
  double sum = 0.0;
  for (const double x : xs) sum += x;
  out.mean = sum / static_cast<double>(out.n);
  if (out.n < 2) return out;
  double ss = 0.0;
  for (const double x : xs) {
    const double d = x - out.mean;
    ss += d * d;
  }
  out.se = std::sqrt(ss / static_cast<double>(out.n - 1)) /
           std::sqrt(static_cast<double>(out.n));
  return out;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. Needs at least two
/// points with at least two distinct x values. r_squared is clamped to
/// [0, 1] and equals 1 when the residuals vanish, including the case of a
/// constant y (a zero-variance target fit exactly).
inline LinearFit linear_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw std::domain_error("linear_fit: need at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw std::domain_error("linear_fit: all x values coincide");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (fit.slope * x + fit.intercept);
    ss_res += r * r;
    ss_tot += (y - my) * (y - my);
  }
  if (ss_tot == 0.0) {
    fit.r_squared = 1.0;
  } else {
    const double r2 = 1.0 - ss_res / ss_tot;
    fit.r_squared = r2 < 0.0 ? 0.0 : (r2 > 1.0 ? 1.0 : r2);
  }
  return fit;
}

/// Percentage of transmissions saved by the candidate relative to the
/// baseline. Negative when the candidate needs more than the baseline.
inline double gain_percent(double baseline_mean, double candidate_mean) {
  if (!(baseline_mean > 0.0))
    throw std::domain_error("gain_percent: baseline mean must be positive");
  return (baseline_mean - candidate_mean) / baseline_mean * 100.0;
}

/// Sensitivity of a scheme to its initial stepsize: the ratio of the worst
/// to the best mean cost across the sampled stepsizes. 1 means perfectly
/// flat; large values mean the tuning matters a lot.
inline double robustness_spread(const std::map<double, double>& mean_by_stepsize) {
  if (mean_by_stepsize.size() < 2)
    throw std::domain_error("robustness_spread: need means for at least two stepsizes");
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& [stepsize, mean] : mean_by_stepsize) {
    if (!(mean > 0.0)) throw std::domain_error("robustness_spread: means must be positive");
    if (first) {
      lo = hi = mean;
      first = false;
    } else {
      if (mean < lo) lo = mean;
      if (mean > hi) hi = mean;
    }
  }
  return hi / lo;
}

}  // namespace biorarsa
