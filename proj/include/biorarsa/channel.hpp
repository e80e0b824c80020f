#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "biorarsa/rng.hpp"

namespace biorarsa {

/// Total phase of each transmitter (beamforming phase plus channel phase),
/// in radians.
using PhaseVector = std::vector<double>;

enum class AmplitudeModel { rayleigh, unit };

/// One flat-fading snapshot of the network: per-transmitter channel gain
/// a_i >= 0 and channel phase, plus the common per-node transmit power P.
/// The channel is held fixed for the duration of a trial.
struct ChannelRealization {
  std::vector<double> gains;
  std::vector<double> channel_phases;
  double power = 1.0;

  std::size_t size() const noexcept { return gains.size(); }
};

/// Received signal magnitude sqrt(P) * |sum_i a_i exp(j theta_i)| for total
/// phases theta. This is the only quantity the receiver can measure.
inline double magnitude(const ChannelRealization& channel, std::span<const double> thetas) {
  if (thetas.size() != channel.size()) {
    throw std::invalid_argument("magnitude: phase vector has " + std::to_string(thetas.size()) +
                                " entries for a channel of size " + std::to_string(channel.size()));
  }
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    re += channel.gains[i] * std::cos(thetas[i]);
    im += channel.gains[i] * std::sin(thetas[i]);
  }
  return std::sqrt(channel.power) * std::sqrt(re * re + im * im);
}

/// Magnitude of the candidate point theta + scale * delta, without forming
/// the candidate vector. Applying the same scaled offset to the phase vector
/// afterwards reproduces exactly the angles evaluated here.
inline double magnitude_with_offset(const ChannelRealization& channel, std::span<const double> thetas,
                                    std::span<const double> delta, double scale) {
  if (thetas.size() != channel.size() || delta.size() != channel.size()) {
    throw std::invalid_argument("magnitude_with_offset: length mismatch");
  }
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double angle = thetas[i] + scale * delta[i];
    re += channel.gains[i] * std::cos(angle);
    im += channel.gains[i] * std::sin(angle);
  }
  return std::sqrt(channel.power) * std::sqrt(re * re + im * im);
}

/// Magnitude at the coherent optimum, attained when every total phase is
/// equal: sqrt(P) * sum_i a_i. Upper bound for magnitude() over all phases.
inline double optimal_magnitude(const ChannelRealization& channel) {
  double sum = 0.0;
  for (const double a : channel.gains) sum += a;
  return std::sqrt(channel.power) * sum;
}

inline ChannelRealization generate_channel(std::size_t n, double power, AmplitudeModel model,
                                           std::uint64_t seed) {
  if (n == 0) throw std::domain_error("generate_channel: node count must be positive");
  if (!(power > 0.0)) throw std::domain_error("generate_channel: power must be positive");
  ChannelRealization channel;
  channel.power = power;
  channel.gains.resize(n);
  channel.channel_phases.resize(n);
  Rng rng(seed);
  // Phases are drawn before gains so both amplitude models see the same
  // channel phase sequence for a given seed.
  for (std::size_t i = 0; i < n; ++i) channel.channel_phases[i] = rng.angle();
  for (std::size_t i = 0; i < n; ++i) {
    channel.gains[i] = (model == AmplitudeModel::rayleigh) ? rng.rayleigh() : 1.0;
  }
  return channel;
}

/// Receiver-side memory: the largest magnitude seen so far and the phase
/// vector that produced it. best_magnitude == magnitude(channel, best_phases)
/// holds exactly at all times.
struct FeedbackState {
  double best_magnitude = 0.0;
  PhaseVector best_phases;
};

/// The one bit broadcast after each transmission: 1 iff the candidate
/// strictly beats the best magnitude so far. Ties count as no improvement.
inline bool feedback_bit(const FeedbackState& state, double candidate_magnitude) {
  return candidate_magnitude > state.best_magnitude;
}

}  // namespace biorarsa
