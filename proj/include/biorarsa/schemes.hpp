#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biorarsa/channel.hpp"
#include "biorarsa/rng.hpp"

namespace biorarsa {

enum class SchemeKind { one_bit, reverse_tracking, reverse_tracking_swim, biorarsa };

inline constexpr std::array<SchemeKind, 4> all_schemes = {
    SchemeKind::one_bit,
    SchemeKind::reverse_tracking,
    SchemeKind::reverse_tracking_swim,
    SchemeKind::biorarsa,
};

inline std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::one_bit: return "one_bit";
    case SchemeKind::reverse_tracking: return "reverse_tracking";
    case SchemeKind::reverse_tracking_swim: return "reverse_tracking_swim";
    case SchemeKind::biorarsa: return "biorarsa";
  }
  throw std::invalid_argument("to_string: bad SchemeKind");
}

inline SchemeKind scheme_from_string(std::string_view name) {
  for (const SchemeKind kind : all_schemes) {
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

struct SchemeParams {
  double delta0 = 0.0;                  // initial sampling half-width, radians
  int hold_length = 5;                  // iterations between stepsize adjustments
  int max_swim = 5;                     // cap on accepted repeats of one perturbation
  double alpha = 0.5;                   // floor on the stepsize adjustment factor
  double c_stop = 0.75;                 // stop once magnitude >= c_stop * optimum
  std::uint64_t max_transmissions = 0;  // hard budget; reaching it ends the trial

  void validate() const {
    if (!(delta0 > 0.0)) throw std::invalid_argument("SchemeParams: delta0 must be positive");
    if (hold_length < 1) throw std::invalid_argument("SchemeParams: hold_length must be >= 1");
    if (max_swim < 1) throw std::invalid_argument("SchemeParams: max_swim must be >= 1");
    if (!(alpha > 0.0) || alpha > 1.0)
      throw std::invalid_argument("SchemeParams: alpha must be in (0, 1]");
    if (!(c_stop > 0.0) || !(c_stop < 1.0))
      throw std::invalid_argument("SchemeParams: c_stop must be in (0, 1)");
    if (max_transmissions < 1)
      throw std::invalid_argument("SchemeParams: max_transmissions must be >= 1");
  }
};

/// Mutable search state threaded through the steppers. phases always equals
/// the best point found so far; rejected candidates are never applied.
struct SchemeState {
  PhaseVector phases;
  double stepsize = 0.0;
  std::uint64_t iteration = 0;   // completed outer iterations
  std::vector<int> swim_window;  // swim lengths since the last stepsize adjustment
  std::uint64_t transmissions = 0;
  FeedbackState feedback;
};

enum class StepStatus { running, converged, capped };

/// Everything a single trial records. Cost is counted in transmissions: one
/// per candidate evaluation, the quantity all schemes are compared on.
struct TrialRecord {
  std::uint64_t transmissions = 0;
  bool converged = false;
  /// (transmission index, best magnitude) at index 0 and after every accepted
  /// candidate; the running maximum over the trial.
  std::vector<std::pair<std::uint64_t, double>> magnitude_trajectory;
  /// (epoch, stepsize in radians); epoch 0 is delta0, one entry per
  /// adjustment. Constant except under the adaptive scheme.
  std::vector<std::pair<std::uint64_t, double>> stepsize_trace;
  /// Swim length beta_k of every completed iteration (swim-capable schemes).
  std::vector<int> swim_lengths;
  /// Transmissions spent by each started iteration, in order.
  std::vector<int> iteration_probes;
  PhaseVector final_phases;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Outcome of one outer iteration.
struct StepOutcome {
  StepStatus status = StepStatus::running;
  int probes = 0;        // transmissions this iteration
  int swim_length = 0;   // accepted applications of this iteration's perturbation
  bool accepted = false; // did the iteration improve the best point at all
  bool completed = false;// false when the trial stopped mid-iteration
};

namespace detail {

/// Shared probe bookkeeping. Each probe() call is one transmission: the
/// network sends theta + scale * delta, the receiver measures it, feeds back
/// one bit, and the stopping rule is checked. On improvement the offset is
/// folded into the phase vector with the exact arithmetic used to evaluate
/// it, so re-measuring the stored point reproduces best_magnitude bitwise.
struct TrialContext {
  const ChannelRealization& channel;
  SchemeState& state;
  double target_magnitude;
  std::uint64_t max_transmissions;
  StepStatus status = StepStatus::running;
  std::vector<std::pair<std::uint64_t, double>>* trajectory = nullptr;
  std::vector<double> delta;

  TrialContext(const ChannelRealization& ch, SchemeState& st, double target, std::uint64_t cap)
      : channel(ch), state(st), target_magnitude(target), max_transmissions(cap),
        delta(ch.size(), 0.0) {}

  bool probe(double scale) {
    const double mag = magnitude_with_offset(channel, state.phases, delta, scale);
    state.transmissions += 1;
    const bool improved = feedback_bit(state.feedback, mag);
    if (improved) {
      for (std::size_t i = 0; i < delta.size(); ++i) state.phases[i] += scale * delta[i];
      state.feedback.best_magnitude = mag;
      state.feedback.best_phases = state.phases;
      if (trajectory) trajectory->emplace_back(state.transmissions, mag);
    }
    // Target first: a probe that crosses the target on the budget's last
    // transmission counts as converged, not capped.
    if (state.feedback.best_magnitude >= target_magnitude) {
      status = StepStatus::converged;
    } else if (state.transmissions >= max_transmissions) {
      status = StepStatus::capped;
    }
    return improved;
  }
};

}  // namespace detail

/// Fill out with one perturbation, each entry uniform in [-halfwidth, halfwidth).
inline void perturb(Rng& rng, double halfwidth, std::span<double> out) {
  for (double& d : out) d = rng.uniform(-halfwidth, halfwidth);
}

/// Fixed-stepsize baseline: draw a perturbation, keep it only if the bit
/// comes back 1. One transmission per iteration.
template <typename Perturb>
StepOutcome step_one_bit(detail::TrialContext& trial, const SchemeParams&, Perturb&& draw) {
  draw(std::span<double>(trial.delta), trial.state.stepsize);
  StepOutcome out;
  out.accepted = trial.probe(+1.0);
  out.probes = 1;
  out.status = trial.status;
  out.completed = (trial.status == StepStatus::running);
  if (out.completed) trial.state.iteration += 1;
  return out;
}

/// Reverse tracking: if the forward candidate theta + delta fails, try the
/// mirrored candidate theta - delta before giving up on the direction.
template <typename Perturb>
StepOutcome step_reverse_tracking(detail::TrialContext& trial, const SchemeParams&, Perturb&& draw) {
  draw(std::span<double>(trial.delta), trial.state.stepsize);
  StepOutcome out;
  out.accepted = trial.probe(+1.0);
  out.probes = 1;
  if (trial.status == StepStatus::running && !out.accepted) {
    out.accepted = trial.probe(-1.0);
    out.probes += 1;
  }
  out.status = trial.status;
  out.completed = (trial.status == StepStatus::running);
  if (out.completed) trial.state.iteration += 1;
  return out;
}

/// Reverse tracking followed by swimming: once a direction is accepted, keep
/// re-applying the same scaled perturbation while the bit stays 1, up to
/// max_swim accepted moves. swim_length counts the accepted moves: 0 means
/// both directions were rejected, max_swim means the guard stopped the swim
/// before any probe failed.
template <typename Perturb>
StepOutcome step_swim(detail::TrialContext& trial, const SchemeParams& params, Perturb&& draw) {
  draw(std::span<double>(trial.delta), trial.state.stepsize);
  StepOutcome out;
  double direction = +1.0;
  out.accepted = trial.probe(direction);
  out.probes = 1;
  if (trial.status == StepStatus::running && !out.accepted) {
    direction = -1.0;
    out.accepted = trial.probe(direction);
    out.probes += 1;
  }
  if (out.accepted) {
    out.swim_length = 1;
    while (trial.status == StepStatus::running && out.swim_length < params.max_swim) {
      const bool moved = trial.probe(direction);
      out.probes += 1;
      if (!moved) break;
      out.swim_length += 1;
    }
  }
  out.status = trial.status;
  out.completed = (trial.status == StepStatus::running);
  if (out.completed) trial.state.iteration += 1;
  return out;
}

/// Stepsize adjustment rule: scale the current stepsize by the mean absolute
/// swim length over the last hold_length iterations, floored at alpha. Long
/// swims mean the steps are too small; a window of all-rejected iterations
/// shrinks the stepsize by alpha.
inline double stepsize_update(double current, std::span<const int> swim_window, double alpha,
                              int hold_length) {
  if (swim_window.empty()) throw std::invalid_argument("stepsize_update: empty swim window");
  if (static_cast<int>(swim_window.size()) != hold_length)
    throw std::invalid_argument("stepsize_update: window holds " +
                                std::to_string(swim_window.size()) + " entries, expected " +
                                std::to_string(hold_length));
  double total = 0.0;
  for (const int beta : swim_window) total += std::abs(beta);
  const double factor = total / static_cast<double>(hold_length);
  return current * std::max(alpha, factor);
}

/// The full adaptive iteration: step_swim plus the periodic stepsize
/// adjustment. Swim lengths are banked per completed iteration; every
/// hold_length of them triggers one adjustment and empties the window.
template <typename Perturb>
StepOutcome step_biorarsa(detail::TrialContext& trial, const SchemeParams& params, Perturb&& draw,
                          std::vector<std::pair<std::uint64_t, double>>* stepsize_trace = nullptr) {
  StepOutcome out = step_swim(trial, params, draw);
  if (out.completed) {
    SchemeState& state = trial.state;
    state.swim_window.push_back(out.swim_length);
    if (static_cast<int>(state.swim_window.size()) == params.hold_length) {
      state.stepsize = stepsize_update(state.stepsize, state.swim_window, params.alpha,
                                       params.hold_length);
      state.swim_window.clear();
      if (stepsize_trace) {
        stepsize_trace->emplace_back(state.iteration / static_cast<std::uint64_t>(params.hold_length),
                                     state.stepsize);
      }
    }
  }
  return out;
}

/// Run one Monte Carlo trial of a scheme over a fixed channel. The initial
/// phase vector is drawn uniformly from [0, 2*pi)^n unless supplied. Stops as
/// soon as the best magnitude reaches c_stop times the coherent optimum, or
/// when the transmission budget runs out (converged = false). A start already
/// inside the stopping region costs zero transmissions.
inline TrialRecord run_trial(SchemeKind kind, const ChannelRealization& channel,
                             const SchemeParams& params, std::uint64_t seed,
                             const PhaseVector* initial_phases = nullptr) {
  params.validate();
  if (channel.size() == 0) throw std::invalid_argument("run_trial: empty channel");

  Rng rng(seed);
  SchemeState state;
  state.phases.resize(channel.size());
  if (initial_phases != nullptr) {
    if (initial_phases->size() != channel.size())
      throw std::invalid_argument("run_trial: initial phase vector length mismatch");
    state.phases = *initial_phases;
  } else {
    for (double& theta : state.phases) theta = rng.angle();
  }
  state.stepsize = params.delta0;
  state.feedback.best_magnitude = magnitude(channel, state.phases);
  state.feedback.best_phases = state.phases;

  const double target = params.c_stop * optimal_magnitude(channel);

  TrialRecord record;
  record.magnitude_trajectory.emplace_back(0, state.feedback.best_magnitude);
  record.stepsize_trace.emplace_back(0, params.delta0);

  detail::TrialContext trial(channel, state, target, params.max_transmissions);
  trial.trajectory = &record.magnitude_trajectory;

  if (state.feedback.best_magnitude >= target) {
    record.converged = true;
  } else {
    auto draw = [&rng](std::span<double> out, double halfwidth) {
      perturb(rng, halfwidth, out);
    };
    while (trial.status == StepStatus::running) {
      StepOutcome out;
      switch (kind) {
        case SchemeKind::one_bit:
          out = step_one_bit(trial, params, draw);
          break;
        case SchemeKind::reverse_tracking:
          out = step_reverse_tracking(trial, params, draw);
          break;
        case SchemeKind::reverse_tracking_swim:
          out = step_swim(trial, params, draw);
          break;
        case SchemeKind::biorarsa:
          out = step_biorarsa(trial, params, draw, &record.stepsize_trace);
          break;
      }
      record.iteration_probes.push_back(out.probes);
      if (out.completed &&
          (kind == SchemeKind::reverse_tracking_swim || kind == SchemeKind::biorarsa)) {
        record.swim_lengths.push_back(out.swim_length);
      }
    }
    record.converged = (trial.status == StepStatus::converged);
  }

  record.transmissions = state.transmissions;
  record.final_phases = std::move(state.phases);
  return record;
}

}  // namespace biorarsa
