#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "breathline/core.hpp"

namespace breathline {

// Exhalation -> Inhalation transitions mark the end of a respiration cycle.
// A transition is timestamped at the *last exhalation frame*, i.e. the
// earlier frame of the pair. Rates come from the gaps between successive
// transition times: each gap contributes an instantaneous rate of 60/gap
// breaths per minute and the estimate is the mean of those.

/// Computes the end-of-exhalation times of a label stream, in seconds.
/// `min_gap_s` optionally drops transitions closer than that to the last
/// accepted one (off by default; the consistency pass upstream is the
/// intended debouncer).
inline std::vector<double> detect_transitions(const LabelStream& stream,
                                              double min_gap_s = 0.0) {
  if (min_gap_s < 0.0)
    throw InvalidInputError("min_gap_s must be >= 0");
  std::vector<double> times;
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].index <= stream[i - 1].index ||
        stream[i].timestamp_s <= stream[i - 1].timestamp_s)
      throw InvalidInputError(
          "label stream not strictly increasing at position " +
          std::to_string(i));
    if (stream[i].label == BreathState::Inhalation &&
        stream[i - 1].label == BreathState::Exhalation) {
      const double t = stream[i - 1].timestamp_s;
      if (times.empty() || t - times.back() >= min_gap_s) times.push_back(t);
    }
  }
  return times;
}

/// Turns transition times into a rate estimate. Fewer than two transitions
/// is the no-estimate outcome (a valid result, not an error). With N >= 2
/// times there are N-1 gaps; rate_bpm is the mean of the per-gap rates
/// 60/gap and std_bpm their sample standard deviation (zero for a single
/// gap, matching the single-cycle convention).
inline RespirationEstimate estimate_rate(std::vector<double> transition_times_s) {
  for (std::size_t i = 1; i < transition_times_s.size(); ++i)
    if (transition_times_s[i] <= transition_times_s[i - 1])
      throw InvalidInputError("transition times must be strictly increasing");
  const std::size_t n = transition_times_s.size();
  if (n < 2) return RespirationEstimate::no_estimate(std::move(transition_times_s));

  std::vector<double> cycle_rates;
  cycle_rates.reserve(n - 1);
  for (std::size_t j = 1; j < n; ++j)
    cycle_rates.push_back(60.0 /
                          (transition_times_s[j] - transition_times_s[j - 1]));

  double mean = 0.0;
  for (double r : cycle_rates) mean += r;
  mean /= static_cast<double>(cycle_rates.size());

  double std_bpm = 0.0;
  if (cycle_rates.size() >= 2) {
    double ss = 0.0;
    for (double r : cycle_rates) ss += (r - mean) * (r - mean);
    std_bpm = std::sqrt(ss / static_cast<double>(cycle_rates.size() - 1));
  }

  RespirationEstimate est;
  est.ok = true;
  est.rate_bpm = mean;
  est.std_bpm = std_bpm;
  est.cycle_count = n - 1;
  est.transition_times_s = std::move(transition_times_s);
  return est;
}

inline RespirationEstimate predict_respiration_rate(const LabelStream& stream,
                                                    double min_gap_s = 0.0) {
  return estimate_rate(detect_transitions(stream, min_gap_s));
}

/// Incremental tracker state; a value type, updated functionally.
struct TrackerState {
  std::optional<LabeledFrame> previous;
  std::vector<double> transition_times_s;
  std::size_t frames_seen = 0;
  double min_gap_s = 0.0;
};

/// Feeds one frame. Returns the advanced state plus a fresh estimate exactly
/// when this frame completed a new transition and at least two transitions
/// exist; the emitted estimate equals the batch result on the prefix seen so
/// far. An out-of-order frame throws and leaves the input state untouched.
inline std::pair<TrackerState, std::optional<RespirationEstimate>>
streaming_update(TrackerState state, const LabeledFrame& frame) {
  if (state.previous &&
      (frame.timestamp_s <= state.previous->timestamp_s ||
       frame.index <= state.previous->index))
    throw InvalidInputError("streaming frame out of order at index " +
                            std::to_string(frame.index));
  std::optional<RespirationEstimate> emitted;
  if (state.previous && state.previous->label == BreathState::Exhalation &&
      frame.label == BreathState::Inhalation) {
    const double t = state.previous->timestamp_s;
    if (state.transition_times_s.empty() ||
        t - state.transition_times_s.back() >= state.min_gap_s) {
      state.transition_times_s.push_back(t);
      if (state.transition_times_s.size() >= 2)
        emitted = estimate_rate(state.transition_times_s);
    }
  }
  state.previous = frame;
  ++state.frames_seen;
  return {std::move(state), std::move(emitted)};
}

}  // namespace breathline
