#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "breathline/bandpass.hpp"
#include "breathline/core.hpp"

namespace breathline {

/// Amplitude criterion applied per frame window. `threshold` is unitless
/// against samples normalized to [-1, 1]; the label is Exhalation only when
/// the window statistic strictly exceeds it.
struct ThresholdSpec {
  enum class Statistic { PeakAbs, Rms };
  double threshold = 0.01;
  Statistic statistic = Statistic::PeakAbs;

  void validate() const {
    if (!(threshold > 0.0 && threshold < 1.0))
      throw InvalidInputError("threshold must be in (0, 1), got " +
                              std::to_string(threshold));
  }
};

/// Neighborhood radius (in windows) for the majority smoothing pass.
/// delta = 0 degenerates to the identity map.
struct ConsistencySpec {
  int delta = 6;

  void validate() const {
    if (delta < 0)
      throw InvalidInputError("consistency delta must be >= 0, got " +
                              std::to_string(delta));
  }
};

/// Half-open sample range [begin, end).
struct SampleRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const SampleRange&, const SampleRange&) = default;
};

/// Per-frame audio windows: window i spans [round(i*fs/fps),
/// round((i+1)*fs/fps)). Consecutive windows share their boundary, so the
/// covered prefix is partitioned with no gaps or overlaps and the cumulative
/// rounding drift stays under one sample.
inline std::vector<SampleRange> frame_windows(const AudioTrack& track,
                                              double fps,
                                              std::size_t frame_count) {
  if (!(fps > 0.0)) throw InvalidInputError("fps must be positive");
  if (frame_count == 0) throw InvalidInputError("frame_count must be positive");
  const double step = track.sample_rate_hz / fps;
  std::vector<SampleRange> windows;
  windows.reserve(frame_count);
  std::size_t prev = 0;
  for (std::size_t i = 0; i < frame_count; ++i) {
    const auto end =
        static_cast<std::size_t>(std::llround(step * static_cast<double>(i + 1)));
    if (end > track.samples.size())
      throw InvalidInputError(
          "audio too short: frame " + std::to_string(i) + " needs samples up to " +
          std::to_string(end) + " but track has " +
          std::to_string(track.samples.size()));
    windows.push_back({prev, end});
    prev = end;
  }
  return windows;
}

inline std::vector<BreathState> threshold_classify(
    const AudioTrack& track, const std::vector<SampleRange>& windows,
    const ThresholdSpec& spec) {
  spec.validate();
  std::vector<BreathState> labels;
  labels.reserve(windows.size());
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto& r = windows[w];
    if (r.end <= r.begin)
      throw InvalidInputError("empty window at index " + std::to_string(w));
    if (r.end > track.samples.size())
      throw InvalidInputError("window " + std::to_string(w) +
                              " exceeds track bounds");
    double stat = 0.0;
    if (spec.statistic == ThresholdSpec::Statistic::PeakAbs) {
      for (std::size_t i = r.begin; i < r.end; ++i)
        stat = std::max(stat, std::abs(track.samples[i]));
    } else {
      double acc = 0.0;
      for (std::size_t i = r.begin; i < r.end; ++i)
        acc += track.samples[i] * track.samples[i];
      stat = std::sqrt(acc / static_cast<double>(r.size()));
    }
    labels.push_back(stat > spec.threshold ? BreathState::Exhalation
                                           : BreathState::Inhalation);
  }
  return labels;
}

/// Majority smoothing over the truncated window [i-delta, i+delta]: the
/// output is Exhalation when the window's mean numeric label is >= 0.5.
/// Ties only arise in boundary-truncated windows; they resolve toward
/// Exhalation.
inline std::vector<BreathState> nn_consistency(
    const std::vector<BreathState>& labels, const ConsistencySpec& spec) {
  spec.validate();
  const std::size_t n = labels.size();
  if (spec.delta == 0 || n == 0) return labels;
  // prefix[i] = count of Exhalation in labels[0, i)
  std::vector<std::size_t> prefix(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    prefix[i + 1] = prefix[i] + (labels[i] == BreathState::Exhalation ? 1 : 0);
  std::vector<BreathState> out(n);
  const auto delta = static_cast<std::size_t>(spec.delta);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= delta ? i - delta : 0;
    const std::size_t hi = std::min(n - 1, i + delta);
    const std::size_t ones = prefix[hi + 1] - prefix[lo];
    const std::size_t count = hi - lo + 1;
    out[i] = (2 * ones >= count) ? BreathState::Exhalation
                                 : BreathState::Inhalation;
  }
  return out;
}

/// The full fuzzy-labeling pipeline: bandpass, per-frame windows, amplitude
/// threshold, neighbor consistency. Timestamps are i / fps.
inline LabelStream label_audio(const AudioTrack& track, double fps,
                               std::size_t frame_count, const BandpassSpec& bp,
                               const ThresholdSpec& th,
                               const ConsistencySpec& cs) {
  const AudioTrack filtered = bandpass_filter(track, bp);
  const auto windows = frame_windows(filtered, fps, frame_count);
  const auto raw = threshold_classify(filtered, windows, th);
  const auto smoothed = nn_consistency(raw, cs);
  LabelStream stream;
  stream.reserve(frame_count);
  for (std::size_t i = 0; i < frame_count; ++i)
    stream.push_back({i, static_cast<double>(i) / fps, smoothed[i]});
  return stream;
}

}  // namespace breathline
