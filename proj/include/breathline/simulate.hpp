#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "breathline/bandpass.hpp"
#include "breathline/core.hpp"
#include "breathline/features.hpp"
#include "breathline/rng.hpp"
#include "breathline/tracker.hpp"

namespace breathline {

/// Scenario parameters. Defaults follow the working configuration: 15 s
/// clips at 29.94 fps with 48 kHz audio, a 56/44 exhalation/inhalation duty
/// split, exhalation noise well above all three labeling threshold presets
/// and background noise well below them.
struct ScenarioConfig {
  double duration_s = 15.0;
  double fps = 29.94;
  int sample_rate_hz = 48000;
  double rate_bpm = 12.0;
  double exhalation_fraction = 0.56;
  double period_jitter_frac = 0.0;
  double exhale_amp = 0.05;
  double background_amp = 0.002;
  double bubble_brightness = 0.9;
  int bubbles_min = 5;
  int bubbles_max = 15;
  int frame_size = 64;
  int label_lag_frames = 0;  // shifts visual bubbles later than audio truth
  std::uint64_t seed = 0;

  void validate() const {
    if (!(duration_s > 0.0)) throw InvalidInputError("duration_s must be positive");
    if (!(fps > 0.0)) throw InvalidInputError("fps must be positive");
    if (sample_rate_hz <= 0) throw InvalidInputError("sample_rate_hz must be positive");
    if (!(rate_bpm > 0.0)) throw InvalidInputError("rate_bpm must be positive");
    if (!(exhalation_fraction > 0.0 && exhalation_fraction < 1.0))
      throw InvalidInputError("exhalation_fraction must be in (0, 1)");
    if (period_jitter_frac < 0.0)
      throw InvalidInputError("period_jitter_frac must be >= 0");
    if (!(exhale_amp >= 0.0 && exhale_amp < 1.0 && background_amp >= 0.0 &&
          background_amp < 1.0))
      throw InvalidInputError("amplitudes must lie in [0, 1)");
    if (!(exhale_amp > background_amp))
      throw InvalidInputError("exhale_amp must exceed background_amp");
    if (!(bubble_brightness > 0.0 && bubble_brightness < 1.0))
      throw InvalidInputError("bubble_brightness must be in (0, 1)");
    if (bubbles_min < 0 || bubbles_max < bubbles_min)
      throw InvalidInputError("bubble count range invalid");
    if (frame_size <= 0) throw InvalidInputError("frame_size must be positive");
    if (label_lag_frames < 0)
      throw InvalidInputError("label_lag_frames must be >= 0");
    if (std::floor(duration_s * fps) < 1.0)
      throw InvalidInputError("scenario shorter than one frame");
  }

  std::size_t frame_count() const {
    return static_cast<std::size_t>(std::floor(duration_s * fps));
  }
};

/// A generated scenario: exact truth labels and transition times, the
/// matching audio track and the matching bubble frames.
struct Scenario {
  ScenarioConfig config;
  LabelStream truth_labels;
  std::vector<double> truth_transition_times_s;
  AudioTrack audio;
  std::vector<Frame> frames;
};

namespace detail {

// Breathing timeline: cycle k occupies [k*T, (k+1)*T); its leading
// exhalation segment lasts duty_k * T with duty_k = exhalation_fraction
// plus a per-cycle uniform jitter draw, clamped away from empty segments.
struct BreathTimeline {
  double period_s;
  std::vector<double> duty;  // per cycle

  bool exhaling_at(double t) const {
    const auto cycle = static_cast<std::size_t>(std::floor(t / period_s));
    const double phase = t - static_cast<double>(cycle) * period_s;
    const double d = cycle < duty.size() ? duty[cycle] : duty.back();
    return phase < d * period_s;
  }
};

inline BreathTimeline make_timeline(const ScenarioConfig& config, Rng jitter_rng) {
  BreathTimeline tl;
  tl.period_s = 60.0 / config.rate_bpm;
  const auto cycles = static_cast<std::size_t>(
      std::ceil(config.duration_s / tl.period_s)) + 2;
  tl.duty.reserve(cycles);
  for (std::size_t k = 0; k < cycles; ++k) {
    double d = config.exhalation_fraction;
    if (config.period_jitter_frac > 0.0)
      d += jitter_rng.uniform(-config.period_jitter_frac,
                              config.period_jitter_frac);
    tl.duty.push_back(std::clamp(d, 0.02, 0.98));
  }
  return tl;
}

inline double quantize_pixel(double v) {
  return std::llround(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
}

}  // namespace detail

/// Generates a complete scenario, deterministically for a given seed.
///
/// Audio: uniform white noise scaled by the per-segment amplitude envelope,
/// passed through the labeler's default bandpass so its energy lies in-band,
/// then rescaled to peak at exhale_amp and quantized to float32 (the track
/// in memory is bit-identical to its WAV serialization).
///
/// Frames: clamped Gaussian(0.3, 0.05) background; frames whose (lagged)
/// truth state is exhalation are stamped with bright disks of radius 2-6 px.
/// Pixels are quantized to the 8-bit grid so PGM round-trips exactly.
inline Scenario generate(const ScenarioConfig& config) {
  config.validate();
  Scenario scenario;
  scenario.config = config;

  Rng root(config.seed);
  const auto timeline = detail::make_timeline(config, root.fork(0));
  const std::size_t frame_count = config.frame_count();

  // truth labels at the frame instants i / fps
  scenario.truth_labels.reserve(frame_count);
  for (std::size_t i = 0; i < frame_count; ++i) {
    const double t = static_cast<double>(i) / config.fps;
    scenario.truth_labels.push_back(
        {i, t,
         timeline.exhaling_at(t) ? BreathState::Exhalation
                                 : BreathState::Inhalation});
  }
  // end-of-exhalation instants exactly as the tracker will observe them
  scenario.truth_transition_times_s = detect_transitions(scenario.truth_labels);

  // audio long enough to cover every frame window
  const double step = static_cast<double>(config.sample_rate_hz) / config.fps;
  const auto needed = static_cast<std::size_t>(
      std::llround(step * static_cast<double>(frame_count)));
  const auto ns = std::max(
      needed, static_cast<std::size_t>(
                  std::llround(config.duration_s * config.sample_rate_hz)));
  Rng audio_rng = root.fork(1);
  AudioTrack raw;
  raw.sample_rate_hz = config.sample_rate_hz;
  raw.samples.resize(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    const double t = static_cast<double>(i) / config.sample_rate_hz;
    const double amp =
        timeline.exhaling_at(t) ? config.exhale_amp : config.background_amp;
    raw.samples[i] = amp * audio_rng.uniform(-1.0, 1.0);
  }
  scenario.audio = bandpass_filter(raw, BandpassSpec{});
  double peak = 0.0;
  for (double v : scenario.audio.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double gain = config.exhale_amp / peak;
    for (double& v : scenario.audio.samples) v *= gain;
  }
  for (double& v : scenario.audio.samples)
    v = static_cast<double>(static_cast<float>(v));

  // frames
  Rng bg_rng = root.fork(2);
  Rng bubble_rng = root.fork(3);
  scenario.frames.reserve(frame_count);
  const int side = config.frame_size;
  for (std::size_t i = 0; i < frame_count; ++i) {
    Frame frame;
    frame.width = side;
    frame.height = side;
    frame.pixels.resize(static_cast<std::size_t>(side) * side);
    for (double& p : frame.pixels)
      p = std::clamp(0.3 + 0.05 * bg_rng.gaussian(), 0.0, 1.0);

    const bool bubbles =
        i >= static_cast<std::size_t>(config.label_lag_frames) &&
        scenario.truth_labels[i - config.label_lag_frames].label ==
            BreathState::Exhalation;
    if (bubbles) {
      const auto count = static_cast<int>(
          bubble_rng.uniform_int(config.bubbles_min, config.bubbles_max));
      for (int bidx = 0; bidx < count; ++bidx) {
        const int cx = static_cast<int>(bubble_rng.below(static_cast<std::uint64_t>(side)));
        const int cy = static_cast<int>(bubble_rng.below(static_cast<std::uint64_t>(side)));
        const int r = static_cast<int>(bubble_rng.uniform_int(2, 6));
        for (int y = std::max(0, cy - r); y <= std::min(side - 1, cy + r); ++y)
          for (int x = std::max(0, cx - r); x <= std::min(side - 1, cx + r); ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r)
              frame.at(x, y) = config.bubble_brightness;
      }
    }
    for (double& p : frame.pixels) p = detail::quantize_pixel(p);
    scenario.frames.push_back(std::move(frame));
  }
  return scenario;
}

/// Flips each label independently with probability flip_prob (timestamps and
/// indices untouched). Deterministic per seed.
inline LabelStream inject_label_noise(const LabelStream& labels,
                                      double flip_prob, std::uint64_t seed) {
  if (!(flip_prob >= 0.0 && flip_prob <= 1.0))
    throw InvalidInputError("flip_prob must lie in [0, 1]");
  Rng rng(seed);
  LabelStream noisy = labels;
  for (auto& frame : noisy)
    if (rng.uniform() < flip_prob) frame.label = flipped(frame.label);
  return noisy;
}

}  // namespace breathline
