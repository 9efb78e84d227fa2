#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "breathline/labeler.hpp"
#include "breathline/rng.hpp"

using namespace breathline;

namespace {

AudioTrack track_of(std::vector<double> samples, int fs = 48000) {
  AudioTrack t;
  t.sample_rate_hz = fs;
  t.samples = std::move(samples);
  return t;
}

// independent oracle for the consistency pass: literal truncated-window mean
std::vector<BreathState> consistency_oracle(const std::vector<BreathState>& in,
                                            int delta) {
  std::vector<BreathState> out(in.size());
  const int n = static_cast<int>(in.size());
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    int count = 0;
    for (int j = std::max(0, i - delta); j <= std::min(n - 1, i + delta); ++j) {
      sum += to_int(in[static_cast<std::size_t>(j)]);
      ++count;
    }
    out[static_cast<std::size_t>(i)] = (sum / count >= 0.5)
                                           ? BreathState::Exhalation
                                           : BreathState::Inhalation;
  }
  return out;
}

}  // namespace

TEST_CASE("frame windows at 29.94 fps give 1603 samples for frame 0") {
  AudioTrack t;
  t.sample_rate_hz = 48000;
  t.samples.assign(48000 * 16, 0.0);
  const auto windows = frame_windows(t, 29.94, 449);
  CHECK(windows[0].begin == 0);
  CHECK(windows[0].end == 1603);
}

TEST_CASE("frame windows at 30 fps are exactly 1600 samples each") {
  AudioTrack t;
  t.sample_rate_hz = 48000;
  t.samples.assign(48000 * 2, 0.0);
  const auto windows = frame_windows(t, 30.0, 60);
  for (const auto& w : windows) CHECK(w.size() == 1600);
}

TEST_CASE("frame windows partition the covered prefix with no gaps") {
  AudioTrack t;
  t.sample_rate_hz = 48000;
  t.samples.assign(48000 * 16, 0.0);
  const auto windows = frame_windows(t, 29.94, 449);
  REQUIRE(windows.size() == 449);
  for (std::size_t i = 1; i < windows.size(); ++i)
    REQUIRE(windows[i].begin == windows[i - 1].end);
  CHECK(windows.back().end ==
        static_cast<std::size_t>(std::llround(449.0 * 48000.0 / 29.94)));
  // per-window drift never exceeds one sample
  const double step = 48000.0 / 29.94;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    CHECK(std::abs(static_cast<double>(windows[i].end) - step * (i + 1)) <= 0.5);
  }
}

TEST_CASE("too-short audio names the first uncoverable frame") {
  AudioTrack t;
  t.sample_rate_hz = 48000;
  t.samples.assign(3000, 0.0);
  CHECK_THROWS_WITH(frame_windows(t, 29.94, 3),
                    Catch::Matchers::ContainsSubstring("frame 1"));
}

TEST_CASE("threshold classification follows the strict exceeds rule") {
  ThresholdSpec spec;
  spec.threshold = 0.0125;

  auto t = track_of({0.0, 0.02, -0.01, 0.0});
  auto labels = threshold_classify(t, {{0, 4}}, spec);
  CHECK(labels == std::vector<BreathState>{BreathState::Exhalation});

  auto zeros = track_of(std::vector<double>(100, 0.0));
  spec.threshold = 0.0001;
  labels = threshold_classify(zeros, {{0, 100}}, spec);
  CHECK(labels == std::vector<BreathState>{BreathState::Inhalation});

  // boundary: value equal to the threshold does not exceed it
  auto flat = track_of(std::vector<double>(50, 0.01));
  spec.threshold = 0.01;
  labels = threshold_classify(flat, {{0, 50}}, spec);
  CHECK(labels == std::vector<BreathState>{BreathState::Inhalation});
}

TEST_CASE("rms statistic differs from peak on spiky windows") {
  // one spike in a long quiet window: peak crosses, rms does not
  // (rms of a single 0.2 spike over 1000 samples is ~0.0063)
  std::vector<double> samples(1000, 0.0);
  samples[500] = 0.2;
  auto t = track_of(samples);
  ThresholdSpec peak{0.01, ThresholdSpec::Statistic::PeakAbs};
  ThresholdSpec rms{0.01, ThresholdSpec::Statistic::Rms};
  CHECK(threshold_classify(t, {{0, 1000}}, peak)[0] == BreathState::Exhalation);
  CHECK(threshold_classify(t, {{0, 1000}}, rms)[0] == BreathState::Inhalation);
}

TEST_CASE("empty or out-of-bounds windows are rejected") {
  auto t = track_of(std::vector<double>(10, 0.0));
  CHECK_THROWS_AS(threshold_classify(t, {{5, 5}}, ThresholdSpec{}),
                  InvalidInputError);
  CHECK_THROWS_AS(threshold_classify(t, {{5, 20}}, ThresholdSpec{}),
                  InvalidInputError);
}

TEST_CASE("raising the threshold never flips inhalation to exhalation") {
  Rng rng(5);
  std::vector<double> samples(4000);
  for (auto& s : samples) s = rng.uniform(-0.03, 0.03);
  auto t = track_of(samples);
  std::vector<SampleRange> windows;
  for (std::size_t i = 0; i < 40; ++i) windows.push_back({i * 100, (i + 1) * 100});
  for (auto stat : {ThresholdSpec::Statistic::PeakAbs, ThresholdSpec::Statistic::Rms}) {
    const auto lo = threshold_classify(t, windows, {0.009, stat});
    const auto hi = threshold_classify(t, windows, {0.0125, stat});
    for (std::size_t i = 0; i < windows.size(); ++i)
      if (hi[i] == BreathState::Exhalation)
        REQUIRE(lo[i] == BreathState::Exhalation);
  }
}

TEST_CASE("a 12-vs-1 majority corrects the flipped middle label") {
  std::vector<BreathState> labels(13, BreathState::Exhalation);
  labels[6] = BreathState::Inhalation;
  const auto out = nn_consistency(labels, {6});
  for (auto s : out) CHECK(s == BreathState::Exhalation);
}

TEST_CASE("delta zero is the identity map") {
  std::vector<BreathState> labels;
  Rng rng(3);
  for (int i = 0; i < 64; ++i)
    labels.push_back(rng.uniform() < 0.5 ? BreathState::Exhalation
                                         : BreathState::Inhalation);
  CHECK(nn_consistency(labels, {0}) == labels);
}

TEST_CASE("consistency matches the sliding-window-mean oracle") {
  std::vector<BreathState> alternating;
  for (int i = 0; i < 29; ++i)
    alternating.push_back(i % 2 ? BreathState::Exhalation
                                : BreathState::Inhalation);
  CHECK(nn_consistency(alternating, {6}) == consistency_oracle(alternating, 6));

  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<BreathState> labels;
    const int n = 1 + static_cast<int>(rng.below(200));
    for (int i = 0; i < n; ++i)
      labels.push_back(rng.uniform() < 0.4 ? BreathState::Exhalation
                                           : BreathState::Inhalation);
    const int delta = static_cast<int>(rng.below(9));
    REQUIRE(nn_consistency(labels, {delta}) ==
            consistency_oracle(labels, delta));
  }
}

TEST_CASE("long runs keep their interior under consistency smoothing") {
  Rng rng(31);
  const int delta = 6;
  for (int trial = 0; trial < 20; ++trial) {
    // build random runs, several longer than 2*delta+1
    std::vector<BreathState> labels;
    BreathState state = BreathState::Inhalation;
    while (labels.size() < 300) {
      const int run = 1 + static_cast<int>(rng.below(40));
      for (int i = 0; i < run; ++i) labels.push_back(state);
      state = flipped(state);
    }
    const auto out = nn_consistency(labels, {delta});
    // locate maximal runs
    std::size_t start = 0;
    for (std::size_t i = 1; i <= labels.size(); ++i) {
      if (i == labels.size() || labels[i] != labels[start]) {
        const std::size_t len = i - start;
        if (len >= 2 * delta + 1) {
          for (std::size_t j = start + delta; j + delta < i; ++j)
            REQUIRE(out[j] == labels[j]);
        }
        start = i;
      }
    }
  }
}

TEST_CASE("silent audio labels every frame inhalation") {
  AudioTrack silent;
  silent.sample_rate_hz = 48000;
  silent.samples.assign(48000 * 3, 0.0);
  const auto stream = label_audio(silent, 29.94, 80, BandpassSpec{},
                                  ThresholdSpec{}, ConsistencySpec{});
  REQUIRE(stream.size() == 80);
  for (const auto& f : stream) {
    CHECK(f.label == BreathState::Inhalation);
  }
  CHECK(stream[40].timestamp_s == Catch::Approx(40.0 / 29.94));
}

TEST_CASE("full-scale in-band noise labels every frame exhalation") {
  Rng rng(77);
  AudioTrack noise;
  noise.sample_rate_hz = 48000;
  noise.samples.resize(48000 * 3);
  for (auto& s : noise.samples) s = rng.uniform(-0.95, 0.95);
  // oracle: after filtering, every window's peak statistic clears 0.01
  const auto filtered = bandpass_filter(noise, BandpassSpec{});
  const auto windows = frame_windows(filtered, 29.94, 80);
  const auto raw = threshold_classify(filtered, windows, ThresholdSpec{});
  const auto stream = label_audio(noise, 29.94, 80, BandpassSpec{},
                                  ThresholdSpec{}, ConsistencySpec{});
  const auto smoothed = nn_consistency(raw, ConsistencySpec{});
  for (std::size_t i = 0; i < stream.size(); ++i) {
    REQUIRE(stream[i].label == smoothed[i]);
    CHECK(stream[i].label == BreathState::Exhalation);
  }
}

TEST_CASE("labeling pipeline output is byte-identical across runs") {
  Rng rng(99);
  AudioTrack noise;
  noise.sample_rate_hz = 48000;
  noise.samples.resize(48000);
  for (auto& s : noise.samples) s = rng.uniform(-0.05, 0.05);
  const auto a = label_audio(noise, 29.94, 25, BandpassSpec{}, ThresholdSpec{},
                             ConsistencySpec{});
  const auto b = label_audio(noise, 29.94, 25, BandpassSpec{}, ThresholdSpec{},
                             ConsistencySpec{});
  CHECK(render_label_csv(a) == render_label_csv(b));
}
