#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "breathline/core.hpp"

namespace breathline {

/// Grayscale frame, row-major pixels in [0, 1].
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  double at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }

  void validate() const {
    if (width <= 0 || height <= 0)
      throw InvalidInputError("frame dimensions must be positive");
    if (pixels.size() != static_cast<std::size_t>(width) * height)
      throw InvalidInputError("frame pixel count does not match dimensions");
    for (double p : pixels)
      if (!(p >= 0.0 && p <= 1.0))
        throw InvalidInputError("frame pixel outside [0, 1]: " +
                                std::to_string(p));
  }
};

/// Fixed 22-value frame encoding:
///   [0] mean  [1] variance  [2..17] 16-bin intensity histogram (sums to 1)
///   [18] edge density (mean absolute forward difference, both axes)
///   [19] bright fraction (pixels in the top brightness decile, >= 0.9)
///   [20] row-variance mean  [21] column-variance mean
/// Bubbles are bright compact blobs, so exhalation frames shift the bright
/// fraction, upper histogram bins and edge density without any positional
/// encoding.
struct FeatureVector {
  static constexpr std::size_t kSize = 22;
  std::array<double, kSize> values{};

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline FeatureVector extract_features(const Frame& frame) {
  frame.validate();
  const std::size_t n = frame.pixels.size();
  FeatureVector fv;

  double sum = 0.0, sumsq = 0.0;
  std::array<double, 16> hist{};
  std::size_t bright = 0;
  for (double p : frame.pixels) {
    sum += p;
    sumsq += p * p;
    const int bin = std::min(15, static_cast<int>(p * 16.0));
    hist[static_cast<std::size_t>(bin)] += 1.0;
    if (p >= 0.9) ++bright;
  }
  const double mean = sum / static_cast<double>(n);
  const double variance = std::max(0.0, sumsq / static_cast<double>(n) - mean * mean);
  fv.values[0] = mean;
  fv.values[1] = variance;
  for (std::size_t b = 0; b < 16; ++b)
    fv.values[2 + b] = hist[b] / static_cast<double>(n);

  double edge_acc = 0.0;
  std::size_t edge_terms = 0;
  for (int y = 0; y < frame.height; ++y)
    for (int x = 0; x + 1 < frame.width; ++x) {
      edge_acc += std::abs(frame.at(x + 1, y) - frame.at(x, y));
      ++edge_terms;
    }
  for (int y = 0; y + 1 < frame.height; ++y)
    for (int x = 0; x < frame.width; ++x) {
      edge_acc += std::abs(frame.at(x, y + 1) - frame.at(x, y));
      ++edge_terms;
    }
  fv.values[18] = edge_terms ? edge_acc / static_cast<double>(edge_terms) : 0.0;
  fv.values[19] = static_cast<double>(bright) / static_cast<double>(n);

  double row_var = 0.0;
  for (int y = 0; y < frame.height; ++y) {
    double s = 0.0, ss = 0.0;
    for (int x = 0; x < frame.width; ++x) {
      const double p = frame.at(x, y);
      s += p;
      ss += p * p;
    }
    const double m = s / frame.width;
    row_var += std::max(0.0, ss / frame.width - m * m);
  }
  fv.values[20] = row_var / frame.height;

  double col_var = 0.0;
  for (int x = 0; x < frame.width; ++x) {
    double s = 0.0, ss = 0.0;
    for (int y = 0; y < frame.height; ++y) {
      const double p = frame.at(x, y);
      s += p;
      ss += p * p;
    }
    const double m = s / frame.height;
    col_var += std::max(0.0, ss / frame.height - m * m);
  }
  fv.values[21] = col_var / frame.width;

  return fv;
}

/// Model-free detector: Exhalation when the fraction of pixels brighter than
/// `cutoff` exceeds `fraction`.
inline BreathState brightness_baseline(const Frame& frame, double cutoff = 0.6,
                                       double fraction = 0.02) {
  std::size_t bright = 0;
  for (double p : frame.pixels)
    if (p > cutoff) ++bright;
  const double share =
      static_cast<double>(bright) / static_cast<double>(frame.pixels.size());
  return share > fraction ? BreathState::Exhalation : BreathState::Inhalation;
}

}  // namespace breathline
