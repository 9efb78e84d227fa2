#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "breathline/core.hpp"

namespace breathline {

/// Linear-phase FIR bandpass specification. The response contract promised
/// by `bandpass_filter` for a track at sample rate fs:
///   - magnitude >= -1 dB across [low_hz + 25, high_hz - 25]
///   - magnitude <= -40 dB below low_hz / 2 and above 2 * high_hz
struct BandpassSpec {
  double low_hz = 325.0;
  double high_hz = 600.0;
  int taps = 513;

  void validate(int sample_rate_hz) const {
    const double nyquist = sample_rate_hz / 2.0;
    if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < nyquist))
      throw InvalidInputError(
          "bandpass edges must satisfy 0 < low < high < Nyquist (" +
          std::to_string(low_hz) + ", " + std::to_string(high_hz) +
          " at fs " + std::to_string(sample_rate_hz) + ")");
    if (taps < 3 || taps % 2 == 0)
      throw InvalidInputError("bandpass taps must be odd and >= 3, got " +
                              std::to_string(taps));
  }
};

namespace detail {

inline double bessel_i0(double x) {
  // power series; converges fast for the beta range used here
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 64; ++k) {
    const double t = x / (2.0 * k);
    term *= t * t;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

inline std::vector<double> windowed_sinc(double cut_lo_hz, double cut_hi_hz,
                                         int taps, double fs, double beta) {
  const int mid = (taps - 1) / 2;
  const double f1 = cut_lo_hz / fs;
  const double f2 = cut_hi_hz / fs;
  const double inv_i0b = 1.0 / bessel_i0(beta);
  std::vector<double> h(static_cast<std::size_t>(taps));
  double mean = 0.0;
  for (int n = 0; n < taps; ++n) {
    const int m = n - mid;
    double v;
    if (m == 0) {
      v = 2.0 * (f2 - f1);
    } else {
      const double pm = M_PI * m;
      v = (std::sin(2.0 * M_PI * f2 * m) - std::sin(2.0 * M_PI * f1 * m)) / pm;
    }
    const double r = 2.0 * n / (taps - 1) - 1.0;
    v *= bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) * inv_i0b;
    h[static_cast<std::size_t>(n)] = v;
    mean += v;
  }
  mean /= taps;
  for (double& v : h) v -= mean;  // exact DC null
  return h;
}

inline double response_magnitude(const std::vector<double>& kernel, double hz,
                                 double fs) {
  // |H(f)| via incremental rotation; one sincos per call
  const double w = 2.0 * M_PI * hz / fs;
  const double cw = std::cos(w), sw = std::sin(w);
  double cr = 1.0, ci = 0.0;
  double re = 0.0, im = 0.0;
  for (double v : kernel) {
    re += v * cr;
    im -= v * ci;
    const double nr = cr * cw - ci * sw;
    ci = cr * sw + ci * cw;
    cr = nr;
  }
  return std::hypot(re, im);
}

inline double worst_db(const std::vector<double>& kernel, double fs,
                       double f_begin, double f_end, int points, bool maximum) {
  double worst = maximum ? -1e9 : 1e9;
  for (int i = 0; i < points; ++i) {
    const double f = f_begin + (f_end - f_begin) * i / (points - 1);
    const double m = std::max(response_magnitude(kernel, f, fs), 1e-300);
    const double db = 20.0 * std::log10(m);
    worst = maximum ? std::max(worst, db) : std::min(worst, db);
  }
  return worst;
}

}  // namespace detail

/// Designs the Kaiser windowed-sinc kernel for `spec` at sample rate fs.
///
/// The design cutoffs sit outside the nominal band: each edge is placed so
/// the realized response clears both the -1 dB passband bound and the -40 dB
/// stopband bound with equal margin. The lower edge is found by bisection
/// against the actual kernel response (the feasible corridor between
/// low_hz/2 and low_hz+25 is only ~2 transition half-widths wide at the
/// default 513 taps); the upper edge has far more room and uses a capped
/// midpoint. The kernel is normalized to unit peak magnitude, so no
/// frequency is ever amplified.
inline std::vector<double> design_bandpass_kernel(const BandpassSpec& spec,
                                                  int sample_rate_hz) {
  spec.validate(sample_rate_hz);
  const double fs = sample_rate_hz;
  const double nyquist = fs / 2.0;
  constexpr double kBeta = 3.5;
  const double half_width = fs / spec.taps;  // transition scale

  // Upper edge: midpoint of the feasible corridor, capped so the effective
  // band does not drift far above the nominal edge when room is plentiful.
  const double hi_left = std::min(spec.high_hz - 25.0 + 0.73 * half_width,
                                  0.98 * nyquist);
  const double hi_right = std::min(2.0 * spec.high_hz - 1.14 * half_width,
                                   0.98 * nyquist);
  double cut_hi = std::min({(hi_left + hi_right) / 2.0,
                            hi_left + 1.2 * half_width, 0.98 * nyquist});
  cut_hi = std::max(cut_hi, spec.high_hz);

  // Lower edge: bisect on (stopband margin - passband margin).
  const double pass_lo = spec.low_hz + 25.0;
  const double pass_hi = std::max(spec.high_hz - 25.0, pass_lo + 1.0);
  const double stop_lo_edge = spec.low_hz / 2.0;
  const double stop_hi_edge = std::min(2.0 * spec.high_hz, nyquist);
  auto margin_gap = [&](double cut_lo) {
    const auto k = detail::windowed_sinc(cut_lo, cut_hi, spec.taps, fs, kBeta);
    const double pass_margin =
        detail::worst_db(k, fs, pass_lo, pass_hi, 96, false) + 1.0;
    double stop = detail::worst_db(k, fs, 0.0, stop_lo_edge, 64, true);
    if (stop_hi_edge < nyquist)
      stop = std::max(stop,
                      detail::worst_db(k, fs, stop_hi_edge, nyquist, 96, true));
    const double stop_margin = -40.0 - stop;
    return stop_margin - pass_margin;
  };
  double a = std::max(1.0, stop_lo_edge + 0.3 * half_width);
  double b = std::max(a + 1.0, pass_lo);
  for (int it = 0; it < 24; ++it) {
    const double m = 0.5 * (a + b);
    // raising the cutoff gains stopband margin, costs passband margin
    if (margin_gap(m) > 0.0)
      b = m;
    else
      a = m;
  }
  const double cut_lo = 0.5 * (a + b);

  auto kernel = detail::windowed_sinc(cut_lo, cut_hi, spec.taps, fs, kBeta);

  // Unit-peak normalization: dense grid plus parabolic refinement.
  const int grid = 16384;
  double best = 0.0;
  int best_i = 0;
  std::vector<double> mags(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    const double f = nyquist * i / grid;
    mags[static_cast<std::size_t>(i)] = detail::response_magnitude(kernel, f, fs);
    if (mags[static_cast<std::size_t>(i)] > best) {
      best = mags[static_cast<std::size_t>(i)];
      best_i = i;
    }
  }
  if (best_i > 0 && best_i < grid) {
    const double m0 = mags[best_i - 1], m1 = mags[best_i], m2 = mags[best_i + 1];
    const double denom = m0 - 2.0 * m1 + m2;
    if (std::abs(denom) > 1e-30) {
      const double shift = 0.5 * (m0 - m2) / denom;
      const double f = nyquist * (best_i + std::clamp(shift, -1.0, 1.0)) / grid;
      best = std::max(best, detail::response_magnitude(kernel, f, fs));
    }
  }
  const double scale = 1.0 / (best * (1.0 + 1e-8));
  for (double& v : kernel) v *= scale;
  return kernel;
}

/// Zero-phase-aligned FIR filtering: the symmetric kernel's group delay of
/// (taps-1)/2 samples is compensated so output sample i corresponds to input
/// sample i. Edges see zero padding. Output length and sample rate equal the
/// input's.
inline AudioTrack bandpass_filter(const AudioTrack& track,
                                  const BandpassSpec& spec) {
  const auto kernel = design_bandpass_kernel(spec, track.sample_rate_hz);
  const int taps = static_cast<int>(kernel.size());
  const int mid = (taps - 1) / 2;
  const auto n = static_cast<long long>(track.samples.size());

  AudioTrack out;
  out.sample_rate_hz = track.sample_rate_hz;
  out.samples.assign(track.samples.size(), 0.0);
  const double* x = track.samples.data();
  // y[i] = sum_k h[k] * x[i + mid - k] with x zero outside [0, n); written
  // as a forward dot product against the reversed kernel so it vectorizes
  const std::vector<double> rev(kernel.rbegin(), kernel.rend());
  for (long long i = 0; i < n; ++i) {
    const long long base = i + mid - (taps - 1);
    const long long j0 = std::max(0LL, base);
    const long long j1 = std::min(n - 1, i + mid);
    const double* xp = x + j0;
    const double* hp = rev.data() + (j0 - base);
    double acc = 0.0;
    for (long long j = j0; j <= j1; ++j) acc += *hp++ * *xp++;
    out.samples[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

}  // namespace breathline
