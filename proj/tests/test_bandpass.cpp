#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "breathline/bandpass.hpp"
#include "breathline/rng.hpp"

using namespace breathline;

namespace {

// independent oracle: plain DFT of the kernel at one frequency
double kernel_dft_mag(const std::vector<double>& h, double hz, double fs) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t n = 0; n < h.size(); ++n)
    acc += h[n] * std::exp(std::complex<double>(0.0, -2.0 * M_PI * hz * n / fs));
  return std::abs(acc);
}

AudioTrack sine_track(double hz, double fs, double seconds) {
  AudioTrack t;
  t.sample_rate_hz = static_cast<int>(fs);
  const auto n = static_cast<std::size_t>(seconds * fs);
  t.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    t.samples[i] = std::sin(2.0 * M_PI * hz * i / fs);
  return t;
}

double steady_state_peak(const AudioTrack& t) {
  // skip half a second on both ends to clear the filter transient
  const std::size_t skip = static_cast<std::size_t>(t.sample_rate_hz) / 2;
  double peak = 0.0;
  for (std::size_t i = skip; i + skip < t.samples.size(); ++i)
    peak = std::max(peak, std::abs(t.samples[i]));
  return peak;
}

}  // namespace

TEST_CASE("default kernel meets the passband and stopband contract") {
  const BandpassSpec spec;  // 325-600 Hz, 513 taps
  const double fs = 48000.0;
  const auto kernel = design_bandpass_kernel(spec, 48000);
  REQUIRE(kernel.size() == 513);

  double worst_pass = 1e9;
  for (int i = 0; i <= 1000; ++i) {
    const double f = (spec.low_hz + 25.0) +
                     (spec.high_hz - 25.0 - spec.low_hz - 25.0) * i / 1000.0;
    worst_pass = std::min(worst_pass, kernel_dft_mag(kernel, f, fs));
  }
  CHECK(20.0 * std::log10(worst_pass) >= -1.0);

  double worst_stop = 0.0;
  for (int i = 0; i <= 800; ++i) {
    const double f = (spec.low_hz / 2.0) * i / 800.0;
    worst_stop = std::max(worst_stop, kernel_dft_mag(kernel, f, fs));
  }
  for (int i = 0; i <= 2000; ++i) {
    const double f =
        2.0 * spec.high_hz + (fs / 2.0 - 2.0 * spec.high_hz) * i / 2000.0;
    worst_stop = std::max(worst_stop, kernel_dft_mag(kernel, f, fs));
  }
  CHECK(20.0 * std::log10(worst_stop) <= -40.0);

  // never amplifies
  double peak = 0.0;
  for (int i = 0; i <= 4000; ++i)
    peak = std::max(peak, kernel_dft_mag(kernel, fs / 2.0 * i / 4000.0, fs));
  CHECK(peak <= 1.0);
}

TEST_CASE("alternate 400-600 Hz band meets the same contract") {
  const BandpassSpec spec{400.0, 600.0, 513};
  const double fs = 48000.0;
  const auto kernel = design_bandpass_kernel(spec, 48000);

  double worst_pass = 1e9;
  for (int i = 0; i <= 600; ++i) {
    const double f = 425.0 + (575.0 - 425.0) * i / 600.0;
    worst_pass = std::min(worst_pass, kernel_dft_mag(kernel, f, fs));
  }
  CHECK(20.0 * std::log10(worst_pass) >= -1.0);

  double worst_stop = 0.0;
  for (int i = 0; i <= 800; ++i)
    worst_stop = std::max(worst_stop, kernel_dft_mag(kernel, 200.0 * i / 800.0, fs));
  for (int i = 0; i <= 2000; ++i)
    worst_stop = std::max(
        worst_stop,
        kernel_dft_mag(kernel, 1200.0 + (24000.0 - 1200.0) * i / 2000.0, fs));
  CHECK(20.0 * std::log10(worst_stop) <= -40.0);
}

TEST_CASE("450 Hz tone passes nearly unattenuated") {
  const BandpassSpec spec;
  const auto kernel = design_bandpass_kernel(spec, 48000);
  const double oracle = kernel_dft_mag(kernel, 450.0, 48000.0);

  const AudioTrack out = bandpass_filter(sine_track(450.0, 48000.0, 2.0), spec);
  const double measured = steady_state_peak(out);
  CHECK(measured >= 0.89);
  CHECK(measured <= 1.0);
  CHECK(measured == Catch::Approx(oracle).margin(1e-3));
}

TEST_CASE("100 Hz tone is crushed to the stopband floor") {
  const BandpassSpec spec;
  const auto kernel = design_bandpass_kernel(spec, 48000);
  const double oracle = kernel_dft_mag(kernel, 100.0, 48000.0);
  CHECK(oracle <= 0.01);

  const AudioTrack out = bandpass_filter(sine_track(100.0, 48000.0, 2.0), spec);
  CHECK(steady_state_peak(out) <= 0.01);
}

TEST_CASE("DC input is rejected essentially exactly") {
  AudioTrack dc;
  dc.sample_rate_hz = 48000;
  dc.samples.assign(48000, 0.7);
  const AudioTrack out = bandpass_filter(dc, BandpassSpec{});
  const std::size_t skip = 24000;
  for (std::size_t i = skip / 2; i < out.samples.size() - skip / 2; ++i)
    REQUIRE(std::abs(out.samples[i]) < 1e-3);
}

TEST_CASE("output length, rate and alignment are preserved") {
  AudioTrack in = sine_track(450.0, 48000.0, 0.25);
  const AudioTrack out = bandpass_filter(in, BandpassSpec{});
  CHECK(out.samples.size() == in.samples.size());
  CHECK(out.sample_rate_hz == in.sample_rate_hz);
  // group delay compensated: in-band tone stays phase aligned mid-track
  std::size_t mid = in.samples.size() / 2;
  double dot = 0.0, norm = 0.0;
  for (std::size_t i = mid - 2000; i < mid + 2000; ++i) {
    dot += in.samples[i] * out.samples[i];
    norm += in.samples[i] * in.samples[i];
  }
  CHECK(dot / norm > 0.9);  // would be ~0 if misaligned by a quarter period
}

TEST_CASE("filtering is linear to 1e-9 per sample") {
  Rng rng(17);
  AudioTrack x, y;
  x.sample_rate_hz = y.sample_rate_hz = 48000;
  for (int i = 0; i < 8000; ++i) {
    x.samples.push_back(rng.uniform(-1.0, 1.0));
    y.samples.push_back(rng.uniform(-1.0, 1.0));
  }
  const double a = 0.37, b = -1.21;
  AudioTrack mix;
  mix.sample_rate_hz = 48000;
  for (int i = 0; i < 8000; ++i)
    mix.samples.push_back(a * x.samples[i] + b * y.samples[i]);

  const BandpassSpec spec;
  const auto fx = bandpass_filter(x, spec);
  const auto fy = bandpass_filter(y, spec);
  const auto fmix = bandpass_filter(mix, spec);
  for (int i = 0; i < 8000; ++i)
    REQUIRE(fmix.samples[i] ==
            Catch::Approx(a * fx.samples[i] + b * fy.samples[i]).margin(1e-9));
}

TEST_CASE("invalid band edges are rejected") {
  CHECK_THROWS_AS(design_bandpass_kernel({0.0, 600.0, 513}, 48000),
                  InvalidInputError);
  CHECK_THROWS_AS(design_bandpass_kernel({600.0, 325.0, 513}, 48000),
                  InvalidInputError);
  CHECK_THROWS_AS(design_bandpass_kernel({325.0, 24000.0, 513}, 48000),
                  InvalidInputError);
  CHECK_THROWS_AS(design_bandpass_kernel({325.0, 600.0, 512}, 48000),
                  InvalidInputError);
}
