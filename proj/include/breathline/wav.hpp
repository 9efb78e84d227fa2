#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "breathline/core.hpp"

namespace breathline {

// Minimal RIFF/WAVE support for the formats this toolkit exchanges:
// mono PCM signed 16-bit or mono IEEE float32. Anything else is rejected
// with a descriptive error. PCM16 samples map to [-1, 1] by division by
// 32768; float samples are clamped to [-1, 1] on read.

namespace detail {

inline std::uint32_t read_u32(const std::string& b, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 8) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3])) << 24);
}

inline std::uint16_t read_u16(const std::string& b, std::size_t off) {
  return static_cast<std::uint16_t>(
      static_cast<unsigned char>(b[off]) |
      (static_cast<unsigned char>(b[off + 1]) << 8));
}

inline void push_u32(std::string& b, std::uint32_t v) {
  b += static_cast<char>(v & 0xFF);
  b += static_cast<char>((v >> 8) & 0xFF);
  b += static_cast<char>((v >> 16) & 0xFF);
  b += static_cast<char>((v >> 24) & 0xFF);
}

inline void push_u16(std::string& b, std::uint16_t v) {
  b += static_cast<char>(v & 0xFF);
  b += static_cast<char>((v >> 8) & 0xFF);
}

}  // namespace detail

inline AudioTrack read_wav_mono(const std::string& path) {
  const std::string bytes = read_text_file(path);
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0)
    throw FormatError("not a RIFF/WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  std::size_t data_off = 0, data_len = 0;
  bool have_fmt = false, have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const std::uint32_t size = detail::read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size())
      throw FormatError("truncated WAV chunk '" + id + "': " + path);
    if (id == "fmt ") {
      if (size < 16) throw FormatError("fmt chunk too small: " + path);
      format = detail::read_u16(bytes, body);
      channels = detail::read_u16(bytes, body + 2);
      sample_rate = detail::read_u32(bytes, body + 4);
      bits = detail::read_u16(bytes, body + 14);
      if (format == 0xFFFE) {
        // WAVE_FORMAT_EXTENSIBLE: real format code leads the SubFormat GUID.
        if (size < 40) throw FormatError("extensible fmt chunk too small: " + path);
        format = detail::read_u16(bytes, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      data_off = body;
      data_len = size;
      have_data = true;
    }
    pos = body + size + (size & 1);  // chunks are word aligned
  }

  if (!have_fmt || !have_data)
    throw FormatError("WAV missing fmt or data chunk: " + path);
  if (channels != 1)
    throw FormatError("expected mono WAV, got " + std::to_string(channels) +
                      " channels: " + path);
  if (sample_rate == 0) throw FormatError("WAV sample rate is zero: " + path);

  AudioTrack track;
  track.sample_rate_hz = static_cast<int>(sample_rate);
  if (format == 1 && bits == 16) {
    const std::size_t n = data_len / 2;
    track.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto u = detail::read_u16(bytes, data_off + 2 * i);
      const auto s = static_cast<std::int16_t>(u);
      track.samples[i] = static_cast<double>(s) / 32768.0;
    }
  } else if (format == 3 && bits == 32) {
    const std::size_t n = data_len / 4;
    track.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t u = detail::read_u32(bytes, data_off + 4 * i);
      float f;
      std::memcpy(&f, &u, 4);
      track.samples[i] = std::clamp(static_cast<double>(f), -1.0, 1.0);
    }
  } else {
    throw FormatError("unsupported WAV encoding (format " +
                      std::to_string(format) + ", " + std::to_string(bits) +
                      " bits); need PCM16 or float32 mono: " + path);
  }
  return track;
}

/// Writes mono IEEE float32. Values are stored exactly as their
/// single-precision rounding, so a read-back yields the identical track for
/// sources already quantized to float (the simulator emits such tracks).
inline void write_wav_float32(const std::string& path,
                              const AudioTrack& track) {
  const std::uint32_t n = static_cast<std::uint32_t>(track.samples.size());
  const std::uint32_t data_bytes = n * 4;
  std::string out;
  out.reserve(60 + data_bytes);
  out += "RIFF";
  detail::push_u32(out, 4 + (8 + 18) + (8 + 4) + (8 + data_bytes));
  out += "WAVE";
  out += "fmt ";
  detail::push_u32(out, 18);
  detail::push_u16(out, 3);  // IEEE float
  detail::push_u16(out, 1);
  detail::push_u32(out, static_cast<std::uint32_t>(track.sample_rate_hz));
  detail::push_u32(out, static_cast<std::uint32_t>(track.sample_rate_hz) * 4);
  detail::push_u16(out, 4);
  detail::push_u16(out, 32);
  detail::push_u16(out, 0);  // cbSize
  out += "fact";
  detail::push_u32(out, 4);
  detail::push_u32(out, n);
  out += "data";
  detail::push_u32(out, data_bytes);
  for (double v : track.samples) {
    const float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    detail::push_u32(out, u);
  }
  write_text_file(path, out);
}

}  // namespace breathline
