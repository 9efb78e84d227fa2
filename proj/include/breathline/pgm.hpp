#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "breathline/core.hpp"
#include "breathline/features.hpp"

namespace breathline {

// Binary PGM (P5, maxval 255). Written pixels are round(value * 255);
// read pixels are byte / 255. Frames generated by the simulator are already
// quantized to this grid, so write/read round-trips exactly.

inline void write_pgm(const std::string& path, const Frame& frame) {
  frame.validate();
  std::string out = "P5\n" + std::to_string(frame.width) + " " +
                    std::to_string(frame.height) + "\n255\n";
  out.reserve(out.size() + frame.pixels.size());
  for (double p : frame.pixels)
    out += static_cast<char>(static_cast<unsigned char>(
        std::llround(std::clamp(p, 0.0, 1.0) * 255.0)));
  write_text_file(path, out);
}

inline Frame read_pgm(const std::string& path) {
  const std::string bytes = read_text_file(path);
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() &&
           !std::isspace(static_cast<unsigned char>(bytes[pos])))
      ++pos;
    if (start == pos) throw FormatError("truncated PGM header: " + path);
    return bytes.substr(start, pos - start);
  };

  if (next_token() != "P5") throw FormatError("not a binary PGM (P5): " + path);
  Frame frame;
  try {
    frame.width = std::stoi(next_token());
    frame.height = std::stoi(next_token());
    const int maxval = std::stoi(next_token());
    if (maxval != 255)
      throw FormatError("PGM maxval must be 255: " + path);
  } catch (const std::invalid_argument&) {
    throw FormatError("bad PGM header field: " + path);
  }
  if (frame.width <= 0 || frame.height <= 0)
    throw FormatError("bad PGM dimensions: " + path);
  ++pos;  // single whitespace after maxval
  const std::size_t n =
      static_cast<std::size_t>(frame.width) * static_cast<std::size_t>(frame.height);
  if (bytes.size() - pos < n)
    throw FormatError("PGM pixel data truncated: " + path);
  frame.pixels.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    frame.pixels[i] = static_cast<unsigned char>(bytes[pos + i]) / 255.0;
  return frame;
}

}  // namespace breathline
