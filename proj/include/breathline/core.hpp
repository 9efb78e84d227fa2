#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace breathline {

// ---------------------------------------------------------------------------
// Errors. The CLI maps these onto exit codes: InvalidInputError -> usage,
// IoError -> I/O, FormatError -> data format.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInputError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct FormatError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Binary breath state. Serializes as 0 (inhalation) / 1 (exhalation).
enum class BreathState : int { Inhalation = 0, Exhalation = 1 };

inline int to_int(BreathState s) { return static_cast<int>(s); }

inline BreathState breath_state_from_int(int v) {
  if (v == 0) return BreathState::Inhalation;
  if (v == 1) return BreathState::Exhalation;
  throw FormatError("breath state must be 0 or 1, got " + std::to_string(v));
}

inline BreathState flipped(BreathState s) {
  return s == BreathState::Exhalation ? BreathState::Inhalation
                                      : BreathState::Exhalation;
}

/// One video frame's ordinal, time and detected breath state.
struct LabeledFrame {
  std::size_t index = 0;
  double timestamp_s = 0.0;
  BreathState label = BreathState::Inhalation;

  friend bool operator==(const LabeledFrame&, const LabeledFrame&) = default;
};

using LabelStream = std::vector<LabeledFrame>;

/// Mono audio buffer, samples normalized to [-1, 1].
struct AudioTrack {
  int sample_rate_hz = 48000;
  std::vector<double> samples;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

/// Output of the rate tracker. `ok` distinguishes a real estimate from the
/// no-estimate outcome (fewer than two transitions observed); the latter is
/// rendered as a dash downstream, never as 0 bpm.
struct RespirationEstimate {
  bool ok = false;
  double rate_bpm = 0.0;
  double std_bpm = 0.0;
  std::size_t cycle_count = 0;
  std::vector<double> transition_times_s;

  static RespirationEstimate no_estimate(std::vector<double> times = {}) {
    RespirationEstimate e;
    e.ok = false;
    e.cycle_count = 0;
    e.transition_times_s = std::move(times);
    return e;
  }

  friend bool operator==(const RespirationEstimate&,
                         const RespirationEstimate&) = default;
};

// ---------------------------------------------------------------------------
// Stream validation
// ---------------------------------------------------------------------------

/// Indices and timestamps must both be strictly increasing. Violations are
/// rejected, never reordered.
inline void validate_stream(const LabelStream& stream) {
  for (std::size_t i = 1; i < stream.size(); ++i) {
    if (stream[i].index <= stream[i - 1].index)
      throw FormatError("label stream indices not strictly increasing at row " +
                        std::to_string(i));
    if (stream[i].timestamp_s <= stream[i - 1].timestamp_s)
      throw FormatError(
          "label stream timestamps not strictly increasing at row " +
          std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// Label stream CSV: header `index,timestamp_s,label`, LF endings, labels
// literally 0/1. Timestamps use the shortest fixed-point form that parses
// back to the identical double, zero-padded to at least six decimals, so
// parse(render(s)) == s exactly.
// ---------------------------------------------------------------------------

inline std::string format_timestamp(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::fixed);
  std::string s(buf, res.ptr);
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    s += ".000000";
  } else {
    std::size_t decimals = s.size() - dot - 1;
    if (decimals < 6) s.append(6 - decimals, '0');
  }
  return s;
}

inline std::string render_label_csv(const LabelStream& stream) {
  std::string out = "index,timestamp_s,label\n";
  for (const auto& f : stream) {
    out += std::to_string(f.index);
    out += ',';
    out += format_timestamp(f.timestamp_s);
    out += ',';
    out += (f.label == BreathState::Exhalation ? '1' : '0');
    out += '\n';
  }
  return out;
}

inline LabelStream parse_label_csv(std::string_view text) {
  LabelStream stream;
  std::size_t pos = 0;
  std::size_t row = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "index,timestamp_s,label")
        throw FormatError("label CSV row 1: expected header "
                          "'index,timestamp_s,label'");
      saw_header = true;
      continue;
    }
    auto c1 = line.find(',');
    auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw FormatError("label CSV row " + std::to_string(row) +
                        ": expected 3 comma-separated fields");
    LabeledFrame f;
    {
      auto field = line.substr(0, c1);
      auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(),
                                     f.index);
      if (ec != std::errc() || p != field.data() + field.size())
        throw FormatError("label CSV row " + std::to_string(row) +
                          ": bad index field");
    }
    {
      auto field = line.substr(c1 + 1, c2 - c1 - 1);
      std::string tmp(field);
      char* end = nullptr;
      f.timestamp_s = std::strtod(tmp.c_str(), &end);
      if (end != tmp.c_str() + tmp.size() || tmp.empty())
        throw FormatError("label CSV row " + std::to_string(row) +
                          ": bad timestamp field");
      if (f.timestamp_s < 0)
        throw FormatError("label CSV row " + std::to_string(row) +
                          ": negative timestamp");
    }
    {
      auto field = line.substr(c2 + 1);
      if (field == "0")
        f.label = BreathState::Inhalation;
      else if (field == "1")
        f.label = BreathState::Exhalation;
      else
        throw FormatError("label CSV row " + std::to_string(row) +
                          ": label must be 0 or 1");
    }
    stream.push_back(f);
  }
  if (!saw_header && !stream.empty())
    throw FormatError("label CSV: missing header");
  validate_stream(stream);
  return stream;
}

// ---------------------------------------------------------------------------
// Small file helpers
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failure: " + path);
  return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failure: " + path);
}

inline LabelStream read_label_csv(const std::string& path) {
  return parse_label_csv(read_text_file(path));
}

inline void write_label_csv(const std::string& path,
                            const LabelStream& stream) {
  write_text_file(path, render_label_csv(stream));
}

}  // namespace breathline
