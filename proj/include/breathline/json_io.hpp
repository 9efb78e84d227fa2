#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "breathline/core.hpp"
#include "breathline/linear_model.hpp"
#include "breathline/metrics.hpp"
#include "breathline/simulate.hpp"

namespace breathline {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Tracker report
// ---------------------------------------------------------------------------

inline json estimate_to_json(const RespirationEstimate& est) {
  json j;
  j["status"] = est.ok ? "ok" : "no-estimate";
  if (est.ok) {
    j["rate_bpm"] = est.rate_bpm;
    j["std_bpm"] = est.std_bpm;
    // display convention: whole breaths; raw values stay above
    j["display"] = std::to_string(std::llround(est.rate_bpm)) + "±" +
                   std::to_string(std::llround(est.std_bpm));
  } else {
    j["rate_bpm"] = nullptr;
    j["std_bpm"] = nullptr;
    j["display"] = "-";
  }
  j["cycle_count"] = est.cycle_count;
  j["transition_times_s"] = est.transition_times_s;
  return j;
}

inline RespirationEstimate estimate_from_json(const json& j) {
  RespirationEstimate est;
  try {
    est.ok = j.at("status").get<std::string>() == "ok";
    est.transition_times_s =
        j.at("transition_times_s").get<std::vector<double>>();
    est.cycle_count = j.at("cycle_count").get<std::size_t>();
    if (est.ok) {
      est.rate_bpm = j.at("rate_bpm").get<double>();
      est.std_bpm = j.at("std_bpm").get<double>();
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad estimate JSON: ") + e.what());
  }
  return est;
}

// ---------------------------------------------------------------------------
// Linear model file
// ---------------------------------------------------------------------------

inline json model_to_json(const LinearModel& model) {
  json j;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["feature_means"] = model.feature_means;
  j["feature_stds"] = model.feature_stds;
  j["hyperparameters"] = {{"epochs", model.trained_epochs},
                          {"learning_rate", model.learning_rate},
                          {"lambda", model.lambda}};
  j["epoch_loss"] = model.epoch_loss;
  return j;
}

inline LinearModel model_from_json(const json& j) {
  LinearModel model;
  try {
    model.weights = j.at("weights").get<std::vector<double>>();
    model.bias = j.at("bias").get<double>();
    model.feature_means = j.at("feature_means").get<std::vector<double>>();
    model.feature_stds = j.at("feature_stds").get<std::vector<double>>();
    const auto& h = j.at("hyperparameters");
    model.trained_epochs = h.at("epochs").get<int>();
    model.learning_rate = h.at("learning_rate").get<double>();
    model.lambda = h.at("lambda").get<double>();
    if (j.contains("epoch_loss"))
      model.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad model JSON: ") + e.what());
  }
  if (model.weights.size() != FeatureVector::kSize)
    throw FormatError("model weight length " +
                      std::to_string(model.weights.size()) + ", expected " +
                      std::to_string(FeatureVector::kSize));
  return model;
}

inline void save_model(const std::string& path, const LinearModel& model) {
  write_text_file(path, model_to_json(model).dump(2) + "\n");
}

inline LinearModel load_model(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw FormatError("cannot parse model JSON " + path + ": " + e.what());
  }
  return model_from_json(j);
}

// ---------------------------------------------------------------------------
// External predictions: JSONL, one {index, timestamp_s, label[, score]}
// object per line. Bridges detectors trained elsewhere into the tracker.
// ---------------------------------------------------------------------------

inline LabelStream parse_predictions_jsonl(std::string_view text) {
  LabelStream stream;
  std::size_t pos = 0, lineno = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool blank = true;
    for (char c : line)
      if (c != ' ' && c != '\t') blank = false;
    if (blank) continue;
    json j;
    try {
      j = json::parse(line);
      LabeledFrame f;
      f.index = j.at("index").get<std::size_t>();
      f.timestamp_s = j.at("timestamp_s").get<double>();
      f.label = breath_state_from_int(j.at("label").get<int>());
      stream.push_back(f);
    } catch (const json::exception& e) {
      throw FormatError("predictions line " + std::to_string(lineno) + ": " +
                        e.what());
    }
  }
  validate_stream(stream);  // rejects duplicate or decreasing indices
  return stream;
}

inline LabelStream load_external_predictions(const std::string& path) {
  return parse_predictions_jsonl(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Scenario configuration file (all ScenarioConfig fields, exact names)
// ---------------------------------------------------------------------------

inline json scenario_config_to_json(const ScenarioConfig& c) {
  return json{{"duration_s", c.duration_s},
              {"fps", c.fps},
              {"sample_rate_hz", c.sample_rate_hz},
              {"rate_bpm", c.rate_bpm},
              {"exhalation_fraction", c.exhalation_fraction},
              {"period_jitter_frac", c.period_jitter_frac},
              {"exhale_amp", c.exhale_amp},
              {"background_amp", c.background_amp},
              {"bubble_brightness", c.bubble_brightness},
              {"bubbles_per_frame", {c.bubbles_min, c.bubbles_max}},
              {"frame_size", c.frame_size},
              {"label_lag_frames", c.label_lag_frames},
              {"seed", c.seed}};
}

inline ScenarioConfig scenario_config_from_json(const json& j) {
  ScenarioConfig c;
  try {
    auto get = [&](const char* key, auto& out) {
      if (j.contains(key)) out = j.at(key).get<std::decay_t<decltype(out)>>();
    };
    get("duration_s", c.duration_s);
    get("fps", c.fps);
    get("sample_rate_hz", c.sample_rate_hz);
    get("rate_bpm", c.rate_bpm);
    get("exhalation_fraction", c.exhalation_fraction);
    get("period_jitter_frac", c.period_jitter_frac);
    get("exhale_amp", c.exhale_amp);
    get("background_amp", c.background_amp);
    get("bubble_brightness", c.bubble_brightness);
    get("frame_size", c.frame_size);
    get("label_lag_frames", c.label_lag_frames);
    get("seed", c.seed);
    if (j.contains("bubbles_per_frame")) {
      const auto& b = j.at("bubbles_per_frame");
      c.bubbles_min = b.at(0).get<int>();
      c.bubbles_max = b.at(1).get<int>();
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad scenario config: ") + e.what());
  }
  return c;
}

inline ScenarioConfig load_scenario_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw FormatError("cannot parse scenario config " + path + ": " + e.what());
  }
  return scenario_config_from_json(j);
}

}  // namespace breathline
