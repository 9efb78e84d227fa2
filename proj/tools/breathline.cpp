// breathline: command-line pipeline for respiration-rate estimation from
// exhalation evidence. Subcommands: simulate, label, track, train, detect,
// eval, e2e. Every command is deterministic given its inputs and seed, and
// emits a manifest recording the resolved configuration next to its outputs.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "breathline/breathline.hpp"

namespace fs = std::filesystem;
using namespace breathline;

namespace {

constexpr const char* kToolVersion = "0.1.0";

enum class LogLevel { Silent = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("BREATHLINE_LOG");
    if (!env) return LogLevel::Silent;
    const std::string v(env);
    if (v == "debug") return LogLevel::Debug;
    if (v == "info") return LogLevel::Info;
    return LogLevel::Silent;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::Info) std::cerr << "[breathline] " << msg << "\n";
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_manifest(const std::string& path, const std::string& command,
                    const json& resolved_config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    std::uint64_t seed) {
  json m;
  m["command"] = command;
  m["config_digest"] = hex64(fnv1a64(resolved_config.dump()));
  m["config"] = resolved_config;
  m["input_paths"] = inputs;
  m["output_paths"] = outputs;
  m["seed"] = seed;
  m["tool_version"] = kToolVersion;
  write_text_file(path, m.dump(2) + "\n");
}

std::string frame_filename(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu.pgm", index);
  return buf;
}

// scenario flags shared by `simulate` and `e2e`; CLI flag > config file >
// default, and the manifest records the resolved values
struct ScenarioArgs {
  std::string config_path;
  ScenarioConfig config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario JSON config file");
    cmd->add_option("--duration-s", config.duration_s);
    cmd->add_option("--fps", config.fps);
    cmd->add_option("--sample-rate-hz", config.sample_rate_hz);
    cmd->add_option("--rate-bpm", config.rate_bpm);
    cmd->add_option("--exhalation-fraction", config.exhalation_fraction);
    cmd->add_option("--period-jitter-frac", config.period_jitter_frac);
    cmd->add_option("--exhale-amp", config.exhale_amp);
    cmd->add_option("--background-amp", config.background_amp);
    cmd->add_option("--bubble-brightness", config.bubble_brightness);
    cmd->add_option("--bubbles-min", config.bubbles_min);
    cmd->add_option("--bubbles-max", config.bubbles_max);
    cmd->add_option("--frame-size", config.frame_size);
    cmd->add_option("--label-lag-frames", config.label_lag_frames);
    cmd->add_option("--seed", config.seed);
  }

  ScenarioConfig resolve(const CLI::App* cmd) const {
    ScenarioConfig resolved = config;
    if (!config_path.empty()) {
      resolved = load_scenario_config(config_path);
      // re-apply any flags the user passed explicitly
      auto apply = [&](const char* flag, auto member) {
        if (cmd->count(flag)) resolved.*member = config.*member;
      };
      apply("--duration-s", &ScenarioConfig::duration_s);
      apply("--fps", &ScenarioConfig::fps);
      apply("--sample-rate-hz", &ScenarioConfig::sample_rate_hz);
      apply("--rate-bpm", &ScenarioConfig::rate_bpm);
      apply("--exhalation-fraction", &ScenarioConfig::exhalation_fraction);
      apply("--period-jitter-frac", &ScenarioConfig::period_jitter_frac);
      apply("--exhale-amp", &ScenarioConfig::exhale_amp);
      apply("--background-amp", &ScenarioConfig::background_amp);
      apply("--bubble-brightness", &ScenarioConfig::bubble_brightness);
      apply("--bubbles-min", &ScenarioConfig::bubbles_min);
      apply("--bubbles-max", &ScenarioConfig::bubbles_max);
      apply("--frame-size", &ScenarioConfig::frame_size);
      apply("--label-lag-frames", &ScenarioConfig::label_lag_frames);
      apply("--seed", &ScenarioConfig::seed);
    }
    return resolved;
  }
};

struct LabelArgs {
  BandpassSpec bandpass;
  ThresholdSpec threshold;
  ConsistencySpec consistency;
  std::string statistic = "peak";

  void attach(CLI::App* cmd) {
    cmd->add_option("--band-low", bandpass.low_hz, "bandpass low edge, Hz")
        ->capture_default_str();
    cmd->add_option("--band-high", bandpass.high_hz, "bandpass high edge, Hz")
        ->capture_default_str();
    cmd->add_option("--taps", bandpass.taps, "FIR kernel length (odd)")
        ->capture_default_str();
    cmd->add_option("--threshold", threshold.threshold,
                    "unitless amplitude threshold (presets: 0.009, 0.0125, 0.01)")
        ->capture_default_str();
    cmd->add_option("--statistic", statistic, "window statistic: peak or rms")
        ->check(CLI::IsMember({"peak", "rms"}))
        ->capture_default_str();
    cmd->add_option("--delta", consistency.delta,
                    "neighbor radius for the consistency pass")
        ->capture_default_str();
  }

  void finalize() {
    threshold.statistic = statistic == "rms" ? ThresholdSpec::Statistic::Rms
                                             : ThresholdSpec::Statistic::PeakAbs;
  }

  json to_json() const {
    return json{{"band_low_hz", bandpass.low_hz},
                {"band_high_hz", bandpass.high_hz},
                {"taps", bandpass.taps},
                {"threshold", threshold.threshold},
                {"statistic", statistic},
                {"delta", consistency.delta}};
  }
};

void write_scenario_files(const Scenario& scenario, const std::string& out_dir,
                          std::vector<std::string>& outputs) {
  fs::create_directories(out_dir);
  fs::create_directories(out_dir + "/frames");

  const std::string wav_path = out_dir + "/audio.wav";
  write_wav_float32(wav_path, scenario.audio);
  outputs.push_back(wav_path);

  const std::string labels_path = out_dir + "/truth_labels.csv";
  write_label_csv(labels_path, scenario.truth_labels);
  outputs.push_back(labels_path);

  json tj;
  tj["transition_times_s"] = scenario.truth_transition_times_s;
  tj["rate_bpm_configured"] = scenario.config.rate_bpm;
  const std::string trans_path = out_dir + "/truth_transitions.json";
  write_text_file(trans_path, tj.dump(2) + "\n");
  outputs.push_back(trans_path);

  for (std::size_t i = 0; i < scenario.frames.size(); ++i)
    write_pgm(out_dir + "/frames/" + frame_filename(i), scenario.frames[i]);
  outputs.push_back(out_dir + "/frames");
}

int cmd_simulate(const CLI::App* cmd, const ScenarioArgs& args,
                 const std::string& out_dir) {
  const ScenarioConfig config = args.resolve(cmd);
  if (config.duration_s < 1.0)
    throw InvalidInputError(
        "simulate requires duration_s >= 1 (sub-second clips have no usable "
        "frame grid); got " + std::to_string(config.duration_s));
  const Scenario scenario = generate(config);
  std::vector<std::string> outputs;
  write_scenario_files(scenario, out_dir, outputs);
  std::vector<std::string> inputs;
  if (!args.config_path.empty()) inputs.push_back(args.config_path);
  write_manifest(out_dir + "/manifest.json", "simulate",
                 scenario_config_to_json(config), inputs, outputs, config.seed);
  log_info("simulated " + std::to_string(scenario.frames.size()) +
           " frames into " + out_dir);
  std::cout << "wrote " << out_dir << " (" << scenario.frames.size()
            << " frames, " << scenario.audio.samples.size() << " samples)\n";
  return 0;
}

int cmd_label(const CLI::App* cmd, const std::string& wav_path, double fps,
              std::optional<std::size_t> frames_opt, LabelArgs& args,
              const std::string& out_path) {
  args.finalize();
  const AudioTrack track = read_wav_mono(wav_path);
  std::size_t frame_count = frames_opt.value_or(
      static_cast<std::size_t>(std::floor(track.duration_s() * fps)));
  if (frame_count == 0)
    throw InvalidInputError("audio too short for a single frame at fps " +
                            std::to_string(fps));
  const LabelStream labels = label_audio(track, fps, frame_count,
                                         args.bandpass, args.threshold,
                                         args.consistency);
  write_label_csv(out_path, labels);
  json cfg = args.to_json();
  cfg["fps"] = fps;
  cfg["frame_count"] = frame_count;
  write_manifest(out_path + ".manifest.json", "label", cfg, {wav_path},
                 {out_path}, 0);
  log_info("labeled " + std::to_string(frame_count) + " frames from " + wav_path);
  (void)cmd;
  return 0;
}

int cmd_track(const std::string& labels_path, const std::string& out_path,
              double min_gap_s) {
  const LabelStream labels = read_label_csv(labels_path);
  const RespirationEstimate est = predict_respiration_rate(labels, min_gap_s);
  const json report = estimate_to_json(est);
  std::cout << report.dump(2) << "\n";
  if (!out_path.empty()) {
    write_text_file(out_path, report.dump(2) + "\n");
    write_manifest(out_path + ".manifest.json", "track",
                   json{{"min_gap_s", min_gap_s}}, {labels_path}, {out_path}, 0);
  }
  return 0;
}

std::vector<std::pair<std::size_t, std::string>> list_frame_files(
    const std::string& dir) {
  std::vector<std::pair<std::size_t, std::string>> files;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 10 && name.rfind("frame_", 0) == 0 &&
        name.substr(name.size() - 4) == ".pgm") {
      const std::string digits = name.substr(6, name.size() - 10);
      char* end = nullptr;
      const unsigned long long idx = std::strtoull(digits.c_str(), &end, 10);
      if (end == digits.c_str() + digits.size())
        files.emplace_back(static_cast<std::size_t>(idx), entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no frame_*.pgm files in " + dir);
  return files;
}

int cmd_train(const std::string& frames_dir, const std::string& labels_path,
              const std::string& out_path, TrainOptions options) {
  const LabelStream labels = read_label_csv(labels_path);
  std::map<std::size_t, BreathState> by_index;
  for (const auto& f : labels) by_index[f.index] = f.label;

  LabeledFeatures dataset;
  for (const auto& [idx, path] : list_frame_files(frames_dir)) {
    auto it = by_index.find(idx);
    if (it == by_index.end()) continue;
    dataset.emplace_back(extract_features(read_pgm(path)), it->second);
  }
  if (dataset.empty())
    throw InvalidInputError("no frames matched the label stream indices");
  const LinearModel model = train_linear(dataset, options);
  save_model(out_path, model);
  write_manifest(out_path + ".manifest.json", "train",
                 json{{"epochs", options.epochs},
                      {"learning_rate", options.learning_rate},
                      {"lambda", options.lambda},
                      {"examples", dataset.size()}},
                 {frames_dir, labels_path}, {out_path}, options.seed);
  log_info("trained on " + std::to_string(dataset.size()) + " examples");
  std::cout << "model written to " << out_path << " (final objective "
            << (model.epoch_loss.empty() ? 0.0 : model.epoch_loss.back())
            << ")\n";
  return 0;
}

int cmd_detect(const std::string& frames_dir, const std::string& model_path,
               bool baseline, double cutoff, double fraction,
               const std::string& predictions_path, double fps,
               const std::string& out_path) {
  LabelStream labels;
  std::vector<std::string> inputs;
  json cfg;
  if (!predictions_path.empty()) {
    labels = load_external_predictions(predictions_path);
    inputs.push_back(predictions_path);
    cfg["source"] = "external-predictions";
  } else {
    if (frames_dir.empty())
      throw InvalidInputError("detect needs --frames (with --model or "
                              "--baseline) or --predictions");
    const auto files = list_frame_files(frames_dir);
    inputs.push_back(frames_dir);
    std::optional<LinearModel> model;
    if (!model_path.empty()) {
      model = load_model(model_path);
      inputs.push_back(model_path);
      cfg["source"] = "linear-model";
    } else if (baseline) {
      cfg["source"] = "brightness-baseline";
      cfg["cutoff"] = cutoff;
      cfg["fraction"] = fraction;
    } else {
      throw InvalidInputError(
          "detect needs --model, --baseline or --predictions");
    }
    for (const auto& [idx, path] : files) {
      const Frame frame = read_pgm(path);
      const BreathState label =
          model ? predict(*model, extract_features(frame)).first
                : brightness_baseline(frame, cutoff, fraction);
      labels.push_back({idx, static_cast<double>(idx) / fps, label});
    }
    cfg["fps"] = fps;
  }
  write_label_csv(out_path, labels);
  write_manifest(out_path + ".manifest.json", "detect", cfg, inputs,
                 {out_path}, 0);
  std::cout << "wrote " << labels.size() << " labels to " << out_path << "\n";
  return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path,
             const std::string& ratings_path, const std::string& estimate_path,
             std::optional<double> obs_mean, std::optional<double> obs_std,
             const std::string& out_path) {
  json report;
  std::vector<std::string> inputs;

  if (!pred_path.empty() || !truth_path.empty()) {
    if (pred_path.empty() || truth_path.empty())
      throw InvalidInputError("--pred and --truth must be given together");
    const LabelStream pred = read_label_csv(pred_path);
    const LabelStream truth = read_label_csv(truth_path);
    if (pred.size() != truth.size())
      throw InvalidInputError("pred has " + std::to_string(pred.size()) +
                              " rows, truth has " + std::to_string(truth.size()));
    std::vector<BreathState> p, t;
    for (const auto& f : pred) p.push_back(f.label);
    for (const auto& f : truth) t.push_back(f.label);
    const ConfusionMatrix cm = confusion(p, t);
    const ClassificationReport wr = weighted_report(p, t);
    report["classification"] = {
        {"confusion", {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}}},
        {"precision", wr.precision},
        {"recall", wr.recall},
        {"f1", wr.f1},
        {"accuracy", wr.accuracy}};
    inputs.push_back(pred_path);
    inputs.push_back(truth_path);
  }

  if (!ratings_path.empty()) {
    const RaterMatrix ratings = parse_rater_csv(read_text_file(ratings_path));
    json rj;
    rj["percent_agreement"] = percent_agreement(ratings);
    try {
      rj["krippendorff_alpha"] = krippendorff_alpha(ratings);
    } catch (const InvalidInputError& e) {
      rj["krippendorff_alpha"] = nullptr;
      rj["krippendorff_alpha_note"] = e.what();
    }
    // per-item observer statistics, Table-style: mean and sample std
    json stats = json::array();
    for (std::size_t item = 0; item < ratings.items; ++item) {
      const auto vals = ratings.item_ratings(item);
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= static_cast<double>(vals.size());
      double ss = 0.0;
      for (double v : vals) ss += (v - mean) * (v - mean);
      const double sd = vals.size() > 1
                            ? std::sqrt(ss / static_cast<double>(vals.size() - 1))
                            : 0.0;
      stats.push_back({{"mean", mean}, {"std", sd}});
    }
    rj["observer_stats"] = stats;
    report["ratings"] = rj;
    inputs.push_back(ratings_path);
  }

  if (!estimate_path.empty()) {
    if (!obs_mean || !obs_std)
      throw InvalidInputError("--estimate needs --obs-mean and --obs-std");
    json ej;
    try {
      ej = json::parse(read_text_file(estimate_path));
    } catch (const json::exception& e) {
      throw FormatError("cannot parse estimate JSON: " + std::string(e.what()));
    }
    const RespirationEstimate est = estimate_from_json(ej);
    const auto err = relative_error(est, *obs_mean, *obs_std);
    if (err) {
      char display[48];
      std::snprintf(display, sizeof(display), "%.1f±%.1f%%",
                    err->error_pct, err->sigma_pct);
      report["error_with_observer"] = {{"error_pct", err->error_pct},
                                       {"sigma_pct", err->sigma_pct},
                                       {"display", display}};
    } else {
      report["error_with_observer"] = nullptr;  // dash: no reliable estimate
    }
    inputs.push_back(estimate_path);
  }

  if (report.empty())
    throw InvalidInputError(
        "eval needs at least one of --pred/--truth, --ratings, --estimate");

  std::cout << report.dump(2) << "\n";
  if (!out_path.empty()) {
    write_text_file(out_path, report.dump(2) + "\n");
    write_manifest(out_path + ".manifest.json", "eval", json::object(), inputs,
                   {out_path}, 0);
  }
  return 0;
}

int cmd_e2e(const CLI::App* cmd, const ScenarioArgs& scenario_args,
            LabelArgs& label_args, const std::string& out_dir) {
  label_args.finalize();
  const ScenarioConfig config = scenario_args.resolve(cmd);
  const Scenario scenario = generate(config);
  std::vector<std::string> outputs;
  write_scenario_files(scenario, out_dir, outputs);

  // run labeling off the serialized WAV so the file path equals the
  // in-process path exactly
  const AudioTrack track = read_wav_mono(out_dir + "/audio.wav");
  const LabelStream est_labels =
      label_audio(track, config.fps, scenario.truth_labels.size(),
                  label_args.bandpass, label_args.threshold,
                  label_args.consistency);
  const std::string est_labels_path = out_dir + "/estimated_labels.csv";
  write_label_csv(est_labels_path, est_labels);
  outputs.push_back(est_labels_path);

  const RespirationEstimate est = predict_respiration_rate(est_labels);
  const RespirationEstimate truth_est =
      predict_respiration_rate(scenario.truth_labels);

  std::vector<BreathState> p, t;
  for (const auto& f : est_labels) p.push_back(f.label);
  for (const auto& f : scenario.truth_labels) t.push_back(f.label);

  json summary;
  summary["configured_rate_bpm"] = config.rate_bpm;
  summary["truth_label_estimate"] = estimate_to_json(truth_est);
  summary["audio_estimate"] = estimate_to_json(est);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] == t[i]) ++agree;
  summary["label_agreement"] =
      static_cast<double>(agree) / static_cast<double>(p.size());
  if (est.ok)
    summary["abs_rate_error_bpm"] = std::abs(est.rate_bpm - config.rate_bpm);
  const std::string summary_path = out_dir + "/e2e_summary.json";
  write_text_file(summary_path, summary.dump(2) + "\n");
  outputs.push_back(summary_path);

  json cfg = scenario_config_to_json(config);
  cfg["labeler"] = label_args.to_json();
  write_manifest(out_dir + "/manifest.json", "e2e", cfg, {}, outputs,
                 config.seed);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"respiration-rate estimation from exhalation audio and bubble "
               "frames"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic scenario");
  ScenarioArgs sim_args;
  sim_args.attach(sim);
  std::string sim_out;
  sim->add_option("--out", sim_out, "output directory")->required();

  // label
  auto* lab = app.add_subcommand("label", "label a WAV via the audio pipeline");
  std::string lab_wav, lab_out;
  double lab_fps = 29.94;
  std::optional<std::size_t> lab_frames;
  LabelArgs lab_args;
  lab->add_option("--wav", lab_wav, "mono WAV input")->required();
  lab->add_option("--fps", lab_fps, "frame rate")->capture_default_str();
  lab->add_option("--frames", lab_frames, "frame count (default: full cover)");
  lab->add_option("--out", lab_out, "labels CSV path")->required();
  lab_args.attach(lab);

  // track
  auto* trk = app.add_subcommand("track", "estimate rate from a labels CSV");
  std::string trk_labels, trk_out;
  double trk_min_gap = 0.0;
  trk->add_option("--labels", trk_labels, "labels CSV")->required();
  trk->add_option("--out", trk_out, "estimate JSON path (default: stdout only)");
  trk->add_option("--min-gap-s", trk_min_gap,
                  "drop transitions closer than this gap (debounce, off by default)")
      ->capture_default_str();

  // train
  auto* trn = app.add_subcommand("train", "train the linear detector");
  std::string trn_frames, trn_labels, trn_out;
  TrainOptions trn_options;
  trn->add_option("--frames", trn_frames, "directory of frame_*.pgm")->required();
  trn->add_option("--labels", trn_labels, "truth labels CSV")->required();
  trn->add_option("--out", trn_out, "model JSON path")->required();
  trn->add_option("--epochs", trn_options.epochs)->capture_default_str();
  trn->add_option("--learning-rate", trn_options.learning_rate)
      ->capture_default_str();
  trn->add_option("--lambda", trn_options.lambda)->capture_default_str();
  trn->add_option("--seed", trn_options.seed)->capture_default_str();

  // detect
  auto* det = app.add_subcommand("detect", "produce labels from frames, a "
                                           "model, or external predictions");
  std::string det_frames, det_model, det_preds, det_out;
  bool det_baseline = false;
  double det_cutoff = 0.6, det_fraction = 0.02, det_fps = 29.94;
  det->add_option("--frames", det_frames, "directory of frame_*.pgm");
  det->add_option("--model", det_model, "linear model JSON");
  det->add_flag("--baseline", det_baseline, "use the brightness baseline");
  det->add_option("--cutoff", det_cutoff, "baseline brightness cutoff")
      ->capture_default_str();
  det->add_option("--fraction", det_fraction, "baseline bright-pixel fraction")
      ->capture_default_str();
  det->add_option("--predictions", det_preds, "external predictions JSONL");
  det->add_option("--fps", det_fps, "frame rate for timestamps")
      ->capture_default_str();
  det->add_option("--out", det_out, "labels CSV path")->required();

  // eval
  auto* evl = app.add_subcommand("eval", "classification, rater and error metrics");
  std::string evl_pred, evl_truth, evl_ratings, evl_estimate, evl_out;
  std::optional<double> evl_obs_mean, evl_obs_std;
  evl->add_option("--pred", evl_pred, "predicted labels CSV");
  evl->add_option("--truth", evl_truth, "truth labels CSV");
  evl->add_option("--ratings", evl_ratings, "rater matrix CSV");
  evl->add_option("--estimate", evl_estimate, "tracker estimate JSON");
  evl->add_option("--obs-mean", evl_obs_mean, "observer mean rate, bpm");
  evl->add_option("--obs-std", evl_obs_std, "observer rate std, bpm");
  evl->add_option("--out", evl_out, "metrics JSON path (default: stdout only)");

  // e2e
  auto* e2e = app.add_subcommand(
      "e2e", "simulate, label, track and evaluate against truth");
  ScenarioArgs e2e_args;
  e2e_args.attach(e2e);
  LabelArgs e2e_label_args;
  e2e_label_args.attach(e2e);
  std::string e2e_out;
  e2e->add_option("--out", e2e_out, "output directory")->required();

  try {
    app.parse(argc, argv);
    if (sim->parsed()) return cmd_simulate(sim, sim_args, sim_out);
    if (lab->parsed())
      return cmd_label(lab, lab_wav, lab_fps, lab_frames, lab_args, lab_out);
    if (trk->parsed()) return cmd_track(trk_labels, trk_out, trk_min_gap);
    if (trn->parsed())
      return cmd_train(trn_frames, trn_labels, trn_out, trn_options);
    if (det->parsed())
      return cmd_detect(det_frames, det_model, det_baseline, det_cutoff,
                        det_fraction, det_preds, det_fps, det_out);
    if (evl->parsed())
      return cmd_eval(evl_pred, evl_truth, evl_ratings, evl_estimate,
                      evl_obs_mean, evl_obs_std, evl_out);
    if (e2e->parsed()) return cmd_e2e(e2e, e2e_args, e2e_label_args, e2e_out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints usage or help text
    return code == 0 ? 0 : 1;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
