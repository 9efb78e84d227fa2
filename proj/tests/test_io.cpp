#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "breathline/json_io.hpp"
#include "breathline/pgm.hpp"
#include "breathline/rng.hpp"
#include "breathline/simulate.hpp"
#include "breathline/wav.hpp"

using namespace breathline;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "bl_test_io";
  fs::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("float32 WAV round-trips simulator audio exactly") {
  ScenarioConfig config;
  config.duration_s = 2.0;
  config.seed = 4;
  const Scenario s = generate(config);
  const auto path = temp_path("roundtrip.wav");
  write_wav_float32(path, s.audio);
  const AudioTrack back = read_wav_mono(path);
  REQUIRE(back.sample_rate_hz == s.audio.sample_rate_hz);
  REQUIRE(back.samples == s.audio.samples);
}

TEST_CASE("PCM16 WAV reads with the documented scaling") {
  // hand-built 4-sample PCM16 mono file
  std::string bytes;
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes += static_cast<char>((v >> (8 * i)) & 0xFF);
  };
  auto u16 = [&](std::uint16_t v) {
    for (int i = 0; i < 2; ++i) bytes += static_cast<char>((v >> (8 * i)) & 0xFF);
  };
  bytes += "RIFF";
  u32(36 + 8);
  bytes += "WAVEfmt ";
  u32(16);
  u16(1);      // PCM
  u16(1);      // mono
  u32(48000);
  u32(96000);
  u16(2);
  u16(16);
  bytes += "data";
  u32(8);
  u16(0x4000);  // 16384 -> 0.5
  u16(0xC000);  // -16384 -> -0.5
  u16(0x7FFF);  // 32767
  u16(0x8000);  // -32768 -> -1.0
  const auto path = temp_path("pcm16.wav");
  write_text_file(path, bytes);

  const AudioTrack t = read_wav_mono(path);
  REQUIRE(t.samples.size() == 4);
  CHECK(t.samples[0] == Catch::Approx(0.5));
  CHECK(t.samples[1] == Catch::Approx(-0.5));
  CHECK(t.samples[2] == Catch::Approx(32767.0 / 32768.0));
  CHECK(t.samples[3] == -1.0);
}

TEST_CASE("multi-channel and exotic encodings are rejected") {
  ScenarioConfig config;
  config.duration_s = 1.0;
  config.seed = 1;
  const Scenario s = generate(config);
  const auto path = temp_path("stereo.wav");
  // corrupt the channel count in an otherwise valid file
  write_wav_float32(path, s.audio);
  std::string bytes = read_text_file(path);
  bytes[22] = 2;  // channels field
  write_text_file(path, bytes);
  CHECK_THROWS_WITH(read_wav_mono(path),
                    Catch::Matchers::ContainsSubstring("mono"));

  write_text_file(path, "not a wav at all");
  CHECK_THROWS_AS(read_wav_mono(path), FormatError);

  CHECK_THROWS_AS(read_wav_mono(temp_path("missing.wav")), IoError);
}

TEST_CASE("extensible WAV headers resolve to the wrapped format") {
  std::string bytes;
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes += static_cast<char>((v >> (8 * i)) & 0xFF);
  };
  auto u16 = [&](std::uint16_t v) {
    for (int i = 0; i < 2; ++i) bytes += static_cast<char>((v >> (8 * i)) & 0xFF);
  };
  bytes += "RIFF";
  u32(4 + 8 + 40 + 8 + 4);
  bytes += "WAVEfmt ";
  u32(40);
  u16(0xFFFE);  // extensible
  u16(1);
  u32(48000);
  u32(48000 * 2);
  u16(2);
  u16(16);
  u16(22);     // cbSize
  u16(16);     // valid bits
  u32(4);      // channel mask
  u16(1);      // subformat: PCM
  u16(0);
  for (int i = 0; i < 12; ++i) bytes += '\0';  // rest of the GUID
  bytes += "data";
  u32(4);
  u16(0x2000);
  u16(0xE000);
  const auto path = temp_path("extensible.wav");
  write_text_file(path, bytes);
  const AudioTrack t = read_wav_mono(path);
  REQUIRE(t.samples.size() == 2);
  CHECK(t.samples[0] == Catch::Approx(0.25));
  CHECK(t.samples[1] == Catch::Approx(-0.25));
}

TEST_CASE("PGM round-trips simulator frames exactly") {
  ScenarioConfig config;
  config.duration_s = 1.0;
  config.seed = 6;
  const Scenario s = generate(config);
  const auto path = temp_path("frame.pgm");
  write_pgm(path, s.frames[0]);
  const Frame back = read_pgm(path);
  REQUIRE(back.width == s.frames[0].width);
  REQUIRE(back.height == s.frames[0].height);
  REQUIRE(back.pixels == s.frames[0].pixels);
}

TEST_CASE("PGM reader validates header and payload") {
  const auto path = temp_path("bad.pgm");
  write_text_file(path, "P2\n2 2\n255\n0 0 0 0\n");
  CHECK_THROWS_AS(read_pgm(path), FormatError);
  write_text_file(path, "P5\n2 2\n255\n\x01\x02");
  CHECK_THROWS_WITH(read_pgm(path),
                    Catch::Matchers::ContainsSubstring("truncated"));
  write_text_file(path, "P5\n2 2\n65535\n");
  CHECK_THROWS_AS(read_pgm(path), FormatError);
}

TEST_CASE("model JSON round-trips bit for bit") {
  LinearModel model;
  Rng rng(3);
  model.weights.resize(FeatureVector::kSize);
  model.feature_means.resize(FeatureVector::kSize);
  model.feature_stds.resize(FeatureVector::kSize);
  for (std::size_t d = 0; d < FeatureVector::kSize; ++d) {
    model.weights[d] = rng.uniform(-2.0, 2.0);
    model.feature_means[d] = rng.uniform(-1.0, 1.0);
    model.feature_stds[d] = rng.uniform(0.1, 3.0);
  }
  model.bias = -0.7312;
  model.trained_epochs = 50;
  model.epoch_loss = {1.0, 0.4, 0.2};
  const auto path = temp_path("model.json");
  save_model(path, model);
  const LinearModel back = load_model(path);
  REQUIRE(back.weights == model.weights);
  REQUIRE(back.bias == model.bias);
  REQUIRE(back.feature_means == model.feature_means);
  REQUIRE(back.feature_stds == model.feature_stds);
  CHECK(back.trained_epochs == model.trained_epochs);
  CHECK(back.epoch_loss == model.epoch_loss);
}

TEST_CASE("corrupt model files raise format errors") {
  const auto path = temp_path("corrupt_model.json");
  write_text_file(path, "{ not json");
  CHECK_THROWS_AS(load_model(path), FormatError);
  write_text_file(path, "{\"weights\": [1, 2]}");
  CHECK_THROWS_AS(load_model(path), FormatError);
}

TEST_CASE("estimate JSON carries status and payload") {
  RespirationEstimate est;
  est.ok = true;
  est.rate_bpm = 11.97;
  est.std_bpm = 0.04;
  est.cycle_count = 2;
  est.transition_times_s = {2.772, 7.782, 12.792};
  const json j = estimate_to_json(est);
  CHECK(j["status"] == "ok");
  const RespirationEstimate back = estimate_from_json(j);
  CHECK(back == est);

  const json dash = estimate_to_json(RespirationEstimate::no_estimate());
  CHECK(dash["status"] == "no-estimate");
  CHECK(dash["rate_bpm"].is_null());
  CHECK_FALSE(estimate_from_json(dash).ok);
}

TEST_CASE("scenario config JSON honors exact field names") {
  ScenarioConfig c;
  c.rate_bpm = 20.0;
  c.seed = 99;
  c.bubbles_min = 3;
  c.bubbles_max = 9;
  const json j = scenario_config_to_json(c);
  CHECK(j.contains("duration_s"));
  CHECK(j.contains("exhalation_fraction"));
  CHECK(j.contains("bubbles_per_frame"));
  const ScenarioConfig back = scenario_config_from_json(j);
  CHECK(back.rate_bpm == 20.0);
  CHECK(back.seed == 99);
  CHECK(back.bubbles_min == 3);
  CHECK(back.bubbles_max == 9);

  // partial configs inherit defaults
  const ScenarioConfig partial =
      scenario_config_from_json(json{{"rate_bpm", 8.0}});
  CHECK(partial.rate_bpm == 8.0);
  CHECK(partial.fps == Catch::Approx(29.94));
}
