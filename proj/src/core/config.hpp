#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "hht.hpp"
#include "memd.hpp"

namespace mhht {

struct InputConfig {
  double csv_rate_hz = 128.0;  // CSV files carry no rate of their own
};

struct PreprocessConfig {
  double target_rate_hz = 128.0;
  double lowpass_hz = 45.0;  // 0 disables
  bool common_average_reference = true;
};

struct SelectionConfig {
  double min_median_hz = 4.0;
  std::size_t max_selected = 3;
};

struct BlockConfig {
  std::size_t depth = 3;
  std::size_t overlap = 0;  // maps shared by consecutive blocks
  bool normalize = true;    // per-map min-max to [0, 1]
};

struct LabelConfig {
  double threshold = 5.0;
  std::string file;  // CSV trial,valence,arousal; empty means unlabeled
};

enum class DecomposeScope { segment, trial };

struct SynthToneConfig {
  double freq_hz = 0.0;
  double phase = 0.0;
  double amplitude_lo = 1.0;  // per-channel amplitudes ~ U(lo, hi)
  double amplitude_hi = 1.0;
};

struct SynthConfig {
  std::size_t channels = 32;
  double rate_hz = 128.0;
  double seconds = 8.0;
  double noise_sigma = 0.0;
  std::vector<SynthToneConfig> tones{{4.0, 0.3, 0.5, 1.5}, {32.0, 1.1, 0.5, 1.5}};
};

struct VerifyConfig {
  std::size_t random_signals = 6;
  std::size_t alignment_channels = 8;
  double reconstruction_tol = 1e-9;
  double analytic_tol = 1e-6;
  double real_part_tol = 1e-12;
  double tone_freq_tol = 0.01;
  double chirp_freq_tol = 0.05;
  double min_correlation = 0.95;
  double mhs_amplitude_tol = 0.05;
  double bookkeeping_tol = 1e-12;
};

/// Every tunable of the toolkit. The JSON form is the documented config file;
/// unknown keys are rejected and missing keys take the defaults below.
struct PipelineConfig {
  std::uint64_t seed = 0;
  InputConfig input;
  PreprocessConfig preprocess;
  double segment_seconds = 1.0;
  DecomposeScope decompose_scope = DecomposeScope::segment;
  SiftConfig memd;
  FrequencyAxis spectrum;
  SelectionConfig selection;
  BlockConfig blocks;
  LabelConfig labels;
  SynthConfig synth;
  VerifyConfig verify;
};

nlohmann::json to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const nlohmann::json& doc);
PipelineConfig load_config(const std::filesystem::path& path);

// Sets a dotted key ("memd.max_imfs") to a JSON literal ("11") and
// re-validates.
void set_config_value(PipelineConfig& cfg, const std::string& dotted_key,
                      const std::string& json_literal);

void validate(const PipelineConfig& cfg);

}  // namespace mhht
