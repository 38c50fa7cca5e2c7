#include "config.hpp"

#include <set>

#include "binary_io.hpp"
#include "errors.hpp"

namespace mhht {
namespace {

using nlohmann::json;

// Reads keys from one JSON object, rejecting any it was not asked about.
class Section {
 public:
  Section(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ValidationError("config: '" + path_ + "' must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    const auto it = doc_.find(key);
    if (it == doc_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw ValidationError("config: '" + qualified(key) + "' has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) throw ValidationError("config: unknown key '" + qualified(key) + "'");
    }
  }

 private:
  const json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void with_section(Section& parent, const char* key, Fn&& fn) {
  if (const json* doc = parent.child(key)) {
    Section section(*doc, parent.qualified(key));
    fn(section);
    section.finish();
  }
}

const char* scope_name(DecomposeScope scope) {
  return scope == DecomposeScope::trial ? "trial" : "segment";
}

}  // namespace

json to_json(const PipelineConfig& cfg) {
  json tones = json::array();
  for (const auto& t : cfg.synth.tones) {
    tones.push_back({{"freq_hz", t.freq_hz},
                     {"phase", t.phase},
                     {"amplitude_lo", t.amplitude_lo},
                     {"amplitude_hi", t.amplitude_hi}});
  }
  return {
      {"seed", cfg.seed},
      {"input", {{"csv_rate_hz", cfg.input.csv_rate_hz}}},
      {"preprocess",
       {{"target_rate_hz", cfg.preprocess.target_rate_hz},
        {"lowpass_hz", cfg.preprocess.lowpass_hz},
        {"common_average_reference", cfg.preprocess.common_average_reference}}},
      {"segment_seconds", cfg.segment_seconds},
      {"decompose_scope", scope_name(cfg.decompose_scope)},
      {"memd",
       {{"num_directions", cfg.memd.num_directions},
        {"max_imfs", cfg.memd.max_imfs},
        {"max_sift_iterations", cfg.memd.max_sift_iterations},
        {"sift_tolerance", cfg.memd.sift_tolerance},
        {"min_extrema", cfg.memd.min_extrema}}},
      {"spectrum",
       {{"freq_lo_hz", cfg.spectrum.lo_hz},
        {"freq_hi_hz", cfg.spectrum.hi_hz},
        {"bins", cfg.spectrum.bins}}},
      {"selection",
       {{"min_median_hz", cfg.selection.min_median_hz},
        {"max_selected", cfg.selection.max_selected}}},
      {"blocks",
       {{"depth", cfg.blocks.depth},
        {"overlap", cfg.blocks.overlap},
        {"normalize", cfg.blocks.normalize}}},
      {"labels", {{"threshold", cfg.labels.threshold}, {"file", cfg.labels.file}}},
      {"synth",
       {{"channels", cfg.synth.channels},
        {"rate_hz", cfg.synth.rate_hz},
        {"seconds", cfg.synth.seconds},
        {"noise_sigma", cfg.synth.noise_sigma},
        {"tones", tones}}},
      {"verify",
       {{"random_signals", cfg.verify.random_signals},
        {"alignment_channels", cfg.verify.alignment_channels},
        {"reconstruction_tol", cfg.verify.reconstruction_tol},
        {"analytic_tol", cfg.verify.analytic_tol},
        {"real_part_tol", cfg.verify.real_part_tol},
        {"tone_freq_tol", cfg.verify.tone_freq_tol},
        {"chirp_freq_tol", cfg.verify.chirp_freq_tol},
        {"min_correlation", cfg.verify.min_correlation},
        {"mhs_amplitude_tol", cfg.verify.mhs_amplitude_tol},
        {"bookkeeping_tol", cfg.verify.bookkeeping_tol}}},
  };
}

PipelineConfig config_from_json(const json& doc) {
  PipelineConfig cfg;
  Section root(doc, "");
  root.read("seed", cfg.seed);
  root.read("segment_seconds", cfg.segment_seconds);
  std::string scope = scope_name(cfg.decompose_scope);
  root.read("decompose_scope", scope);
  if (scope == "segment") {
    cfg.decompose_scope = DecomposeScope::segment;
  } else if (scope == "trial") {
    cfg.decompose_scope = DecomposeScope::trial;
  } else {
    throw ValidationError("config: decompose_scope must be 'segment' or 'trial'");
  }
  with_section(root, "input", [&](Section& s) { s.read("csv_rate_hz", cfg.input.csv_rate_hz); });
  with_section(root, "preprocess", [&](Section& s) {
    s.read("target_rate_hz", cfg.preprocess.target_rate_hz);
    s.read("lowpass_hz", cfg.preprocess.lowpass_hz);
    s.read("common_average_reference", cfg.preprocess.common_average_reference);
  });
  with_section(root, "memd", [&](Section& s) {
    s.read("num_directions", cfg.memd.num_directions);
    s.read("max_imfs", cfg.memd.max_imfs);
    s.read("max_sift_iterations", cfg.memd.max_sift_iterations);
    s.read("sift_tolerance", cfg.memd.sift_tolerance);
    s.read("min_extrema", cfg.memd.min_extrema);
  });
  with_section(root, "spectrum", [&](Section& s) {
    s.read("freq_lo_hz", cfg.spectrum.lo_hz);
    s.read("freq_hi_hz", cfg.spectrum.hi_hz);
    s.read("bins", cfg.spectrum.bins);
  });
  with_section(root, "selection", [&](Section& s) {
    s.read("min_median_hz", cfg.selection.min_median_hz);
    s.read("max_selected", cfg.selection.max_selected);
  });
  with_section(root, "blocks", [&](Section& s) {
    s.read("depth", cfg.blocks.depth);
    s.read("overlap", cfg.blocks.overlap);
    s.read("normalize", cfg.blocks.normalize);
  });
  with_section(root, "labels", [&](Section& s) {
    s.read("threshold", cfg.labels.threshold);
    s.read("file", cfg.labels.file);
  });
  with_section(root, "synth", [&](Section& s) {
    s.read("channels", cfg.synth.channels);
    s.read("rate_hz", cfg.synth.rate_hz);
    s.read("seconds", cfg.synth.seconds);
    s.read("noise_sigma", cfg.synth.noise_sigma);
    if (const json* tones = s.child("tones")) {
      if (!tones->is_array()) throw ValidationError("config: 'synth.tones' must be an array");
      cfg.synth.tones.clear();
      for (std::size_t i = 0; i < tones->size(); ++i) {
        Section tone((*tones)[i], "synth.tones[" + std::to_string(i) + "]");
        SynthToneConfig t;
        tone.read("freq_hz", t.freq_hz);
        tone.read("phase", t.phase);
        tone.read("amplitude_lo", t.amplitude_lo);
        tone.read("amplitude_hi", t.amplitude_hi);
        tone.finish();
        cfg.synth.tones.push_back(t);
      }
    }
  });
  with_section(root, "verify", [&](Section& s) {
    s.read("random_signals", cfg.verify.random_signals);
    s.read("alignment_channels", cfg.verify.alignment_channels);
    s.read("reconstruction_tol", cfg.verify.reconstruction_tol);
    s.read("analytic_tol", cfg.verify.analytic_tol);
    s.read("real_part_tol", cfg.verify.real_part_tol);
    s.read("tone_freq_tol", cfg.verify.tone_freq_tol);
    s.read("chirp_freq_tol", cfg.verify.chirp_freq_tol);
    s.read("min_correlation", cfg.verify.min_correlation);
    s.read("mhs_amplitude_tol", cfg.verify.mhs_amplitude_tol);
    s.read("bookkeeping_tol", cfg.verify.bookkeeping_tol);
  });
  root.finish();
  validate(cfg);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("config file not found: " + path.string());
  return config_from_json(io::read_json(path));
}

void set_config_value(PipelineConfig& cfg, const std::string& dotted_key,
                      const std::string& json_literal) {
  json value;
  try {
    value = json::parse(json_literal);
  } catch (const json::parse_error&) {
    // Bare words are taken as strings so "--set decompose_scope=trial" works.
    value = json_literal;
  }
  json doc = to_json(cfg);
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = dotted_key.find('.', start);
    const auto part = dotted_key.substr(start, dot - start);
    if (!node->is_object() || !node->contains(part)) {
      throw ValidationError("config: unknown key '" + dotted_key + "'");
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = value;
  cfg = config_from_json(doc);
}

void validate(const PipelineConfig& cfg) {
  if (!(cfg.input.csv_rate_hz > 0.0)) throw ValidationError("config: input.csv_rate_hz must be > 0");
  if (!(cfg.preprocess.target_rate_hz > 0.0)) {
    throw ValidationError("config: preprocess.target_rate_hz must be > 0");
  }
  if (cfg.preprocess.lowpass_hz < 0.0 ||
      cfg.preprocess.lowpass_hz >= cfg.preprocess.target_rate_hz / 2.0) {
    throw ValidationError("config: preprocess.lowpass_hz must lie in [0, target Nyquist)");
  }
  if (!(cfg.segment_seconds > 0.0)) throw ValidationError("config: segment_seconds must be > 0");
  if (cfg.memd.max_imfs < 1 || cfg.memd.max_sift_iterations < 1 || cfg.memd.min_extrema < 2 ||
      !(cfg.memd.sift_tolerance >= 0.0)) {
    throw ValidationError("config: memd settings out of range");
  }
  validate(cfg.spectrum);
  if (cfg.selection.max_selected < 1) {
    throw ValidationError("config: selection.max_selected must be >= 1");
  }
  if (cfg.blocks.depth < 1) throw ValidationError("config: blocks.depth must be >= 1");
  if (cfg.blocks.overlap >= cfg.blocks.depth) {
    throw ValidationError("config: blocks.overlap must be smaller than blocks.depth");
  }
  if (!(cfg.labels.threshold >= 1.0 && cfg.labels.threshold <= 9.0)) {
    throw ValidationError("config: labels.threshold must lie in [1, 9]");
  }
  if (cfg.synth.channels < 1 || !(cfg.synth.rate_hz > 0.0) || !(cfg.synth.seconds > 0.0) ||
      !(cfg.synth.noise_sigma >= 0.0)) {
    throw ValidationError("config: synth settings out of range");
  }
  for (const auto& t : cfg.synth.tones) {
    if (!(t.amplitude_lo <= t.amplitude_hi)) {
      throw ValidationError("config: synth tone amplitude_lo exceeds amplitude_hi");
    }
  }
  if (cfg.verify.random_signals < 1 || cfg.verify.alignment_channels < 1) {
    throw ValidationError("config: verify counts must be >= 1");
  }
}

}  // namespace mhht
