#include "pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "binary_io.hpp"
#include "errors.hpp"
#include "hht.hpp"
#include "parallel.hpp"
#include "preprocess.hpp"
#include "verify.hpp"

namespace mhht {
namespace {

// Rethrows the in-flight exception with `context` prefixed, keeping its kind.
[[noreturn]] void rethrow_with(const std::string& context) {
  try {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(context + ": " + e.what());
  } catch (const IoError& e) {
    throw IoError(context + ": " + e.what());
  }
}

bool is_signal_file(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  return ext == ".csv" || ext == ".bin" || ext == ".f32" || ext == ".raw";
}

std::vector<std::filesystem::path> list_trials(const std::filesystem::path& input,
                                               const PipelineConfig& cfg) {
  if (!std::filesystem::exists(input)) throw IoError("input not found: " + input.string());
  if (!std::filesystem::is_directory(input)) return {input};
  std::filesystem::path labels;
  if (!cfg.labels.file.empty() && std::filesystem::exists(cfg.labels.file)) {
    labels = std::filesystem::canonical(cfg.labels.file);
  }
  std::vector<std::filesystem::path> trials;
  for (const auto& entry : std::filesystem::directory_iterator(input)) {
    if (!entry.is_regular_file() || !is_signal_file(entry.path())) continue;
    if (!labels.empty() && std::filesystem::canonical(entry.path()) == labels) continue;
    trials.push_back(entry.path());
  }
  std::sort(trials.begin(), trials.end());
  if (trials.empty()) throw ValidationError("no signal files in " + input.string());
  return trials;
}

std::vector<std::string> split_trimmed(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
  }
  return cells;
}

std::map<std::string, TrialLabels> load_labels(const PipelineConfig& cfg) {
  std::map<std::string, TrialLabels> out;
  if (cfg.labels.file.empty()) return out;
  std::ifstream in(cfg.labels.file);
  if (!in) throw IoError("cannot open labels file: " + cfg.labels.file);
  std::string line;
  std::getline(in, line);
  const auto header = split_trimmed(line);
  const auto column = [&](const std::string& name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  const auto trial_col = column("trial");
  const auto valence_col = column("valence");
  const auto arousal_col = column("arousal");
  if (trial_col < 0) throw ValidationError(cfg.labels.file + ": missing 'trial' column");
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const auto cells = split_trimmed(line);
    if (std::all_of(cells.begin(), cells.end(), [](const std::string& c) { return c.empty(); })) {
      continue;
    }
    if (cells.size() != header.size()) {
      throw ValidationError(cfg.labels.file + ": row " + std::to_string(row) + " is ragged");
    }
    TrialLabels labels;
    labels.threshold = cfg.labels.threshold;
    try {
      if (valence_col >= 0) labels.valence_score = std::stod(cells[valence_col]);
      if (arousal_col >= 0) labels.arousal_score = std::stod(cells[arousal_col]);
    } catch (const std::exception&) {
      throw ValidationError(cfg.labels.file + ": row " + std::to_string(row) +
                            " has a non-numeric score");
    }
    // Validate the range now rather than at export.
    if (labels.valence_score) assign_label(*labels.valence_score, labels.threshold);
    if (labels.arousal_score) assign_label(*labels.arousal_score, labels.threshold);
    out[cells[trial_col]] = labels;
  }
  return out;
}

ImfSet slice(const ImfSet& set, std::size_t start, std::size_t length) {
  const auto cut = [&](const Matrix& m) {
    Matrix out(m.rows(), length);
    for (std::size_t c = 0; c < m.rows(); ++c) {
      const auto src = m.row(c).subspan(start, length);
      std::copy(src.begin(), src.end(), out.row(c).begin());
    }
    return out;
  };
  ImfSet out;
  out.source_rate_hz = set.source_rate_hz;
  out.residue = cut(set.residue);
  for (const auto& imf : set.imfs) out.imfs.push_back(cut(imf));
  return out;
}

std::string imf_file_name(std::size_t j) {
  char name[32];
  std::snprintf(name, sizeof(name), "imf_%02zu.bin", j + 1);
  return name;
}

struct TrialWork {
  std::string id;
  std::string file;
  TrialLabels labels;
  std::vector<Segment> segments;
  ImfSet trial_imfs;                 // decompose_scope == trial
  std::vector<std::size_t> selected; // decompose_scope == trial
  std::vector<FeatureMap2D> maps;
};

}  // namespace

MultivariateSignal preprocess(const MultivariateSignal& x, const PipelineConfig& cfg) {
  MultivariateSignal out = x;
  if (out.sample_rate_hz != cfg.preprocess.target_rate_hz) {
    out = resample(out, cfg.preprocess.target_rate_hz);
  }
  if (cfg.preprocess.lowpass_hz > 0.0) out = lowpass_filter(out, cfg.preprocess.lowpass_hz);
  if (cfg.preprocess.common_average_reference) out = common_average_reference(out);
  return out;
}

MultivariateSignal load_input(const std::filesystem::path& path, const PipelineConfig& cfg) {
  return load_signal(path, cfg.input.csv_rate_hz);
}

void save_imfset(const ImfSet& set, const std::vector<std::string>& channels,
                 const PipelineConfig& cfg, const std::filesystem::path& dir) {
  io::ensure_directory(dir);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("imf_", 0) == 0 && entry.path().extension() == ".bin") {
      std::filesystem::remove(entry.path());
    }
  }
  std::vector<std::string> files;
  for (std::size_t j = 0; j < set.size(); ++j) {
    files.push_back(imf_file_name(j));
    io::write_f64(dir / files.back(), set.imfs[j].values());
  }
  io::write_f64(dir / "residue.bin", set.residue.values());
  nlohmann::json manifest;
  manifest["n"] = set.num_channels();
  manifest["T"] = set.num_samples();
  manifest["M"] = set.size();
  manifest["rate_hz"] = set.source_rate_hz;
  manifest["channels"] = channels;
  manifest["imfs"] = files;
  manifest["residue"] = "residue.bin";
  manifest["dtype"] = "float64-le";
  manifest["layout"] = "channel-major";
  manifest["seed"] = cfg.seed;
  manifest["config"] = to_json(cfg);
  io::write_json(dir / "manifest.json", manifest);
}

ImfSet load_imfset(const std::filesystem::path& dir, std::vector<std::string>* channels) {
  const auto manifest = io::read_json(dir / "manifest.json");
  ImfSet set;
  std::size_t n = 0, T = 0, M = 0;
  try {
    n = manifest.at("n").get<std::size_t>();
    T = manifest.at("T").get<std::size_t>();
    M = manifest.at("M").get<std::size_t>();
    set.source_rate_hz = manifest.at("rate_hz").get<double>();
    if (channels) *channels = manifest.at("channels").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError((dir / "manifest.json").string() + ": malformed: " + e.what());
  }
  const auto read = [&](const std::string& name) {
    const auto values = io::read_f64(dir / name, n * T);
    Matrix m(n, T);
    std::copy(values.begin(), values.end(), m.values().begin());
    return m;
  };
  for (std::size_t j = 0; j < M; ++j) set.imfs.push_back(read(imf_file_name(j)));
  set.residue = read("residue.bin");
  return set;
}

ImfSet run_decompose(const std::filesystem::path& input, const PipelineConfig& cfg,
                     const std::filesystem::path& out_dir) {
  const auto signal = load_input(input, cfg);
  auto set = decompose(signal, cfg.memd, cfg.seed);
  save_imfset(set, signal.channels, cfg, out_dir);
  return set;
}

nlohmann::json run_spectrum(const std::filesystem::path& input, const PipelineConfig& cfg,
                            const std::filesystem::path& out_dir) {
  ImfSet set;
  std::vector<std::string> channels;
  if (std::filesystem::is_directory(input)) {
    set = load_imfset(input, &channels);
  } else {
    const auto signal = load_input(input, cfg);
    channels = signal.channels;
    set = decompose(signal, cfg.memd, cfg.seed);
  }
  if (set.size() == 0) throw ValidationError("signal produced no IMFs; nothing to analyze");
  io::ensure_directory(out_dir);

  auto entries = nlohmann::json::array();
  for (std::size_t c = 0; c < set.num_channels(); ++c) {
    std::vector<AnalyticTrack> tracks;
    for (const auto& imf : set.imfs) tracks.push_back(analyze_component(imf.row(c), set.source_rate_hz));
    const auto h = hilbert_spectrum(tracks, cfg.spectrum);
    char stem[32];
    std::snprintf(stem, sizeof(stem), "channel_%02zu", c + 1);
    write_hilbert_spectrum(out_dir / (std::string(stem) + "_hilbert.bin"), h, set.source_rate_hz);
    write_marginal_csv(out_dir / (std::string(stem) + "_marginal.csv"), marginal_spectrum(h));
    entries.push_back({{"channel", channels.at(c)}, {"files", stem}, {"discarded_samples", h.discarded}});
  }
  nlohmann::json manifest;
  manifest["channels"] = entries;
  manifest["imf_median_hz"] = imf_median_frequencies(set);
  manifest["M"] = set.size();
  manifest["config"] = to_json(cfg);
  io::write_json(out_dir / "manifest.json", manifest);
  return manifest;
}

nlohmann::json run_features(const std::filesystem::path& input, const PipelineConfig& cfg,
                            const std::filesystem::path& out_dir, unsigned jobs) {
  validate(cfg);
  const auto files = list_trials(input, cfg);
  const auto labels = load_labels(cfg);

  std::vector<TrialWork> trials(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    auto& trial = trials[i];
    trial.id = files[i].stem().string();
    trial.file = files[i].filename().string();
    trial.labels.threshold = cfg.labels.threshold;
    if (const auto it = labels.find(trial.id); it != labels.end()) trial.labels = it->second;
    try {
      const auto x = preprocess(load_input(files[i], cfg), cfg);
      trial.segments = segment(x, cfg.segment_seconds, trial.id);
      if (cfg.decompose_scope == DecomposeScope::trial) {
        trial.trial_imfs = decompose(x, cfg.memd, cfg.seed);
        trial.selected = select_imfs(trial.trial_imfs, cfg.selection.min_median_hz,
                                     cfg.selection.max_selected);
        if (trial.selected.empty()) throw ValidationError("no IMFs selected");
      }
    } catch (...) {
      rethrow_with("trial '" + trial.id + "'");
    }
    trial.maps.resize(trial.segments.size());
  });

  struct Item {
    std::size_t trial, segment;
  };
  std::vector<Item> items;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    for (std::size_t s = 0; s < trials[t].segments.size(); ++s) items.push_back({t, s});
  }
  parallel_for(items.size(), jobs, [&](std::size_t i) {
    auto& trial = trials[items[i].trial];
    const auto& seg = trial.segments[items[i].segment];
    try {
      FeatureMap2D map;
      if (cfg.decompose_scope == DecomposeScope::trial) {
        map = build_map(slice(trial.trial_imfs, seg.start_sample, seg.length_samples),
                        trial.selected, cfg.spectrum, seg.index);
      } else {
        map = build_map(seg, cfg.memd, cfg.seed, cfg.selection.min_median_hz,
                        cfg.selection.max_selected, cfg.spectrum);
      }
      if (cfg.blocks.normalize) normalize_min_max(map);
      trial.maps[items[i].segment] = std::move(map);
    } catch (...) {
      rethrow_with("trial '" + trial.id + "' segment " + std::to_string(seg.index));
    }
  });

  std::vector<FeatureBlock> blocks;
  auto trial_entries = nlohmann::json::array();
  const std::size_t stride = cfg.blocks.depth - cfg.blocks.overlap;
  for (const auto& trial : trials) {
    auto trial_blocks = build_blocks(trial.maps, cfg.blocks.depth, stride, trial.id, trial.labels);
    trial_entries.push_back({{"id", trial.id},
                             {"file", trial.file},
                             {"segments", trial.segments.size()},
                             {"blocks", trial_blocks.size()}});
    std::move(trial_blocks.begin(), trial_blocks.end(), std::back_inserter(blocks));
  }

  nlohmann::json extra;
  extra["config"] = to_json(cfg);
  extra["normalization"] = cfg.blocks.normalize ? "min-max per map" : "none";
  extra["trials"] = trial_entries;
  return export_dataset(blocks, out_dir, extra);
}

SynthRun run_synth(const PipelineConfig& cfg, const std::filesystem::path& output) {
  SynthRun run;
  run.tones = make_tones(cfg.synth, cfg.seed);
  run.signal = synth_multitone(cfg.synth.channels, cfg.synth.rate_hz, cfg.synth.seconds, run.tones,
                               cfg.synth.noise_sigma, cfg.seed);
  if (!output.empty()) {
    if (output.has_parent_path()) io::ensure_directory(output.parent_path());
    save_signal(run.signal, output);
  }
  const auto set = decompose(run.signal, cfg.memd, cfg.seed);
  run.report = mode_separation_score(set, run.tones);
  return run;
}

}  // namespace mhht
