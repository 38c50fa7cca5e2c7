#include "features.hpp"

#include <algorithm>
#include <cstdio>

#include "binary_io.hpp"
#include "errors.hpp"

namespace mhht {

const char* to_string(Label label) noexcept {
  switch (label) {
    case Label::low:
      return "low";
    case Label::high:
      return "high";
    case Label::excluded:
      return "excluded";
  }
  return "excluded";
}

Label assign_label(double score, double threshold) {
  if (!(score >= 1.0 && score <= 9.0)) {
    throw ValidationError("rating score " + std::to_string(score) + " outside [1, 9]");
  }
  if (score < threshold) return Label::low;
  if (score > threshold) return Label::high;
  return Label::excluded;
}

FeatureMap2D build_map(const ImfSet& segment_imfs, std::span<const std::size_t> selected,
                       const FrequencyAxis& axis, std::size_t segment_index) {
  validate(axis);
  if (selected.empty()) throw ValidationError("no IMFs selected");
  for (auto j : selected) {
    if (j >= segment_imfs.size()) {
      throw ValidationError("selected IMF index " + std::to_string(j) + " out of range");
    }
  }
  const std::size_t E = segment_imfs.num_channels();
  FeatureMap2D map{segment_index, Matrix(E, axis.bins)};
  std::vector<AnalyticTrack> tracks(selected.size());
  for (std::size_t c = 0; c < E; ++c) {
    for (std::size_t k = 0; k < selected.size(); ++k) {
      tracks[k] = analyze_component(segment_imfs.imfs[selected[k]].row(c),
                                    segment_imfs.source_rate_hz);
    }
    const auto mhs = marginal_spectrum(hilbert_spectrum(tracks, axis));
    std::copy(mhs.power.begin(), mhs.power.end(), map.values.row(c).begin());
  }
  return map;
}

FeatureMap2D build_map(const Segment& segment, const SiftConfig& sift, std::uint64_t seed,
                       double min_median_hz, std::size_t max_selected,
                       const FrequencyAxis& axis) {
  const auto signal = make_signal(segment.data, segment.sample_rate_hz);
  const auto imfs = decompose(signal, sift, seed);
  if (imfs.size() == 0) {
    // Nothing oscillates, so there is no spectrum to place.
    validate(axis);
    return {segment.index, Matrix(signal.num_channels(), axis.bins)};
  }
  const auto selected = select_imfs(imfs, min_median_hz, max_selected);
  return build_map(imfs, selected, axis, segment.index);
}

void normalize_min_max(FeatureMap2D& map) {
  auto values = map.values.values();
  if (values.empty()) return;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double low = *lo;
  const double range = *hi - *lo;
  for (double& v : values) v = range > 0.0 ? (v - low) / range : 0.0;
}

std::vector<FeatureBlock> build_blocks(std::span<const FeatureMap2D> maps, std::size_t depth,
                                       std::size_t stride, const std::string& trial_id,
                                       const TrialLabels& labels) {
  if (depth < 1) throw ValidationError("block depth must be at least 1");
  if (stride < 1) throw ValidationError("block stride must be at least 1");
  std::vector<FeatureBlock> blocks;
  if (maps.size() < depth) return blocks;

  const std::size_t E = maps.front().channels();
  const std::size_t W = maps.front().bins();
  for (const auto& map : maps) {
    if (map.channels() != E || map.bins() != W) {
      throw ValidationError("feature maps of one trial must share a shape");
    }
  }
  for (std::size_t start = 0; start + depth <= maps.size(); start += stride) {
    FeatureBlock block;
    block.trial_id = trial_id;
    block.start_segment = maps[start].segment_index;
    block.channels = E;
    block.bins = W;
    block.depth = depth;
    block.labels = labels;
    block.values.resize(E * W * depth);
    for (std::size_t m = 0; m < depth; ++m) {
      const auto& map = maps[start + m];
      for (std::size_t c = 0; c < E; ++c) {
        for (std::size_t w = 0; w < W; ++w) {
          block.values[(c * W + w) * depth + m] = map.values(c, w);
        }
      }
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

nlohmann::json export_dataset(std::span<const FeatureBlock> blocks,
                              const std::filesystem::path& dir, const nlohmann::json& extra) {
  std::vector<const FeatureBlock*> ordered;
  ordered.reserve(blocks.size());
  for (const auto& b : blocks) ordered.push_back(&b);
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    if (a->trial_id != b->trial_id) return a->trial_id < b->trial_id;
    return a->start_segment < b->start_segment;
  });
  if (!ordered.empty()) {
    const auto* first = ordered.front();
    for (const auto* b : ordered) {
      if (b->channels != first->channels || b->bins != first->bins || b->depth != first->depth) {
        throw ValidationError("cannot export blocks of differing shapes");
      }
    }
  }

  io::ensure_directory(dir / "blocks");
  // Leftovers from an earlier, larger export would break count == files.
  for (const auto& entry : std::filesystem::directory_iterator(dir / "blocks")) {
    const auto name = entry.path().filename().string();
    if (name.rfind("block_", 0) == 0 && entry.path().extension() == ".bin") {
      std::filesystem::remove(entry.path());
    }
  }
  nlohmann::json manifest = extra;
  manifest["format_version"] = 1;
  manifest["dtype"] = "float32-le";
  manifest["layout"] = "channel, frequency, depth (depth fastest)";
  manifest["shape"] = ordered.empty()
                          ? nlohmann::json::array()
                          : nlohmann::json::array({ordered.front()->channels,
                                                   ordered.front()->bins, ordered.front()->depth});
  manifest["count"] = ordered.size();
  auto entries = nlohmann::json::array();
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto& block = *ordered[i];
    char name[64];
    std::snprintf(name, sizeof(name), "blocks/block_%06zu.bin", i);
    io::write_f32(dir / name, std::span<const double>(block.values));

    nlohmann::json entry;
    entry["file"] = name;
    entry["trial"] = block.trial_id;
    entry["start_segment"] = block.start_segment;
    nlohmann::json label = nlohmann::json::object();
    const auto add = [&](const char* axis, const std::optional<double>& score) {
      if (!score) return;
      label[axis] = to_string(assign_label(*score, block.labels.threshold));
      label[std::string(axis) + "_score"] = *score;
    };
    add("valence", block.labels.valence_score);
    add("arousal", block.labels.arousal_score);
    entry["label"] = label;
    entries.push_back(std::move(entry));
  }
  manifest["blocks"] = std::move(entries);
  io::write_json(dir / "manifest.json", manifest);
  return manifest;
}

std::vector<float> read_block(const std::filesystem::path& path, std::size_t channels,
                              std::size_t bins, std::size_t depth) {
  return io::read_f32(path, channels * bins * depth);
}

}  // namespace mhht
