#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hht.hpp"
#include "matrix.hpp"
#include "memd.hpp"
#include "preprocess.hpp"

namespace mhht {

/// E x W map: row c is the marginal Hilbert spectrum of channel c.
struct FeatureMap2D {
  std::size_t segment_index = 0;
  Matrix values;

  std::size_t channels() const noexcept { return values.rows(); }
  std::size_t bins() const noexcept { return values.cols(); }
};

enum class Label { low, high, excluded };

const char* to_string(Label label) noexcept;

// low below the threshold, high above it, excluded when equal. Scores must
// lie in [1, 9].
Label assign_label(double score, double threshold);

struct TrialLabels {
  std::optional<double> valence_score;
  std::optional<double> arousal_score;
  double threshold = 5.0;
};

/// E x W x M tensor of M consecutive maps of one trial, stored with channel
/// slowest and depth fastest: index (c * W + w) * M + m.
struct FeatureBlock {
  std::string trial_id;
  std::size_t start_segment = 0;
  std::size_t channels = 0;
  std::size_t bins = 0;
  std::size_t depth = 0;
  std::vector<double> values;
  TrialLabels labels;

  double at(std::size_t c, std::size_t w, std::size_t m) const noexcept {
    return values[(c * bins + w) * depth + m];
  }
};

// MHS of every channel over the selected IMFs of a decomposed segment.
FeatureMap2D build_map(const ImfSet& segment_imfs, std::span<const std::size_t> selected,
                       const FrequencyAxis& axis, std::size_t segment_index);

// Decomposes the segment first, then selects IMFs by median frequency. A
// segment without any IMF (flat or monotone) gives an all-zero map.
FeatureMap2D build_map(const Segment& segment, const SiftConfig& sift, std::uint64_t seed,
                       double min_median_hz, std::size_t max_selected,
                       const FrequencyAxis& axis);

// Rescales the map to [0, 1]; a constant map becomes all zeros.
void normalize_min_max(FeatureMap2D& map);

// Windows of `depth` consecutive maps advancing by `stride` (stride == depth
// gives non-overlapping blocks). Fewer than `depth` maps yields no blocks.
std::vector<FeatureBlock> build_blocks(std::span<const FeatureMap2D> maps, std::size_t depth,
                                       std::size_t stride, const std::string& trial_id,
                                       const TrialLabels& labels = {});

// Writes blocks/block_NNNNNN.bin (f32) and manifest.json under `dir`, blocks
// ordered by (trial id, start segment). Returns the manifest.
nlohmann::json export_dataset(std::span<const FeatureBlock> blocks,
                              const std::filesystem::path& dir,
                              const nlohmann::json& extra = nlohmann::json::object());

std::vector<float> read_block(const std::filesystem::path& path, std::size_t channels,
                              std::size_t bins, std::size_t depth);

}  // namespace mhht
