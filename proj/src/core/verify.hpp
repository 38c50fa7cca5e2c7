#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "synth.hpp"

namespace mhht {

// Discrete Hilbert transform by direct O(T^2) circular convolution with the
// principal-value kernel (cot form). Independent of the FFT route.
std::vector<double> hilbert_transform_direct(std::span<const double> x);

std::vector<ToneSpec> make_tones(const SynthConfig& synth, std::uint64_t seed);

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<", "<=" or ">"
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool passed() const noexcept;
};

// The synthetic oracle suite: reconstruction identity, scale alignment,
// analytic-signal oracle, instantaneous frequency, MHS amplitude and
// bookkeeping, IMF selection. Thresholds come from cfg.verify.
VerifyReport run_verification(const PipelineConfig& cfg);

nlohmann::json to_json(const VerifyReport& report);
std::string to_table(const VerifyReport& report);

}  // namespace mhht
