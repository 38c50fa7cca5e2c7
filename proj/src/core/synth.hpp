#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "memd.hpp"
#include "signal.hpp"

namespace mhht {

struct ToneSpec {
  double freq_hz = 0.0;
  std::vector<double> amplitudes;  // one per channel
  double phase = 0.0;              // radians
};

// x[c][t] = sum_k A_k[c] cos(2 pi f_k t / rate + phi_k) + N(0, sigma^2),
// with round(seconds * rate) samples. Deterministic per seed.
MultivariateSignal synth_multitone(std::size_t channels, double rate_hz, double seconds,
                                   const std::vector<ToneSpec>& tones, double noise_sigma,
                                   std::uint64_t seed);

// The k-th tone alone, as it appears in synth_multitone's output.
Matrix tone_component(const ToneSpec& tone, std::size_t channels, std::size_t samples,
                      double rate_hz);

// Pearson correlation over [begin, end); 0 when either side is constant.
double pearson(std::span<const double> a, std::span<const double> b);

struct ToneMatch {
  std::size_t tone = 0;
  double freq_hz = 0.0;
  std::size_t matched_imf = 0;                 // argmax of channel-mean correlation
  std::vector<std::size_t> per_channel_best;   // argmax per channel
  std::vector<double> correlation;             // matched IMF vs ground truth, per channel
  bool aligned = false;                        // every channel agrees with matched_imf
  double min_correlation = 0.0;
};

struct ModeSeparationReport {
  std::vector<ToneMatch> tones;
};

// Correlations use the central 80% of samples.
ModeSeparationReport mode_separation_score(const ImfSet& imfs, const std::vector<ToneSpec>& tones);

nlohmann::json to_json(const ModeSeparationReport& report);
std::string to_table(const ModeSeparationReport& report);

}  // namespace mhht
