#include "synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "errors.hpp"

namespace mhht {

Matrix tone_component(const ToneSpec& tone, std::size_t channels, std::size_t samples,
                      double rate_hz) {
  if (tone.amplitudes.size() != channels) {
    throw ValidationError("tone at " + std::to_string(tone.freq_hz) + " Hz has " +
                          std::to_string(tone.amplitudes.size()) + " amplitudes for " +
                          std::to_string(channels) + " channels");
  }
  Matrix out(channels, samples);
  for (std::size_t t = 0; t < samples; ++t) {
    const double wave = std::cos(2.0 * std::numbers::pi * tone.freq_hz * static_cast<double>(t) /
                                     rate_hz +
                                 tone.phase);
    for (std::size_t c = 0; c < channels; ++c) out(c, t) = tone.amplitudes[c] * wave;
  }
  return out;
}

MultivariateSignal synth_multitone(std::size_t channels, double rate_hz, double seconds,
                                   const std::vector<ToneSpec>& tones, double noise_sigma,
                                   std::uint64_t seed) {
  if (channels == 0) throw ValidationError("synthetic signal needs at least one channel");
  if (!(rate_hz > 0.0) || !(seconds > 0.0)) {
    throw ValidationError("rate and duration must be positive");
  }
  if (!(noise_sigma >= 0.0)) throw ValidationError("noise sigma must be non-negative");
  for (const auto& tone : tones) {
    if (!(tone.freq_hz > 0.0) || !(tone.freq_hz < rate_hz / 2.0)) {
      throw ValidationError("tone at " + std::to_string(tone.freq_hz) +
                            " Hz is not below Nyquist (" + std::to_string(rate_hz / 2.0) + " Hz)");
    }
  }
  const auto samples = static_cast<std::size_t>(std::llround(seconds * rate_hz));
  Matrix data(channels, samples);
  for (const auto& tone : tones) data += tone_component(tone, channels, samples, rate_hz);
  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, noise_sigma);
    for (double& v : data.values()) v += normal(rng);
  }
  return make_signal(std::move(data), rate_hz);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n < 2) return 0.0;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

ModeSeparationReport mode_separation_score(const ImfSet& imfs,
                                           const std::vector<ToneSpec>& tones) {
  ModeSeparationReport report;
  if (imfs.size() == 0 || tones.empty()) return report;
  const std::size_t n = imfs.num_channels();
  const std::size_t T = imfs.num_samples();
  const std::size_t begin = T / 10;
  const std::size_t len = T - 2 * begin;

  for (std::size_t k = 0; k < tones.size(); ++k) {
    const auto truth = tone_component(tones[k], n, T, imfs.source_rate_hz);
    // corr[j][c]
    std::vector<std::vector<double>> corr(imfs.size(), std::vector<double>(n));
    for (std::size_t j = 0; j < imfs.size(); ++j) {
      for (std::size_t c = 0; c < n; ++c) {
        corr[j][c] = pearson(imfs.imfs[j].row(c).subspan(begin, len),
                             truth.row(c).subspan(begin, len));
      }
    }
    ToneMatch match;
    match.tone = k;
    match.freq_hz = tones[k].freq_hz;
    double best_mean = -2.0;
    for (std::size_t j = 0; j < imfs.size(); ++j) {
      double mean = 0.0;
      for (double v : corr[j]) mean += v;
      mean /= static_cast<double>(n);
      if (mean > best_mean) {
        best_mean = mean;
        match.matched_imf = j;
      }
    }
    match.aligned = true;
    match.per_channel_best.resize(n);
    match.correlation.resize(n);
    match.min_correlation = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < imfs.size(); ++j) {
        if (corr[j][c] > corr[best][c]) best = j;
      }
      match.per_channel_best[c] = best;
      match.correlation[c] = corr[match.matched_imf][c];
      match.aligned = match.aligned && best == match.matched_imf;
      match.min_correlation = std::min(match.min_correlation, match.correlation[c]);
    }
    report.tones.push_back(std::move(match));
  }
  return report;
}

nlohmann::json to_json(const ModeSeparationReport& report) {
  auto tones = nlohmann::json::array();
  for (const auto& m : report.tones) {
    tones.push_back({{"tone", m.tone},
                     {"freq_hz", m.freq_hz},
                     {"matched_imf", m.matched_imf},
                     {"per_channel_best_imf", m.per_channel_best},
                     {"correlation", m.correlation},
                     {"min_correlation", m.min_correlation},
                     {"aligned", m.aligned}});
  }
  return {{"tones", tones}};
}

std::string to_table(const ModeSeparationReport& report) {
  std::string out = "tone  freq_hz  matched_imf  aligned  min_corr  mean_corr\n";
  char line[128];
  for (const auto& m : report.tones) {
    double mean = 0.0;
    for (double v : m.correlation) mean += v;
    if (!m.correlation.empty()) mean /= static_cast<double>(m.correlation.size());
    std::snprintf(line, sizeof(line), "%4zu  %7.3f  %11zu  %7s  %8.4f  %9.4f\n", m.tone,
                  m.freq_hz, m.matched_imf + 1, m.aligned ? "yes" : "no", m.min_correlation,
                  mean);
    out += line;
  }
  if (report.tones.empty()) out += "(no tones or no IMFs)\n";
  return out;
}

}  // namespace mhht
