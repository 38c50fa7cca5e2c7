#include "hht.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "binary_io.hpp"
#include "errors.hpp"
#include "fft.hpp"

namespace mhht {

AnalyticSignal analytic_signal(std::span<const double> c) {
  const std::size_t n = c.size();
  if (n == 0) return {};
  std::vector<std::complex<double>> spectrum(c.begin(), c.end());
  spectrum = fft::forward(spectrum);
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < n; ++k) {
    if (n % 2 == 0 && k == half) continue;
    spectrum[k] *= (k < (n + 1) / 2) ? 2.0 : 0.0;
  }
  auto z = fft::inverse(spectrum);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : z) v *= scale;
  return z;
}

AnalyticTrack instantaneous_attributes(std::span<const std::complex<double>> z, double rate_hz) {
  if (!(rate_hz > 0.0)) throw ValidationError("sample rate must be positive");
  const std::size_t n = z.size();
  AnalyticTrack track;
  track.amplitude.resize(n);
  track.phase.resize(n);
  track.inst_freq_hz.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    track.amplitude[t] = std::abs(z[t]);
    const double wrapped = std::arg(z[t]);
    if (t == 0) {
      track.phase[t] = wrapped;
      continue;
    }
    double step = wrapped - std::arg(z[t - 1]);
    step -= 2.0 * std::numbers::pi * std::round(step / (2.0 * std::numbers::pi));
    track.phase[t] = track.phase[t - 1] + step;
  }
  if (n < 2) {
    track.undefined_count = n;
    return track;
  }
  const double to_hz = rate_hz / (2.0 * std::numbers::pi);
  for (std::size_t t = 0; t < n; ++t) {
    if (track.amplitude[t] == 0.0) {
      ++track.undefined_count;
      continue;
    }
    double slope;
    if (t == 0) {
      slope = track.phase[1] - track.phase[0];
    } else if (t + 1 == n) {
      slope = track.phase[t] - track.phase[t - 1];
    } else {
      slope = 0.5 * (track.phase[t + 1] - track.phase[t - 1]);
    }
    const double freq = slope * to_hz;
    if (freq < 0.0) {
      ++track.negative_freq_count;
    } else {
      track.inst_freq_hz[t] = freq;
    }
  }
  return track;
}

AnalyticTrack analyze_component(std::span<const double> c, double rate_hz) {
  return instantaneous_attributes(analytic_signal(c), rate_hz);
}

std::optional<std::size_t> FrequencyAxis::bin_of(double freq_hz) const noexcept {
  double pos = (freq_hz - lo_hz) * static_cast<double>(bins) / (hi_hz - lo_hz);
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) <= 1e-9) pos = nearest;
  if (!(pos >= 0.0) || pos >= static_cast<double>(bins)) return std::nullopt;
  return static_cast<std::size_t>(pos);
}

void validate(const FrequencyAxis& axis) {
  if (axis.bins < 1) throw ValidationError("frequency axis needs at least one bin");
  if (!(axis.lo_hz < axis.hi_hz) || axis.lo_hz < 0.0 || !std::isfinite(axis.hi_hz)) {
    throw ValidationError("frequency range must satisfy 0 <= lo < hi");
  }
}

HilbertSpectrum hilbert_spectrum(std::span<const AnalyticTrack> tracks, const FrequencyAxis& axis) {
  validate(axis);
  if (tracks.empty()) throw ValidationError("Hilbert spectrum needs at least one track");
  const std::size_t T = tracks.front().size();
  for (const auto& track : tracks) {
    if (track.size() != T || track.inst_freq_hz.size() != T) {
      throw ValidationError("all tracks must have the same length");
    }
  }
  HilbertSpectrum h{axis, Matrix(axis.bins, T), 0};
  for (const auto& track : tracks) {
    for (std::size_t t = 0; t < T; ++t) {
      if (const auto bin = axis.bin_of(track.inst_freq_hz[t])) {
        h.energy(*bin, t) += track.amplitude[t];
      } else {
        ++h.discarded;
      }
    }
  }
  return h;
}

MarginalSpectrum marginal_spectrum(const HilbertSpectrum& h) {
  MarginalSpectrum m{h.axis, std::vector<double>(h.energy.rows(), 0.0)};
  const std::size_t T = h.num_samples();
  if (T == 0) return m;
  for (std::size_t w = 0; w < h.energy.rows(); ++w) {
    const auto row = h.energy.row(w);
    m.power[w] = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(T);
  }
  return m;
}

double median_frequency(const AnalyticTrack& track) {
  const double total = std::accumulate(track.amplitude.begin(), track.amplitude.end(), 0.0);
  if (!(total > 0.0)) {
    throw ValidationError("median frequency is undefined for an all-zero amplitude track");
  }
  std::vector<std::size_t> order(track.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return track.inst_freq_hz[a] < track.inst_freq_hz[b];
  });
  double cumulative = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    cumulative += track.amplitude[order[i]];
    const bool last_of_value = i + 1 == order.size() ||
                               track.inst_freq_hz[order[i + 1]] != track.inst_freq_hz[order[i]];
    if (last_of_value && cumulative >= 0.5 * total) return track.inst_freq_hz[order[i]];
  }
  return track.inst_freq_hz[order.back()];
}

std::vector<double> imf_median_frequencies(const ImfSet& imfs) {
  std::vector<double> medians;
  medians.reserve(imfs.size());
  for (const auto& imf : imfs.imfs) {
    double sum = 0.0;
    std::size_t counted = 0;
    for (std::size_t c = 0; c < imf.rows(); ++c) {
      const auto track = analyze_component(imf.row(c), imfs.source_rate_hz);
      const double total = std::accumulate(track.amplitude.begin(), track.amplitude.end(), 0.0);
      if (!(total > 0.0)) continue;
      sum += median_frequency(track);
      ++counted;
    }
    medians.push_back(counted ? sum / static_cast<double>(counted) : 0.0);
  }
  return medians;
}

std::vector<std::size_t> select_imfs(const ImfSet& imfs, double min_median_hz,
                                     std::size_t max_count) {
  const auto medians = imf_median_frequencies(imfs);
  std::vector<std::size_t> selected;
  for (std::size_t j = 0; j < medians.size(); ++j) {
    if (medians[j] > min_median_hz) selected.push_back(j);
  }
  std::stable_sort(selected.begin(), selected.end(),
                   [&](std::size_t a, std::size_t b) { return medians[a] > medians[b]; });
  if (selected.size() > max_count) selected.resize(max_count);
  return selected;
}

void write_marginal_csv(const std::filesystem::path& path, const MarginalSpectrum& spectrum) {
  std::string text = "bin_low_hz,bin_high_hz,power\n";
  char line[128];
  for (std::size_t w = 0; w < spectrum.power.size(); ++w) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", spectrum.axis.bin_low(w),
                  spectrum.axis.bin_high(w), spectrum.power[w]);
    text += line;
  }
  io::write_text(path, text);
}

void write_hilbert_spectrum(const std::filesystem::path& path, const HilbertSpectrum& spectrum,
                            double rate_hz) {
  io::write_f32(path, spectrum.energy.values());
  nlohmann::json meta;
  meta["rows"] = spectrum.energy.rows();
  meta["cols"] = spectrum.energy.cols();
  meta["layout"] = "row-major, rows are frequency bins, columns are samples";
  meta["dtype"] = "float32-le";
  meta["freq_lo_hz"] = spectrum.axis.lo_hz;
  meta["freq_hi_hz"] = spectrum.axis.hi_hz;
  meta["bins"] = spectrum.axis.bins;
  meta["rate_hz"] = rate_hz;
  meta["discarded_samples"] = spectrum.discarded;
  auto sidecar = path;
  sidecar.replace_extension(".json");
  io::write_json(sidecar, meta);
}

}  // namespace mhht
