#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "matrix.hpp"
#include "memd.hpp"

namespace mhht {

using AnalyticSignal = std::vector<std::complex<double>>;

// Frequency-domain construction: keep DC (and Nyquist for even T), double the
// positive frequencies, zero the negative ones.
AnalyticSignal analytic_signal(std::span<const double> c);

/// Instantaneous amplitude, unwrapped phase (rad) and frequency (Hz) of one
/// component.
struct AnalyticTrack {
  std::vector<double> amplitude;
  std::vector<double> phase;
  std::vector<double> inst_freq_hz;
  std::size_t negative_freq_count = 0;  // estimates below 0 Hz, clamped to 0
  std::size_t undefined_count = 0;      // zero-amplitude samples, frequency set to 0

  std::size_t size() const noexcept { return amplitude.size(); }
};

AnalyticTrack instantaneous_attributes(std::span<const std::complex<double>> z, double rate_hz);
AnalyticTrack analyze_component(std::span<const double> c, double rate_hz);

/// W uniform bins over [lo_hz, hi_hz), each left-closed.
struct FrequencyAxis {
  double lo_hz = 0.0;
  double hi_hz = 64.0;
  std::size_t bins = 192;

  double bin_width() const noexcept { return (hi_hz - lo_hz) / static_cast<double>(bins); }
  double bin_low(std::size_t w) const noexcept {
    return lo_hz + (hi_hz - lo_hz) * static_cast<double>(w) / static_cast<double>(bins);
  }
  double bin_high(std::size_t w) const noexcept { return bin_low(w + 1); }
  // Frequencies within 1e-9 bin widths of an edge are placed on that edge so
  // round-off in the phase derivative cannot flip the bin of an exact tone.
  std::optional<std::size_t> bin_of(double freq_hz) const noexcept;

  friend bool operator==(const FrequencyAxis&, const FrequencyAxis&) = default;
};

void validate(const FrequencyAxis& axis);

/// H(w, t): amplitude deposited at the bin of each component's instantaneous
/// frequency, summed over components. energy is bins x T.
struct HilbertSpectrum {
  FrequencyAxis axis;
  Matrix energy;
  std::size_t discarded = 0;  // samples whose frequency fell outside the axis

  std::size_t num_samples() const noexcept { return energy.cols(); }
};

HilbertSpectrum hilbert_spectrum(std::span<const AnalyticTrack> tracks, const FrequencyAxis& axis);

struct MarginalSpectrum {
  FrequencyAxis axis;
  std::vector<double> power;
};

// Time average of H over the frame.
MarginalSpectrum marginal_spectrum(const HilbertSpectrum& h);

// Amplitude-weighted median of the instantaneous frequency: the smallest f
// with sum_{w(t) <= f} a(t) >= half the total amplitude.
double median_frequency(const AnalyticTrack& track);

// Median frequency of each IMF averaged over its channels. Silent channels
// are skipped; an all-silent IMF scores 0 Hz.
std::vector<double> imf_median_frequencies(const ImfSet& imfs);

// Indices of IMFs whose channel-averaged median frequency exceeds the
// threshold, highest frequency first, at most max_count of them.
std::vector<std::size_t> select_imfs(const ImfSet& imfs, double min_median_hz,
                                     std::size_t max_count);

void write_marginal_csv(const std::filesystem::path& path, const MarginalSpectrum& spectrum);
// Row-major bins x T little-endian f32 plus a JSON sidecar next to it.
void write_hilbert_spectrum(const std::filesystem::path& path, const HilbertSpectrum& spectrum,
                            double rate_hz);

}  // namespace mhht
