#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace mhht {

/// n-channel, uniformly sampled real time series. data is n x T with one row
/// per channel, in the same order as `channels`.
struct MultivariateSignal {
  std::vector<std::string> channels;
  Matrix data;
  double sample_rate_hz = 0.0;

  std::size_t num_channels() const noexcept { return data.rows(); }
  std::size_t num_samples() const noexcept { return data.cols(); }
  double duration_seconds() const noexcept {
    return static_cast<double>(num_samples()) / sample_rate_hz;
  }
};

// Throws ValidationError unless: labels match rows, T >= 2, rate > 0 and
// finite, every sample finite.
void validate(const MultivariateSignal& signal);

// Labels "ch01", "ch02", ... for n channels.
std::vector<std::string> default_channel_labels(std::size_t n);

MultivariateSignal make_signal(Matrix data, double sample_rate_hz,
                               std::vector<std::string> channels = {});

enum class SignalFormat { csv, raw_binary };

// ".csv" -> csv, ".bin"/".f32"/".raw" -> raw_binary.
SignalFormat format_from_path(const std::filesystem::path& path);

// Raw-binary samples live in `foo.bin`; shape and rate live in `foo.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& binary_path);

// CSV: a header of channel labels, then one row per sample. CSV carries no
// rate, so the caller supplies it. Raw-binary: little-endian f32,
// channel-major, with the JSON sidecar {"channels", "samples", "rate_hz"}.
MultivariateSignal load_signal(const std::filesystem::path& path, SignalFormat format,
                               double csv_rate_hz = 128.0);
MultivariateSignal load_signal(const std::filesystem::path& path, double csv_rate_hz = 128.0);

void save_signal(const MultivariateSignal& signal, const std::filesystem::path& path,
                 SignalFormat format);
void save_signal(const MultivariateSignal& signal, const std::filesystem::path& path);

}  // namespace mhht
