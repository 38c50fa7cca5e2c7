#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "directions.hpp"
#include "matrix.hpp"
#include "signal.hpp"

namespace mhht {

struct SiftConfig {
  std::size_t num_directions = 0;  // 0 selects max(2n, 16), or 2 for n = 1
  std::size_t max_imfs = 11;
  std::size_t max_sift_iterations = 15;
  double sift_tolerance = 0.05;
  std::size_t min_extrema = 3;

  friend bool operator==(const SiftConfig&, const SiftConfig&) = default;
};

std::size_t resolve_num_directions(const SiftConfig& cfg, std::size_t n);
void validate(const SiftConfig& cfg, std::size_t n);

/// M scale-aligned IMFs (highest frequency first) plus a residue; every
/// matrix has the source's n x T shape.
struct ImfSet {
  std::vector<Matrix> imfs;
  Matrix residue;
  double source_rate_hz = 0.0;

  std::size_t size() const noexcept { return imfs.size(); }
  std::size_t num_channels() const noexcept { return residue.rows(); }
  std::size_t num_samples() const noexcept { return residue.cols(); }
};

struct Extremum {
  std::size_t index;
  double value;

  friend bool operator==(const Extremum&, const Extremum&) = default;
};

// Strictly interior local maxima. A flat run bounded by lower samples on both
// sides counts once, at its midpoint (left of center for even runs).
std::vector<Extremum> find_maxima(std::span<const double> p);
std::vector<Extremum> find_minima(std::span<const double> p);

// True when the series has no interior extrema.
bool is_monotone(std::span<const double> p);

std::vector<double> project(const Matrix& x, std::span<const double> direction);

enum class EnvelopeBoundary {
  mirror,  // reflect the two outermost knots about each signal edge
  none,    // plain natural spline, end polynomials extended
};

// Per-channel natural cubic spline through x at the given sample indices
// (sorted), evaluated at every sample. nullopt when fewer than min_extrema
// indices are given.
std::optional<Matrix> envelope(const Matrix& x, std::span<const std::size_t> maxima_times,
                               std::size_t min_extrema,
                               EnvelopeBoundary boundary = EnvelopeBoundary::mirror);

// Average of the envelopes over the directions whose projections have enough
// maxima. nullopt when fewer than half the directions qualify; an all-zero
// signal has a zero mean. Directions are summed in index order so the result
// is reproducible bit for bit.
std::optional<Matrix> mean_envelope(const Matrix& x, const DirectionSet& dirs,
                                    std::size_t min_extrema);

// One IMF by repeated d <- d - m(d). Stops when ||m|| / ||d|| falls below the
// tolerance or after max_sift_iterations. nullopt when the first mean
// envelope cannot be formed.
std::optional<Matrix> sift(const Matrix& x, const DirectionSet& dirs, const SiftConfig& cfg);

ImfSet decompose(const Matrix& x, double rate_hz, const DirectionSet& dirs,
                 const SiftConfig& cfg);
ImfSet decompose(const MultivariateSignal& x, const SiftConfig& cfg, std::uint64_t seed);

// Sum of all IMFs plus the residue.
Matrix reconstruct(const ImfSet& set);

}  // namespace mhht
