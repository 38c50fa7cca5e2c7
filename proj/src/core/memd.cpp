#include "memd.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "spline.hpp"

namespace mhht {
namespace {

template <typename Above>
std::vector<Extremum> find_peaks(std::span<const double> p, Above above) {
  std::vector<Extremum> peaks;
  const std::size_t T = p.size();
  std::size_t i = 1;
  while (i + 1 < T) {
    if (!above(p[i], p[i - 1])) {
      ++i;
      continue;
    }
    // Rising into i; walk across any flat run.
    std::size_t j = i;
    while (j + 1 < T && p[j + 1] == p[i]) ++j;
    if (j + 1 < T && above(p[i], p[j + 1])) peaks.push_back({i + (j - i) / 2, p[i]});
    i = j + 1;
  }
  return peaks;
}

double squared_norm(const Matrix& m) {
  double sum = 0.0;
  for (double v : m.values()) sum += v * v;
  return sum;
}

// Adds the envelope along one set of maxima into `sum`. False when there are
// too few maxima.
bool accumulate_envelope(const Matrix& x, std::span<const std::size_t> times,
                         std::size_t min_extrema, EnvelopeBoundary boundary, Matrix& sum,
                         std::vector<double>& values) {
  const std::size_t k = times.size();
  if (k < std::max<std::size_t>(min_extrema, 2)) return false;

  const bool mirror = boundary == EnvelopeBoundary::mirror;
  const std::size_t pad = mirror ? std::min<std::size_t>(2, k) : 0;
  const auto last = static_cast<double>(x.cols() - 1);

  // Knot order: mirrored left (outermost first), originals, mirrored right.
  std::vector<std::size_t> source(k + 2 * pad);
  std::vector<double> knots(k + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) {
    source[i] = times[pad - 1 - i];
    knots[i] = -static_cast<double>(source[i]);
  }
  for (std::size_t i = 0; i < k; ++i) {
    source[pad + i] = times[i];
    knots[pad + i] = static_cast<double>(times[i]);
  }
  for (std::size_t i = 0; i < pad; ++i) {
    source[pad + k + i] = times[k - 1 - i];
    knots[pad + k + i] = 2.0 * last - static_cast<double>(source[pad + k + i]);
  }

  const NaturalCubicSpline spline(std::move(knots));
  values.resize(source.size());
  for (std::size_t c = 0; c < x.rows(); ++c) {
    const auto row = x.row(c);
    for (std::size_t i = 0; i < source.size(); ++i) values[i] = row[source[i]];
    spline.accumulate_on_grid(values, sum.row(c));
  }
  return true;
}

std::vector<std::size_t> indices_of(const std::vector<Extremum>& extrema) {
  std::vector<std::size_t> out(extrema.size());
  std::transform(extrema.begin(), extrema.end(), out.begin(),
                 [](const Extremum& e) { return e.index; });
  return out;
}

}  // namespace

std::size_t resolve_num_directions(const SiftConfig& cfg, std::size_t n) {
  if (cfg.num_directions != 0) return cfg.num_directions;
  if (n == 1) return 2;
  return std::max<std::size_t>(2 * n, 16);
}

void validate(const SiftConfig& cfg, std::size_t n) {
  const std::size_t v = resolve_num_directions(cfg, n);
  if (v < n) {
    throw ValidationError("num_directions " + std::to_string(v) + " is below channel count " +
                          std::to_string(n));
  }
  if (cfg.max_imfs < 1) throw ValidationError("max_imfs must be at least 1");
  if (cfg.max_sift_iterations < 1) throw ValidationError("max_sift_iterations must be at least 1");
  if (!(cfg.sift_tolerance >= 0.0) || !std::isfinite(cfg.sift_tolerance)) {
    throw ValidationError("sift_tolerance must be a non-negative number");
  }
  if (cfg.min_extrema < 2) throw ValidationError("min_extrema must be at least 2");
}

std::vector<Extremum> find_maxima(std::span<const double> p) {
  return find_peaks(p, [](double a, double b) { return a > b; });
}

std::vector<Extremum> find_minima(std::span<const double> p) {
  return find_peaks(p, [](double a, double b) { return a < b; });
}

bool is_monotone(std::span<const double> p) {
  return find_maxima(p).empty() && find_minima(p).empty();
}

std::vector<double> project(const Matrix& x, std::span<const double> direction) {
  if (direction.size() != x.rows()) {
    throw ValidationError("direction has dimension " + std::to_string(direction.size()) +
                          " but signal has " + std::to_string(x.rows()) + " channels");
  }
  std::vector<double> p(x.cols(), 0.0);
  for (std::size_t c = 0; c < x.rows(); ++c) {
    const double w = direction[c];
    if (w == 0.0) continue;
    const auto row = x.row(c);
    for (std::size_t t = 0; t < p.size(); ++t) p[t] += w * row[t];
  }
  return p;
}

std::optional<Matrix> envelope(const Matrix& x, std::span<const std::size_t> maxima_times,
                               std::size_t min_extrema, EnvelopeBoundary boundary) {
  Matrix out(x.rows(), x.cols());
  std::vector<double> scratch;
  if (!accumulate_envelope(x, maxima_times, min_extrema, boundary, out, scratch)) {
    return std::nullopt;
  }
  return out;
}

std::optional<Matrix> mean_envelope(const Matrix& x, const DirectionSet& dirs,
                                    std::size_t min_extrema) {
  if (dirs.dim() != x.rows()) {
    throw ValidationError("direction set dimension " + std::to_string(dirs.dim()) +
                          " does not match " + std::to_string(x.rows()) + " channels");
  }
  Matrix sum(x.rows(), x.cols());
  const auto values = x.values();
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) return sum;
  std::vector<double> scratch;
  std::size_t valid = 0;
  for (std::size_t v = 0; v < dirs.size(); ++v) {
    const auto p = project(x, dirs[v]);
    const auto times = indices_of(find_maxima(p));
    if (accumulate_envelope(x, times, min_extrema, EnvelopeBoundary::mirror, sum, scratch)) {
      ++valid;
    }
  }
  if (valid == 0 || 2 * valid < dirs.size()) return std::nullopt;
  sum *= 1.0 / static_cast<double>(valid);
  return sum;
}

std::optional<Matrix> sift(const Matrix& x, const DirectionSet& dirs, const SiftConfig& cfg) {
  Matrix detail = x;
  for (std::size_t iter = 0; iter < cfg.max_sift_iterations; ++iter) {
    auto mean = mean_envelope(detail, dirs, cfg.min_extrema);
    if (!mean) {
      if (iter == 0) return std::nullopt;
      break;
    }
    const double before = squared_norm(detail);
    const double change = squared_norm(*mean);
    detail -= *mean;
    if (before == 0.0 || std::sqrt(change / before) < cfg.sift_tolerance) break;
  }
  return detail;
}

ImfSet decompose(const Matrix& x, double rate_hz, const DirectionSet& dirs,
                 const SiftConfig& cfg) {
  validate(cfg, x.rows());
  if (x.cols() < 4 * cfg.min_extrema) {
    throw ValidationError("signal of " + std::to_string(x.cols()) +
                          " samples is too short to decompose (need " +
                          std::to_string(4 * cfg.min_extrema) + ")");
  }
  ImfSet set;
  set.source_rate_hz = rate_hz;
  set.residue = x;
  while (set.imfs.size() < cfg.max_imfs) {
    bool all_monotone = true;
    for (std::size_t c = 0; c < x.rows() && all_monotone; ++c) {
      all_monotone = is_monotone(set.residue.row(c));
    }
    if (all_monotone) break;
    auto imf = sift(set.residue, dirs, cfg);
    if (!imf) break;
    set.residue -= *imf;
    set.imfs.push_back(std::move(*imf));
  }
  return set;
}

ImfSet decompose(const MultivariateSignal& x, const SiftConfig& cfg, std::uint64_t seed) {
  validate(x);
  validate(cfg, x.num_channels());
  const auto dirs =
      sample_directions(x.num_channels(), resolve_num_directions(cfg, x.num_channels()), seed);
  return decompose(x.data, x.sample_rate_hz, dirs, cfg);
}

Matrix reconstruct(const ImfSet& set) {
  Matrix sum = set.residue;
  for (const auto& imf : set.imfs) sum += imf;
  return sum;
}

}  // namespace mhht
