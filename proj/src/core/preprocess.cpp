#include "preprocess.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "errors.hpp"

namespace mhht {
namespace {

// Hamming main-lobe width, in cycles per sample times length.
constexpr double kHammingTransition = 3.3;
constexpr double kLengthMargin = 1.25;

// Mirror index into [0, n) without repeating the edge sample.
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(n)) i = period - i;
  return static_cast<std::size_t>(i);
}

std::vector<double> windowed_sinc(double cutoff_hz, double rate_hz, double transition_hz) {
  auto length = static_cast<std::size_t>(
      std::ceil(kLengthMargin * kHammingTransition * rate_hz / transition_hz));
  if (length % 2 == 0) ++length;
  length = std::max<std::size_t>(length, 3);

  const double fc = cutoff_hz / rate_hz;
  const auto center = static_cast<double>(length - 1) / 2.0;
  std::vector<double> taps(length);
  for (std::size_t k = 0; k < length; ++k) {
    const double m = static_cast<double>(k) - center;
    const double sinc =
        m == 0.0 ? 2.0 * fc
                 : std::sin(2.0 * std::numbers::pi * fc * m) / (std::numbers::pi * m);
    const double window =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                               static_cast<double>(length - 1));
    taps[k] = sinc * window;
  }
  const double gain = std::accumulate(taps.begin(), taps.end(), 0.0);
  for (double& t : taps) t /= gain;
  return taps;
}

}  // namespace

MultivariateSignal common_average_reference(const MultivariateSignal& x) {
  validate(x);
  const std::size_t n = x.num_channels();
  if (n < 2) throw ValidationError("common average reference needs at least 2 channels");
  MultivariateSignal out = x;
  for (std::size_t t = 0; t < x.num_samples(); ++t) {
    double mean = 0.0;
    for (std::size_t c = 0; c < n; ++c) mean += x.data(c, t);
    mean /= static_cast<double>(n);
    for (std::size_t c = 0; c < n; ++c) out.data(c, t) = x.data(c, t) - mean;
  }
  return out;
}

std::vector<double> design_lowpass(double cutoff_hz, double sample_rate_hz) {
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0)) {
    throw ValidationError("low-pass cutoff " + std::to_string(cutoff_hz) +
                          " Hz must lie in (0, Nyquist=" + std::to_string(sample_rate_hz / 2.0) +
                          ")");
  }
  return windowed_sinc(cutoff_hz, sample_rate_hz, 0.4 * cutoff_hz);
}

MultivariateSignal lowpass_filter(const MultivariateSignal& x, double cutoff_hz) {
  validate(x);
  const auto taps = design_lowpass(cutoff_hz, x.sample_rate_hz);
  const auto delay = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const std::size_t T = x.num_samples();

  MultivariateSignal out = x;
  for (std::size_t c = 0; c < x.num_channels(); ++c) {
    const auto in = x.data.row(c);
    auto dst = out.data.row(c);
    for (std::size_t t = 0; t < T; ++t) {
      double acc = 0.0;
      for (std::size_t k = 0; k < taps.size(); ++k) {
        const auto src = static_cast<std::ptrdiff_t>(t) + delay - static_cast<std::ptrdiff_t>(k);
        acc += taps[k] * in[reflect(src, T)];
      }
      dst[t] = acc;
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> rational_approximation(double ratio,
                                                           std::size_t max_denominator) {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw ValidationError("resampling ratio must be positive and finite");
  }
  // Continued-fraction convergents.
  double rest = ratio;
  std::size_t p_prev = 0, q_prev = 1, p = 1, q = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double whole = std::floor(rest);
    const auto a = static_cast<std::size_t>(whole);
    const std::size_t p_next = a * p + p_prev;
    const std::size_t q_next = a * q + q_prev;
    if (q_next > max_denominator) break;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    if (std::abs(static_cast<double>(p) / static_cast<double>(q) - ratio) <= 1e-9 * ratio) {
      const std::size_t g = std::gcd(p, q);
      return {p / g, q / g};
    }
    const double frac = rest - whole;
    if (frac < 1e-15) break;
    rest = 1.0 / frac;
  }
  throw ValidationError("resampling ratio " + std::to_string(ratio) +
                        " is not a rational number with denominator <= " +
                        std::to_string(max_denominator));
}

MultivariateSignal resample(const MultivariateSignal& x, double target_rate_hz) {
  validate(x);
  if (!(target_rate_hz > 0.0)) throw ValidationError("target rate must be positive");
  if (target_rate_hz > x.sample_rate_hz) {
    throw ValidationError("upsampling from " + std::to_string(x.sample_rate_hz) + " Hz to " +
                          std::to_string(target_rate_hz) + " Hz is not supported");
  }
  if (target_rate_hz == x.sample_rate_hz) return x;

  const auto [up, down] = rational_approximation(target_rate_hz / x.sample_rate_hz, 10000);
  if (up == down) return x;

  // Filter designed at the virtual upsampled rate; stopband starts below the
  // output Nyquist.
  const double virtual_rate = x.sample_rate_hz * static_cast<double>(up);
  const double cutoff = 0.4 * target_rate_hz;
  const auto taps = windowed_sinc(cutoff, virtual_rate, 0.4 * cutoff);
  const auto delay = static_cast<std::ptrdiff_t>(taps.size() / 2);

  const std::size_t T = x.num_samples();
  const std::size_t out_len = (T - 1) * up / down + 1;
  const auto P = static_cast<std::ptrdiff_t>(up);

  Matrix data(x.num_channels(), out_len);
  for (std::size_t c = 0; c < x.num_channels(); ++c) {
    const auto in = x.data.row(c);
    auto dst = data.row(c);
    for (std::size_t m = 0; m < out_len; ++m) {
      // Position on the upsampled grid, shifted by the group delay.
      const auto pos = static_cast<std::ptrdiff_t>(m * down) + delay;
      const auto phase = static_cast<std::size_t>(((pos % P) + P) % P);
      double acc = 0.0;
      for (std::size_t k = phase; k < taps.size(); k += up) {
        const std::ptrdiff_t src = (pos - static_cast<std::ptrdiff_t>(k)) / P;
        acc += taps[k] * in[reflect(src, T)];
      }
      dst[m] = acc * static_cast<double>(up);
    }
  }
  return make_signal(std::move(data), target_rate_hz, x.channels);
}

std::vector<Segment> segment(const MultivariateSignal& x, double seconds,
                             std::string_view trial_id) {
  validate(x);
  if (!(seconds > 0.0)) throw ValidationError("segment duration must be positive");
  const double exact = seconds * x.sample_rate_hz;
  const double rounded = std::round(exact);
  if (rounded < 1.0 || std::abs(exact - rounded) > 1e-9 * std::max(1.0, exact)) {
    throw ValidationError("segment of " + std::to_string(seconds) + " s at " +
                          std::to_string(x.sample_rate_hz) +
                          " Hz is not a whole number of samples");
  }
  const auto length = static_cast<std::size_t>(rounded);
  const std::size_t T = x.num_samples();
  if (length > T) {
    throw ValidationError("segment length " + std::to_string(length) +
                          " samples exceeds signal length " + std::to_string(T));
  }

  std::vector<Segment> segments;
  segments.reserve(T / length);
  for (std::size_t s = 0; s < T / length; ++s) {
    Segment seg;
    seg.trial_id = std::string(trial_id);
    seg.index = s;
    seg.start_sample = s * length;
    seg.length_samples = length;
    seg.sample_rate_hz = x.sample_rate_hz;
    seg.data = Matrix(x.num_channels(), length);
    for (std::size_t c = 0; c < x.num_channels(); ++c) {
      const auto src = x.data.row(c).subspan(seg.start_sample, length);
      std::copy(src.begin(), src.end(), seg.data.row(c).begin());
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

}  // namespace mhht
