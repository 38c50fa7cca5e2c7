#include "spline.hpp"

#include "errors.hpp"

namespace mhht {
namespace {

struct Piece {
  double x0, x1, h, y0, y1, m0, m1;

  double at(double t) const noexcept {
    const double a = x1 - t;
    const double b = t - x0;
    return (m0 * a * a * a + m1 * b * b * b) / (6.0 * h) + (y0 / h - m0 * h / 6.0) * a +
           (y1 / h - m1 * h / 6.0) * b;
  }
};

}  // namespace

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> knots) : knots_(std::move(knots)) {
  const std::size_t k = knots_.size();
  if (k < 2) throw ValidationError("spline needs at least 2 knots");
  widths_.resize(k - 1);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    widths_[i] = knots_[i + 1] - knots_[i];
    if (!(widths_[i] > 0.0)) throw ValidationError("spline knots must be strictly increasing");
  }
  // Interior unknowns M_1 .. M_{k-2}; row i: h_{i-1} M_{i-1} + 2(h_{i-1}+h_i) M_i + h_i M_{i+1}.
  if (k > 2) {
    const std::size_t interior = k - 2;
    pivots_.resize(interior);
    upper_.resize(interior);
    for (std::size_t r = 0; r < interior; ++r) {
      const std::size_t i = r + 1;
      const double diag = 2.0 * (widths_[i - 1] + widths_[i]);
      const double lower = widths_[i - 1];
      pivots_[r] = r == 0 ? diag : diag - lower * upper_[r - 1];
      upper_[r] = widths_[i] / pivots_[r];
    }
  }
}

std::vector<double> NaturalCubicSpline::second_derivatives(std::span<const double> values) const {
  const std::size_t k = knots_.size();
  if (values.size() != k) throw ValidationError("spline value count does not match knots");
  std::vector<double> m(k, 0.0);
  if (k <= 2) return m;

  const std::size_t interior = k - 2;
  std::vector<double> forward(interior);
  for (std::size_t r = 0; r < interior; ++r) {
    const std::size_t i = r + 1;
    const double rhs = 6.0 * ((values[i + 1] - values[i]) / widths_[i] -
                              (values[i] - values[i - 1]) / widths_[i - 1]);
    forward[r] = r == 0 ? rhs / pivots_[r]
                        : (rhs - widths_[i - 1] * forward[r - 1]) / pivots_[r];
  }
  for (std::size_t r = interior; r-- > 0;) {
    m[r + 1] = forward[r] - (r + 1 < interior ? upper_[r] * m[r + 2] : 0.0);
  }
  return m;
}

void NaturalCubicSpline::sample_grid(std::span<const double> values, std::span<double> out,
                                     bool accumulate) const {
  const auto m = second_derivatives(values);
  const std::size_t last_piece = knots_.size() - 2;
  std::size_t piece = 0;
  auto make_piece = [&](std::size_t i) {
    return Piece{knots_[i], knots_[i + 1], widths_[i], values[i], values[i + 1], m[i], m[i + 1]};
  };
  Piece current = make_piece(0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto t = static_cast<double>(i);
    while (piece < last_piece && t > knots_[piece + 1]) {
      ++piece;
      current = make_piece(piece);
    }
    const double v = current.at(t);
    if (accumulate) {
      out[i] += v;
    } else {
      out[i] = v;
    }
  }
}

void NaturalCubicSpline::evaluate_on_grid(std::span<const double> values,
                                          std::span<double> out) const {
  sample_grid(values, out, false);
}

void NaturalCubicSpline::accumulate_on_grid(std::span<const double> values,
                                            std::span<double> out) const {
  sample_grid(values, out, true);
}

double NaturalCubicSpline::evaluate(std::span<const double> values, double t) const {
  const auto m = second_derivatives(values);
  std::size_t piece = 0;
  while (piece + 2 < knots_.size() && t > knots_[piece + 1]) ++piece;
  return Piece{knots_[piece], knots_[piece + 1], widths_[piece], values[piece],
               values[piece + 1], m[piece],       m[piece + 1]}
      .at(t);
}

}  // namespace mhht
