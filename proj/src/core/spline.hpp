#pragma once

#include <span>
#include <vector>

namespace mhht {

/// Natural cubic spline (zero second derivative at both end knots) over a
/// fixed set of strictly increasing knots. The tridiagonal factorization
/// depends only on the knots, so one instance interpolates any number of
/// value vectors sharing those knots (every channel of an envelope).
class NaturalCubicSpline {
 public:
  explicit NaturalCubicSpline(std::vector<double> knots);

  std::size_t num_knots() const noexcept { return knots_.size(); }

  std::vector<double> second_derivatives(std::span<const double> values) const;

  // out[i] = S(i) on the integer grid i = 0 .. out.size()-1. Points outside
  // the knot span extend the nearest end polynomial.
  void evaluate_on_grid(std::span<const double> values, std::span<double> out) const;
  // out[i] += S(i)
  void accumulate_on_grid(std::span<const double> values, std::span<double> out) const;

  double evaluate(std::span<const double> values, double t) const;

 private:
  void sample_grid(std::span<const double> values, std::span<double> out, bool accumulate) const;

  std::vector<double> knots_;
  std::vector<double> widths_;     // h_i = x_{i+1} - x_i
  std::vector<double> pivots_;     // Thomas elimination diagonal
  std::vector<double> upper_;      // Thomas modified super-diagonal
};

}  // namespace mhht
