#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mhht {

/// V unit vectors in R^n used to project a multivariate signal.
class DirectionSet {
 public:
  DirectionSet(std::size_t dim, std::vector<double> flat_vectors);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : flat_.size() / dim_; }
  std::span<const double> operator[](std::size_t v) const noexcept {
    return {flat_.data() + v * dim_, dim_};
  }

 private:
  std::size_t dim_;
  std::vector<double> flat_;
};

// Quasi-uniform directions on the (n-1)-sphere from a Hammersley point set.
//  n = 1: {+1} or {+1, -1}; no other distinct unit scalars exist.
//  n = 2: angles 2*pi*(v + 1/2)/V, the first Hammersley coordinate.
//  n >= 3: Hammersley points in [0,1)^n pushed through the inverse normal CDF
//          and normalized, which is uniform on the sphere in distribution.
// A nonzero seed applies one random orthogonal rotation to the whole set.
DirectionSet sample_directions(std::size_t n, std::size_t count, std::uint64_t seed);

// Van der Corput radical inverse of i in the given base.
double radical_inverse(std::uint64_t i, std::uint32_t base);

}  // namespace mhht
