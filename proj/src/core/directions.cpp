#include "directions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/erf.hpp>

#include "errors.hpp"

namespace mhht {
namespace {

std::vector<std::uint32_t> first_primes(std::size_t count) {
  std::vector<std::uint32_t> primes;
  for (std::uint32_t candidate = 2; primes.size() < count; ++candidate) {
    bool prime = true;
    for (auto p : primes) {
      if (p * p > candidate) break;
      if (candidate % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(candidate);
  }
  return primes;
}

double inverse_normal_cdf(double u) {
  return std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
}

// Random orthogonal n x n matrix, row-major: Gram-Schmidt on a Gaussian
// matrix.
std::vector<double> random_rotation(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (;;) {
      for (std::size_t j = 0; j < n; ++j) q[i * n + j] = normal(rng);
      for (std::size_t k = 0; k < i; ++k) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += q[i * n + j] * q[k * n + j];
        for (std::size_t j = 0; j < n; ++j) q[i * n + j] -= dot * q[k * n + j];
      }
      double norm = 0.0;
      for (std::size_t j = 0; j < n; ++j) norm += q[i * n + j] * q[i * n + j];
      norm = std::sqrt(norm);
      if (norm > 1e-8) {
        for (std::size_t j = 0; j < n; ++j) q[i * n + j] /= norm;
        break;
      }
    }
  }
  return q;
}

void normalize(std::span<double> v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
}

}  // namespace

DirectionSet::DirectionSet(std::size_t dim, std::vector<double> flat_vectors)
    : dim_(dim), flat_(std::move(flat_vectors)) {
  if (dim_ == 0 || flat_.size() % dim_ != 0) {
    throw ValidationError("direction set size is not a multiple of its dimension");
  }
  for (std::size_t v = 0; v < size(); ++v) {
    double norm = 0.0;
    for (double x : (*this)[v]) norm += x * x;
    if (std::abs(std::sqrt(norm) - 1.0) > 1e-12) {
      throw ValidationError("direction " + std::to_string(v) + " is not a unit vector");
    }
  }
}

double radical_inverse(std::uint64_t i, std::uint32_t base) {
  const double inv_base = 1.0 / base;
  double scale = inv_base;
  double result = 0.0;
  while (i > 0) {
    result += static_cast<double>(i % base) * scale;
    i /= base;
    scale *= inv_base;
  }
  return result;
}

DirectionSet sample_directions(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (n == 0) throw ValidationError("direction dimension must be at least 1");
  if (count < n) {
    throw ValidationError("need at least n=" + std::to_string(n) + " directions, got " +
                          std::to_string(count));
  }
  if (n == 1) {
    if (count > 2) {
      throw ValidationError("a 1-channel signal admits at most 2 distinct directions");
    }
    return DirectionSet(1, count == 1 ? std::vector<double>{1.0} : std::vector<double>{1.0, -1.0});
  }

  std::vector<double> flat(count * n);
  if (n == 2) {
    for (std::size_t v = 0; v < count; ++v) {
      const double angle =
          2.0 * std::numbers::pi * (static_cast<double>(v) + 0.5) / static_cast<double>(count);
      flat[v * 2] = std::cos(angle);
      flat[v * 2 + 1] = std::sin(angle);
    }
  } else {
    const auto primes = first_primes(n - 1);
    for (std::size_t v = 0; v < count; ++v) {
      auto vec = std::span<double>(flat).subspan(v * n, n);
      vec[0] = inverse_normal_cdf((static_cast<double>(v) + 0.5) / static_cast<double>(count));
      for (std::size_t d = 1; d < n; ++d) {
        // Index v+1 keeps the radical inverse away from 0.
        vec[d] = inverse_normal_cdf(radical_inverse(v + 1, primes[d - 1]));
      }
      normalize(vec);
    }
  }

  if (seed != 0) {
    const auto rot = random_rotation(n, seed);
    std::vector<double> rotated(n);
    for (std::size_t v = 0; v < count; ++v) {
      auto vec = std::span<double>(flat).subspan(v * n, n);
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += rot[i * n + j] * vec[j];
        rotated[i] = acc;
      }
      std::copy(rotated.begin(), rotated.end(), vec.begin());
      normalize(vec);
    }
  }
  return DirectionSet(n, std::move(flat));
}

}  // namespace mhht
