#include "fft.hpp"

#include <algorithm>
#include <cstring>
#include <mutex>

#include <fftw3.h>

namespace mhht::fft {
namespace {

// FFTW's planner is not re-entrant; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Buffer {
  explicit Buffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~Buffer() { fftw_free(data); }
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  fftw_complex* data;
};

std::vector<std::complex<double>> transform(std::span<const std::complex<double>> in, int sign) {
  const std::size_t n = in.size();
  if (n == 0) return {};
  Buffer src(n);
  Buffer dst(n);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), src.data, dst.data, sign, FFTW_ESTIMATE);
  }
  std::memcpy(src.data, in.data(), n * sizeof(fftw_complex));
  fftw_execute(plan);
  std::vector<std::complex<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {dst.data[i][0], dst.data[i][1]};
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) {
  return transform(in, FFTW_FORWARD);
}

std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in) {
  return transform(in, FFTW_BACKWARD);
}

}  // namespace mhht::fft
