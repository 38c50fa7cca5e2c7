#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "signal.hpp"

namespace mhht {

/// A fixed-length window of one trial.
struct Segment {
  std::string trial_id;
  std::size_t index = 0;         // position within the trial
  std::size_t start_sample = 0;
  std::size_t length_samples = 0;
  double sample_rate_hz = 0.0;
  Matrix data;                   // n x length_samples
};

// Subtracts the across-channel mean at every sample. Needs n >= 2.
MultivariateSignal common_average_reference(const MultivariateSignal& x);

// Hamming-windowed sinc low-pass, odd length, unit DC gain. The length is
// chosen so the transition from 0.8*cutoff to 1.2*cutoff fits inside the
// Hamming main lobe (>= 40 dB stopband, < 0.5 dB passband ripple).
std::vector<double> design_lowpass(double cutoff_hz, double sample_rate_hz);

// Linear-phase FIR applied per channel, shifted by the group delay so the
// output is aligned with the input. Edges are reflection-padded; the output
// has exactly the input length.
MultivariateSignal lowpass_filter(const MultivariateSignal& x, double cutoff_hz);

// Rational-ratio downsampling (polyphase form of upsample/filter/decimate).
// target == source returns the input unchanged.
MultivariateSignal resample(const MultivariateSignal& x, double target_rate_hz);

// Non-overlapping consecutive windows of `seconds`; a trailing partial window
// is dropped.
std::vector<Segment> segment(const MultivariateSignal& x, double seconds,
                             std::string_view trial_id = {});

// Reduced p/q with q <= max_denominator approximating `ratio` to 1e-9
// relative, or throws ValidationError.
std::pair<std::size_t, std::size_t> rational_approximation(double ratio,
                                                           std::size_t max_denominator);

}  // namespace mhht
