#include "verify.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "hht.hpp"
#include "memd.hpp"

namespace mhht {
namespace {

Check make_check(std::string name, double value, const char* comparison, double threshold,
                 std::string detail = {}) {
  Check check{std::move(name), value, threshold, comparison, false, std::move(detail)};
  const std::string op = comparison;
  if (op == "<") {
    check.passed = value < threshold;
  } else if (op == "<=") {
    check.passed = value <= threshold;
  } else {
    check.passed = value > threshold;
  }
  return check;
}

std::vector<double> random_series(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> x(n);
  for (double& v : x) v = normal(rng);
  return x;
}

double central_max_rel_error(const std::vector<double>& est, const std::vector<double>& truth) {
  const std::size_t begin = est.size() / 10;
  double worst = 0.0;
  for (std::size_t t = begin; t < est.size() - begin; ++t) {
    worst = std::max(worst, std::abs(est[t] - truth[t]) / std::abs(truth[t]));
  }
  return worst;
}

Check check_reconstruction(const PipelineConfig& cfg, std::mt19937_64& rng) {
  const std::size_t dims[] = {1, 2, 8};
  double worst = 0.0;
  for (std::size_t i = 0; i < cfg.verify.random_signals; ++i) {
    const std::size_t n = dims[i % 3];
    Matrix data(n, 256);
    std::normal_distribution<double> normal;
    for (double& v : data.values()) v = normal(rng);
    const auto signal = make_signal(std::move(data), 128.0);
    const auto set = decompose(signal, cfg.memd, cfg.seed);
    auto diff = reconstruct(set);
    diff -= signal.data;
    worst = std::max(worst, frobenius_norm(diff) / frobenius_norm(signal.data));
  }
  return make_check("reconstruction_max_rel_error", worst, "<", cfg.verify.reconstruction_tol,
                    std::to_string(cfg.verify.random_signals) + " random signals");
}

void check_alignment(const PipelineConfig& cfg, std::vector<Check>& out) {
  SynthConfig synth;
  synth.channels = cfg.verify.alignment_channels;
  synth.tones = {{4.0, 0.3, 0.5, 1.5}, {32.0, 1.1, 0.5, 1.5}};
  const auto tones = make_tones(synth, cfg.seed + 1);
  const auto signal = synth_multitone(synth.channels, synth.rate_hz, synth.seconds, tones, 0.0, 0);
  const auto set = decompose(signal, cfg.memd, cfg.seed);
  const auto report = mode_separation_score(set, tones);
  double misaligned = 0.0;
  double worst = report.tones.empty() ? 0.0 : 1.0;
  for (const auto& m : report.tones) {
    for (auto best : m.per_channel_best) misaligned += best != m.matched_imf ? 1.0 : 0.0;
    worst = std::min(worst, m.min_correlation);
  }
  if (report.tones.size() == 2 && report.tones[0].matched_imf == report.tones[1].matched_imf) {
    misaligned += 1.0;
  }
  out.push_back(make_check("scale_alignment_misaligned_channels", misaligned, "<=", 0.0,
                           std::to_string(synth.channels) + " channels, 4 Hz + 32 Hz"));
  out.push_back(make_check("scale_alignment_min_correlation", worst, ">",
                           cfg.verify.min_correlation, "central 80% of samples"));
}

void check_analytic(const PipelineConfig& cfg, std::mt19937_64& rng, std::vector<Check>& out) {
  double worst_oracle = 0.0;
  double worst_real = 0.0;
  const std::size_t lengths[] = {128, 255, 512, 1000, 64};
  for (std::size_t len : lengths) {
    const auto x = random_series(len, rng);
    const auto z = analytic_signal(x);
    const auto h = hilbert_transform_direct(x);
    for (std::size_t t = 0; t < len; ++t) {
      worst_oracle = std::max(worst_oracle, std::abs(z[t].imag() - h[t]));
      worst_real = std::max(worst_real, std::abs(z[t].real() - x[t]));
    }
  }
  out.push_back(make_check("analytic_vs_pv_oracle_max_abs_error", worst_oracle, "<",
                           cfg.verify.analytic_tol, "5 random series, T <= 1000"));
  out.push_back(make_check("analytic_real_part_max_abs_error", worst_real, "<",
                           cfg.verify.real_part_tol));
}

void check_frequency(const PipelineConfig& cfg, std::vector<Check>& out) {
  const double rate = 128.0;
  double worst_tone = 0.0;
  for (double f : {2.0, 8.0, 32.0, 45.0}) {
    std::vector<double> x(1024);
    for (std::size_t t = 0; t < x.size(); ++t) {
      x[t] = std::cos(2.0 * std::numbers::pi * f * static_cast<double>(t) / rate);
    }
    const auto track = analyze_component(x, rate);
    worst_tone = std::max(worst_tone,
                          central_max_rel_error(track.inst_freq_hz,
                                                std::vector<double>(x.size(), f)));
  }
  out.push_back(make_check("tone_inst_freq_max_rel_error", worst_tone, "<",
                           cfg.verify.tone_freq_tol, "2, 8, 32, 45 Hz over central 80%"));

  // 4 -> 16 Hz over 4 s: f(t) = 4 + 3t.
  std::vector<double> chirp(512), law(512);
  for (std::size_t i = 0; i < chirp.size(); ++i) {
    const double t = static_cast<double>(i) / rate;
    chirp[i] = std::cos(2.0 * std::numbers::pi * (4.0 * t + 1.5 * t * t));
    law[i] = 4.0 + 3.0 * t;
  }
  const auto track = analyze_component(chirp, rate);
  out.push_back(make_check("chirp_inst_freq_max_rel_error",
                           central_max_rel_error(track.inst_freq_hz, law), "<",
                           cfg.verify.chirp_freq_tol, "linear chirp 4 -> 16 Hz"));
}

void check_spectrum(const PipelineConfig& cfg, std::vector<Check>& out) {
  const double rate = 128.0;
  const double amplitude = 2.5;
  std::vector<double> x(1024), y(1024);
  for (std::size_t t = 0; t < x.size(); ++t) {
    x[t] = amplitude * std::cos(2.0 * std::numbers::pi * 8.0 * static_cast<double>(t) / rate);
    y[t] = std::cos(2.0 * std::numbers::pi * 20.0 * static_cast<double>(t) / rate);
  }
  const FrequencyAxis axis = cfg.spectrum;
  const std::vector<AnalyticTrack> tracks{analyze_component(x, rate)};
  const auto mhs = marginal_spectrum(hilbert_spectrum(tracks, axis));
  std::size_t peak = 0;
  for (std::size_t w = 1; w < mhs.power.size(); ++w) {
    if (mhs.power[w] > mhs.power[peak]) peak = w;
  }
  const auto expected_bin = axis.bin_of(8.0);
  const double peak_error = std::abs(mhs.power[peak] - amplitude) / amplitude;
  out.push_back(make_check("mhs_peak_amplitude_rel_error",
                           expected_bin && *expected_bin == peak ? peak_error : 1.0, "<",
                           cfg.verify.mhs_amplitude_tol,
                           "8 Hz tone, peak bin " + std::to_string(peak)));

  const std::vector<AnalyticTrack> pair{analyze_component(x, rate), analyze_component(y, rate)};
  const auto h = hilbert_spectrum(pair, axis);
  double deposited = 0.0;
  for (double v : h.energy.values()) deposited += v;
  double amplitudes = 0.0;
  for (const auto& track : pair) {
    for (std::size_t t = 0; t < track.size(); ++t) {
      if (axis.bin_of(track.inst_freq_hz[t])) amplitudes += track.amplitude[t];
    }
  }
  out.push_back(make_check("hilbert_energy_bookkeeping_rel_error",
                           std::abs(deposited - amplitudes) / amplitudes, "<",
                           cfg.verify.bookkeeping_tol));
}

Check check_selection(const PipelineConfig& cfg) {
  SynthConfig synth;
  synth.channels = 2;
  synth.tones = {{2.0, 0.2, 1.0, 1.0}, {16.0, 0.7, 1.0, 1.0}};
  const auto tones = make_tones(synth, 0);
  const auto signal = synth_multitone(2, synth.rate_hz, synth.seconds, tones, 0.0, 0);
  const auto set = decompose(signal, cfg.memd, cfg.seed);
  const auto selected = select_imfs(set, 4.0, cfg.selection.max_selected);
  const auto report = mode_separation_score(set, tones);
  const bool exact = selected.size() == 1 && report.tones.size() == 2 &&
                     selected.front() == report.tones[1].matched_imf;
  return make_check("imf_selection_exact", exact ? 1.0 : 0.0, ">", 0.5,
                    "2 Hz + 16 Hz, threshold 4 Hz, " + std::to_string(selected.size()) +
                        " selected");
}

}  // namespace

std::vector<double> hilbert_transform_direct(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> kernel(n, 0.0);
  const auto N = static_cast<double>(n);
  for (std::size_t m = 1; m < n; ++m) {
    const double angle = std::numbers::pi * static_cast<double>(m) / N;
    const double sign = m % 2 == 0 ? 1.0 : -1.0;  // (-1)^m
    if (n % 2 == 0) {
      kernel[m] = (1.0 - sign) / N * std::cos(angle) / std::sin(angle);
    } else {
      kernel[m] = (std::cos(angle) - sign) / (N * std::sin(angle));
    }
  }
  std::vector<double> h(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t s = 0; s < n; ++s) acc += kernel[(t + n - s) % n] * x[s];
    h[t] = acc;
  }
  return h;
}

std::vector<ToneSpec> make_tones(const SynthConfig& synth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ToneSpec> tones;
  for (const auto& t : synth.tones) {
    std::uniform_real_distribution<double> amp(t.amplitude_lo, t.amplitude_hi);
    ToneSpec tone{t.freq_hz, {}, t.phase};
    for (std::size_t c = 0; c < synth.channels; ++c) {
      tone.amplitudes.push_back(t.amplitude_lo == t.amplitude_hi ? t.amplitude_lo : amp(rng));
    }
    tones.push_back(std::move(tone));
  }
  return tones;
}

bool VerifyReport::passed() const noexcept {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

VerifyReport run_verification(const PipelineConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  VerifyReport report;
  report.checks.push_back(check_reconstruction(cfg, rng));
  check_alignment(cfg, report.checks);
  check_analytic(cfg, rng, report.checks);
  check_frequency(cfg, report.checks);
  check_spectrum(cfg, report.checks);
  report.checks.push_back(check_selection(cfg));
  return report;
}

nlohmann::json to_json(const VerifyReport& report) {
  auto checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"comparison", c.comparison},
                      {"threshold", c.threshold},
                      {"passed", c.passed},
                      {"detail", c.detail}});
  }
  return {{"passed", report.passed()}, {"checks", checks}};
}

std::string to_table(const VerifyReport& report) {
  std::string out;
  char line[256];
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof(line), "%-4s  %-40s %12.4g %-2s %-10.4g %s\n",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value, c.comparison.c_str(),
                  c.threshold, c.detail.c_str());
    out += line;
  }
  out += report.passed() ? "verification passed\n" : "verification FAILED\n";
  return out;
}

}  // namespace mhht
