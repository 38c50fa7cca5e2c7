// Acceptance suite: one PASS/FAIL line per primary criterion. Values are
// recomputed with the test-side oracles wherever the toolkit could otherwise
// grade its own homework.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "binary_io.hpp"
#include "hht.hpp"
#include "memd.hpp"
#include "signal.hpp"
#include "synth.hpp"

#ifndef MHHT_CLI_PATH
#error "MHHT_CLI_PATH must point at the mhht executable"
#endif

using namespace mhht;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& criterion) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = criterion();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.passed) ++failures;
  std::printf("%s  %-26s %s (%.1f s)\n", out.passed ? "PASS" : "FAIL", name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

std::vector<double> row_vec(const Matrix& m, std::size_t r) {
  return {m.row(r).begin(), m.row(r).end()};
}

Matrix random_signal(std::size_t n, std::size_t T, std::uint64_t seed) {
  // Noise plus a few random tones and a drift, so decompositions are deep.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(0.5, 50.0), phase(0.0, 2.0 * oracle::kPi), amp(0.2, 2.0);
  Matrix x(n, T);
  const auto noise = oracle::gaussian_series(n * T, seed ^ 0x9e3779b97f4a7c15ULL);
  std::copy(noise.begin(), noise.end(), x.values().begin());
  for (int k = 0; k < 3; ++k) {
    const double f = freq(rng);
    for (std::size_t c = 0; c < n; ++c) {
      const auto wave = oracle::cosine(T, f, 128.0, amp(rng), phase(rng));
      for (std::size_t t = 0; t < T; ++t) x(c, t) += wave[t];
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t t = 0; t < T; ++t) x(c, t) += 0.002 * static_cast<double>(t) * (1.0 + c % 3);
  }
  return x;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MHHT_CLI_PATH) + " " + args + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome reconstruction() {
  const std::size_t dims[] = {1, 2, 8, 32};
  const std::size_t lengths[] = {256, 1024};
  double worst = 0.0;
  std::size_t deepest = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < 50; ++i) {
    const std::size_t n = dims[i % 4];
    const std::size_t T = lengths[(i / 4) % 2];
    const auto x = make_signal(random_signal(n, T, 1000 + i), 128.0);
    const auto set = decompose(x, SiftConfig{}, i);
    Matrix sum = set.residue;
    for (const auto& imf : set.imfs) sum += imf;
    worst = std::max(worst, frobenius_norm(sum - x.data) / frobenius_norm(x.data));
    deepest = std::max(deepest, set.size());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst < 1e-9 && secs < 300.0,
          fmt("50 signals, max rel error %.2e (< 1e-9), up to %.0f IMFs, %.1f s (< 300 s)", worst,
              static_cast<double>(deepest), secs)};
}

Outcome scale_alignment() {
  const std::size_t n = 32, T = 1024;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> amp(0.5, 1.5);
  std::vector<ToneSpec> tones{{4.0, {}, 0.3}, {32.0, {}, 1.1}};
  for (auto& tone : tones)
    for (std::size_t c = 0; c < n; ++c) tone.amplitudes.push_back(amp(rng));
  const auto x = synth_multitone(n, 128.0, 8.0, tones, 0.0, 0);
  const auto set = decompose(x, SiftConfig{}, 0);

  const std::size_t lo = T / 10, hi = T - T / 10;
  bool aligned = true;
  double worst = 1.0;
  std::string matched;
  for (const auto& tone : tones) {
    const auto truth = tone_component(tone, n, T, 128.0);
    std::vector<std::size_t> best(n, 0);
    std::vector<double> best_r(n, -2.0);
    for (std::size_t j = 0; j < set.size(); ++j) {
      for (std::size_t c = 0; c < n; ++c) {
        const double r = oracle::correlation(row_vec(set.imfs[j], c), row_vec(truth, c), lo, hi);
        if (r > best_r[c]) {
          best_r[c] = r;
          best[c] = j;
        }
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      aligned = aligned && best[c] == best[0];
      worst = std::min(worst, best_r[c]);
    }
    matched += fmt(" %.0f Hz->IMF%.0f", tone.freq_hz, static_cast<double>(best[0] + 1));
  }
  return {aligned && worst > 0.95,
          "32 ch," + matched + (aligned ? ", shared by all channels" : ", NOT shared") +
              fmt(", min corr %.4f (> 0.95)", worst)};
}

Outcome analytic_oracle() {
  double imag_err = 0.0, real_err = 0.0;
  std::size_t longest = 0;
  for (std::size_t i = 0; i < 20; ++i) {
    const std::size_t T = i == 19 ? 1024 : 64 + (i * 97) % 961;  // odd and even lengths
    longest = std::max(longest, T);
    const auto x = oracle::gaussian_series(T, 500 + i);
    const auto z = analytic_signal(x);
    const auto h = oracle::pv_hilbert(x);
    for (std::size_t t = 0; t < T; ++t) {
      imag_err = std::max(imag_err, std::abs(z[t].imag() - h[t]));
      real_err = std::max(real_err, std::abs(z[t].real() - x[t]));
    }
  }
  return {imag_err < 1e-6 && real_err < 1e-12,
          fmt("20 series, T <= %.0f: |Im - PV| %.2e (< 1e-6), |Re - x| %.2e (< 1e-12)",
              static_cast<double>(longest), imag_err, real_err)};
}

Outcome inst_frequency() {
  const double rate = 128.0;
  const std::size_t T = 1024, lo = T / 10, hi = T - T / 10;
  double tone_err = 0.0;
  for (double f : {2.0, 8.0, 32.0, 45.0}) {
    const auto track = analyze_component(oracle::cosine(T, f, rate, 1.0, 0.7), rate);
    for (std::size_t t = lo; t < hi; ++t) {
      tone_err = std::max(tone_err, std::abs(track.inst_freq_hz[t] - f) / f);
    }
  }
  const std::size_t C = 512;  // 4 s
  std::vector<double> chirp(C);
  for (std::size_t i = 0; i < C; ++i) {
    const double t = static_cast<double>(i) / rate;
    chirp[i] = std::cos(2.0 * oracle::kPi * (4.0 * t + 1.5 * t * t));
  }
  const auto track = analyze_component(chirp, rate);
  double chirp_err = 0.0;
  for (std::size_t i = C / 10; i < C - C / 10; ++i) {
    const double expect = 4.0 + 3.0 * static_cast<double>(i) / rate;
    chirp_err = std::max(chirp_err, std::abs(track.inst_freq_hz[i] - expect) / expect);
  }
  return {tone_err < 0.01 && chirp_err < 0.05,
          fmt("tones 2/8/32/45 Hz max rel error %.2e (< 0.01), chirp 4->16 Hz %.2e (< 0.05)",
              tone_err, chirp_err)};
}

Outcome mhs() {
  const double A = 1.7, f0 = 8.0, rate = 128.0;
  const std::size_t T = 1024;
  const FrequencyAxis axis;  // [0, 64) Hz, 192 bins
  const std::vector<AnalyticTrack> tone{analyze_component(oracle::cosine(T, f0, rate, A, 0.2), rate)};
  const auto marginal = marginal_spectrum(hilbert_spectrum(tone, axis));
  const auto peak = static_cast<std::size_t>(
      std::max_element(marginal.power.begin(), marginal.power.end()) - marginal.power.begin());
  // 1/3 Hz bins: 8 Hz sits at the left edge of bin 8 * 3 = 24.
  const std::size_t expected_bin = static_cast<std::size_t>(f0 * 3.0);
  const double amp_err = std::abs(marginal.power[peak] - A) / A;

  // Bookkeeping on real IMF tracks of a random signal, restricted to a frame
  // where every track is in range.
  const auto x = make_signal(random_signal(1, 1024, 77), rate);
  const auto set = decompose(x, SiftConfig{}, 0);
  std::vector<AnalyticTrack> tracks;
  for (const auto& imf : set.imfs) tracks.push_back(analyze_component(imf.row(0), rate));
  const auto h = hilbert_spectrum(tracks, FrequencyAxis{0.0, 1e6, 192});
  double deposited = 0.0, amplitude = 0.0;
  for (double v : h.energy.values()) deposited += v;
  for (const auto& tr : tracks)
    for (double a : tr.amplitude) amplitude += a;
  const double book_err = std::abs(deposited - amplitude) / amplitude;

  return {peak == expected_bin && amp_err < 0.05 && h.discarded == 0 && book_err <= 1e-12,
          fmt("peak bin %.0f (expected %.0f), |h - A|/A %.2e (< 0.05), ",
              static_cast<double>(peak), static_cast<double>(expected_bin), amp_err) +
              fmt("sum H vs sum a rel diff %.1e over %.0f tracks", book_err,
                  static_cast<double>(tracks.size()))};
}

Outcome selection() {
  const std::size_t n = 4, T = 1024;
  std::vector<ToneSpec> tones{{2.0, {1.0, 1.3, 0.8, 1.1}, 0.4}, {16.0, {0.9, 0.6, 1.2, 1.0}, 1.9}};
  const auto x = synth_multitone(n, 128.0, 8.0, tones, 0.0, 0);
  const auto set = decompose(x, SiftConfig{}, 0);
  const auto selected = select_imfs(set, 4.0, 3);
  bool is_16 = selected.size() == 1;
  if (is_16) {
    for (std::size_t c = 0; c < n; ++c) {
      is_16 = is_16 && oracle::dft_peak_hz(row_vec(set.imfs[selected[0]], c), 128.0) == 16.0;
    }
  }
  return {is_16, fmt("%.0f IMFs, %.0f selected", static_cast<double>(set.size()),
                     static_cast<double>(selected.size())) +
                     (is_16 ? ", the 16 Hz mode (DFT peak in every channel)" : ", wrong selection")};
}

Outcome geometry(const oracle::TempDir& dir) {
  const int code = run_cli("features --input " + (dir / "trial.bin").string() + " --output " +
                           (dir / "run1").string() + " --seed 7");
  if (code != 0) return {false, fmt("mhht features exited %.0f", code)};
  const auto manifest = io::read_json(dir / "run1" / "manifest.json");
  std::size_t files = 0;
  bool sizes_ok = true;
  for (const auto& e : std::filesystem::directory_iterator(dir / "run1" / "blocks")) {
    ++files;
    sizes_ok = sizes_ok && std::filesystem::file_size(e.path()) == 32u * 192u * 3u * 4u;
  }
  const bool ok = manifest.at("count") == 20 && files == 20 && sizes_ok &&
                  manifest.at("shape") == nlohmann::json({32, 192, 3});
  return {ok, fmt("%.0f blocks on disk, manifest count %.0f, shape ", static_cast<double>(files),
                  manifest.at("count").get<double>()) +
                  manifest.at("shape").dump()};
}

Outcome determinism(const oracle::TempDir& dir) {
  const int code = run_cli("features --input " + (dir / "trial.bin").string() + " --output " +
                           (dir / "run2").string() + " --seed 7");
  if (code != 0) return {false, fmt("mhht features exited %.0f", code)};
  const bool same = oracle::same_tree(dir / "run1", dir / "run2");
  return {same, same ? "two runs, byte-identical output directories" : "output directories differ"};
}

}  // namespace

int main() {
  std::printf("acceptance: primary criteria\n");
  report("reconstruction_identity", reconstruction);
  report("scale_alignment", scale_alignment);
  report("analytic_signal_oracle", analytic_oracle);
  report("instantaneous_frequency", inst_frequency);
  report("mhs_correctness", mhs);
  report("imf_selection", selection);

  oracle::TempDir dir("acceptance");
  {
    // 32 channels, 60 s at 128 Hz of EEG-like content.
    std::vector<ToneSpec> tones;
    std::mt19937_64 rng(60);
    std::uniform_real_distribution<double> amp(0.2, 1.5);
    for (double f : {2.5, 6.0, 10.0, 18.0, 30.0}) {
      ToneSpec tone{f, {}, f / 7.0};
      for (int c = 0; c < 32; ++c) tone.amplitudes.push_back(amp(rng));
      tones.push_back(tone);
    }
    save_signal(synth_multitone(32, 128.0, 60.0, tones, 0.3, 60), dir / "trial.bin");
  }
  report("pipeline_geometry", [&] { return geometry(dir); });
  report("determinism", [&] { return determinism(dir); });

  std::printf("%s: %d of 8 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
