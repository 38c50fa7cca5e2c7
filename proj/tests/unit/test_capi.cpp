// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "mhht/mhht.h"

namespace {

struct Config {
  mhht_config* ptr = nullptr;
  Config() { REQUIRE(mhht_config_create(&ptr) == MHHT_OK); }
  ~Config() { mhht_config_free(ptr); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  mhht_string_free(s);
  return out;
}

std::filesystem::path scratch(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() /
           ("mhht_capi_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  return p;
}

std::vector<double> tones(std::size_t channels, std::size_t samples) {
  std::vector<double> data(channels * samples);
  for (std::size_t c = 0; c < channels; ++c) {
    for (std::size_t t = 0; t < samples; ++t) {
      const double s = static_cast<double>(t) / 128.0;
      data[c * samples + t] = (1.0 + 0.2 * c) * std::cos(2 * M_PI * 24.0 * s + c) +
                              std::cos(2 * M_PI * 5.0 * s + 0.5 * c);
    }
  }
  return data;
}

}  // namespace

TEST_CASE("version and errors") {
  CHECK(std::string(mhht_version()) == "0.1.0");
  Config cfg;
  CHECK(mhht_config_set(cfg.ptr, "memd.no_such_key", "1") == MHHT_ERR_VALIDATION);
  CHECK(std::string(mhht_last_error()).find("no_such_key") != std::string::npos);
  CHECK(mhht_config_set(nullptr, "seed", "1") == MHHT_ERR_VALIDATION);
  CHECK(mhht_config_load("/nonexistent/cfg.json", nullptr) == MHHT_ERR_VALIDATION);
  mhht_config* missing = nullptr;
  CHECK(mhht_config_load("/nonexistent/cfg.json", &missing) == MHHT_ERR_IO);
  CHECK(missing == nullptr);
}

TEST_CASE("config set and serialize") {
  Config cfg;
  REQUIRE(mhht_config_set(cfg.ptr, "memd.max_imfs", "4") == MHHT_OK);
  REQUIRE(mhht_config_set(cfg.ptr, "seed", "77") == MHHT_OK);
  char* json = nullptr;
  REQUIRE(mhht_config_to_json(cfg.ptr, &json) == MHHT_OK);
  const auto text = take(json);
  CHECK(text.find("\"max_imfs\": 4") != std::string::npos);
  CHECK(text.find("\"seed\": 77") != std::string::npos);

  const auto dir = scratch("cfg");
  std::filesystem::create_directories(dir);
  {
    FILE* f = std::fopen((dir / "c.json").c_str(), "w");
    std::fputs(text.c_str(), f);
    std::fclose(f);
  }
  mhht_config* loaded = nullptr;
  REQUIRE(mhht_config_load((dir / "c.json").c_str(), &loaded) == MHHT_OK);
  char* again = nullptr;
  REQUIRE(mhht_config_to_json(loaded, &again) == MHHT_OK);
  CHECK(take(again) == text);
  mhht_config_free(loaded);
  std::filesystem::remove_all(dir);
}

TEST_CASE("signals and decomposition") {
  const std::size_t n = 3, T = 512;
  const auto data = tones(n, T);
  const char* labels[] = {"Fz", "Cz", "Pz"};
  mhht_signal* sig = nullptr;
  REQUIRE(mhht_signal_create(n, T, 128.0, data.data(), labels, &sig) == MHHT_OK);
  CHECK(mhht_signal_channels(sig) == n);
  CHECK(mhht_signal_samples(sig) == T);
  CHECK(mhht_signal_rate(sig) == 128.0);
  std::vector<double> copy(n * T);
  REQUIRE(mhht_signal_copy_data(sig, copy.data(), copy.size()) == MHHT_OK);
  CHECK(copy == data);
  CHECK(mhht_signal_copy_data(sig, copy.data(), copy.size() - 1) == MHHT_ERR_VALIDATION);

  Config cfg;
  mhht_imfset* set = nullptr;
  REQUIRE(mhht_decompose(sig, cfg.ptr, &set) == MHHT_OK);
  const std::size_t M = mhht_imfset_count(set);
  REQUIRE(M >= 2);
  std::vector<double> sum(n * T, 0.0), part(n * T);
  for (std::size_t j = 0; j <= M; ++j) {
    REQUIRE(mhht_imfset_copy(set, j, part.data(), part.size()) == MHHT_OK);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += part[i];
  }
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    err += (sum[i] - data[i]) * (sum[i] - data[i]);
    norm += data[i] * data[i];
  }
  CHECK(std::sqrt(err / norm) < 1e-9);
  CHECK(mhht_imfset_copy(set, M + 1, part.data(), part.size()) == MHHT_ERR_VALIDATION);

  const auto dir = scratch("sig");
  REQUIRE(mhht_signal_save(sig, (dir / "x.bin").c_str()) == MHHT_OK);
  mhht_signal* back = nullptr;
  REQUIRE(mhht_signal_load((dir / "x.bin").c_str(), 0.0, &back) == MHHT_OK);
  CHECK(mhht_signal_samples(back) == T);
  mhht_signal_free(back);
  CHECK(mhht_signal_load((dir / "absent.bin").c_str(), 0.0, &back) == MHHT_ERR_IO);

  mhht_imfset_free(set);
  mhht_signal_free(sig);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bad signal input") {
  mhht_signal* sig = nullptr;
  const double nan[] = {1.0, NAN, 2.0, 3.0};
  CHECK(mhht_signal_create(1, 4, 128.0, nan, nullptr, &sig) == MHHT_ERR_VALIDATION);
  CHECK(std::string(mhht_last_error()).find("finite") != std::string::npos);
  CHECK(mhht_signal_create(1, 4, 128.0, nullptr, nullptr, &sig) == MHHT_ERR_VALIDATION);
}

TEST_CASE("commands") {
  Config cfg;
  const auto dir = scratch("cmd");
  char* report = nullptr;
  REQUIRE(mhht_config_set(cfg.ptr, "synth.channels", "4") == MHHT_OK);
  REQUIRE(mhht_run_synth(cfg.ptr, (dir / "s.csv").c_str(), 1, &report) == MHHT_OK);
  CHECK(take(report).find("\"tones\"") != std::string::npos);

  REQUIRE(mhht_run_decompose((dir / "s.csv").c_str(), cfg.ptr, (dir / "imfs").c_str(), &report) == MHHT_OK);
  take(report);
  CHECK(std::filesystem::exists(dir / "imfs" / "manifest.json"));
  REQUIRE(mhht_run_spectrum((dir / "imfs").c_str(), cfg.ptr, (dir / "spec").c_str(), &report) == MHHT_OK);
  take(report);
  CHECK(std::filesystem::exists(dir / "spec" / "channel_04_marginal.csv"));
  REQUIRE(mhht_run_features((dir / "s.csv").c_str(), cfg.ptr, (dir / "ds").c_str(), 2, &report) == MHHT_OK);
  CHECK(take(report).find("[4,192,3]") != std::string::npos);

  CHECK(mhht_run_verify(cfg.ptr, 1, &report) == MHHT_OK);
  CHECK(take(report).find("\"passed\": true") != std::string::npos);
  REQUIRE(mhht_config_set(cfg.ptr, "verify.analytic_tol", "0") == MHHT_OK);
  CHECK(mhht_run_verify(cfg.ptr, 0, &report) == MHHT_ERR_VERIFY);
  CHECK(take(report).find("FAIL") != std::string::npos);

  CHECK(mhht_run_decompose((dir / "nope.csv").c_str(), cfg.ptr, (dir / "x").c_str(), &report) == MHHT_ERR_IO);
  CHECK(report == nullptr);
  CHECK(std::string(mhht_last_error()).find("nope.csv") != std::string::npos);
  std::filesystem::remove_all(dir);
}
