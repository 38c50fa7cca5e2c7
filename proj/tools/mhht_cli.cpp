// mhht command-line front end. Talks to the toolkit only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mhht/mhht.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerify = 3;

int exit_code(mhht_status status) {
  switch (status) {
    case MHHT_OK:
      return 0;
    case MHHT_ERR_IO:
      return kExitIo;
    case MHHT_ERR_VERIFY:
      return kExitVerify;
    default:
      return kExitValidation;
  }
}

struct Options {
  std::string input;
  std::string output;
  std::string config;
  std::string labels;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_given = false;
  double csv_rate = 0.0;
  unsigned jobs = 0;
  bool json = false;
};

class ConfigHandle {
 public:
  ~ConfigHandle() { mhht_config_free(cfg_); }
  mhht_config* get() const { return cfg_; }
  mhht_config** out() { return &cfg_; }

 private:
  mhht_config* cfg_ = nullptr;
};

mhht_status build_config(const Options& opt, ConfigHandle& cfg) {
  mhht_status status = opt.config.empty() ? mhht_config_create(cfg.out())
                                          : mhht_config_load(opt.config.c_str(), cfg.out());
  if (status != MHHT_OK) return status;
  for (const auto& item : opt.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "mhht: error: --set expects key=value, got '%s'\n", item.c_str());
      return MHHT_ERR_VALIDATION;
    }
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if ((status = mhht_config_set(cfg.get(), key.c_str(), value.c_str())) != MHHT_OK) return status;
  }
  if (opt.seed_given) {
    const auto value = std::to_string(opt.seed);
    if ((status = mhht_config_set(cfg.get(), "seed", value.c_str())) != MHHT_OK) return status;
  }
  if (opt.csv_rate > 0.0) {
    const auto value = std::to_string(opt.csv_rate);
    if ((status = mhht_config_set(cfg.get(), "input.csv_rate_hz", value.c_str())) != MHHT_OK) {
      return status;
    }
  }
  if (!opt.labels.empty()) {
    const auto value = "\"" + opt.labels + "\"";
    if ((status = mhht_config_set(cfg.get(), "labels.file", value.c_str())) != MHHT_OK) {
      return status;
    }
  }
  return MHHT_OK;
}

int finish(mhht_status status, char* report) {
  if (report) {
    std::fputs(report, stdout);
    mhht_string_free(report);
  }
  if (status != MHHT_OK && status != MHHT_ERR_VERIFY) {
    std::fprintf(stderr, "mhht: error: %s\n", mhht_last_error());
  } else if (status == MHHT_ERR_VERIFY) {
    std::fprintf(stderr, "mhht: %s\n", mhht_last_error());
  }
  return exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mhht: multivariate EMD and Hilbert spectral features"};
  app.require_subcommand(1);
  Options opt;

  const auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config, "JSON config file");
    cmd->add_option("--seed", opt.seed, "Seed (overrides the config)")
        ->each([&](const std::string&) { opt.seed_given = true; });
    cmd->add_option("--set", opt.overrides, "Config override key=value (repeatable)");
    cmd->add_option("--jobs", opt.jobs, "Worker threads, 0 = all cores");
  };

  auto* decompose = app.add_subcommand("decompose", "Decompose a signal into multivariate IMFs");
  decompose->add_option("--input", opt.input, "Signal file (.csv or .bin)")->required();
  decompose->add_option("--output", opt.output, "Output directory")->required();
  decompose->add_option("--csv-rate", opt.csv_rate, "Sample rate of CSV input in Hz");
  common(decompose);

  auto* spectrum = app.add_subcommand("spectrum", "Hilbert and marginal spectra per channel");
  spectrum->add_option("--input", opt.input, "Signal file or IMF directory")->required();
  spectrum->add_option("--output", opt.output, "Output directory")->required();
  spectrum->add_option("--csv-rate", opt.csv_rate, "Sample rate of CSV input in Hz");
  common(spectrum);

  auto* features = app.add_subcommand("features", "Build feature blocks for the classifier");
  features->add_option("--input", opt.input, "Trial file or directory of trial files")->required();
  features->add_option("--output", opt.output, "Dataset directory")->required();
  features->add_option("--labels", opt.labels, "CSV with trial,valence,arousal columns");
  features->add_option("--csv-rate", opt.csv_rate, "Sample rate of CSV input in Hz");
  common(features);

  auto* synth = app.add_subcommand("synth", "Generate a multitone signal and score its decomposition");
  synth->add_option("--output", opt.output, "Signal file to write (.csv or .bin)");
  synth->add_flag("--json", opt.json, "Machine-readable report");
  common(synth);

  auto* verify = app.add_subcommand("verify", "Run the synthetic oracle suite");
  verify->add_flag("--json", opt.json, "Machine-readable report");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  ConfigHandle cfg;
  if (const auto status = build_config(opt, cfg); status != MHHT_OK) return finish(status, nullptr);

  char* report = nullptr;
  mhht_status status = MHHT_OK;
  if (*decompose) {
    status = mhht_run_decompose(opt.input.c_str(), cfg.get(), opt.output.c_str(), &report);
  } else if (*spectrum) {
    status = mhht_run_spectrum(opt.input.c_str(), cfg.get(), opt.output.c_str(), &report);
  } else if (*features) {
    status = mhht_run_features(opt.input.c_str(), cfg.get(), opt.output.c_str(), opt.jobs, &report);
  } else if (*synth) {
    status = mhht_run_synth(cfg.get(), opt.output.empty() ? nullptr : opt.output.c_str(),
                            opt.json ? 1 : 0, &report);
  } else if (*verify) {
    status = mhht_run_verify(cfg.get(), opt.json ? 1 : 0, &report);
  }
  return finish(status, report);
}
