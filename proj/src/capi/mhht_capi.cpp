#include "mhht/mhht.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "memd.hpp"
#include "pipeline.hpp"
#include "signal.hpp"
#include "verify.hpp"

struct mhht_config {
  mhht::PipelineConfig value;
};

struct mhht_signal {
  mhht::MultivariateSignal value;
};

struct mhht_imfset {
  mhht::ImfSet value;
};

namespace {

thread_local std::string last_error;

template <typename Fn>
mhht_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return MHHT_OK;
  } catch (const mhht::ValidationError& e) {
    last_error = e.what();
    return MHHT_ERR_VALIDATION;
  } catch (const mhht::IoError& e) {
    last_error = e.what();
    return MHHT_ERR_IO;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MHHT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MHHT_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return MHHT_ERR_INTERNAL;
  }
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw mhht::ValidationError(std::string(what) + " must not be null");
}

void emit(char** report, const std::string& text) {
  if (report) *report = duplicate(text);
}

}  // namespace

extern "C" {

const char* mhht_version(void) { return "0.1.0"; }

const char* mhht_last_error(void) { return last_error.c_str(); }

void mhht_string_free(char* s) { std::free(s); }

mhht_status mhht_config_create(mhht_config** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    require(out, "out");
    *out = new mhht_config{};
  });
}

mhht_status mhht_config_load(const char* path, mhht_config** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new mhht_config{mhht::load_config(path)};
  });
}

mhht_status mhht_config_set(mhht_config* cfg, const char* key, const char* json_value) {
  return guarded([&] {
    require(cfg, "cfg");
    require(key, "key");
    require(json_value, "value");
    mhht::set_config_value(cfg->value, key, json_value);
  });
}

mhht_status mhht_config_to_json(const mhht_config* cfg, char** out_json) {
  if (out_json) *out_json = nullptr;
  return guarded([&] {
    require(cfg, "cfg");
    require(out_json, "out_json");
    *out_json = duplicate(mhht::to_json(cfg->value).dump(2));
  });
}

void mhht_config_free(mhht_config* cfg) { delete cfg; }

mhht_status mhht_signal_create(size_t channels, size_t samples, double rate_hz,
                               const double* data, const char* const* labels,
                               mhht_signal** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    mhht::Matrix m(channels, samples);
    std::copy(data, data + channels * samples, m.values().begin());
    std::vector<std::string> names;
    if (labels) {
      for (size_t c = 0; c < channels; ++c) names.emplace_back(labels[c] ? labels[c] : "");
    }
    *out = new mhht_signal{mhht::make_signal(std::move(m), rate_hz, std::move(names))};
  });
}

mhht_status mhht_signal_load(const char* path, double csv_rate_hz, mhht_signal** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new mhht_signal{mhht::load_signal(path, csv_rate_hz)};
  });
}

mhht_status mhht_signal_save(const mhht_signal* signal, const char* path) {
  return guarded([&] {
    require(signal, "signal");
    require(path, "path");
    mhht::save_signal(signal->value, path);
  });
}

size_t mhht_signal_channels(const mhht_signal* signal) {
  return signal ? signal->value.num_channels() : 0;
}

size_t mhht_signal_samples(const mhht_signal* signal) {
  return signal ? signal->value.num_samples() : 0;
}

double mhht_signal_rate(const mhht_signal* signal) {
  return signal ? signal->value.sample_rate_hz : 0.0;
}

mhht_status mhht_signal_copy_data(const mhht_signal* signal, double* out, size_t count) {
  return guarded([&] {
    require(signal, "signal");
    require(out, "out");
    const auto values = signal->value.data.values();
    if (count < values.size()) throw mhht::ValidationError("output buffer too small");
    std::copy(values.begin(), values.end(), out);
  });
}

void mhht_signal_free(mhht_signal* signal) { delete signal; }

mhht_status mhht_decompose(const mhht_signal* signal, const mhht_config* cfg, mhht_imfset** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    require(signal, "signal");
    require(cfg, "cfg");
    require(out, "out");
    *out = new mhht_imfset{mhht::decompose(signal->value, cfg->value.memd, cfg->value.seed)};
  });
}

size_t mhht_imfset_count(const mhht_imfset* set) { return set ? set->value.size() : 0; }

size_t mhht_imfset_channels(const mhht_imfset* set) {
  return set ? set->value.num_channels() : 0;
}

size_t mhht_imfset_samples(const mhht_imfset* set) { return set ? set->value.num_samples() : 0; }

mhht_status mhht_imfset_copy(const mhht_imfset* set, size_t index, double* out, size_t count) {
  return guarded([&] {
    require(set, "set");
    require(out, "out");
    if (index > set->value.size()) throw mhht::ValidationError("IMF index out of range");
    const auto& m = index == set->value.size() ? set->value.residue : set->value.imfs[index];
    if (count < m.size()) throw mhht::ValidationError("output buffer too small");
    std::copy(m.values().begin(), m.values().end(), out);
  });
}

void mhht_imfset_free(mhht_imfset* set) { delete set; }

mhht_status mhht_run_decompose(const char* input, const mhht_config* cfg, const char* output_dir,
                               char** report) {
  if (report) *report = nullptr;
  return guarded([&] {
    require(input, "input");
    require(cfg, "cfg");
    require(output_dir, "output_dir");
    const auto set = mhht::run_decompose(input, cfg->value, output_dir);
    emit(report, "decomposed into " + std::to_string(set.size()) + " IMFs plus residue (" +
                     std::to_string(set.num_channels()) + " channels x " +
                     std::to_string(set.num_samples()) + " samples)\n");
  });
}

mhht_status mhht_run_spectrum(const char* input, const mhht_config* cfg, const char* output_dir,
                              char** report) {
  if (report) *report = nullptr;
  return guarded([&] {
    require(input, "input");
    require(cfg, "cfg");
    require(output_dir, "output_dir");
    const auto manifest = mhht::run_spectrum(input, cfg->value, output_dir);
    emit(report, "wrote spectra for " + std::to_string(manifest["channels"].size()) +
                     " channels over " + manifest["M"].dump() + " IMFs\n");
  });
}

mhht_status mhht_run_features(const char* input, const mhht_config* cfg, const char* output_dir,
                              unsigned jobs, char** report) {
  if (report) *report = nullptr;
  return guarded([&] {
    require(input, "input");
    require(cfg, "cfg");
    require(output_dir, "output_dir");
    const auto manifest = mhht::run_features(input, cfg->value, output_dir, jobs);
    emit(report, "wrote " + manifest["count"].dump() + " blocks of shape " +
                     manifest["shape"].dump() + " from " +
                     std::to_string(manifest["trials"].size()) + " trial(s)\n");
  });
}

mhht_status mhht_run_synth(const mhht_config* cfg, const char* output_path, int json,
                           char** report) {
  if (report) *report = nullptr;
  return guarded([&] {
    require(cfg, "cfg");
    const auto run = mhht::run_synth(cfg->value, output_path ? output_path : "");
    emit(report, json ? mhht::to_json(run.report).dump(2) + "\n" : mhht::to_table(run.report));
  });
}

mhht_status mhht_run_verify(const mhht_config* cfg, int json, char** report) {
  if (report) *report = nullptr;
  bool passed = true;
  const auto status = guarded([&] {
    require(cfg, "cfg");
    const auto result = mhht::run_verification(cfg->value);
    passed = result.passed();
    emit(report, json ? mhht::to_json(result).dump(2) + "\n" : mhht::to_table(result));
  });
  if (status != MHHT_OK) return status;
  if (!passed) {
    last_error = "verification failed";
    return MHHT_ERR_VERIFY;
  }
  return MHHT_OK;
}

}  // extern "C"
