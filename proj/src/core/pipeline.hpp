#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "features.hpp"
#include "memd.hpp"
#include "signal.hpp"
#include "synth.hpp"

namespace mhht {

// Resample to the target rate, low-pass, then common-average reference, each
// as enabled in the config.
MultivariateSignal preprocess(const MultivariateSignal& x, const PipelineConfig& cfg);

MultivariateSignal load_input(const std::filesystem::path& path, const PipelineConfig& cfg);

// ImfSet directory: imf_01.bin ... imf_MM.bin, residue.bin (f64 little-endian,
// channel-major) and manifest.json.
void save_imfset(const ImfSet& set, const std::vector<std::string>& channels,
                 const PipelineConfig& cfg, const std::filesystem::path& dir);
ImfSet load_imfset(const std::filesystem::path& dir, std::vector<std::string>* channels = nullptr);

ImfSet run_decompose(const std::filesystem::path& input, const PipelineConfig& cfg,
                     const std::filesystem::path& out_dir);

// Per-channel Hilbert and marginal spectra over all IMFs. `input` is a signal
// file (decomposed first) or an ImfSet directory.
nlohmann::json run_spectrum(const std::filesystem::path& input, const PipelineConfig& cfg,
                            const std::filesystem::path& out_dir);

// Full chain: preprocess, segment, decompose, select, MHS maps, blocks,
// export. `input` is one trial file or a directory of trial files.
nlohmann::json run_features(const std::filesystem::path& input, const PipelineConfig& cfg,
                            const std::filesystem::path& out_dir, unsigned jobs);

struct SynthRun {
  MultivariateSignal signal;
  std::vector<ToneSpec> tones;
  ModeSeparationReport report;
};

// Generates the configured multitone signal, writes it when `output` is not
// empty, and scores the decomposition against the ground-truth tones.
SynthRun run_synth(const PipelineConfig& cfg, const std::filesystem::path& output);

}  // namespace mhht
