#include "signal.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "errors.hpp"

namespace mhht {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

MultivariateSignal load_csv(const std::filesystem::path& path, double rate_hz) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open signal file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path.string() + ": empty CSV file");
  std::vector<std::string> labels;
  for (auto& cell : split_csv_line(line)) labels.push_back(trim(cell));
  const std::size_t n = labels.size();
  if (std::all_of(labels.begin(), labels.end(), [](const std::string& label) {
        double ignored = 0.0;
        return parse_double(label, ignored);
      })) {
    throw ValidationError(path.string() + ": first row must hold channel labels, found numbers");
  }

  std::vector<std::vector<double>> columns(n);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != n) {
      throw ValidationError(path.string() + ": row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(n));
    }
    for (std::size_t c = 0; c < n; ++c) {
      const std::string text = trim(cells[c]);
      double value = 0.0;
      if (!parse_double(text, value)) {
        throw ValidationError(path.string() + ": row " + std::to_string(row) + ", channel '" +
                              labels[c] + "': non-numeric cell '" + text + "'");
      }
      if (!std::isfinite(value)) {
        throw ValidationError(path.string() + ": row " + std::to_string(row) + ", channel '" +
                              labels[c] + "': non-finite sample '" + text + "'");
      }
      columns[c].push_back(value);
    }
  }

  const std::size_t samples = n == 0 ? 0 : columns[0].size();
  Matrix data(n, samples);
  for (std::size_t c = 0; c < n; ++c) {
    std::copy(columns[c].begin(), columns[c].end(), data.row(c).begin());
  }
  return make_signal(std::move(data), rate_hz, std::move(labels));
}

MultivariateSignal load_raw(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("signal file not found: " + path.string());
  const auto sidecar = sidecar_path(path);
  if (!std::filesystem::exists(sidecar)) {
    throw IoError("missing sidecar " + sidecar.string() + " for " + path.string());
  }
  const auto meta = io::read_json(sidecar);
  std::vector<std::string> labels;
  std::size_t samples = 0;
  double rate = 0.0;
  try {
    labels = meta.at("channels").get<std::vector<std::string>>();
    samples = meta.at("samples").get<std::size_t>();
    rate = meta.at("rate_hz").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(sidecar.string() + ": malformed sidecar: " + e.what());
  }
  const auto values = io::read_f32(path, labels.size() * samples);
  Matrix data(labels.size(), samples);
  for (std::size_t c = 0; c < labels.size(); ++c) {
    for (std::size_t t = 0; t < samples; ++t) {
      const double v = values[c * samples + t];
      if (!std::isfinite(v)) {
        throw ValidationError(path.string() + ": sample " + std::to_string(t) + ", channel '" +
                              labels[c] + "' is not finite");
      }
      data(c, t) = v;
    }
  }
  return make_signal(std::move(data), rate, std::move(labels));
}

std::string format_sample(double v) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, ptr);
}

}  // namespace

void validate(const MultivariateSignal& signal) {
  if (signal.channels.size() != signal.data.rows()) {
    throw ValidationError("signal has " + std::to_string(signal.data.rows()) + " rows but " +
                          std::to_string(signal.channels.size()) + " channel labels");
  }
  if (signal.data.rows() == 0) throw ValidationError("signal has no channels");
  if (signal.data.cols() < 2) {
    throw ValidationError("signal needs at least 2 samples, got " +
                          std::to_string(signal.data.cols()));
  }
  if (!(signal.sample_rate_hz > 0.0) || !std::isfinite(signal.sample_rate_hz)) {
    throw ValidationError("sample rate must be positive and finite");
  }
  for (std::size_t c = 0; c < signal.data.rows(); ++c) {
    const auto row = signal.data.row(c);
    for (std::size_t t = 0; t < row.size(); ++t) {
      if (!std::isfinite(row[t])) {
        throw ValidationError("sample " + std::to_string(t) + " of channel '" +
                              signal.channels[c] + "' is not finite");
      }
    }
  }
}

std::vector<std::string> default_channel_labels(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < n; ++c) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "ch%02zu", c + 1);
    labels.emplace_back(buffer);
  }
  return labels;
}

MultivariateSignal make_signal(Matrix data, double sample_rate_hz,
                               std::vector<std::string> channels) {
  if (channels.empty()) channels = default_channel_labels(data.rows());
  MultivariateSignal signal{std::move(channels), std::move(data), sample_rate_hz};
  validate(signal);
  return signal;
}

SignalFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return SignalFormat::csv;
  if (ext == ".bin" || ext == ".f32" || ext == ".raw") return SignalFormat::raw_binary;
  throw ValidationError("cannot infer signal format from extension '" + ext + "' of " +
                        path.string());
}

std::filesystem::path sidecar_path(const std::filesystem::path& binary_path) {
  auto sidecar = binary_path;
  sidecar.replace_extension(".json");
  return sidecar;
}

MultivariateSignal load_signal(const std::filesystem::path& path, SignalFormat format,
                               double csv_rate_hz) {
  if (!std::filesystem::exists(path)) throw IoError("signal file not found: " + path.string());
  return format == SignalFormat::csv ? load_csv(path, csv_rate_hz) : load_raw(path);
}

MultivariateSignal load_signal(const std::filesystem::path& path, double csv_rate_hz) {
  return load_signal(path, format_from_path(path), csv_rate_hz);
}

void save_signal(const MultivariateSignal& signal, const std::filesystem::path& path,
                 SignalFormat format) {
  validate(signal);
  if (path.has_parent_path()) io::ensure_directory(path.parent_path());
  if (format == SignalFormat::raw_binary) {
    io::write_f32(path, signal.data.values());
    nlohmann::json meta;
    meta["channels"] = signal.channels;
    meta["samples"] = signal.num_samples();
    meta["rate_hz"] = signal.sample_rate_hz;
    meta["dtype"] = "float32-le";
    meta["layout"] = "channel-major";
    io::write_json(sidecar_path(path), meta);
    return;
  }
  std::string text;
  for (std::size_t c = 0; c < signal.num_channels(); ++c) {
    if (c) text += ',';
    text += signal.channels[c];
  }
  text += '\n';
  for (std::size_t t = 0; t < signal.num_samples(); ++t) {
    for (std::size_t c = 0; c < signal.num_channels(); ++c) {
      if (c) text += ',';
      text += format_sample(signal.data(c, t));
    }
    text += '\n';
  }
  io::write_text(path, text);
}

void save_signal(const MultivariateSignal& signal, const std::filesystem::path& path) {
  save_signal(signal, path, format_from_path(path));
}

}  // namespace mhht
