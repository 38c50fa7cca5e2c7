#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace mhht::io {

// Little-endian sample files. Values are written in the order given; callers
// own the layout convention (channel-major for signals and IMFs).
void write_f32(const std::filesystem::path& path, std::span<const double> values);
void write_f32(const std::filesystem::path& path, std::span<const float> values);
void write_f64(const std::filesystem::path& path, std::span<const double> values);

std::vector<float> read_f32(const std::filesystem::path& path, std::size_t expected_count);
std::vector<double> read_f64(const std::filesystem::path& path, std::size_t expected_count);

nlohmann::json read_json(const std::filesystem::path& path);
// Pretty-printed with a trailing newline; key order is sorted so output is
// reproducible byte for byte.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace mhht::io
