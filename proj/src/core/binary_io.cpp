#include "binary_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "errors.hpp"

namespace mhht::io {
namespace {

template <typename Word>
Word to_little_endian(Word w) {
  if constexpr (std::endian::native == std::endian::little) {
    return w;
  } else {
    Word out = 0;
    for (std::size_t i = 0; i < sizeof(Word); ++i) {
      out = (out << 8) | ((w >> (8 * i)) & 0xFF);
    }
    return out;
  }
}

template <typename Float, typename Word>
void write_words(const std::filesystem::path& path, std::span<const Float> values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  std::vector<Word> words(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    words[i] = to_little_endian(std::bit_cast<Word>(values[i]));
  }
  out.write(reinterpret_cast<const char*>(words.data()),
            static_cast<std::streamsize>(words.size() * sizeof(Word)));
  if (!out) throw IoError("write failed: " + path.string());
}

template <typename Float, typename Word>
std::vector<Float> read_words(const std::filesystem::path& path, std::size_t expected_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  if (bytes != expected_count * sizeof(Word)) {
    throw IoError(path.string() + ": expected " + std::to_string(expected_count * sizeof(Word)) +
                  " bytes, found " + std::to_string(bytes));
  }
  std::vector<Word> words(expected_count);
  in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw IoError("read failed: " + path.string());
  std::vector<Float> values(expected_count);
  for (std::size_t i = 0; i < expected_count; ++i) {
    values[i] = std::bit_cast<Float>(to_little_endian(words[i]));
  }
  return values;
}

}  // namespace

void write_f32(const std::filesystem::path& path, std::span<const double> values) {
  std::vector<float> narrowed(values.begin(), values.end());
  write_words<float, std::uint32_t>(path, std::span<const float>(narrowed));
}

void write_f32(const std::filesystem::path& path, std::span<const float> values) {
  write_words<float, std::uint32_t>(path, values);
}

void write_f64(const std::filesystem::path& path, std::span<const double> values) {
  write_words<double, std::uint64_t>(path, values);
}

std::vector<float> read_f32(const std::filesystem::path& path, std::size_t expected_count) {
  return read_words<float, std::uint32_t>(path, expected_count);
}

std::vector<double> read_f64(const std::filesystem::path& path, std::size_t expected_count) {
  return read_words<double, std::uint64_t>(path, expected_count);
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  }
}

}  // namespace mhht::io
