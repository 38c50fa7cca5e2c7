#include <doctest.h>

#include <fstream>

#include "../support/oracles.hpp"
#include "binary_io.hpp"
#include "errors.hpp"
#include "signal.hpp"

using namespace mhht;

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("csv with two channels and four samples") {
  oracle::TempDir dir("csv");
  write_file(dir / "x.csv", "Fp1,Fp2\n1,2\n3,4\n5,6\n7,8\n");
  const auto x = load_signal(dir / "x.csv", 256.0);
  CHECK(x.num_channels() == 2);
  CHECK(x.num_samples() == 4);
  CHECK(x.sample_rate_hz == 256.0);
  CHECK(x.channels == std::vector<std::string>{"Fp1", "Fp2"});
  CHECK(x.data(0, 0) == 1.0);
  CHECK(x.data(1, 3) == 8.0);
  CHECK(x.data(0, 2) == 5.0);
}

TEST_CASE("csv tolerates whitespace, CRLF and blank lines") {
  oracle::TempDir dir("csv");
  write_file(dir / "x.csv", " a , b \r\n1.5, -2e-3\r\n\r\n+3,4\r\n");
  const auto x = load_signal(dir / "x.csv");
  CHECK(x.channels == std::vector<std::string>{"a", "b"});
  CHECK(x.num_samples() == 2);
  CHECK(x.data(1, 0) == -2e-3);
  CHECK(x.data(0, 1) == 3.0);
}

TEST_CASE("csv NaN names row and channel") {
  oracle::TempDir dir("csv");
  write_file(dir / "x.csv", "Fz,Cz\n1,2\n3,NaN\n");
  const auto msg = error_of([&] { load_signal(dir / "x.csv"); });
  CHECK_THROWS_AS(load_signal(dir / "x.csv"), ValidationError);
  CHECK(msg.find("row 3") != std::string::npos);
  CHECK(msg.find("'Cz'") != std::string::npos);
}

TEST_CASE("csv errors") {
  oracle::TempDir dir("csv");
  SUBCASE("ragged row") {
    write_file(dir / "x.csv", "a,b\n1,2\n3\n");
    const auto msg = error_of([&] { load_signal(dir / "x.csv"); });
    CHECK(msg.find("row 3") != std::string::npos);
    CHECK_THROWS_AS(load_signal(dir / "x.csv"), ValidationError);
  }
  SUBCASE("non-numeric cell") {
    write_file(dir / "x.csv", "a,b\n1,2\n3,x4\n");
    const auto msg = error_of([&] { load_signal(dir / "x.csv"); });
    CHECK(msg.find("'b'") != std::string::npos);
    CHECK(msg.find("x4") != std::string::npos);
  }
  SUBCASE("infinite sample") {
    write_file(dir / "x.csv", "a,b\n1,inf\n3,4\n");
    CHECK_THROWS_AS(load_signal(dir / "x.csv"), ValidationError);
  }
  SUBCASE("header missing") {
    write_file(dir / "x.csv", "1,2\n3,4\n5,6\n");
    CHECK_THROWS_AS(load_signal(dir / "x.csv"), ValidationError);
  }
  SUBCASE("too few samples") {
    write_file(dir / "x.csv", "a,b\n1,2\n");
    CHECK_THROWS_AS(load_signal(dir / "x.csv"), ValidationError);
  }
  SUBCASE("missing file is an I/O error naming the path") {
    const auto path = dir / "absent.csv";
    CHECK_THROWS_AS(load_signal(path), IoError);
    CHECK(error_of([&] { load_signal(path); }).find(path.string()) != std::string::npos);
  }
}

TEST_CASE("raw binary requires its sidecar") {
  oracle::TempDir dir("raw");
  const std::vector<double> values{1, 2, 3, 4};
  io::write_f32(dir / "x.bin", std::span<const double>(values));
  CHECK_THROWS_AS(load_signal(dir / "x.bin"), IoError);
  CHECK(error_of([&] { load_signal(dir / "x.bin"); }).find("x.json") != std::string::npos);
}

TEST_CASE("raw binary with a short payload is rejected") {
  oracle::TempDir dir("raw");
  const std::vector<double> values{1, 2, 3};
  io::write_f32(dir / "x.bin", std::span<const double>(values));
  io::write_json(dir / "x.json", {{"channels", {"a", "b"}}, {"samples", 2}, {"rate_hz", 128.0}});
  CHECK_THROWS(load_signal(dir / "x.bin"));
}

TEST_CASE("raw binary is channel-major little-endian f32") {
  oracle::TempDir dir("raw");
  Matrix data(2, 3);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t t = 0; t < 3; ++t) data(c, t) = static_cast<double>(10 * c + t);
  save_signal(make_signal(data, 64.0, {"x", "y"}), dir / "s.bin");
  const auto bytes = oracle::file_bytes(dir / "s.bin");
  REQUIRE(bytes.size() == 6 * 4);
  float third;  // channel 0, sample 2
  std::memcpy(&third, bytes.data() + 2 * 4, 4);
  CHECK(third == 2.0f);
  float fourth;  // channel 1, sample 0
  std::memcpy(&fourth, bytes.data() + 3 * 4, 4);
  CHECK(fourth == 10.0f);
  const auto meta = io::read_json(dir / "s.json");
  CHECK(meta.at("samples") == 3);
  CHECK(meta.at("rate_hz") == 64.0);
  CHECK(meta.at("channels") == nlohmann::json({"x", "y"}));
}

TEST_CASE("raw binary round trip of a 32 x 7680 signal is bitwise") {
  oracle::TempDir dir("raw");
  Matrix data(32, 7680);
  const auto noise = oracle::gaussian_series(data.size(), 11);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data.values()[i] = static_cast<double>(static_cast<float>(noise[i]));
  }
  const auto x = make_signal(data, 128.0);
  save_signal(x, dir / "trial.bin");
  const auto y = load_signal(dir / "trial.bin");
  CHECK(y.data == x.data);
  CHECK(y.channels == x.channels);
  CHECK(y.sample_rate_hz == 128.0);
}

TEST_CASE("csv round trip is bitwise for doubles") {
  oracle::TempDir dir("csv");
  Matrix data(3, 200);
  const auto noise = oracle::gaussian_series(data.size(), 5);
  std::copy(noise.begin(), noise.end(), data.values().begin());
  const auto x = make_signal(data, 128.0, {"a", "b", "c"});
  save_signal(x, dir / "x.csv");
  const auto y = load_signal(dir / "x.csv", 128.0);
  CHECK(y.data == x.data);
  CHECK(y.channels == x.channels);
}

TEST_CASE("validation rules") {
  CHECK_THROWS_AS(make_signal(Matrix(2, 1), 128.0), ValidationError);
  CHECK_THROWS_AS(make_signal(Matrix(2, 4), 0.0), ValidationError);
  CHECK_THROWS_AS(make_signal(Matrix(2, 4), -1.0), ValidationError);
  CHECK_THROWS_AS(make_signal(Matrix(2, 4), 128.0, {"only-one"}), ValidationError);
  Matrix bad(1, 4);
  bad(0, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_signal(bad, 128.0), ValidationError);
  CHECK(default_channel_labels(3) == std::vector<std::string>{"ch01", "ch02", "ch03"});
}

TEST_CASE("format is inferred from the extension") {
  CHECK(format_from_path("a/b.csv") == SignalFormat::csv);
  CHECK(format_from_path("a/b.bin") == SignalFormat::raw_binary);
  CHECK(format_from_path("a/b.f32") == SignalFormat::raw_binary);
  CHECK_THROWS_AS(format_from_path("a/b.edf"), ValidationError);
  CHECK(sidecar_path("a/b.bin") == std::filesystem::path("a/b.json"));
}
