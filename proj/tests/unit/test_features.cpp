#include <doctest.h>

#include <fstream>

#include "../support/oracles.hpp"
#include "binary_io.hpp"
#include "errors.hpp"
#include "features.hpp"

using namespace mhht;

namespace {

FeatureMap2D random_map(std::size_t E, std::size_t W, std::size_t index, std::uint64_t seed) {
  FeatureMap2D map{index, Matrix(E, W)};
  const auto v = oracle::gaussian_series(E * W, seed);
  for (std::size_t i = 0; i < v.size(); ++i) map.values.values()[i] = std::abs(v[i]);
  return map;
}

std::vector<FeatureMap2D> maps_of(std::size_t count, std::size_t E, std::size_t W) {
  std::vector<FeatureMap2D> maps;
  for (std::size_t s = 0; s < count; ++s) maps.push_back(random_map(E, W, s, 100 + s));
  return maps;
}

}  // namespace

TEST_CASE("labels") {
  CHECK(assign_label(3.2, 5.0) == Label::low);
  CHECK(assign_label(7.0, 5.0) == Label::high);
  CHECK(assign_label(5.0, 5.0) == Label::excluded);
  CHECK(assign_label(1.0, 5.0) == Label::low);
  CHECK(assign_label(9.0, 5.0) == Label::high);
  CHECK_THROWS_AS(assign_label(0.5, 5.0), ValidationError);
  CHECK_THROWS_AS(assign_label(9.01, 5.0), ValidationError);
  CHECK(std::string(to_string(Label::excluded)) == "excluded");
}

TEST_CASE("build map from decomposed IMFs") {
  const FrequencyAxis axis;
  SUBCASE("zero IMF gives a zero map") {
    ImfSet set{{Matrix(3, 128)}, Matrix(3, 128), 128.0};
    const std::vector<std::size_t> selected{0};
    const auto map = build_map(set, selected, axis, 4);
    CHECK(map.segment_index == 4);
    CHECK(map.channels() == 3);
    CHECK(map.bins() == 192);
    for (double v : map.values.values()) CHECK(v == 0.0);
  }
  SUBCASE("32 channels by 192 bins") {
    Matrix imf(32, 128);
    const auto v = oracle::gaussian_series(imf.size(), 77);
    std::copy(v.begin(), v.end(), imf.values().begin());
    ImfSet set{{imf}, Matrix(32, 128), 128.0};
    const std::vector<std::size_t> selected{0};
    const auto map = build_map(set, selected, axis, 0);
    CHECK(map.values.rows() == 32);
    CHECK(map.values.cols() == 192);
    for (double x : map.values.values()) CHECK(x >= 0.0);
  }
  SUBCASE("row c is the MHS of channel c over the selected IMFs") {
    Matrix a(2, 256), b(2, 256);
    const auto t1 = oracle::cosine(256, 20.0, 128.0, 1.0, 0.1);
    const auto t2 = oracle::cosine(256, 6.0, 128.0, 0.5, 0.7);
    std::copy(t1.begin(), t1.end(), a.row(1).begin());
    std::copy(t2.begin(), t2.end(), b.row(1).begin());
    ImfSet set{{a, b}, Matrix(2, 256), 128.0};
    const std::vector<std::size_t> selected{0, 1};
    const auto map = build_map(set, selected, axis, 0);
    const std::vector<AnalyticTrack> tracks{analyze_component(t1, 128.0), analyze_component(t2, 128.0)};
    const auto expect = marginal_spectrum(hilbert_spectrum(tracks, axis));
    for (std::size_t w = 0; w < 192; ++w) {
      CHECK(map.values(1, w) == expect.power[w]);
      CHECK(map.values(0, w) == 0.0);
    }
  }
  SUBCASE("selection errors") {
    ImfSet set{{Matrix(1, 64)}, Matrix(1, 64), 128.0};
    CHECK_THROWS_AS(build_map(set, {}, axis, 0), ValidationError);
    const std::vector<std::size_t> bad{1};
    CHECK_THROWS_AS(build_map(set, bad, axis, 0), ValidationError);
  }
}

TEST_CASE("build map from a raw segment") {
  const FrequencyAxis axis;
  Segment seg;
  seg.sample_rate_hz = 128.0;
  seg.length_samples = 128;
  seg.index = 2;
  SUBCASE("zero segment") {
    seg.data = Matrix(4, 128);
    const auto map = build_map(seg, SiftConfig{}, 0, 4.0, 3, axis);
    CHECK(map.segment_index == 2);
    CHECK(map.channels() == 4);
    for (double v : map.values.values()) CHECK(v == 0.0);
  }
  SUBCASE("16 Hz in channel 0, silence in channel 1") {
    seg.data = Matrix(2, 128);
    const auto tone = oracle::cosine(128, 16.0, 128.0, 1.0, 0.3);
    std::copy(tone.begin(), tone.end(), seg.data.row(0).begin());
    const auto map = build_map(seg, SiftConfig{}, 0, 4.0, 3, axis);
    const auto row0 = map.values.row(0);
    const auto peak = std::max_element(row0.begin(), row0.end());
    CHECK(peak - row0.begin() == 48);
    const auto row1 = map.values.row(1);
    CHECK(*std::max_element(row1.begin(), row1.end()) < 0.05 * *peak);
  }
  SUBCASE("nothing above the threshold") {
    seg.data = Matrix(2, 128);
    const auto tone = oracle::cosine(128, 16.0, 128.0, 1.0, 0.3);
    std::copy(tone.begin(), tone.end(), seg.data.row(0).begin());
    std::copy(tone.begin(), tone.end(), seg.data.row(1).begin());
    CHECK_THROWS_WITH_AS(build_map(seg, SiftConfig{}, 0, 100.0, 3, axis), "no IMFs selected",
                         ValidationError);
  }
}

TEST_CASE("normalization") {
  auto map = random_map(3, 10, 0, 5);
  normalize_min_max(map);
  const auto v = map.values.values();
  CHECK(*std::min_element(v.begin(), v.end()) == 0.0);
  CHECK(*std::max_element(v.begin(), v.end()) == 1.0);
  FeatureMap2D flat{0, Matrix(2, 4, 3.0)};
  normalize_min_max(flat);
  for (double x : flat.values.values()) CHECK(x == 0.0);
}

TEST_CASE("build blocks") {
  SUBCASE("60 maps at depth 3 give 20 blocks") {
    const auto maps = maps_of(60, 2, 8);
    const auto blocks = build_blocks(maps, 3, 3, "t01", TrialLabels{7.0, 2.0, 5.0});
    REQUIRE(blocks.size() == 20);
    for (std::size_t b = 0; b < 20; ++b) {
      CHECK(blocks[b].start_segment == 3 * b);
      CHECK(blocks[b].trial_id == "t01");
      CHECK(blocks[b].labels.valence_score == 7.0);
      CHECK(blocks[b].labels.arousal_score == 2.0);
    }
  }
  SUBCASE("three maps make one block whose slices are the maps") {
    const auto maps = maps_of(3, 4, 6);
    const auto blocks = build_blocks(maps, 3, 3, "t");
    REQUIRE(blocks.size() == 1);
    const auto& b = blocks[0];
    CHECK(b.channels == 4);
    CHECK(b.bins == 6);
    CHECK(b.depth == 3);
    for (std::size_t m = 0; m < 3; ++m)
      for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t w = 0; w < 6; ++w) CHECK(b.at(c, w, m) == maps[m].values(c, w));
  }
  SUBCASE("two maps make none") {
    CHECK(build_blocks(maps_of(2, 2, 2), 3, 3, "t").empty());
  }
  SUBCASE("count is floor(maps / depth) for non-overlapping windows") {
    for (std::size_t n = 0; n < 12; ++n) {
      CHECK(build_blocks(maps_of(n, 1, 2), 3, 3, "t").size() == n / 3);
    }
  }
  SUBCASE("overlap through the stride") {
    const auto blocks = build_blocks(maps_of(7, 1, 2), 3, 1, "t");
    CHECK(blocks.size() == 5);
    CHECK(blocks[1].start_segment == 1);
  }
  SUBCASE("errors") {
    auto maps = maps_of(3, 2, 4);
    maps[1] = random_map(3, 4, 1, 9);
    CHECK_THROWS_AS(build_blocks(maps, 3, 3, "t"), ValidationError);
    CHECK_THROWS_AS(build_blocks(maps_of(3, 2, 4), 0, 3, "t"), ValidationError);
    CHECK_THROWS_AS(build_blocks(maps_of(3, 2, 4), 3, 0, "t"), ValidationError);
  }
}

TEST_CASE("export dataset") {
  oracle::TempDir dir("export");
  SUBCASE("20 blocks of 32 x 192 x 3") {
    const auto blocks = build_blocks(maps_of(60, 32, 192), 3, 3, "trial", TrialLabels{3.2, 5.0, 5.0});
    const auto manifest = export_dataset(blocks, dir.path());
    CHECK(manifest.at("count") == 20);
    CHECK(manifest.at("shape") == nlohmann::json({32, 192, 3}));
    CHECK(manifest.at("blocks").size() == 20);
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir / "blocks")) ++files;
    CHECK(files == 20);
    const auto& entry = manifest.at("blocks").at(4);
    CHECK(entry.at("trial") == "trial");
    CHECK(entry.at("start_segment") == 12);
    CHECK(entry.at("label").at("valence") == "low");
    CHECK(entry.at("label").at("arousal") == "excluded");
    CHECK(entry.at("label").at("valence_score") == 3.2);
    CHECK(io::read_json(dir / "manifest.json") == manifest);

    const auto back = read_block(dir / entry.at("file").get<std::string>(), 32, 192, 3);
    REQUIRE(back.size() == blocks[4].values.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i] == static_cast<float>(blocks[4].values[i]));
    }
  }
  SUBCASE("ordering by trial then start segment") {
    auto blocks = build_blocks(maps_of(6, 1, 2), 3, 3, "b");
    const auto more = build_blocks(maps_of(3, 1, 2), 3, 3, "a");
    blocks.insert(blocks.begin(), more.begin(), more.end());
    std::swap(blocks[1], blocks[2]);
    const auto manifest = export_dataset(blocks, dir.path());
    CHECK(manifest["blocks"][0]["trial"] == "a");
    CHECK(manifest["blocks"][1]["start_segment"] == 0);
    CHECK(manifest["blocks"][2]["start_segment"] == 3);
    CHECK(manifest["blocks"][2]["file"] == "blocks/block_000002.bin");
    CHECK(manifest["blocks"][0]["label"] == nlohmann::json::object());
  }
  SUBCASE("empty list") {
    const auto manifest = export_dataset({}, dir.path());
    CHECK(manifest.at("count") == 0);
    CHECK(manifest.at("blocks").empty());
  }
  SUBCASE("a smaller re-export leaves no stale files") {
    export_dataset(build_blocks(maps_of(9, 1, 2), 3, 3, "t"), dir.path());
    export_dataset(build_blocks(maps_of(3, 1, 2), 3, 3, "t"), dir.path());
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir / "blocks")) ++files;
    CHECK(files == 1);
  }
  SUBCASE("shape mismatch") {
    auto blocks = build_blocks(maps_of(3, 1, 2), 3, 3, "a");
    const auto other = build_blocks(maps_of(3, 2, 2), 3, 3, "b");
    blocks.push_back(other[0]);
    CHECK_THROWS_AS(export_dataset(blocks, dir.path()), ValidationError);
  }
  SUBCASE("unwritable destination") {
    std::ofstream(dir / "file") << "x";
    CHECK_THROWS_AS(export_dataset(build_blocks(maps_of(3, 1, 2), 3, 3, "a"), dir / "file"), IoError);
  }
}
