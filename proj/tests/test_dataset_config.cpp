#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hyperdoa/config.hpp"
#include "hyperdoa/dataset.hpp"
#include "hyperdoa/error.hpp"
#include "test_util.hpp"

using namespace hyperdoa;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hyperdoa_test_ds_" + name)).string();
}

dataset::GenerationSpec small_spec() {
  dataset::GenerationSpec s;
  s.array = {6, 20};
  s.m_sources = 2;
  s.snr_list_db = {-2.0, 4.0};
  return s;
}

}  // namespace

TEST_CASE("train set seeds and SNR range") {
  const auto spec = small_spec();
  const auto ds = dataset::generate_train(spec, 40, 1000);
  REQUIRE(ds.samples.size() == 40);
  for (std::size_t i = 0; i < 40; ++i) {
    const auto& s = ds.samples[i];
    CHECK(s.seed == 1000 + i);
    CHECK((s.snr_db >= -2.0 && s.snr_db <= 4.0));
    CHECK(s.doas_deg.size() == 2);
    CHECK(signal::min_pairwise_separation(s.doas_deg) >= 15.0);
    // Any single sample can be regenerated on its own.
    const auto again = dataset::generate_sample(spec, s.seed, s.snr_db);
    CHECK(again.doas_deg == s.doas_deg);
    CHECK(testutil::same_bits(again.x.data, s.x.data));
  }
}

TEST_CASE("test set is bucketed by SNR with disjoint seeds") {
  const auto spec = small_spec();
  const auto ds = dataset::generate_test(spec, 10, 1000 + config::kTestSeedOffset);
  REQUIRE(ds.samples.size() == 20);
  for (std::size_t j = 0; j < 10; ++j) {
    CHECK(ds.samples[j].snr_db == -2.0);
    CHECK(ds.samples[10 + j].snr_db == 4.0);
    CHECK(ds.samples[10 + j].seed == 1000 + config::kTestSeedOffset + 10 + j);
  }
}

TEST_CASE("dataset files round-trip byte-identically") {
  const auto ds = dataset::generate_train(small_spec(), 15, 7);
  const auto p1 = tmp_path("a.bin"), p2 = tmp_path("b.bin");
  dataset::save(ds, p1);
  const auto back = dataset::load(p1);
  dataset::save(back, p2);
  CHECK(testutil::read_bytes(p1) == testutil::read_bytes(p2));
  REQUIRE(back.samples.size() == 15);
  CHECK(back.split == dataset::Split::Train);
  CHECK(back.base_seed == 7);
  for (std::size_t i = 0; i < 15; ++i) {
    CHECK(back.samples[i].seed == ds.samples[i].seed);
    CHECK(back.samples[i].snr_db == ds.samples[i].snr_db);
    CHECK(back.samples[i].doas_deg == ds.samples[i].doas_deg);
    CHECK(testutil::same_bits(back.samples[i].x.data, ds.samples[i].x.data));
  }

  auto bytes = testutil::read_bytes(p1);
  const std::string key = "\"format_version\":1";
  const auto pos = bytes.find(key);
  REQUIRE(pos != std::string::npos);
  bytes[pos + key.size() - 1] = '2';
  { std::ofstream(p2, std::ios::binary) << bytes; }
  CHECK_THROWS_AS((void)dataset::load(p2), VersionError);

  bytes = testutil::read_bytes(p1);
  bytes.resize(bytes.size() - 8);
  { std::ofstream(p2, std::ios::binary) << bytes; }
  CHECK_THROWS_AS((void)dataset::load(p2), FormatError);

  { std::ofstream(p2, std::ios::binary) << "{\"format\":\"something-else\",\"format_version\":1}\n"; }
  CHECK_THROWS_AS((void)dataset::load(p2), FormatError);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("generation spec validation") {
  auto s = small_spec();
  s.m_sources = 6;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = small_spec();
  s.snr_list_db.clear();
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("default configuration") {
  const auto cfg = config::resolve(config::parse_document("{}"));
  CHECK(cfg.array.n_antennas == 8);
  CHECK(cfg.array.n_snapshots == 100);
  CHECK(cfg.m_sources == 3);
  CHECK(cfg.coherent);
  CHECK(cfg.snr_list_db == std::vector<double>{1.0, 3.0, 5.0});
  CHECK(cfg.train_size == 5000);
  CHECK(cfg.test_size == 250);
  CHECK(cfg.dim == 10000);
  CHECK(cfg.grid.size() == 1801);
  CHECK(cfg.min_separation_deg == 6.0);
  CHECK(cfg.test_base_seed() == cfg.base_seed + (1ULL << 32));
  // to_json round-trips.
  const auto again = config::from_json(cfg.to_json());
  CHECK(again.to_json() == cfg.to_json());
}

TEST_CASE("config parsing with comments and overrides") {
  const auto doc = config::parse_document("{\n  // comment\n  \"m_sources\": 2,\n  \"feature_method\": \"spatial_smoothing\"\n}",
                                          "inline.json");
  const auto cfg = config::resolve(doc, {"n_antennas=10", "snr_list_db=[0,2]", "coherent=false"});
  CHECK(cfg.m_sources == 2);
  CHECK(cfg.feature_method == features::Method::SpatialSmoothing);
  CHECK(cfg.array.n_antennas == 10);
  CHECK(cfg.snr_list_db == std::vector<double>{0.0, 2.0});
  CHECK_FALSE(cfg.coherent);
  CHECK_THROWS_AS((void)config::resolve(doc, {"no_equals_sign"}), ConfigError);
}

TEST_CASE("unknown keys are reported with their line") {
  const auto doc = config::parse_document("{\n  \"m_sources\": 2,\n  \"snapshots\": 50\n}", "cfg.json");
  try {
    (void)config::resolve(doc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("snapshots") != std::string::npos);
    CHECK(msg.find("cfg.json:3") != std::string::npos);
  }
  try {
    (void)config::resolve(config::parse_document("{}"), {"bogus=1"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("command-line override") != std::string::npos);
  }
}

TEST_CASE("invalid values are rejected") {
  const auto doc = config::parse_document("{}");
  CHECK_THROWS_AS((void)config::resolve(doc, {"m_sources=8"}), ConfigError);
  CHECK_THROWS_AS((void)config::resolve(doc, {"m_sources=9"}), ConfigError);
  CHECK_THROWS_AS((void)config::resolve(doc, {"dim=0"}), ConfigError);
  CHECK_THROWS_AS((void)config::resolve(doc, {"bandwidth=-1"}), ConfigError);
  CHECK_THROWS_AS((void)config::resolve(doc, {"methods=[\"fft\"]"}), ConfigError);
  CHECK_THROWS_AS((void)config::resolve(doc, {"m_sources=\"three\""}), ConfigError);
  CHECK_THROWS_AS((void)config::parse_document("{ not json"), ConfigError);
  CHECK_THROWS_AS((void)config::read_document("/nonexistent/cfg.json"), ConfigError);
}

TEST_CASE("sweep expansion") {
  const auto doc = config::parse_document(
      "{\"m_sources\": 3, \"sweep\": [{\"snr_list_db\": [-5]}, {\"m_sources\": 4, \"snr_list_db\": [-1]}]}");
  const auto cfgs = config::expand_sweep(doc);
  REQUIRE(cfgs.size() == 2);
  CHECK(cfgs[0].m_sources == 3);
  CHECK(cfgs[0].snr_list_db == std::vector<double>{-5.0});
  CHECK(cfgs[1].m_sources == 4);
  CHECK(config::expand_sweep(config::parse_document("{}")).size() == 1);
  CHECK_THROWS_AS((void)config::expand_sweep(config::parse_document("{\"sweep\": []}")), ConfigError);
}
