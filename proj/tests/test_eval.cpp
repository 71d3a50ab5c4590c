#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hyperdoa/error.hpp"
#include "hyperdoa/eval.hpp"
#include "test_util.hpp"

using namespace hyperdoa;
using namespace hyperdoa::eval;

namespace {

constexpr double kRad = std::numbers::pi / 180.0;

config::ExperimentConfig smoke_config() {
  auto cfg = config::resolve(config::parse_document("{}"));
  cfg.m_sources = 1;
  cfg.coherent = false;
  cfg.snr_list_db = {10.0};
  cfg.train_size = 200;
  cfg.test_size = 50;
  cfg.methods = {config::EvalMethod::HdcLag, config::EvalMethod::Music};
  cfg.base_seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("periodic error examples") {
  const std::vector<double> a{10.0, -30.0}, b{-30.0, 10.0};
  CHECK(periodic_sq_error(a, a) == 0.0);
  CHECK(periodic_sq_error(a, b) == 0.0);
  const std::vector<double> p{89.0}, q{-89.0};
  CHECK(periodic_sq_error(p, q) == doctest::Approx(std::pow(2.0 * kRad, 2)).epsilon(1e-12));
  CHECK(std::abs(periodic_diff_rad(90.0, -90.0)) < 1e-15);
  CHECK(periodic_diff_rad(10.0, 0.0) == doctest::Approx(10.0 * kRad));
  const std::vector<double> one{0.0};
  CHECK_THROWS_AS((void)periodic_sq_error(a, one), ShapeError);
}

TEST_CASE("periodic error properties") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> ud(-90.0, 90.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + trial % 4;
    std::vector<double> est(m), truth(m);
    for (std::size_t i = 0; i < m; ++i) {
      est[i] = ud(gen);
      truth[i] = ud(gen);
    }
    const double e = periodic_sq_error(est, truth);
    CHECK(e >= 0.0);
    CHECK(e <= std::pow(std::numbers::pi / 2, 2) + 1e-12);
    auto pe = est, pt = truth;
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), gen);
    for (std::size_t i = 0; i < m; ++i) {
      pe[i] = est[idx[i]];
      pt[i] = truth[idx[i]];
    }
    CHECK(periodic_sq_error(pe, pt) == doctest::Approx(e).epsilon(1e-12));
    std::shuffle(pe.begin(), pe.end(), gen);
    CHECK(periodic_sq_error(pe, truth) == doctest::Approx(e).epsilon(1e-12));
    CHECK(periodic_sq_error(truth, est) == doctest::Approx(e).epsilon(1e-12));
    CHECK(periodic_sq_error(truth, truth) == 0.0);
  }
}

TEST_CASE("aggregation counts failures under both policies") {
  const std::vector<SampleOutcome> o{{1.0, 0.01, 5.0}, {1.0, std::nullopt, 5.0}, {3.0, 0.04, 5.0}, {3.0, 0.0, 5.0}};
  const auto ex = aggregate("m", o, config::FailurePolicy::Exclude);
  REQUIRE(ex.size() == 2);
  CHECK(ex[0].snr_db == 1.0);
  CHECK(ex[0].n_scored == 1);
  CHECK(ex[0].n_failed == 1);
  CHECK(ex[0].mspe_db == doctest::Approx(-20.0));
  CHECK(ex[1].mspe_db == doctest::Approx(10.0 * std::log10(0.02)));
  const auto pen = aggregate("m", o, config::FailurePolicy::Penalty);
  CHECK(pen[0].n_scored == 2);
  CHECK(pen[0].n_failed == 1);
  CHECK(pen[0].mspe_db == doctest::Approx(10.0 * std::log10((0.01 + std::pow(std::numbers::pi / 2, 2)) / 2.0)));

  const std::vector<SampleOutcome> failed{{0.0, std::nullopt, 1.0}};
  CHECK(std::isnan(aggregate("m", failed, config::FailurePolicy::Exclude)[0].mspe_db));
  const std::vector<SampleOutcome> perfect{{0.0, 0.0, 1.0}};
  CHECK(aggregate("m", perfect, config::FailurePolicy::Exclude)[0].mspe_db == doctest::Approx(-300.0));
}

TEST_CASE("smoke experiment reaches a low error and is reproducible") {
  const auto cfg = smoke_config();
  const auto r1 = run_experiment(cfg);
  const auto* hdc = r1.find("hdc_lag", 10.0);
  REQUIRE(hdc != nullptr);
  CHECK(hdc->n_scored + hdc->n_failed == 50);
  CHECK(hdc->mspe_db <= -25.0);
  REQUIRE(r1.find("music", 10.0) != nullptr);

  const auto r2 = run_experiment(cfg);
  CHECK(r1 == r2);
  const auto p1 = (std::filesystem::temp_directory_path() / "hyperdoa_test_eval_a.json").string();
  const auto p2 = (std::filesystem::temp_directory_path() / "hyperdoa_test_eval_b.json").string();
  export_reports(std::span(&r1, 1), p1);
  export_reports(std::span(&r2, 1), p2);
  CHECK(testutil::read_bytes(p1) == testutil::read_bytes(p2));
  CHECK(testutil::read_bytes(p1).find("inference") == std::string::npos);

  const auto back = load_reports(p1);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == r1);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("report parsing rejects foreign documents") {
  CHECK_THROWS_AS((void)reports_from_json(nlohmann::ordered_json{{"format", "x"}}), FormatError);
  CHECK_THROWS_AS((void)reports_from_json(nlohmann::ordered_json{{"format", "hyperdoa-report"}, {"format_version", 5}}),
                  VersionError);
  MspeReport r;
  r.records.push_back({"music", 1.0, std::numeric_limits<double>::quiet_NaN(), 0, 4, 0.0});
  const auto back = reports_from_json(to_json(std::span(&r, 1)));
  CHECK(std::isnan(back[0].records[0].mspe_db));
  CHECK(back[0] == r);
}

TEST_CASE("normalizer statistics come from the training split only") {
  auto cfg = smoke_config();
  cfg.dim = 500;
  const auto gen = cfg.generation_spec();
  const auto train = dataset::generate_train(gen, cfg.train_size, cfg.base_seed);
  const auto est = HdcEstimator::fit(train.samples, cfg.train_spec());
  std::vector<features::FeatureVector> raw;
  for (const auto& s : train.samples) raw.push_back(features::extract(s.x, cfg.train_spec().features));
  CHECK(est.memory().meta.normalizer == features::Normalizer::fit(raw));
  CHECK(est.memory().meta.normalizer.fitted_on == cfg.train_size);
  // Scoring a test set leaves the model untouched.
  const auto before = est.memory().meta.normalizer;
  const auto test = dataset::generate_test(gen, 10, cfg.test_base_seed());
  (void)evaluate(config::EvalMethod::HdcLag, cfg, test, &est);
  CHECK(est.memory().meta.normalizer == before);
}

TEST_CASE("lower SNR does not lower the median error") {
  auto cfg = smoke_config();
  cfg.dim = 2000;
  cfg.train_size = 1000;
  cfg.snr_list_db = {-10.0, 10.0};
  const auto gen = cfg.generation_spec();
  const auto train = dataset::generate_train(gen, cfg.train_size, cfg.base_seed);
  const auto est = HdcEstimator::fit(train.samples, cfg.train_spec());
  const auto test = dataset::generate_test(gen, 500, cfg.test_base_seed());
  const auto out = score_hdc(est, test, cfg.decoder_config());
  std::vector<double> low, high;
  for (const auto& o : out) (o.snr_db < 0 ? low : high).push_back(o.sq_error.value_or(INFINITY));
  std::vector<double> sorted_high = high;
  std::nth_element(sorted_high.begin(), sorted_high.begin() + 250, sorted_high.end());
  const double median_high = sorted_high[250];
  const auto above = std::count_if(low.begin(), low.end(), [&](double e) { return e >= median_high; });
  // Same distribution would put ~Bin(500, 1/2) above; reject a decrease at 95%.
  CHECK(static_cast<double>(above) >= 250.0 - 1.645 * std::sqrt(125.0));
}

TEST_CASE("evaluation needs a model for HDC methods") {
  const auto cfg = smoke_config();
  const auto test = dataset::generate_test(cfg.generation_spec(), 2, cfg.test_base_seed());
  CHECK_THROWS_AS((void)evaluate(config::EvalMethod::HdcLag, cfg, test, nullptr), StateError);
  const auto rows = evaluate(config::EvalMethod::MusicSmoothed, cfg, test, nullptr);
  CHECK(rows.size() == 1);
  CHECK(rows[0].method == "music_ss");
}
