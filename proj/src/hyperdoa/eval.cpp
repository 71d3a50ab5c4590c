#include "hyperdoa/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "hyperdoa/error.hpp"
#include "hyperdoa/music.hpp"

namespace hyperdoa::eval {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kQueryBatch = 64;
constexpr double kDegToRad = std::numbers::pi / 180.0;
// Worst-case periodic error, charged to failed decodes under the penalty policy.
constexpr double kPenaltySqError = (std::numbers::pi / 2) * (std::numbers::pi / 2);

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

double micros(Clock::time_point since) {
  return std::chrono::duration<double, std::micro>(Clock::now() - since).count();
}

}  // namespace

double periodic_diff_rad(double a_deg, double b_deg) {
  const double delta = a_deg - b_deg;
  double wrapped = std::fmod(delta + 90.0, 180.0);
  if (wrapped < 0.0) wrapped += 180.0;
  return (wrapped - 90.0) * kDegToRad;
}

double periodic_sq_error(std::span<const double> est_deg, std::span<const double> true_deg) {
  if (est_deg.size() != true_deg.size())
    throw ShapeError("periodic_sq_error: " + std::to_string(est_deg.size()) + " estimates for " +
                     std::to_string(true_deg.size()) + " true angles");
  if (est_deg.empty()) return 0.0;
  std::vector<std::size_t> perm(est_deg.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double acc = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      const double d = periodic_diff_rad(est_deg[perm[i]], true_deg[i]);
      acc += d * d;
    }
    best = std::min(best, acc / static_cast<double>(perm.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool operator==(const ReportRecord& a, const ReportRecord& b) {
  return a.method == b.method && same_double(a.snr_db, b.snr_db) && same_double(a.mspe_db, b.mspe_db) &&
         a.n_scored == b.n_scored && a.n_failed == b.n_failed;
}

bool operator==(const MspeReport& a, const MspeReport& b) {
  return a.config == b.config && a.sample_count == b.sample_count && a.records == b.records;
}

const ReportRecord* MspeReport::find(std::string_view method, double snr_db) const {
  for (const auto& r : records)
    if (r.method == method && r.snr_db == snr_db) return &r;
  return nullptr;
}

std::vector<SampleOutcome> score_hdc(const HdcEstimator& est, const dataset::Dataset& test,
                                     const decoder::DecoderConfig& dec) {
  std::vector<SampleOutcome> out(test.samples.size());
  std::vector<const signal::SnapshotMatrix*> batch;
  for (std::size_t start = 0; start < test.samples.size(); start += kQueryBatch) {
    const std::size_t stop = std::min(test.samples.size(), start + kQueryBatch);
    batch.clear();
    for (std::size_t i = start; i < stop; ++i) batch.push_back(&test.samples[i].x);
    const auto t0 = Clock::now();
    const auto spectra = est.spectra(batch);
    const double per_sample = micros(t0) / static_cast<double>(stop - start);
    for (std::size_t i = start; i < stop; ++i) {
      const auto& s = test.samples[i];
      out[i].snr_db = s.snr_db;
      const auto t1 = Clock::now();
      try {
        const auto e = decoder::decode(spectra[i - start], dec);
        out[i].sq_error = periodic_sq_error(e.angles_deg, s.doas_deg);
      } catch (const DecodeError&) {
        out[i].sq_error.reset();
      }
      out[i].inference_us = per_sample + micros(t1);
    }
  }
  return out;
}

std::vector<SampleOutcome> score_music(const dataset::Dataset& test, const decoder::DecoderConfig& dec,
                                       const AngularGrid& grid, const features::SmoothingConfig* smoothing) {
  std::vector<SampleOutcome> out(test.samples.size());
  for (std::size_t i = 0; i < test.samples.size(); ++i) {
    const auto& s = test.samples[i];
    out[i].snr_db = s.snr_db;
    const auto t0 = Clock::now();
    try {
      const auto e = smoothing ? music::music_estimate_smoothed(s.x, dec.n_sources, grid, dec, *smoothing)
                               : music::music_estimate(s.x, dec.n_sources, grid, dec);
      out[i].sq_error = periodic_sq_error(e.angles_deg, s.doas_deg);
    } catch (const DecodeError&) {
      out[i].sq_error.reset();
    }
    out[i].inference_us = micros(t0);
  }
  return out;
}

std::vector<ReportRecord> aggregate(std::string_view method, std::span<const SampleOutcome> outcomes,
                                    config::FailurePolicy policy) {
  std::vector<double> order;
  for (const auto& o : outcomes)
    if (std::find(order.begin(), order.end(), o.snr_db) == order.end()) order.push_back(o.snr_db);

  std::vector<ReportRecord> records;
  for (double snr : order) {
    ReportRecord r{std::string(method), snr, 0.0, 0, 0, 0.0};
    double sum = 0.0, time = 0.0;
    std::size_t total = 0;
    for (const auto& o : outcomes) {
      if (o.snr_db != snr) continue;
      ++total;
      time += o.inference_us;
      if (o.sq_error) {
        sum += *o.sq_error;
        ++r.n_scored;
      } else {
        ++r.n_failed;
        if (policy == config::FailurePolicy::Penalty) {
          sum += kPenaltySqError;
          ++r.n_scored;
        }
      }
    }
    r.mean_inference_us = time / static_cast<double>(total);
    r.mspe_db = r.n_scored == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : 10.0 * std::log10(std::max(sum / static_cast<double>(r.n_scored), kMspeFloor));
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ReportRecord> evaluate(config::EvalMethod method, const config::ExperimentConfig& cfg,
                                   const dataset::Dataset& test, const HdcEstimator* est) {
  if (test.samples.empty()) throw TrainingError("evaluate: empty test set");
  const auto dec = cfg.decoder_config();
  std::vector<SampleOutcome> outcomes;
  switch (method) {
    case config::EvalMethod::HdcLag:
    case config::EvalMethod::HdcSmoothing:
      if (!est) throw StateError("evaluate: HDC method requires a trained model");
      outcomes = score_hdc(*est, test, dec);
      break;
    case config::EvalMethod::Music:
      outcomes = score_music(test, dec, cfg.grid);
      break;
    case config::EvalMethod::MusicSmoothed: {
      const auto sm = features::SmoothingConfig::for_array(cfg.array.n_antennas, cfg.subarray_size);
      outcomes = score_music(test, dec, cfg.grid, &sm);
      break;
    }
  }
  return aggregate(config::to_string(method), outcomes, cfg.failure_policy);
}

MspeReport run_experiment(const config::ExperimentConfig& cfg) {
  cfg.validate();
  const auto gen = cfg.generation_spec();
  const bool needs_train = std::any_of(cfg.methods.begin(), cfg.methods.end(), config::is_hdc);
  const auto train = needs_train ? dataset::generate_train(gen, cfg.train_size, cfg.base_seed) : dataset::Dataset{};
  const auto test = dataset::generate_test(gen, cfg.test_size, cfg.test_base_seed());

  MspeReport report;
  report.config = cfg.to_json();
  report.sample_count = test.samples.size();
  for (auto method : cfg.methods) {
    std::vector<ReportRecord> rows;
    if (config::is_hdc(method)) {
      const auto feature = method == config::EvalMethod::HdcLag ? features::Method::Lag
                                                                : features::Method::SpatialSmoothing;
      auto est = HdcEstimator::fit(train.samples, cfg.train_spec(feature));
      rows = evaluate(method, cfg, test, &est);
    } else {
      rows = evaluate(method, cfg, test, nullptr);
    }
    report.records.insert(report.records.end(), rows.begin(), rows.end());
  }
  return report;
}

std::vector<MspeReport> sweep(std::span<const config::ExperimentConfig> cfgs) {
  std::vector<MspeReport> out;
  out.reserve(cfgs.size());
  for (const auto& c : cfgs) out.push_back(run_experiment(c));
  return out;
}

json to_json(std::span<const MspeReport> reports) {
  json j;
  j["format"] = "hyperdoa-report";
  j["format_version"] = kReportFormatVersion;
  j["mspe_units"] = "dB of mean squared periodic error in rad^2, period 180 deg";
  json exps = json::array();
  for (const auto& r : reports) {
    json e;
    e["config"] = r.config;
    e["sample_count"] = r.sample_count;
    json rows = json::array();
    for (const auto& rec : r.records) {
      json row;
      row["method"] = rec.method;
      row["snr_db"] = rec.snr_db;
      row["mspe_db"] = std::isnan(rec.mspe_db) ? json(nullptr) : json(rec.mspe_db);
      row["n_scored"] = rec.n_scored;
      row["n_failed"] = rec.n_failed;
      rows.push_back(std::move(row));
    }
    e["records"] = std::move(rows);
    exps.push_back(std::move(e));
  }
  j["experiments"] = std::move(exps);
  return j;
}

std::vector<MspeReport> reports_from_json(const json& j) {
  try {
    if (j.value("format", std::string{}) != "hyperdoa-report") throw FormatError("not a hyperdoa report");
    if (j.value("format_version", -1) != kReportFormatVersion)
      throw VersionError("report format_version mismatch");
    std::vector<MspeReport> out;
    for (const auto& e : j.at("experiments")) {
      MspeReport r;
      r.config = e.at("config");
      r.sample_count = e.at("sample_count").get<std::size_t>();
      for (const auto& row : e.at("records")) {
        ReportRecord rec;
        rec.method = row.at("method").get<std::string>();
        rec.snr_db = row.at("snr_db").get<double>();
        rec.mspe_db = row.at("mspe_db").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                  : row.at("mspe_db").get<double>();
        rec.n_scored = row.at("n_scored").get<std::size_t>();
        rec.n_failed = row.at("n_failed").get<std::size_t>();
        r.records.push_back(std::move(rec));
      }
      out.push_back(std::move(r));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

void export_reports(std::span<const MspeReport> reports, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << to_json(reports).dump(2) << '\n';
  if (!os) throw IoError("write to '" + path + "' failed");
}

std::vector<MspeReport> load_reports(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("report '" + path + "': " + e.what());
  }
  return reports_from_json(j);
}

}  // namespace hyperdoa::eval
