#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperdoa/config.hpp"
#include "hyperdoa/dataset.hpp"
#include "hyperdoa/estimator.hpp"
#include "json.hpp"

// MSPE scoring and experiment orchestration.
namespace hyperdoa::eval {

inline constexpr int kReportFormatVersion = 1;

// Smallest mean squared error reported, so that MSPE in dB stays finite for
// exact estimates: 1e-30 rad^2, i.e. -300 dB.
inline constexpr double kMspeFloor = 1e-30;

// Wrapped difference (a - b) in radians with period 180 degrees, in [-pi/2, pi/2).
[[nodiscard]] double periodic_diff_rad(double a_deg, double b_deg);

// min over assignments of (1/M) sum_i d(est_pi(i), true_i)^2, in rad^2,
// by brute-force permutation search.
[[nodiscard]] double periodic_sq_error(std::span<const double> est_deg, std::span<const double> true_deg);

struct ReportRecord {
  std::string method;
  double snr_db = 0.0;
  double mspe_db = 0.0;  // NaN when nothing was scored
  std::size_t n_scored = 0;
  std::size_t n_failed = 0;
  // In-memory only; never exported, so report files stay reproducible.
  double mean_inference_us = 0.0;

  friend bool operator==(const ReportRecord& a, const ReportRecord& b);
};

struct MspeReport {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::size_t sample_count = 0;
  std::vector<ReportRecord> records;

  [[nodiscard]] const ReportRecord* find(std::string_view method, double snr_db) const;
  friend bool operator==(const MspeReport& a, const MspeReport& b);
};

// Per-sample outcome; nullopt when decoding failed.
struct SampleOutcome {
  double snr_db = 0.0;
  std::optional<double> sq_error;
  double inference_us = 0.0;
};

[[nodiscard]] std::vector<SampleOutcome> score_hdc(const HdcEstimator& est, const dataset::Dataset& test,
                                                   const decoder::DecoderConfig& dec);
[[nodiscard]] std::vector<SampleOutcome> score_music(const dataset::Dataset& test, const decoder::DecoderConfig& dec,
                                                     const AngularGrid& grid,
                                                     const features::SmoothingConfig* smoothing = nullptr);

// Groups outcomes by SNR (first-appearance order).
[[nodiscard]] std::vector<ReportRecord> aggregate(std::string_view method, std::span<const SampleOutcome> outcomes,
                                                  config::FailurePolicy policy);

// Evaluates one method on a test set. HDC methods need est.
[[nodiscard]] std::vector<ReportRecord> evaluate(config::EvalMethod method, const config::ExperimentConfig& cfg,
                                                 const dataset::Dataset& test, const HdcEstimator* est);

// Generates train/test data, fits one model per HDC method on the train
// split, and scores every configured method on the test split.
[[nodiscard]] MspeReport run_experiment(const config::ExperimentConfig& cfg);
[[nodiscard]] std::vector<MspeReport> sweep(std::span<const config::ExperimentConfig> cfgs);

[[nodiscard]] nlohmann::ordered_json to_json(std::span<const MspeReport> reports);
[[nodiscard]] std::vector<MspeReport> reports_from_json(const nlohmann::ordered_json& j);
void export_reports(std::span<const MspeReport> reports, const std::string& path);
[[nodiscard]] std::vector<MspeReport> load_reports(const std::string& path);

}  // namespace hyperdoa::eval
