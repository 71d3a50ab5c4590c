#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hyperdoa/dataset.hpp"
#include "hyperdoa/decoder.hpp"
#include "hyperdoa/estimator.hpp"
#include "json.hpp"

// Experiment configuration: a flat JSON object whose keys mirror the fields
// below, plus key=value overrides from the command line.
namespace hyperdoa::config {

enum class EvalMethod { HdcLag, HdcSmoothing, Music, MusicSmoothed };
enum class FailurePolicy { Exclude, Penalty };

[[nodiscard]] std::string_view to_string(EvalMethod m) noexcept;
[[nodiscard]] EvalMethod eval_method_from_string(std::string_view s);
[[nodiscard]] bool is_hdc(EvalMethod m) noexcept;

// Test seeds start this far above base_seed so that train and test never share
// a seed regardless of train_size.
inline constexpr std::uint64_t kTestSeedOffset = 1ULL << 32;

struct ExperimentConfig {
  signal::ArrayConfig array;
  std::size_t m_sources = 3;
  bool coherent = true;
  std::vector<double> snr_list_db{1.0, 3.0, 5.0};
  std::size_t train_size = 5000;
  std::size_t test_size = 250;  // per SNR
  double source_min_separation_deg = signal::kDefaultSourceSeparationDeg;
  bool noise_free = false;

  features::Method feature_method = features::Method::Lag;
  bool normalize_r0 = true;
  std::size_t subarray_size = 0;  // 0: N - 3

  std::size_t dim = hdc::kDefaultDim;
  double bandwidth = 0.5;
  std::uint64_t encoder_seed = 7;

  AngularGrid grid;
  double eta = 1.0;
  std::size_t epochs = 1;
  bool adaptive_update = false;

  double min_separation_deg = decoder::kDefaultMinSeparationDeg;

  std::vector<EvalMethod> methods{EvalMethod::HdcLag, EvalMethod::HdcSmoothing, EvalMethod::Music};
  FailurePolicy failure_policy = FailurePolicy::Exclude;
  std::uint64_t base_seed = 1;

  void validate() const;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
  [[nodiscard]] dataset::GenerationSpec generation_spec() const;
  [[nodiscard]] HdcTrainSpec train_spec(features::Method method) const;
  [[nodiscard]] HdcTrainSpec train_spec() const { return train_spec(feature_method); }
  [[nodiscard]] decoder::DecoderConfig decoder_config() const { return {m_sources, min_separation_deg}; }
  [[nodiscard]] std::uint64_t test_base_seed() const noexcept { return base_seed + kTestSeedOffset; }
};

// Parses a config object. Unknown keys and type errors are reported with the
// line on which the key appears in source_text, when available. The "sweep"
// key is ignored here (see expand_sweep).
[[nodiscard]] ExperimentConfig from_json(const nlohmann::ordered_json& j, std::string_view source_text = {},
                                         std::string_view origin = "config");

struct ConfigDocument {
  nlohmann::ordered_json json;
  std::string text;
  std::string origin;
};

[[nodiscard]] ConfigDocument read_document(const std::string& path);
[[nodiscard]] ConfigDocument parse_document(std::string text, std::string origin = "config");

// "key=value": value is parsed as JSON when possible, otherwise kept as a string.
void apply_override(nlohmann::ordered_json& j, std::string_view assignment);

[[nodiscard]] ExperimentConfig resolve(const ConfigDocument& doc, const std::vector<std::string>& overrides = {});

// One config per entry of the optional "sweep" array (each entry an object of
// overrides on top of the base keys); a document without "sweep" yields one.
[[nodiscard]] std::vector<ExperimentConfig> expand_sweep(const ConfigDocument& doc,
                                                         const std::vector<std::string>& overrides = {});

}  // namespace hyperdoa::config
