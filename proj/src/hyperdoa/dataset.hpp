#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hyperdoa/signal_model.hpp"
#include "hyperdoa/spectrum.hpp"
#include "json.hpp"

// Seeded synthetic datasets and their on-disk format.
//
// File layout: one JSON header line, then per sample
//   u64 seed | f64 snr_db | M x f64 DoA (deg) | N*T x (f64 re, f64 im), row-major
// all little-endian.
namespace hyperdoa::dataset {

inline constexpr int kDatasetFormatVersion = 1;

enum class Split { Train, Test };

struct Sample {
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  std::vector<double> doas_deg;
  signal::SnapshotMatrix x;
};

struct GenerationSpec {
  signal::ArrayConfig array;
  std::size_t m_sources = 3;
  bool coherent = true;
  std::vector<double> snr_list_db{1.0, 3.0, 5.0};
  double min_separation_deg = signal::kDefaultSourceSeparationDeg;
  bool noise_free = false;
  AngularGrid grid;

  void validate() const;
};

struct Dataset {
  GenerationSpec spec;
  Split split = Split::Train;
  std::uint64_t base_seed = 0;
  std::vector<Sample> samples;
  nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();
};

// One sample from its own seed: DoAs, then (train only) SNR, then snapshots,
// each from an independent stream derived from the seed.
[[nodiscard]] Sample generate_sample(const GenerationSpec& spec, std::uint64_t seed, double snr_db);

// Sample i uses seed base_seed + i and an SNR drawn uniformly between the
// smallest and largest entries of snr_list_db.
[[nodiscard]] Dataset generate_train(const GenerationSpec& spec, std::size_t count, std::uint64_t base_seed);

// per_snr samples for each SNR in snr_list_db, in list order; sample j of
// bucket b uses seed base_seed + b*per_snr + j.
[[nodiscard]] Dataset generate_test(const GenerationSpec& spec, std::size_t per_snr, std::uint64_t base_seed);

void save(const Dataset& ds, const std::string& path);
[[nodiscard]] Dataset load(const std::string& path);

[[nodiscard]] std::string_view to_string(Split s) noexcept;

}  // namespace hyperdoa::dataset
