#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hyperdoa/features.hpp"
#include "hyperdoa/hdc.hpp"
#include "hyperdoa/spectrum.hpp"
#include "json.hpp"

// Associative memory: one centroid hypervector per grid angle, trained with
// positive-only multi-label updates and queried by dot-product similarity.
namespace hyperdoa::memory {

inline constexpr int kModelFormatVersion = 1;

// Everything needed to regenerate the encoder basis; phases are never stored.
struct EncoderHeader {
  std::size_t feature_dim = 0;
  std::size_t dim = hdc::kDefaultDim;
  double bandwidth = 0.5;
  std::uint64_t seed = 0;

  [[nodiscard]] hdc::EncoderBasis make_basis() const { return {feature_dim, dim, bandwidth, seed}; }
  friend bool operator==(const EncoderHeader&, const EncoderHeader&) = default;
};

struct TrainOptions {
  double eta = 1.0;
  std::size_t epochs = 1;
  // OnlineHD-style step eta*(1 - cos(H_q, C)); off by default.
  bool adaptive = false;
};

struct TrainMeta {
  TrainOptions options;
  std::size_t sample_count = 0;
  EncoderHeader encoder;
  std::size_t n_antennas = 0;
  features::FeatureSpec features;
  features::Normalizer normalizer;
  nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();
};

struct TrainingSample {
  features::FeatureVector features;  // already normalized
  std::vector<double> doas_deg;
};

class AssociativeMemory {
 public:
  using CentroidMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  AssociativeMemory(AngularGrid grid, std::size_t dim);

  // C_theta += step * H for every label theta; step = eta, or eta*(1 - cos)
  // with the adaptive rule. Never subtracts.
  void accumulate(const hdc::Hypervector& h, std::span<const double> labels_deg, const TrainOptions& opt);

  // Scales every updated centroid to Euclidean norm sqrt(D). Repeat calls are
  // no-ops; accumulate() after finalize() is a state error.
  void finalize();

  [[nodiscard]] bool finalized() const noexcept { return normalized_; }
  [[nodiscard]] const AngularGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return counts_.size(); }
  [[nodiscard]] std::uint64_t update_count(std::size_t k) const { return counts_.at(k); }
  [[nodiscard]] bool seen(std::size_t k) const { return counts_.at(k) != 0; }

  // Row k as interleaved (re, im), length 2D.
  [[nodiscard]] std::span<const double> centroid(std::size_t k) const {
    return {centroids_.data() + k * 2 * dim_, 2 * dim_};
  }
  [[nodiscard]] hdc::Hypervector centroid_vector(std::size_t k) const;
  [[nodiscard]] const CentroidMatrix& centroids() const noexcept { return centroids_; }

  TrainMeta meta;

 private:
  friend AssociativeMemory load(const std::string& path);

  AngularGrid grid_;
  std::size_t dim_;
  CentroidMatrix centroids_;
  std::vector<std::uint64_t> counts_;
  bool normalized_ = false;
};

// Sequential in dataset order within each epoch, then finalized.
[[nodiscard]] AssociativeMemory train(std::span<const TrainingSample> samples, const AngularGrid& grid,
                                      const hdc::EncoderBasis& basis, const TrainOptions& opt);

[[nodiscard]] PseudoSpectrum query(const AssociativeMemory& mem, const hdc::Hypervector& h);
[[nodiscard]] std::vector<PseudoSpectrum> query_batch(const AssociativeMemory& mem,
                                                      std::span<const hdc::Hypervector> hs);

void save(const AssociativeMemory& mem, const std::string& path);
[[nodiscard]] AssociativeMemory load(const std::string& path);

}  // namespace hyperdoa::memory
