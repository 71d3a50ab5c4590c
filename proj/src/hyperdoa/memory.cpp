#include "hyperdoa/memory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hyperdoa/binary_io.hpp"
#include "hyperdoa/error.hpp"
#include "hyperdoa/rng.hpp"

namespace hyperdoa::memory {

namespace {

constexpr std::size_t kEncodeBatch = 128;

std::span<const double> interleaved(const hdc::Hypervector& h) {
  return {reinterpret_cast<const double*>(h.values.data()), 2 * h.values.size()};
}

nlohmann::ordered_json grid_to_json(const AngularGrid& g) {
  return {{"min_deg", g.min_deg}, {"max_deg", g.max_deg}, {"resolution_deg", g.resolution_deg}};
}

AngularGrid grid_from_json(const nlohmann::ordered_json& j) {
  AngularGrid g{j.at("min_deg").get<double>(), j.at("max_deg").get<double>(),
                j.at("resolution_deg").get<double>()};
  g.validate();
  return g;
}

}  // namespace

AssociativeMemory::AssociativeMemory(AngularGrid grid, std::size_t dim) : grid_(grid), dim_(dim) {
  grid_.validate();
  if (dim == 0) throw ConfigError("memory: dimension must be >= 1");
  const auto g = grid_.size();
  centroids_ = CentroidMatrix::Zero(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(2 * dim));
  counts_.assign(g, 0);
}

void AssociativeMemory::accumulate(const hdc::Hypervector& h, std::span<const double> labels_deg,
                                   const TrainOptions& opt) {
  if (normalized_) throw StateError("memory: cannot update a finalized memory");
  if (h.dim() != dim_) throw ShapeError("memory: hypervector dim does not match memory dim");
  if (!(opt.eta > 0.0)) throw ConfigError("memory: eta must be > 0");
  const auto hv = interleaved(h);
  for (double label : labels_deg) {
    const std::size_t k = grid_.nearest_index(label);
    double* row = centroids_.data() + k * 2 * dim_;
    double step = opt.eta;
    if (opt.adaptive && counts_[k] != 0) {
      double dot = 0.0, norm_c = 0.0, norm_h = 0.0;
      for (std::size_t d = 0; d < 2 * dim_; ++d) {
        dot += row[d] * hv[d];
        norm_c += row[d] * row[d];
        norm_h += hv[d] * hv[d];
      }
      const double cosine = norm_c > 0.0 ? dot / std::sqrt(norm_c * norm_h) : 0.0;
      step = opt.eta * std::max(0.0, 1.0 - cosine);
    }
    if (step < 0.0) throw std::logic_error("memory: negative update attempted");
    for (std::size_t d = 0; d < 2 * dim_; ++d) row[d] += step * hv[d];
    ++counts_[k];
  }
}

void AssociativeMemory::finalize() {
  if (normalized_) return;
  const double target = std::sqrt(static_cast<double>(dim_));
  for (Eigen::Index k = 0; k < centroids_.rows(); ++k) {
    const double norm = centroids_.row(k).norm();
    if (norm > 0.0) centroids_.row(k) *= target / norm;
  }
  normalized_ = true;
}

hdc::Hypervector AssociativeMemory::centroid_vector(std::size_t k) const {
  const auto row = centroid(k);
  hdc::Hypervector h{std::vector<std::complex<double>>(dim_)};
  for (std::size_t d = 0; d < dim_; ++d) h.values[d] = {row[2 * d], row[2 * d + 1]};
  return h;
}

AssociativeMemory train(std::span<const TrainingSample> samples, const AngularGrid& grid,
                        const hdc::EncoderBasis& basis, const TrainOptions& opt) {
  if (samples.empty()) throw TrainingError("train: empty dataset");
  if (opt.epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (!(opt.eta > 0.0)) throw ConfigError("train: eta must be > 0");
  for (const auto& s : samples)
    for (double label : s.doas_deg) (void)grid.nearest_index(label);

  AssociativeMemory mem(grid, basis.dim());
  std::vector<hdc::Hypervector> batch;
  for (std::size_t epoch = 0; epoch < opt.epochs; ++epoch) {
    for (std::size_t start = 0; start < samples.size(); start += kEncodeBatch) {
      const std::size_t stop = std::min(samples.size(), start + kEncodeBatch);
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(hdc::encode(basis, samples[i].features));
      for (std::size_t i = start; i < stop; ++i) mem.accumulate(batch[i - start], samples[i].doas_deg, opt);
    }
  }
  mem.finalize();
  mem.meta.options = opt;
  mem.meta.sample_count = samples.size();
  mem.meta.encoder = {basis.feature_dim(), basis.dim(), basis.bandwidth(), basis.seed()};
  return mem;
}

PseudoSpectrum query(const AssociativeMemory& mem, const hdc::Hypervector& h) {
  return std::move(query_batch(mem, std::span<const hdc::Hypervector>(&h, 1)).front());
}

std::vector<PseudoSpectrum> query_batch(const AssociativeMemory& mem, std::span<const hdc::Hypervector> hs) {
  if (!mem.finalized()) throw StateError("query: memory has not been finalized");
  const auto two_d = static_cast<Eigen::Index>(2 * mem.dim());
  Eigen::MatrixXd queries(two_d, static_cast<Eigen::Index>(hs.size()));
  for (std::size_t b = 0; b < hs.size(); ++b) {
    if (hs[b].dim() != mem.dim()) throw ShapeError("query: hypervector dim does not match memory dim");
    queries.col(static_cast<Eigen::Index>(b)) = Eigen::Map<const Eigen::VectorXd>(interleaved(hs[b]).data(), two_d);
  }
  const Eigen::MatrixXd scores = (mem.centroids() * queries) / static_cast<double>(mem.dim());
  std::vector<PseudoSpectrum> out(hs.size());
  for (std::size_t b = 0; b < hs.size(); ++b) {
    out[b].grid = mem.grid();
    out[b].scores.resize(mem.size());
    for (std::size_t k = 0; k < mem.size(); ++k)
      out[b].scores[k] = mem.seen(k) ? scores(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b)) : 0.0;
  }
  return out;
}

void save(const AssociativeMemory& mem, const std::string& path) {
  if (!mem.finalized()) throw StateError("save: memory has not been finalized");
  const auto& m = mem.meta;
  nlohmann::ordered_json header;
  header["format"] = "hyperdoa-model";
  header["format_version"] = kModelFormatVersion;
  header["grid"] = grid_to_json(mem.grid());
  header["encoder"] = {{"feature_dim", m.encoder.feature_dim},
                       {"dim", m.encoder.dim},
                       {"bandwidth", m.encoder.bandwidth},
                       {"seed", m.encoder.seed},
                       {"rng", std::string(Rng::kAlgorithm)},
                       {"phase_distribution", "uniform(-pi,pi]"}};
  header["features"] = {{"method", std::string(features::to_string(m.features.method))},
                        {"normalize_r0", m.features.normalize_r0},
                        {"subarray_size", m.features.subarray_size},
                        {"n_antennas", m.n_antennas},
                        {"upper_triangle_order", "row-major"}};
  header["normalizer"] = {{"mean", m.normalizer.mean}, {"std", m.normalizer.std}, {"fitted_on", m.normalizer.fitted_on}};
  header["training"] = {{"eta", m.options.eta},
                        {"epochs", m.options.epochs},
                        {"adaptive", m.options.adaptive},
                        {"sample_count", m.sample_count}};
  std::vector<std::uint64_t> counts(mem.size());
  for (std::size_t k = 0; k < mem.size(); ++k) counts[k] = mem.update_count(k);
  header["update_counts"] = counts;
  header["config"] = m.config_echo;
  header["payload"] = "centroids grid_size x D complex, row-major, interleaved float64 LE";
  header["payload_bytes"] = static_cast<std::uint64_t>(mem.centroids().size() * sizeof(double));

  std::string payload;
  io::append_le(payload, std::span<const double>(mem.centroids().data(), static_cast<std::size_t>(mem.centroids().size())));
  io::write_container(path, header, payload);
}

AssociativeMemory load(const std::string& path) {
  auto c = io::read_container(path, "hyperdoa-model", kModelFormatVersion);
  const auto& h = c.header;
  try {
    const auto grid = grid_from_json(h.at("grid"));
    const auto& enc = h.at("encoder");
    if (enc.at("rng").get<std::string>() != Rng::kAlgorithm)
      throw FormatError("model '" + path + "': unsupported rng '" + enc.at("rng").get<std::string>() + "'");
    AssociativeMemory mem(grid, enc.at("dim").get<std::size_t>());
    auto& m = mem.meta;
    m.encoder = {enc.at("feature_dim").get<std::size_t>(), enc.at("dim").get<std::size_t>(),
                 enc.at("bandwidth").get<double>(), enc.at("seed").get<std::uint64_t>()};
    const auto& feat = h.at("features");
    m.features.method = features::method_from_string(feat.at("method").get<std::string>());
    m.features.normalize_r0 = feat.at("normalize_r0").get<bool>();
    m.features.subarray_size = feat.at("subarray_size").get<std::size_t>();
    m.n_antennas = feat.at("n_antennas").get<std::size_t>();
    const auto& norm = h.at("normalizer");
    m.normalizer.mean = norm.at("mean").get<std::vector<double>>();
    m.normalizer.std = norm.at("std").get<std::vector<double>>();
    m.normalizer.fitted_on = norm.at("fitted_on").get<std::size_t>();
    const auto& tr = h.at("training");
    m.options = {tr.at("eta").get<double>(), tr.at("epochs").get<std::size_t>(), tr.at("adaptive").get<bool>()};
    m.sample_count = tr.at("sample_count").get<std::size_t>();
    m.config_echo = h.at("config");
    const auto counts = h.at("update_counts").get<std::vector<std::uint64_t>>();
    if (counts.size() != mem.size()) throw FormatError("model '" + path + "': update_counts length mismatch");
    mem.counts_ = counts;
    if (c.payload.size() != static_cast<std::size_t>(mem.centroids_.size()) * sizeof(double))
      throw FormatError("model '" + path + "': centroid payload size does not match grid x D");
    io::read_le(c.payload.data(), std::span<double>(mem.centroids_.data(), static_cast<std::size_t>(mem.centroids_.size())));
    mem.normalized_ = true;
    return mem;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("model '" + path + "': bad header field: " + e.what());
  }
}

}  // namespace hyperdoa::memory
