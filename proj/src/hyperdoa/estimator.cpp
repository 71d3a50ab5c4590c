#include "hyperdoa/estimator.hpp"

#include <chrono>

#include "hyperdoa/error.hpp"
#include "hyperdoa/linalg.hpp"

namespace hyperdoa {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point since) {
  return std::chrono::duration<double, std::micro>(Clock::now() - since).count();
}

}  // namespace

HdcEstimator::HdcEstimator(memory::AssociativeMemory mem)
    : mem_(std::move(mem)), basis_(mem_.meta.encoder.make_basis()) {
  if (!mem_.finalized()) throw StateError("estimator: memory has not been finalized");
  if (mem_.meta.normalizer.dim() != basis_.feature_dim())
    throw ShapeError("estimator: normalizer dim does not match encoder feature dim");
}

HdcEstimator HdcEstimator::fit(std::span<const dataset::Sample> train, const HdcTrainSpec& spec) {
  if (train.empty()) throw TrainingError("fit: empty training set");
  const std::size_t n = train.front().x.n_antennas();
  std::vector<features::FeatureVector> raw;
  raw.reserve(train.size());
  for (const auto& s : train) {
    if (s.x.n_antennas() != n) throw ShapeError("fit: training samples differ in antenna count");
    raw.push_back(features::extract(s.x, spec.features));
  }
  auto normalizer = features::Normalizer::fit(raw);

  std::vector<memory::TrainingSample> samples;
  samples.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i)
    samples.push_back({normalizer.apply(raw[i]), train[i].doas_deg});
  raw.clear();
  raw.shrink_to_fit();

  const hdc::EncoderBasis basis(spec.features.dim(n), spec.dim, spec.bandwidth, spec.encoder_seed);
  auto mem = memory::train(samples, spec.grid, basis, spec.train);
  mem.meta.n_antennas = n;
  mem.meta.features = spec.features;
  mem.meta.normalizer = std::move(normalizer);
  return HdcEstimator(std::move(mem));
}

features::FeatureVector HdcEstimator::features(const signal::SnapshotMatrix& x) const {
  if (x.n_antennas() != mem_.meta.n_antennas)
    throw ShapeError("estimator: snapshot has " + std::to_string(x.n_antennas()) + " antennas, model expects " +
                     std::to_string(mem_.meta.n_antennas));
  return mem_.meta.normalizer.apply(features::extract(x, mem_.meta.features));
}

hdc::Hypervector HdcEstimator::encode(const signal::SnapshotMatrix& x) const {
  return hdc::encode(basis_, features(x));
}

PseudoSpectrum HdcEstimator::spectrum(const signal::SnapshotMatrix& x) const { return memory::query(mem_, encode(x)); }

std::vector<PseudoSpectrum> HdcEstimator::spectra(std::span<const signal::SnapshotMatrix* const> xs) const {
  std::vector<hdc::Hypervector> hs;
  hs.reserve(xs.size());
  for (const auto* x : xs) hs.push_back(encode(*x));
  return memory::query_batch(mem_, hs);
}

decoder::DoaEstimate HdcEstimator::estimate(const signal::SnapshotMatrix& x, const decoder::DecoderConfig& cfg,
                                            InferenceTrace* trace) const {
  const auto eig_before = linalg::eig_call_count();
  auto t0 = Clock::now();
  const auto f = features(x);
  const double t_features = elapsed_us(t0);
  t0 = Clock::now();
  const auto h = hdc::encode(basis_, f);
  const double t_encode = elapsed_us(t0);
  t0 = Clock::now();
  const auto spec = memory::query(mem_, h);
  const double t_query = elapsed_us(t0);
  t0 = Clock::now();
  auto est = decoder::decode(spec, cfg);
  const double t_decode = elapsed_us(t0);
  if (trace) *trace = {t_features, t_encode, t_query, t_decode, linalg::eig_call_count() - eig_before};
  return est;
}

}  // namespace hyperdoa
