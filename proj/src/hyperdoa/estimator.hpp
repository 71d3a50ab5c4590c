#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hyperdoa/dataset.hpp"
#include "hyperdoa/decoder.hpp"
#include "hyperdoa/memory.hpp"

namespace hyperdoa {

// Per-stage wall-clock time of one inference and the number of Hermitian
// eigendecompositions performed while it ran.
struct InferenceTrace {
  double features_us = 0.0;
  double encode_us = 0.0;
  double query_us = 0.0;
  double decode_us = 0.0;
  std::uint64_t eig_calls = 0;

  [[nodiscard]] double total_us() const noexcept { return features_us + encode_us + query_us + decode_us; }
};

struct HdcTrainSpec {
  features::FeatureSpec features;
  std::size_t dim = hdc::kDefaultDim;
  double bandwidth = 0.5;
  std::uint64_t encoder_seed = 0;
  memory::TrainOptions train;
  AngularGrid grid;
};

// Snapshots -> features -> z-score -> FHRR encoding -> associative memory.
class HdcEstimator {
 public:
  explicit HdcEstimator(memory::AssociativeMemory mem);

  // Fits the normalizer on the training samples only, then trains the memory.
  [[nodiscard]] static HdcEstimator fit(std::span<const dataset::Sample> train, const HdcTrainSpec& spec);

  [[nodiscard]] features::FeatureVector features(const signal::SnapshotMatrix& x) const;
  [[nodiscard]] hdc::Hypervector encode(const signal::SnapshotMatrix& x) const;
  [[nodiscard]] PseudoSpectrum spectrum(const signal::SnapshotMatrix& x) const;
  [[nodiscard]] std::vector<PseudoSpectrum> spectra(std::span<const signal::SnapshotMatrix* const> xs) const;
  [[nodiscard]] decoder::DoaEstimate estimate(const signal::SnapshotMatrix& x, const decoder::DecoderConfig& cfg,
                                              InferenceTrace* trace = nullptr) const;

  [[nodiscard]] const memory::AssociativeMemory& memory() const noexcept { return mem_; }
  [[nodiscard]] memory::AssociativeMemory& memory() noexcept { return mem_; }
  [[nodiscard]] const hdc::EncoderBasis& basis() const noexcept { return basis_; }

 private:
  memory::AssociativeMemory mem_;
  hdc::EncoderBasis basis_;
};

}  // namespace hyperdoa
