#include "hyperdoa/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "hyperdoa/binary_io.hpp"
#include "hyperdoa/error.hpp"
#include "hyperdoa/rng.hpp"

namespace hyperdoa::dataset {

namespace {
constexpr std::uint64_t kDoaStream = 1;
constexpr std::uint64_t kSnrStream = 2;
}  // namespace

std::string_view to_string(Split s) noexcept { return s == Split::Train ? "train" : "test"; }

void GenerationSpec::validate() const {
  array.validate();
  grid.validate();
  if (m_sources < 1) throw ConfigError("dataset: m_sources must be >= 1");
  if (m_sources >= array.n_antennas)
    throw ConfigError("dataset: m_sources=" + std::to_string(m_sources) + " must be smaller than n_antennas=" +
                      std::to_string(array.n_antennas));
  if (snr_list_db.empty()) throw ConfigError("dataset: snr_list_db must not be empty");
  for (double s : snr_list_db)
    if (!std::isfinite(s)) throw ConfigError("dataset: snr values must be finite");
  if (!(min_separation_deg >= 0.0)) throw ConfigError("dataset: min_separation_deg must be >= 0");
}

Sample generate_sample(const GenerationSpec& spec, std::uint64_t seed, double snr_db) {
  signal::SourceScenario scn;
  scn.doas_deg = signal::sample_doas(mix_seed(seed, kDoaStream), spec.m_sources, spec.min_separation_deg);
  scn.snr_db = snr_db;
  scn.coherent = spec.coherent;
  scn.rng_seed = seed;
  scn.min_separation_deg = spec.min_separation_deg;
  scn.noise_free = spec.noise_free;
  Sample s{seed, snr_db, scn.doas_deg, signal::generate_snapshots(spec.array, scn)};
  return s;
}

Dataset generate_train(const GenerationSpec& spec, std::size_t count, std::uint64_t base_seed) {
  spec.validate();
  const auto [lo, hi] = std::minmax_element(spec.snr_list_db.begin(), spec.snr_list_db.end());
  Dataset ds{spec, Split::Train, base_seed, {}, nlohmann::ordered_json::object()};
  ds.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = base_seed + i;
    Rng snr_rng(mix_seed(seed, kSnrStream));
    const double snr = *lo == *hi ? *lo : snr_rng.uniform(*lo, *hi);
    ds.samples.push_back(generate_sample(spec, seed, snr));
  }
  return ds;
}

Dataset generate_test(const GenerationSpec& spec, std::size_t per_snr, std::uint64_t base_seed) {
  spec.validate();
  Dataset ds{spec, Split::Test, base_seed, {}, nlohmann::ordered_json::object()};
  ds.samples.reserve(per_snr * spec.snr_list_db.size());
  for (std::size_t b = 0; b < spec.snr_list_db.size(); ++b)
    for (std::size_t j = 0; j < per_snr; ++j)
      ds.samples.push_back(generate_sample(spec, base_seed + b * per_snr + j, spec.snr_list_db[b]));
  return ds;
}

void save(const Dataset& ds, const std::string& path) {
  const auto& sp = ds.spec;
  const std::size_t n = sp.array.n_antennas, t = sp.array.n_snapshots, m = sp.m_sources;
  const std::size_t record_bytes = 8 * (2 + m + 2 * n * t);

  nlohmann::ordered_json h;
  h["format"] = "hyperdoa-dataset";
  h["format_version"] = kDatasetFormatVersion;
  h["split"] = std::string(to_string(ds.split));
  h["n_antennas"] = n;
  h["n_snapshots"] = t;
  h["m_sources"] = m;
  h["coherent"] = sp.coherent;
  h["noise_free"] = sp.noise_free;
  h["snr_list_db"] = sp.snr_list_db;
  h["snr_range_db"] = {*std::min_element(sp.snr_list_db.begin(), sp.snr_list_db.end()),
                       *std::max_element(sp.snr_list_db.begin(), sp.snr_list_db.end())};
  h["min_separation_deg"] = sp.min_separation_deg;
  h["grid"] = {{"min_deg", sp.grid.min_deg}, {"max_deg", sp.grid.max_deg}, {"resolution_deg", sp.grid.resolution_deg}};
  h["rng"] = std::string(Rng::kAlgorithm);
  h["base_seed"] = ds.base_seed;
  h["sample_count"] = ds.samples.size();
  h["record"] = "u64 seed, f64 snr_db, M f64 doas_deg, N*T (f64 re, f64 im) row-major; little-endian";
  h["record_bytes"] = record_bytes;
  h["config"] = ds.config_echo;
  h["payload_bytes"] = static_cast<std::uint64_t>(record_bytes * ds.samples.size());

  std::string payload;
  payload.reserve(record_bytes * ds.samples.size());
  for (const auto& s : ds.samples) {
    if (s.doas_deg.size() != m || s.x.n_antennas() != n || s.x.n_snapshots() != t)
      throw ShapeError("dataset save: sample shape does not match header");
    io::append_le_u64(payload, s.seed);
    io::append_le(payload, s.snr_db);
    io::append_le(payload, std::span<const double>(s.doas_deg));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < t; ++c) {
        const auto v = s.x.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        io::append_le(payload, v.real());
        io::append_le(payload, v.imag());
      }
  }
  io::write_container(path, h, payload);
}

Dataset load(const std::string& path) {
  auto c = io::read_container(path, "hyperdoa-dataset", kDatasetFormatVersion);
  const auto& h = c.header;
  Dataset ds;
  try {
    auto& sp = ds.spec;
    const auto split = h.at("split").get<std::string>();
    if (split != "train" && split != "test") throw FormatError("dataset '" + path + "': unknown split '" + split + "'");
    ds.split = split == "train" ? Split::Train : Split::Test;
    sp.array.n_antennas = h.at("n_antennas").get<std::size_t>();
    sp.array.n_snapshots = h.at("n_snapshots").get<std::size_t>();
    sp.m_sources = h.at("m_sources").get<std::size_t>();
    sp.coherent = h.at("coherent").get<bool>();
    sp.noise_free = h.at("noise_free").get<bool>();
    sp.snr_list_db = h.at("snr_list_db").get<std::vector<double>>();
    sp.min_separation_deg = h.at("min_separation_deg").get<double>();
    const auto& g = h.at("grid");
    sp.grid = {g.at("min_deg").get<double>(), g.at("max_deg").get<double>(), g.at("resolution_deg").get<double>()};
    if (h.at("rng").get<std::string>() != Rng::kAlgorithm)
      throw FormatError("dataset '" + path + "': unsupported rng '" + h.at("rng").get<std::string>() + "'");
    ds.base_seed = h.at("base_seed").get<std::uint64_t>();
    ds.config_echo = h.at("config");
    const auto count = h.at("sample_count").get<std::size_t>();
    sp.validate();

    const std::size_t n = sp.array.n_antennas, t = sp.array.n_snapshots, m = sp.m_sources;
    const std::size_t record_bytes = 8 * (2 + m + 2 * n * t);
    if (c.payload.size() != record_bytes * count)
      throw FormatError("dataset '" + path + "': payload size does not match sample_count x record size");
    ds.samples.resize(count);
    const char* p = c.payload.data();
    for (auto& s : ds.samples) {
      s.seed = io::read_le_u64(p);
      s.snr_db = io::read_le_double(p + 8);
      s.doas_deg.resize(m);
      io::read_le(p + 16, s.doas_deg);
      p += 16 + 8 * m;
      s.x.data.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t));
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t col = 0; col < t; ++col, p += 16)
          s.x.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = {io::read_le_double(p),
                                                                                   io::read_le_double(p + 8)};
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("dataset '" + path + "': bad header field: " + e.what());
  }
  return ds;
}

}  // namespace hyperdoa::dataset
