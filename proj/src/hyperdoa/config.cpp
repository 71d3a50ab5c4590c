#include "hyperdoa/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hyperdoa/error.hpp"

namespace hyperdoa::config {

namespace {

using json = nlohmann::ordered_json;

std::string line_context(std::string_view text, std::string_view origin, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  const auto pos = text.find(needle);
  if (pos == std::string_view::npos) return "command-line override";
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos; ++i)
    if (text[i] == '\n') ++line;
  const auto begin = text.rfind('\n', pos);
  const auto start = begin == std::string_view::npos ? 0 : begin + 1;
  auto end = text.find('\n', pos);
  if (end == std::string_view::npos) end = text.size();
  return std::string(origin) + ":" + std::to_string(line) + ": " + std::string(text.substr(start, end - start));
}


std::uint64_t get_seed(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError("expected a non-negative integer");
}

std::size_t get_count(const json& v) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError("expected a non-negative integer");
  if (v.is_number_integer() && v.get<std::int64_t>() < 0) throw ConfigError("expected a non-negative integer");
  return v.get<std::size_t>();
}

double get_real(const json& v) {
  if (!v.is_number()) throw ConfigError("expected a number");
  return v.get<double>();
}

bool get_bool(const json& v) {
  if (!v.is_boolean()) throw ConfigError("expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v) {
  if (!v.is_string()) throw ConfigError("expected a string");
  return v.get<std::string>();
}

using Setter = std::function<void(ExperimentConfig&, const json&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"n_antennas", [](auto& c, const json& v) { c.array.n_antennas = get_count(v); }},
      {"n_snapshots", [](auto& c, const json& v) { c.array.n_snapshots = get_count(v); }},
      {"m_sources", [](auto& c, const json& v) { c.m_sources = get_count(v); }},
      {"coherent", [](auto& c, const json& v) { c.coherent = get_bool(v); }},
      {"snr_list_db",
       [](auto& c, const json& v) {
         if (v.is_number()) {
           c.snr_list_db = {v.get<double>()};
           return;
         }
         if (!v.is_array()) throw ConfigError("expected an array of numbers");
         c.snr_list_db.clear();
         for (const auto& e : v) c.snr_list_db.push_back(get_real(e));
       }},
      {"train_size", [](auto& c, const json& v) { c.train_size = get_count(v); }},
      {"test_size", [](auto& c, const json& v) { c.test_size = get_count(v); }},
      {"source_min_separation_deg", [](auto& c, const json& v) { c.source_min_separation_deg = get_real(v); }},
      {"noise_free", [](auto& c, const json& v) { c.noise_free = get_bool(v); }},
      {"feature_method",
       [](auto& c, const json& v) { c.feature_method = features::method_from_string(get_string(v)); }},
      {"normalize_r0", [](auto& c, const json& v) { c.normalize_r0 = get_bool(v); }},
      {"subarray_size", [](auto& c, const json& v) { c.subarray_size = get_count(v); }},
      {"dim", [](auto& c, const json& v) { c.dim = get_count(v); }},
      {"bandwidth", [](auto& c, const json& v) { c.bandwidth = get_real(v); }},
      {"encoder_seed", [](auto& c, const json& v) { c.encoder_seed = get_seed(v); }},
      {"grid_min_deg", [](auto& c, const json& v) { c.grid.min_deg = get_real(v); }},
      {"grid_max_deg", [](auto& c, const json& v) { c.grid.max_deg = get_real(v); }},
      {"grid_resolution_deg", [](auto& c, const json& v) { c.grid.resolution_deg = get_real(v); }},
      {"eta", [](auto& c, const json& v) { c.eta = get_real(v); }},
      {"epochs", [](auto& c, const json& v) { c.epochs = get_count(v); }},
      {"adaptive_update", [](auto& c, const json& v) { c.adaptive_update = get_bool(v); }},
      {"min_separation_deg", [](auto& c, const json& v) { c.min_separation_deg = get_real(v); }},
      {"methods",
       [](auto& c, const json& v) {
         if (v.is_string()) {
           c.methods = {eval_method_from_string(v.get<std::string>())};
           return;
         }
         if (!v.is_array()) throw ConfigError("expected an array of method names");
         c.methods.clear();
         for (const auto& e : v) c.methods.push_back(eval_method_from_string(get_string(e)));
       }},
      {"failure_policy",
       [](auto& c, const json& v) {
         const auto s = get_string(v);
         if (s == "exclude")
           c.failure_policy = FailurePolicy::Exclude;
         else if (s == "penalty")
           c.failure_policy = FailurePolicy::Penalty;
         else
           throw ConfigError("expected exclude or penalty");
       }},
      {"base_seed", [](auto& c, const json& v) { c.base_seed = get_seed(v); }},
  };
  return table;
}

}  // namespace

std::string_view to_string(EvalMethod m) noexcept {
  switch (m) {
    case EvalMethod::HdcLag: return "hdc_lag";
    case EvalMethod::HdcSmoothing: return "hdc_ss";
    case EvalMethod::Music: return "music";
    case EvalMethod::MusicSmoothed: return "music_ss";
  }
  return "?";
}

EvalMethod eval_method_from_string(std::string_view s) {
  if (s == "hdc_lag") return EvalMethod::HdcLag;
  if (s == "hdc_ss") return EvalMethod::HdcSmoothing;
  if (s == "music") return EvalMethod::Music;
  if (s == "music_ss") return EvalMethod::MusicSmoothed;
  throw ConfigError("unknown method '" + std::string(s) + "' (expected hdc_lag, hdc_ss, music or music_ss)");
}

bool is_hdc(EvalMethod m) noexcept { return m == EvalMethod::HdcLag || m == EvalMethod::HdcSmoothing; }

void ExperimentConfig::validate() const {
  generation_spec().validate();
  if (test_size == 0) throw ConfigError("config: test_size must be > 0");
  if (train_size < 2) throw ConfigError("config: train_size must be >= 2");
  if (dim == 0) throw ConfigError("config: dim must be >= 1");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw ConfigError("config: bandwidth must be > 0");
  if (!(eta > 0.0)) throw ConfigError("config: eta must be > 0");
  if (epochs < 1) throw ConfigError("config: epochs must be >= 1");
  if (methods.empty()) throw ConfigError("config: methods must not be empty");
  decoder_config().validate();
  (void)features::SmoothingConfig::for_array(array.n_antennas, subarray_size);
  if (source_min_separation_deg * static_cast<double>(m_sources - 1) > 180.0)
    throw ConfigError("config: cannot place m_sources at source_min_separation_deg");
}

json ExperimentConfig::to_json() const {
  json j;
  j["n_antennas"] = array.n_antennas;
  j["n_snapshots"] = array.n_snapshots;
  j["m_sources"] = m_sources;
  j["coherent"] = coherent;
  j["snr_list_db"] = snr_list_db;
  j["train_size"] = train_size;
  j["test_size"] = test_size;
  j["source_min_separation_deg"] = source_min_separation_deg;
  j["noise_free"] = noise_free;
  j["feature_method"] = std::string(features::to_string(feature_method));
  j["normalize_r0"] = normalize_r0;
  j["subarray_size"] = subarray_size;
  j["dim"] = dim;
  j["bandwidth"] = bandwidth;
  j["encoder_seed"] = encoder_seed;
  j["grid_min_deg"] = grid.min_deg;
  j["grid_max_deg"] = grid.max_deg;
  j["grid_resolution_deg"] = grid.resolution_deg;
  j["eta"] = eta;
  j["epochs"] = epochs;
  j["adaptive_update"] = adaptive_update;
  j["min_separation_deg"] = min_separation_deg;
  json ms = json::array();
  for (auto m : methods) ms.push_back(std::string(to_string(m)));
  j["methods"] = ms;
  j["failure_policy"] = failure_policy == FailurePolicy::Exclude ? "exclude" : "penalty";
  j["base_seed"] = base_seed;
  return j;
}

dataset::GenerationSpec ExperimentConfig::generation_spec() const {
  dataset::GenerationSpec g;
  g.array = array;
  g.m_sources = m_sources;
  g.coherent = coherent;
  g.snr_list_db = snr_list_db;
  g.min_separation_deg = source_min_separation_deg;
  g.noise_free = noise_free;
  g.grid = grid;
  return g;
}

HdcTrainSpec ExperimentConfig::train_spec(features::Method method) const {
  HdcTrainSpec s;
  s.features = {method, normalize_r0, subarray_size};
  s.dim = dim;
  s.bandwidth = bandwidth;
  s.encoder_seed = encoder_seed;
  s.train = {eta, epochs, adaptive_update};
  s.grid = grid;
  return s;
}

ExperimentConfig from_json(const json& j, std::string_view source_text, std::string_view origin) {
  if (!j.is_object()) throw ConfigError(std::string(origin) + ": configuration must be a JSON object");
  ExperimentConfig cfg;
  const auto& table = setters();
  for (const auto& [key, value] : j.items()) {
    if (key == "sweep") continue;
    const auto it = table.find(key);
    if (it == table.end())
      throw ConfigError("unknown configuration key '" + key + "' at " + line_context(source_text, origin, key));
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError("invalid value for '" + key + "' at " + line_context(source_text, origin, key) + ": " +
                        e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("invalid value for '" + key + "' at " + line_context(source_text, origin, key) + ": " +
                        e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ConfigDocument parse_document(std::string text, std::string origin) {
  ConfigDocument doc{json::object(), std::move(text), std::move(origin)};
  try {
    doc.json = json::parse(doc.text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(doc.origin + ": " + e.what());
  }
  return doc;
}

ConfigDocument read_document(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_document(ss.str(), path);
}

void apply_override(json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;
  }
  j[key] = value;
}

ExperimentConfig resolve(const ConfigDocument& doc, const std::vector<std::string>& overrides) {
  json j = doc.json;
  for (const auto& o : overrides) apply_override(j, o);
  return from_json(j, doc.text, doc.origin);
}

std::vector<ExperimentConfig> expand_sweep(const ConfigDocument& doc, const std::vector<std::string>& overrides) {
  json base = doc.json;
  for (const auto& o : overrides) apply_override(base, o);
  if (!base.is_object() || !base.contains("sweep")) return {from_json(base, doc.text, doc.origin)};
  const json entries = base["sweep"];
  base.erase("sweep");
  if (!entries.is_array() || entries.empty())
    throw ConfigError("'sweep' at " + line_context(doc.text, doc.origin, "sweep") + " must be a non-empty array");
  std::vector<ExperimentConfig> out;
  for (const auto& entry : entries) {
    if (!entry.is_object()) throw ConfigError("each 'sweep' entry must be an object of overrides");
    json merged = base;
    for (const auto& [k, v] : entry.items()) merged[k] = v;
    out.push_back(from_json(merged, doc.text, doc.origin));
  }
  return out;
}

}  // namespace hyperdoa::config
