#include "hyperdoa/hyperdoa.h"

#include <chrono>
#include <cstring>
#include <memory>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "hyperdoa/config.hpp"
#include "hyperdoa/dataset.hpp"
#include "hyperdoa/error.hpp"
#include "hyperdoa/estimator.hpp"
#include "hyperdoa/eval.hpp"
#include "hyperdoa/linalg.hpp"
#include "hyperdoa/music.hpp"

struct hdoa_config {
  hyperdoa::config::ConfigDocument doc;
};

struct hdoa_dataset {
  hyperdoa::dataset::Dataset ds;
};

struct hdoa_model {
  hyperdoa::HdcEstimator est;
};

struct hdoa_report {
  std::vector<hyperdoa::eval::MspeReport> reports;
  std::vector<const hyperdoa::eval::ReportRecord*> rows;

  void index() {
    rows.clear();
    for (const auto& r : reports)
      for (const auto& rec : r.records) rows.push_back(&rec);
  }
};

namespace {

thread_local std::string tl_last_error;

hdoa_status fail(hdoa_status s, const std::string& msg) {
  tl_last_error = msg;
  return s;
}

hdoa_status status_for(hyperdoa::ErrorKind k) {
  switch (k) {
    case hyperdoa::ErrorKind::Config: return HDOA_ERR_CONFIG;
    case hyperdoa::ErrorKind::Data: return HDOA_ERR_DATA;
    case hyperdoa::ErrorKind::Numerical: return HDOA_ERR_NUMERICAL;
    case hyperdoa::ErrorKind::State: return HDOA_ERR_STATE;
    case hyperdoa::ErrorKind::Shape: return HDOA_ERR_SHAPE;
  }
  return HDOA_ERR_INTERNAL;
}

template <class F>
hdoa_status guard(F&& f) {
  try {
    tl_last_error.clear();
    f();
    return HDOA_OK;
  } catch (const hyperdoa::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HDOA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HDOA_ERR_INTERNAL, e.what());
  }
}

#define HDOA_REQUIRE(ptr)                                                   \
  do {                                                                      \
    if (!(ptr)) return fail(HDOA_ERR_ARGUMENT, "null argument: " #ptr);     \
  } while (0)

hyperdoa::signal::SnapshotMatrix snapshots_from(const double* x, size_t n, size_t t) {
  if (n == 0 || t == 0) throw hyperdoa::ShapeError("snapshot matrix must be non-empty");
  hyperdoa::signal::SnapshotMatrix m{hyperdoa::linalg::CMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t))};
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < t; ++c) {
      const double* p = x + 2 * (r * t + c);
      m.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {p[0], p[1]};
    }
  return m;
}

hyperdoa::config::ExperimentConfig resolve(const hdoa_config* cfg) {
  return hyperdoa::config::resolve(cfg->doc);
}

nlohmann::ordered_json echo(const hdoa_config* cfg) {
  auto j = cfg->doc.json;
  if (j.is_object() && j.contains("sweep")) {
    auto sweep = j["sweep"];
    j = resolve(cfg).to_json();
    j["sweep"] = sweep;
    return j;
  }
  return resolve(cfg).to_json();
}

void fill_trace(hdoa_inference_trace* out, const hyperdoa::InferenceTrace& t) {
  if (out) *out = {t.features_us, t.encode_us, t.query_us, t.decode_us, t.eig_calls};
}

void copy_out(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (buf && cap > 0) {
    const auto n = std::min(cap - 1, text.size());
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
  }
}

}  // namespace

extern "C" {

const char* hdoa_version(void) { return "1.0.0"; }

const char* hdoa_last_error(void) { return tl_last_error.c_str(); }

const char* hdoa_status_string(hdoa_status status) {
  switch (status) {
    case HDOA_OK: return "ok";
    case HDOA_ERR_CONFIG: return "configuration error";
    case HDOA_ERR_DATA: return "data error";
    case HDOA_ERR_NUMERICAL: return "numerical error";
    case HDOA_ERR_STATE: return "state error";
    case HDOA_ERR_SHAPE: return "shape error";
    case HDOA_ERR_ARGUMENT: return "invalid argument";
    case HDOA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

hdoa_status hdoa_config_create_default(hdoa_config** out) {
  HDOA_REQUIRE(out);
  return guard([&] {
    const auto text = hyperdoa::config::ExperimentConfig{}.to_json().dump(2);
    *out = new hdoa_config{hyperdoa::config::parse_document(text, "defaults")};
  });
}

hdoa_status hdoa_config_load(const char* path, hdoa_config** out) {
  HDOA_REQUIRE(path);
  HDOA_REQUIRE(out);
  return guard([&] {
    auto doc = hyperdoa::config::read_document(path);
    (void)hyperdoa::config::expand_sweep(doc);
    *out = new hdoa_config{std::move(doc)};
  });
}

hdoa_status hdoa_config_parse(const char* json_text, hdoa_config** out) {
  HDOA_REQUIRE(json_text);
  HDOA_REQUIRE(out);
  return guard([&] {
    auto doc = hyperdoa::config::parse_document(json_text, "config");
    (void)hyperdoa::config::expand_sweep(doc);
    *out = new hdoa_config{std::move(doc)};
  });
}

hdoa_status hdoa_config_set(hdoa_config* cfg, const char* assignment) {
  HDOA_REQUIRE(cfg);
  HDOA_REQUIRE(assignment);
  return guard([&] {
    auto updated = cfg->doc;
    hyperdoa::config::apply_override(updated.json, assignment);
    (void)hyperdoa::config::expand_sweep(updated);
    cfg->doc = std::move(updated);
  });
}

hdoa_status hdoa_config_to_json(const hdoa_config* cfg, char* buf, size_t cap, size_t* needed) {
  HDOA_REQUIRE(cfg);
  return guard([&] { copy_out(echo(cfg).dump(2), buf, cap, needed); });
}

hdoa_status hdoa_config_sweep_size(const hdoa_config* cfg, size_t* n) {
  HDOA_REQUIRE(cfg);
  HDOA_REQUIRE(n);
  return guard([&] { *n = hyperdoa::config::expand_sweep(cfg->doc).size(); });
}

void hdoa_config_free(hdoa_config* cfg) { delete cfg; }

hdoa_status hdoa_dataset_generate(const hdoa_config* cfg, hdoa_split split, hdoa_dataset** out) {
  HDOA_REQUIRE(cfg);
  HDOA_REQUIRE(out);
  return guard([&] {
    const auto c = resolve(cfg);
    const auto gen = c.generation_spec();
    auto ds = split == HDOA_SPLIT_TRAIN ? hyperdoa::dataset::generate_train(gen, c.train_size, c.base_seed)
                                        : hyperdoa::dataset::generate_test(gen, c.test_size, c.test_base_seed());
    ds.config_echo = c.to_json();
    *out = new hdoa_dataset{std::move(ds)};
  });
}

hdoa_status hdoa_dataset_load(const char* path, hdoa_dataset** out) {
  HDOA_REQUIRE(path);
  HDOA_REQUIRE(out);
  return guard([&] { *out = new hdoa_dataset{hyperdoa::dataset::load(path)}; });
}

hdoa_status hdoa_dataset_save(const hdoa_dataset* ds, const char* path) {
  HDOA_REQUIRE(ds);
  HDOA_REQUIRE(path);
  return guard([&] { hyperdoa::dataset::save(ds->ds, path); });
}

hdoa_status hdoa_dataset_info(const hdoa_dataset* ds, size_t* n_samples, size_t* n_antennas, size_t* n_snapshots,
                              size_t* m_sources) {
  HDOA_REQUIRE(ds);
  if (n_samples) *n_samples = ds->ds.samples.size();
  if (n_antennas) *n_antennas = ds->ds.spec.array.n_antennas;
  if (n_snapshots) *n_snapshots = ds->ds.spec.array.n_snapshots;
  if (m_sources) *m_sources = ds->ds.spec.m_sources;
  return HDOA_OK;
}

hdoa_status hdoa_dataset_sample(const hdoa_dataset* ds, size_t index, double* doas_out, double* snr_db,
                                double* x_out) {
  HDOA_REQUIRE(ds);
  if (index >= ds->ds.samples.size())
    return fail(HDOA_ERR_ARGUMENT, "sample index " + std::to_string(index) + " out of range");
  const auto& s = ds->ds.samples[index];
  if (doas_out) std::copy(s.doas_deg.begin(), s.doas_deg.end(), doas_out);
  if (snr_db) *snr_db = s.snr_db;
  if (x_out) {
    const auto n = s.x.n_antennas(), t = s.x.n_snapshots();
    for (size_t r = 0; r < n; ++r)
      for (size_t c = 0; c < t; ++c) {
        const auto v = s.x.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        x_out[2 * (r * t + c)] = v.real();
        x_out[2 * (r * t + c) + 1] = v.imag();
      }
  }
  return HDOA_OK;
}

void hdoa_dataset_free(hdoa_dataset* ds) { delete ds; }

hdoa_status hdoa_model_train(const hdoa_config* cfg, const hdoa_dataset* train, hdoa_model** out) {
  HDOA_REQUIRE(cfg);
  HDOA_REQUIRE(train);
  HDOA_REQUIRE(out);
  return guard([&] {
    const auto c = resolve(cfg);
    if (train->ds.spec.array.n_antennas != c.array.n_antennas)
      throw hyperdoa::ShapeError("train: dataset has N=" + std::to_string(train->ds.spec.array.n_antennas) +
                                 " but config has N=" + std::to_string(c.array.n_antennas));
    auto est = hyperdoa::HdcEstimator::fit(train->ds.samples, c.train_spec());
    est.memory().meta.config_echo = c.to_json();
    *out = new hdoa_model{std::move(est)};
  });
}

hdoa_status hdoa_model_load(const char* path, hdoa_model** out) {
  HDOA_REQUIRE(path);
  HDOA_REQUIRE(out);
  return guard([&] { *out = new hdoa_model{hyperdoa::HdcEstimator(hyperdoa::memory::load(path))}; });
}

hdoa_status hdoa_model_save(const hdoa_model* model, const char* path) {
  HDOA_REQUIRE(model);
  HDOA_REQUIRE(path);
  return guard([&] { hyperdoa::memory::save(model->est.memory(), path); });
}

hdoa_status hdoa_model_grid(const hdoa_model* model, double* min_deg, double* resolution_deg, size_t* size) {
  HDOA_REQUIRE(model);
  const auto& g = model->est.memory().grid();
  if (min_deg) *min_deg = g.min_deg;
  if (resolution_deg) *resolution_deg = g.resolution_deg;
  if (size) *size = g.size();
  return HDOA_OK;
}

hdoa_status hdoa_model_spectrum(const hdoa_model* model, const double* x, size_t n_antennas, size_t n_snapshots,
                                double* scores_out) {
  HDOA_REQUIRE(model);
  HDOA_REQUIRE(x);
  HDOA_REQUIRE(scores_out);
  return guard([&] {
    const auto spec = model->est.spectrum(snapshots_from(x, n_antennas, n_snapshots));
    std::copy(spec.scores.begin(), spec.scores.end(), scores_out);
  });
}

hdoa_status hdoa_model_estimate(const hdoa_model* model, const double* x, size_t n_antennas, size_t n_snapshots,
                                size_t n_sources, double min_separation_deg, double* angles_out,
                                hdoa_inference_trace* trace) {
  HDOA_REQUIRE(model);
  HDOA_REQUIRE(x);
  HDOA_REQUIRE(angles_out);
  return guard([&] {
    const auto xs = snapshots_from(x, n_antennas, n_snapshots);
    hyperdoa::InferenceTrace t;
    const auto est = model->est.estimate(xs, {n_sources, min_separation_deg}, &t);
    std::copy(est.angles_deg.begin(), est.angles_deg.end(), angles_out);
    fill_trace(trace, t);
  });
}

hdoa_status hdoa_model_config_json(const hdoa_model* model, char* buf, size_t cap, size_t* needed) {
  HDOA_REQUIRE(model);
  return guard([&] { copy_out(model->est.memory().meta.config_echo.dump(2), buf, cap, needed); });
}

void hdoa_model_free(hdoa_model* model) { delete model; }

hdoa_status hdoa_music_estimate(const hdoa_config* cfg, const double* x, size_t n_antennas, size_t n_snapshots,
                                double* angles_out, hdoa_inference_trace* trace) {
  HDOA_REQUIRE(cfg);
  HDOA_REQUIRE(x);
  HDOA_REQUIRE(angles_out);
  return guard([&] {
    const auto c = resolve(cfg);
    const auto xs = snapshots_from(x, n_antennas, n_snapshots);
    const auto before = hyperdoa::linalg::eig_call_count();
    const auto t0 = std::chrono::steady_clock::now();
    const auto est = hyperdoa::music::music_estimate(xs, c.m_sources, c.grid, c.decoder_config());
    const double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    std::copy(est.angles_deg.begin(), est.angles_deg.end(), angles_out);
    fill_trace(trace, {0.0, 0.0, us, 0.0, hyperdoa::linalg::eig_call_count() - before});
  });
}

hdoa_status hdoa_evaluate(const hdoa_config* cfg, const hdoa_model* model, const hdoa_dataset* test,
                          const char* method, hdoa_report** out) {
  HDOA_REQUIRE(cfg);
  HDOA_REQUIRE(test);
  HDOA_REQUIRE(out);
  return guard([&] {
    auto c = resolve(cfg);
    hyperdoa::config::EvalMethod m;
    if (method) {
      m = hyperdoa::config::eval_method_from_string(method);
    } else {
      if (!model) throw hyperdoa::ConfigError("evaluate: no method given and no model to infer it from");
      m = model->est.memory().meta.features.method == hyperdoa::features::Method::Lag
              ? hyperdoa::config::EvalMethod::HdcLag
              : hyperdoa::config::EvalMethod::HdcSmoothing;
    }
    if (hyperdoa::config::is_hdc(m)) {
      if (!model) throw hyperdoa::ConfigError("evaluate: method " + std::string(hyperdoa::config::to_string(m)) +
                                              " requires a model");
      const auto want = m == hyperdoa::config::EvalMethod::HdcLag ? hyperdoa::features::Method::Lag
                                                                  : hyperdoa::features::Method::SpatialSmoothing;
      if (model->est.memory().meta.features.method != want)
        throw hyperdoa::ConfigError("evaluate: model was trained with " +
                                    std::string(hyperdoa::features::to_string(model->est.memory().meta.features.method)) +
                                    " features");
    }
    if (test->ds.spec.m_sources != c.m_sources)
      throw hyperdoa::ShapeError("evaluate: dataset has M=" + std::to_string(test->ds.spec.m_sources) +
                                 " but config has M=" + std::to_string(c.m_sources));
    c.methods = {m};
    auto h = std::make_unique<hdoa_report>();
    hyperdoa::eval::MspeReport r;
    r.config = c.to_json();
    r.sample_count = test->ds.samples.size();
    r.records = hyperdoa::eval::evaluate(m, c, test->ds, model ? &model->est : nullptr);
    h->reports.push_back(std::move(r));
    h->index();
    *out = h.release();
  });
}

hdoa_status hdoa_run_sweep(const hdoa_config* cfg, hdoa_report** out) {
  HDOA_REQUIRE(cfg);
  HDOA_REQUIRE(out);
  return guard([&] {
    const auto cfgs = hyperdoa::config::expand_sweep(cfg->doc);
    auto h = std::make_unique<hdoa_report>();
    h->reports = hyperdoa::eval::sweep(cfgs);
    h->index();
    *out = h.release();
  });
}

hdoa_status hdoa_report_save(const hdoa_report* report, const char* path) {
  HDOA_REQUIRE(report);
  HDOA_REQUIRE(path);
  return guard([&] { hyperdoa::eval::export_reports(report->reports, path); });
}

hdoa_status hdoa_report_load(const char* path, hdoa_report** out) {
  HDOA_REQUIRE(path);
  HDOA_REQUIRE(out);
  return guard([&] {
    auto h = std::make_unique<hdoa_report>();
    h->reports = hyperdoa::eval::load_reports(path);
    h->index();
    *out = h.release();
  });
}

hdoa_status hdoa_report_size(const hdoa_report* report, size_t* n_rows) {
  HDOA_REQUIRE(report);
  HDOA_REQUIRE(n_rows);
  *n_rows = report->rows.size();
  return HDOA_OK;
}

hdoa_status hdoa_report_row_at(const hdoa_report* report, size_t index, hdoa_report_row* row) {
  HDOA_REQUIRE(report);
  HDOA_REQUIRE(row);
  if (index >= report->rows.size()) return fail(HDOA_ERR_ARGUMENT, "report row index out of range");
  const auto* r = report->rows[index];
  *row = {r->method.c_str(), r->snr_db, r->mspe_db, r->n_scored, r->n_failed, r->mean_inference_us};
  return HDOA_OK;
}

void hdoa_report_free(hdoa_report* report) { delete report; }

hdoa_status hdoa_periodic_sq_error(const double* est_deg, const double* true_deg, size_t m, double* out) {
  HDOA_REQUIRE(out);
  if (m > 0) {
    HDOA_REQUIRE(est_deg);
    HDOA_REQUIRE(true_deg);
  }
  return guard([&] {
    *out = hyperdoa::eval::periodic_sq_error(std::span<const double>(est_deg, m), std::span<const double>(true_deg, m));
  });
}

}  // extern "C"
