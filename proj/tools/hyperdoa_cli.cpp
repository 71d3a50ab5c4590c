// hyperdoa command-line tool. Talks to the library only through the C API.
//
//   hyperdoa gen-data --config run.json --split train --out train.hdd [key=value ...]
//   hyperdoa train    --config run.json --data train.hdd --out model.hdm
//   hyperdoa eval     --config run.json --data test.hdd --model model.hdm --out report.json
//   hyperdoa eval     --config run.json --data test.hdd --method music --out music.json
//   hyperdoa spectrum --config run.json --model model.hdm --data test.hdd --index 0 --out spec.csv
//   hyperdoa sweep    --config sweep.json --out reports.json
//
// Exit codes: 0 ok, 2 configuration, 3 data, 4 numerical, 5 state, 1 other.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hyperdoa/hyperdoa.h"

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kData = 3, kNumerical = 4, kState = 5 };

int exit_code_for(hdoa_status s) {
  switch (s) {
    case HDOA_OK: return kOk;
    case HDOA_ERR_CONFIG:
    case HDOA_ERR_ARGUMENT: return kConfig;
    case HDOA_ERR_DATA:
    case HDOA_ERR_SHAPE: return kData;
    case HDOA_ERR_NUMERICAL: return kNumerical;
    case HDOA_ERR_STATE: return kState;
    case HDOA_ERR_INTERNAL: return kOther;
  }
  return kOther;
}

struct Failure {
  hdoa_status status;
  std::string message;
};

void check(hdoa_status s, const char* what) {
  if (s != HDOA_OK) throw Failure{s, std::string(what) + ": " + hdoa_status_string(s) + ": " + hdoa_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ConfigPtr = std::unique_ptr<hdoa_config, Deleter<hdoa_config, hdoa_config_free>>;
using DatasetPtr = std::unique_ptr<hdoa_dataset, Deleter<hdoa_dataset, hdoa_dataset_free>>;
using ModelPtr = std::unique_ptr<hdoa_model, Deleter<hdoa_model, hdoa_model_free>>;
using ReportPtr = std::unique_ptr<hdoa_report, Deleter<hdoa_report, hdoa_report_free>>;

ConfigPtr load_config(const std::string& path, const std::vector<std::string>& overrides) {
  hdoa_config* raw = nullptr;
  if (path.empty())
    check(hdoa_config_create_default(&raw), "config");
  else
    check(hdoa_config_load(path.c_str(), &raw), "config");
  ConfigPtr cfg(raw);
  for (const auto& o : overrides) check(hdoa_config_set(cfg.get(), o.c_str()), "override");
  return cfg;
}

std::string config_json(const hdoa_config* cfg) {
  std::size_t needed = 0;
  check(hdoa_config_to_json(cfg, nullptr, 0, &needed), "config");
  std::string text(needed, '\0');
  check(hdoa_config_to_json(cfg, text.data(), text.size(), &needed), "config");
  text.resize(needed - 1);
  return text;
}

std::string model_config_json(const hdoa_model* model) {
  std::size_t needed = 0;
  check(hdoa_model_config_json(model, nullptr, 0, &needed), "model");
  std::string text(needed, '\0');
  check(hdoa_model_config_json(model, text.data(), text.size(), &needed), "model");
  text.resize(needed - 1);
  return text;
}

DatasetPtr load_dataset(const std::string& path) {
  hdoa_dataset* raw = nullptr;
  check(hdoa_dataset_load(path.c_str(), &raw), "dataset");
  return DatasetPtr(raw);
}

ModelPtr load_model(const std::string& path) {
  hdoa_model* raw = nullptr;
  check(hdoa_model_load(path.c_str(), &raw), "model");
  return ModelPtr(raw);
}

void print_report(const hdoa_report* report) {
  std::size_t rows = 0;
  check(hdoa_report_size(report, &rows), "report");
  std::cout << std::left << std::setw(10) << "method" << std::right << std::setw(8) << "snr_db" << std::setw(12)
            << "mspe_db" << std::setw(10) << "scored" << std::setw(8) << "failed" << std::setw(14) << "us/inference"
            << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    hdoa_report_row row{};
    check(hdoa_report_row_at(report, i, &row), "report");
    std::cout << std::left << std::setw(10) << row.method << std::right << std::fixed << std::setprecision(1)
              << std::setw(8) << row.snr_db << std::setprecision(3) << std::setw(12) << row.mspe_db << std::setw(10)
              << row.n_scored << std::setw(8) << row.n_failed << std::setprecision(1) << std::setw(14)
              << row.mean_inference_us << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperdoa: hyperdimensional direction-of-arrival estimation"};
  app.require_subcommand(1);

  std::string config_path, out_path, data_path, model_path, split = "train", method;
  std::size_t index = 0;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON configuration file (defaults when omitted)");
    sub->add_option("overrides", overrides, "key=value configuration overrides");
  };

  auto* gen = app.add_subcommand("gen-data", "Generate a seeded synthetic dataset");
  add_common(gen);
  gen->add_option("--split", split, "train or test")->check(CLI::IsMember({"train", "test"}));
  gen->add_option("-o,--out", out_path, "Output dataset file")->required();

  auto* train = app.add_subcommand("train", "Train an associative-memory model");
  add_common(train);
  train->add_option("-d,--data", data_path, "Training dataset")->required();
  train->add_option("-o,--out", out_path, "Output model file")->required();

  auto* eval = app.add_subcommand("eval", "Score a method on a test dataset");
  add_common(eval);
  eval->add_option("-d,--data", data_path, "Test dataset")->required();
  eval->add_option("-m,--model", model_path, "Trained model (HDC methods)");
  eval->add_option("--method", method, "hdc_lag, hdc_ss, music or music_ss (default: the model's)");
  eval->add_option("-o,--out", out_path, "Output report file")->required();

  auto* spectrum = app.add_subcommand("spectrum", "Export the pseudo-spectrum of one dataset sample");
  add_common(spectrum);
  spectrum->add_option("-m,--model", model_path, "Trained model")->required();
  spectrum->add_option("-d,--data", data_path, "Dataset")->required();
  spectrum->add_option("-i,--index", index, "Sample index");
  spectrum->add_option("-o,--out", out_path, "Output CSV file")->required();

  auto* sweep = app.add_subcommand("sweep", "Run full experiments for every sweep entry");
  add_common(sweep);
  sweep->add_option("-o,--out", out_path, "Output report file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    auto cfg = load_config(config_path, overrides);

    if (gen->parsed()) {
      hdoa_dataset* raw = nullptr;
      check(hdoa_dataset_generate(cfg.get(), split == "train" ? HDOA_SPLIT_TRAIN : HDOA_SPLIT_TEST, &raw),
            "gen-data");
      DatasetPtr ds(raw);
      check(hdoa_dataset_save(ds.get(), out_path.c_str()), "gen-data");
      std::size_t n = 0;
      check(hdoa_dataset_info(ds.get(), &n, nullptr, nullptr, nullptr), "gen-data");
      std::cerr << "wrote " << n << " " << split << " samples to " << out_path << '\n';
    } else if (train->parsed()) {
      auto ds = load_dataset(data_path);
      hdoa_model* raw = nullptr;
      check(hdoa_model_train(cfg.get(), ds.get(), &raw), "train");
      ModelPtr model(raw);
      check(hdoa_model_save(model.get(), out_path.c_str()), "train");
      std::cerr << "wrote model to " << out_path << '\n';
    } else if (eval->parsed()) {
      auto ds = load_dataset(data_path);
      ModelPtr model;
      if (!model_path.empty()) model = load_model(model_path);
      hdoa_report* raw = nullptr;
      check(hdoa_evaluate(cfg.get(), model.get(), ds.get(), method.empty() ? nullptr : method.c_str(), &raw), "eval");
      ReportPtr report(raw);
      check(hdoa_report_save(report.get(), out_path.c_str()), "eval");
      print_report(report.get());
    } else if (spectrum->parsed()) {
      auto model = load_model(model_path);
      auto ds = load_dataset(data_path);
      std::size_t n_samples = 0, n = 0, t = 0, m = 0;
      check(hdoa_dataset_info(ds.get(), &n_samples, &n, &t, &m), "spectrum");
      std::vector<double> x(2 * n * t), doas(m);
      double snr = 0.0;
      check(hdoa_dataset_sample(ds.get(), index, doas.data(), &snr, x.data()), "spectrum");
      double min_deg = 0.0, res = 0.0;
      std::size_t g = 0;
      check(hdoa_model_grid(model.get(), &min_deg, &res, &g), "spectrum");
      std::vector<double> scores(g);
      check(hdoa_model_spectrum(model.get(), x.data(), n, t, scores.data()), "spectrum");

      std::ofstream os(out_path, std::ios::trunc);
      if (!os) throw Failure{HDOA_ERR_DATA, "spectrum: cannot open '" + out_path + "'"};
      std::string echo = model_config_json(model.get());
      for (auto& c : echo)
        if (c == '\n') c = ' ';
      os << "# hyperdoa pseudo-spectrum\n# model: " << model_path << "\n# dataset: " << data_path
         << "\n# sample_index: " << index << "\n# snr_db: " << snr << "\n# true_doas_deg:";
      for (double d : doas) os << ' ' << std::setprecision(17) << d;
      os << "\n# config: " << echo << "\nangle_deg,score\n";
      for (std::size_t k = 0; k < g; ++k)
        os << std::setprecision(10) << min_deg + static_cast<double>(k) * res << ',' << std::setprecision(17)
           << scores[k] << '\n';
      if (!os) throw Failure{HDOA_ERR_DATA, "spectrum: write failed"};
    } else if (sweep->parsed()) {
      hdoa_report* raw = nullptr;
      check(hdoa_run_sweep(cfg.get(), &raw), "sweep");
      ReportPtr report(raw);
      check(hdoa_report_save(report.get(), out_path.c_str()), "sweep");
      print_report(report.get());
    }
  } catch (const Failure& f) {
    std::cerr << "hyperdoa: " << f.message << '\n';
    return exit_code_for(f.status);
  }
  return kOk;
}
