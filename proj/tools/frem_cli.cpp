// frem: simulation, rate-study, real-data and model fit/predict front end.

#include "frem/bench/config.hpp"
#include "frem/bench/dataset.hpp"
#include "frem/bench/holdout.hpp"
#include "frem/bench/rate_study.hpp"
#include "frem/bench/report.hpp"
#include "frem/bench/simulation.hpp"
#include "frem/error.hpp"
#include "frem/estimator.hpp"
#include "frem/intrinsic_dim.hpp"
#include "frem/parallel.hpp"
#include "frem/serialize.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace frem;
using namespace frem::bench;
using nlohmann::json;

constexpr int kExitError = 2;
constexpr int kExitFailures = 3;

int
report_error(const std::string& code, const std::string& message, int exit_code = kExitError)
{
  const json j = { { "error", { { "code", code }, { "message", message } } } };
  std::cerr << j.dump() << '\n';
  return exit_code;
}

std::vector<Method>
parse_methods(const std::string& list)
{
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(parse_method(item));
  if (out.empty())
    raise(ErrorCode::InvalidSettings, "no methods given");
  return out;
}

std::vector<DiscreteObservations>
rows_as_observations(const Dataset& data)
{
  std::vector<DiscreteObservations> out(data.curves.size());
  const auto pts = data.curves.grid().points();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].times.assign(pts.begin(), pts.end());
    const Eigen::VectorXd row = data.curves.values().row(static_cast<Eigen::Index>(i)).transpose();
    out[i].values.assign(row.data(), row.data() + row.size());
  }
  return out;
}

struct Common
{
  std::optional<std::size_t> workers;

  std::size_t resolved_workers() const { return workers ? *workers : default_workers(); }
};

int
cmd_simulate(const std::string& config_path,
             const std::string& out_dir,
             const std::string& prefix,
             bool wall_time,
             const Common& common)
{
  const SimulationConfig config = parse_simulation_config(read_text_file(config_path));
  const auto start = std::chrono::steady_clock::now();
  EvalReport report = run_simulation(config, common.resolved_workers());
  if (wall_time)
    report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_report(report, out_dir, prefix.empty() ? report.label : prefix);
  std::cout << summary_csv(report);
  try {
    check_failure_rate(report);
  } catch (const Error& e) {
    return report_error(std::string(to_string(e.code())), e.message(), kExitFailures);
  }
  return 0;
}

int
cmd_rate_study(const std::string& config_path, const std::string& out_dir, const Common& common)
{
  const RateStudyConfig config = parse_rate_study_config(read_text_file(config_path));
  const RateReport report = rate_study(config, common.resolved_workers());
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
      raise(ErrorCode::IoError, "cannot create " + out_dir);
    const std::filesystem::path dir(out_dir);
    write_text_file(dir / ("rate_" + report.label + ".csv"), rate_csv(report));
    write_text_file(dir / ("rate_" + report.label + ".json"), rate_json(report));
  }
  std::cout << rate_json(report);
  return 0;
}

int
cmd_real(const std::string& data_path,
         const std::string& preprocess,
         std::size_t repeats,
         double split,
         std::uint64_t seed,
         const std::string& methods,
         const std::string& out_dir,
         const Common& common)
{
  const Dataset data = load_dataset(data_path, parse_preprocess(preprocess));
  HoldoutConfig config;
  config.repeats = repeats;
  config.split = split;
  config.master_seed = seed;
  config.methods = parse_methods(methods);
  const EvalReport report = holdout_eval(data, config, common.resolved_workers());
  if (!out_dir.empty())
    write_report(report, out_dir, "real_" + report.label);
  std::cout << summary_csv(report);
  try {
    check_failure_rate(report);
  } catch (const Error& e) {
    return report_error(std::string(to_string(e.code())), e.message(), kExitFailures);
  }
  return 0;
}

int
cmd_fit(const std::string& data_path,
        const std::string& preprocess,
        const std::string& model_path,
        bool smooth,
        std::uint64_t seed,
        const Common& common)
{
  const Dataset data = load_dataset(data_path, parse_preprocess(preprocess));
  FremOptions opts;
  opts.selection.seed = seed;
  opts.selection.workers = common.resolved_workers();
  opts.domain = data.curves.grid().domain();
  CurveSet curves = data.curves;
  if (smooth) {
    const auto records = rows_as_observations(data);
    Eigen::MatrixXd values(static_cast<Eigen::Index>(records.size()),
                           static_cast<Eigen::Index>(curves.grid().size()));
    for (std::size_t i = 0; i < records.size(); ++i)
      values.row(static_cast<Eigen::Index>(i)) =
        recover_curve(records[i], curves.grid_ptr(), opts.recovery, opts.domain).values().transpose();
    curves = CurveSet(curves.grid_ptr(), std::move(values));
  }
  const FremModel model = fit_frem(std::move(curves), data.responses, opts);
  save_model(model, model_path);
  const json summary = { { "model", model_path },
                         { "n", model.curves.size() },
                         { "dim_raw", model.dim.raw },
                         { "dim", model.dim.rounded },
                         { "h_pca", model.h_pca },
                         { "h_reg", model.h_reg } };
  std::cout << summary.dump(1) << '\n';
  return 0;
}

int
cmd_predict(const std::string& model_path,
            const std::string& data_path,
            const std::string& preprocess,
            bool smooth)
{
  const FremModel model = load_model(model_path);
  const Dataset data = load_dataset(data_path, parse_preprocess(preprocess));
  std::cout << "row,prediction,response\n";
  const auto records = rows_as_observations(data);
  for (std::size_t i = 0; i < records.size(); ++i) {
    double value = 0.0;
    if (smooth) {
      value = predict(model, records[i]);
    } else {
      const GridFunction x(model.curves.grid_ptr(),
                           data.curves.values().row(static_cast<Eigen::Index>(i)).transpose());
      require_same_grid(x, model.curves.curve(0));
      value = fit_local(model, x).value;
    }
    std::cout << i << ',' << format_double(value) << ','
              << format_double(data.responses(static_cast<Eigen::Index>(i))) << '\n';
  }
  return 0;
}

int
cmd_dim(const std::string& data_path, const std::string& preprocess, std::size_t k1, std::size_t k2)
{
  const Dataset data = load_dataset(data_path, parse_preprocess(preprocess));
  DimSettings settings;
  settings.k1 = k1;
  settings.k2 = k2;
  const DimEstimate est = estimate_dim(data.curves, settings);
  const json j = { { "n", data.curves.size() },
                   { "raw", est.raw },
                   { "rounded", est.rounded },
                   { "delta", est.delta },
                   { "per_k", est.per_k } };
  std::cout << j.dump(1) << '\n';
  return 0;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Functional regression on manifolds: simulations, rate studies, real data" };
  app.require_subcommand(1);
  Common common;
  app.add_option("--workers", common.workers, "Worker threads (default: FREM_WORKERS or 1)")
    ->check(CLI::PositiveNumber);

  std::string config_path, out_dir = "results", prefix, data_path, preprocess = "none",
                           model_path, methods = "frem,fnw,flr";
  bool wall_time = false, smooth = false, no_smooth = false;
  std::size_t repeats = 20, k1 = 10, k2 = 20;
  double split = 0.75;
  std::uint64_t seed = 0;

  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation study");
  sim->add_option("--config", config_path, "JSON simulation config")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out_dir, "Output directory");
  sim->add_option("--prefix", prefix, "File prefix (default: setting name)");
  sim->add_flag("--wall-time", wall_time, "Record wall time in the metadata file");

  auto* rate = app.add_subcommand("rate-study", "Convergence-rate study");
  std::string rate_out;
  rate->add_option("--config", config_path, "JSON rate-study config")->required()->check(CLI::ExistingFile);
  rate->add_option("--out", rate_out, "Output directory (optional)");

  auto* real = app.add_subcommand("real", "Holdout evaluation on a CSV dataset");
  std::string real_out;
  real->add_option("--data", data_path, "CSV dataset")->required()->check(CLI::ExistingFile);
  real->add_option("--preprocess", preprocess, "none | difference-quotient");
  real->add_option("--repeats", repeats, "Random 75/25 partitions")->check(CLI::PositiveNumber);
  real->add_option("--split", split, "Training fraction");
  real->add_option("--seed", seed, "Master seed");
  real->add_option("--methods", methods, "Comma-separated subset of frem,fnw,flr");
  real->add_option("--out", real_out, "Output directory (optional)");

  auto* fit = app.add_subcommand("fit", "Fit a model on a CSV dataset and save it");
  fit->add_option("--data", data_path, "CSV dataset")->required()->check(CLI::ExistingFile);
  fit->add_option("--preprocess", preprocess, "none | difference-quotient");
  fit->add_option("--model", model_path, "Output model file")->required();
  fit->add_option("--seed", seed, "Fold seed");
  fit->add_flag("--smooth", smooth, "Smooth each row before fitting");

  auto* pred = app.add_subcommand("predict", "Predict responses with a saved model");
  pred->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
  pred->add_option("--data", data_path, "CSV of query curves")->required()->check(CLI::ExistingFile);
  pred->add_option("--preprocess", preprocess, "none | difference-quotient");
  pred->add_flag("--no-smooth", no_smooth, "Evaluate rows directly on the model grid");

  auto* dim = app.add_subcommand("dim", "Estimate the intrinsic dimension of a CSV dataset");
  dim->add_option("--data", data_path, "CSV dataset")->required()->check(CLI::ExistingFile);
  dim->add_option("--preprocess", preprocess, "none | difference-quotient");
  dim->add_option("--k1", k1, "Smallest neighbor count");
  dim->add_option("--k2", k2, "Largest neighbor count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    return report_error("UsageError", e.what());
  }

  try {
    if (*sim)
      return cmd_simulate(config_path, out_dir, prefix, wall_time, common);
    if (*rate)
      return cmd_rate_study(config_path, rate_out, common);
    if (*real)
      return cmd_real(data_path, preprocess, repeats, split, seed, methods, real_out, common);
    if (*fit)
      return cmd_fit(data_path, preprocess, model_path, smooth, seed, common);
    if (*pred)
      return cmd_predict(model_path, data_path, preprocess, !no_smooth);
    if (*dim)
      return cmd_dim(data_path, preprocess, k1, k2);
  } catch (const Error& e) {
    return report_error(std::string(to_string(e.code())), e.message());
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what());
  }
  return 0;
}
