#include "frem/bench/simulation.hpp"

#include "frem/bench/pipeline.hpp"
#include "frem/error.hpp"
#include "frem/parallel.hpp"

#include <cmath>

namespace frem::bench {

namespace {

constexpr std::uint64_t kTrainStream = 0x7A11;
constexpr std::uint64_t kTestStream = 0x7E57;
constexpr std::uint64_t kTrainNoise = 0x7A12;
constexpr std::uint64_t kTestNoise = 0x7E58;
constexpr std::uint64_t kTrainResponse = 0x7A13;
constexpr std::uint64_t kTestResponse = 0x7E59;
constexpr std::uint64_t kMethodStream = 0x3E7D;

ManifoldSample
draw(const SimulationConfig& c, std::size_t n, std::uint64_t seed, const GridPtr& grid)
{
  if (c.setting == Setting::Circle)
    return gen_circle_example(n, c.circle_c, c.circle_terms, seed, grid);
  return generate(c.setting, n, seed, grid);
}

double
population_variance(const Eigen::VectorXd& v)
{
  return (v.array() - v.mean()).square().mean();
}

} // namespace

std::uint64_t
replicate_seed(std::uint64_t master_seed, std::size_t replicate) noexcept
{
  return mix_seed(master_seed, replicate);
}

ReplicateData
make_replicate(const SimulationConfig& c, std::size_t n, std::uint64_t seed)
{
  const GridPtr grid = Grid::regular(0.0, 1.0, c.grid_points);
  ReplicateData d;
  d.train = draw(c, n, mix_seed(seed, kTrainStream), grid);
  d.test = draw(c, c.test_size, mix_seed(seed, kTestStream), grid);

  Eigen::MatrixXd pooled_latents(d.train.latents.rows() + d.test.latents.rows(), d.train.latents.cols());
  pooled_latents << d.train.latents, d.test.latents;
  ManifoldSample pooled =
    sample_from_latents(c.setting, std::move(pooled_latents), grid, c.circle_c, c.circle_terms);
  if (c.normalize) {
    const double f = unit_scale_factor(pooled.curves);
    pooled = apply_scale(std::move(pooled), f);
    d.train = apply_scale(std::move(d.train), f);
    d.test = apply_scale(std::move(d.test), f);
  }

  const Eigen::VectorXd pooled_signal =
    response_index(pooled.curves).unaryExpr([](double z) { return response_function(z); });
  const double y_sd = std::sqrt(population_variance(pooled_signal) / c.snr_y);
  d.train_y = draw_responses_with_sd(d.train.curves, y_sd, mix_seed(seed, kTrainResponse));
  d.test_y = draw_responses_with_sd(d.test.curves, y_sd, mix_seed(seed, kTestResponse));

  if (c.m > 0) {
    if (c.design == Design::Fixed) {
      const auto times = design_points(c.m, grid->domain());
      const auto sd = observation_noise_sd(pooled, times, c.snr_x);
      d.train_records = observe_with_sd(d.train, times, sd, mix_seed(seed, kTrainNoise));
      d.test_records = observe_with_sd(d.test, times, sd, mix_seed(seed, kTestNoise));
    } else {
      d.train_records = observe(d.train, c.m, c.snr_x, mix_seed(seed, kTrainNoise), Design::Random);
      d.test_records = observe(d.test, c.m, c.snr_x, mix_seed(seed, kTestNoise), Design::Random);
    }
  }
  return d;
}

EvalReport
run_simulation(const SimulationConfig& config, std::size_t workers)
{
  config.validate();
  const std::size_t reps = config.replicates;
  const std::size_t tasks = config.n.size() * reps;
  std::vector<std::vector<ReplicateResult>> slots(tasks);

  parallel_for(tasks, workers, [&](std::size_t task) {
    const std::size_t n = config.n[task / reps];
    const std::size_t r = task % reps;
    const std::uint64_t seed = replicate_seed(config.master_seed, r);
    const ReplicateData data = make_replicate(config, n, seed);

    CurveSet train = data.train.curves, test = data.test.curves;
    if (config.m > 0) {
      const GridPtr& grid = data.train.curves.grid_ptr();
      train = recover_all(data.train_records, grid, config.recovery);
      test = recover_all(data.test_records, grid, config.recovery);
    }

    for (Method method : config.methods) {
      ReplicateResult res;
      res.method = method;
      res.n = n;
      res.replicate = r;
      res.seed = seed;
      try {
        const MethodOutcome o =
          run_method(method, train, data.train_y.observed, test, config.tuning, mix_seed(seed, kMethodStream));
        res.ok = true;
        res.rmse = rmse(o.predictions, data.test_y.observed);
        res.rmse_signal = rmse(o.predictions, data.test_y.signal);
        res.dim_raw = o.dim_raw;
        res.dim = o.dim;
        res.h_pca = o.h_pca;
        res.h_reg = o.h_reg;
        res.bandwidth = o.bandwidth;
        res.flr_p = o.flr_p;
      } catch (const Error& e) {
        res.ok = false;
        res.error = e.what();
        res.rmse = res.rmse_signal = std::nan("");
      }
      slots[task].push_back(std::move(res));
    }
  });

  EvalReport report;
  report.label = to_string(config.setting);
  report.config_json = to_json(config);
  report.master_seed = config.master_seed;
  for (auto& slot : slots)
    for (auto& r : slot)
      report.results.push_back(std::move(r));
  report.summaries = summarize(report.results);
  return report;
}

} // namespace frem::bench
