#include "frem/bench/rate_study.hpp"

#include "frem/bench/simulation.hpp"
#include "frem/error.hpp"
#include "frem/parallel.hpp"
#include "frem/recovery.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>
#include <sstream>

namespace frem::bench {

namespace {

constexpr std::uint64_t kBootstrapStream = 0xB007;
constexpr std::uint64_t kRecoveryNoise = 0x2EC0;

double
mean_of(const std::vector<double>& v)
{
  double s = 0.0;
  for (double x : v)
    s += x;
  return s / static_cast<double>(v.size());
}

void
finish_point(RatePoint& p)
{
  p.mean = mean_of(p.values);
  double ss = 0.0;
  for (double v : p.values)
    ss += (v - p.mean) * (v - p.mean);
  const double k = static_cast<double>(p.values.size());
  p.se = p.values.size() > 1 ? std::sqrt(ss / (k - 1.0)) / std::sqrt(k) : 0.0;
}

RateReport
recovery_study(const RateStudyConfig& c, std::size_t workers)
{
  const GridPtr grid = Grid::regular(0.0, 1.0, c.grid_points);
  const GridFunction truth =
    GridFunction::evaluate(grid, [](double t) { return std::sin(2.0 * std::numbers::pi * t); });
  const double mean = truth.values().dot(grid->weights()) / grid->domain().length();
  const double second = truth.values().array().square().matrix().dot(grid->weights()) / grid->domain().length();
  const double noise_sd = std::sqrt((second - mean * mean) / c.snr_x);

  RecoveryOptions opts;
  opts.nu = c.nu;

  const std::size_t reps = c.replicates;
  std::vector<double> errors(c.abscissae.size() * reps);
  parallel_for(errors.size(), workers, [&](std::size_t task) {
    const std::size_t m = c.abscissae[task / reps];
    const std::size_t r = task % reps;
    Rng rng = make_rng(mix_seed(replicate_seed(c.master_seed, r), kRecoveryNoise), m);
    std::normal_distribution<double> normal(0.0, noise_sd);
    DiscreteObservations obs;
    obs.times.resize(m);
    obs.values.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(m - 1);
      obs.times[j] = t;
      obs.values[j] = std::sin(2.0 * std::numbers::pi * t) + normal(rng);
    }
    errors[task] = l2_distance(recover_curve(obs, grid, opts, grid->domain()), truth);
  });

  RateReport report;
  report.mode = RateMode::Recovery;
  report.label = "recovery-sin";
  for (std::size_t a = 0; a < c.abscissae.size(); ++a) {
    RatePoint p;
    p.x = c.abscissae[a];
    p.values.assign(errors.begin() + static_cast<std::ptrdiff_t>(a * reps),
                    errors.begin() + static_cast<std::ptrdiff_t>((a + 1) * reps));
    finish_point(p);
    report.points.push_back(std::move(p));
  }
  report.expected_slope = -c.nu / (2.0 * c.nu + 1.0);
  return report;
}

RateReport
regression_study(const RateStudyConfig& c, std::size_t workers)
{
  SimulationConfig sim = c.simulation;
  sim.n = c.abscissae;
  sim.methods = { c.method };
  const EvalReport eval = run_simulation(sim, workers);

  RateReport report;
  report.mode = RateMode::Regression;
  report.label = to_string(sim.setting) + "-" + to_string(c.method);
  for (std::size_t n : c.abscissae) {
    RatePoint p;
    p.x = n;
    for (const auto& r : eval.results) {
      if (r.n != n)
        continue;
      if (!r.ok) {
        ++report.failed;
        continue;
      }
      p.values.push_back(c.target == "rmse" ? r.rmse : r.rmse_signal);
    }
    if (p.values.empty())
      raise(ErrorCode::TooManyFailures, "every replicate failed at n=" + std::to_string(n));
    finish_point(p);
    report.points.push_back(std::move(p));
  }
  report.expected_slope = -2.0 / (static_cast<double>(true_dimension(sim.setting)) + 4.0);
  return report;
}

} // namespace

double
log_log_slope(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size() || x.size() < 2)
    raise(ErrorCode::InvalidSettings, "slope needs at least two paired points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (!(sxx > 0.0))
    raise(ErrorCode::InvalidSettings, "slope needs distinct abscissae");
  return sxy / sxx;
}

void
fit_rate(RateReport& report, std::size_t bootstrap, std::uint64_t seed)
{
  std::vector<double> xs, ys;
  for (const auto& p : report.points) {
    xs.push_back(static_cast<double>(p.x));
    ys.push_back(p.mean);
  }
  report.slope = log_log_slope(xs, ys);

  Rng rng = make_rng(seed, kBootstrapStream);
  std::vector<double> slopes;
  slopes.reserve(bootstrap);
  std::vector<double> boot(ys.size());
  for (std::size_t b = 0; b < bootstrap; ++b) {
    for (std::size_t a = 0; a < report.points.size(); ++a) {
      const auto& vals = report.points[a].values;
      std::uniform_int_distribution<std::size_t> pick(0, vals.size() - 1);
      double s = 0.0;
      for (std::size_t k = 0; k < vals.size(); ++k)
        s += vals[pick(rng)];
      boot[a] = s / static_cast<double>(vals.size());
    }
    slopes.push_back(log_log_slope(xs, boot));
  }
  const double mb = mean_of(slopes);
  double ss = 0.0;
  for (double s : slopes)
    ss += (s - mb) * (s - mb);
  report.slope_se = slopes.size() > 1 ? std::sqrt(ss / static_cast<double>(slopes.size() - 1)) : 0.0;
}

RateReport
rate_study(const RateStudyConfig& config, std::size_t workers)
{
  config.validate();
  RateReport report = config.mode == RateMode::Recovery ? recovery_study(config, workers)
                                                        : regression_study(config, workers);
  report.config_json = to_json(config);
  const std::uint64_t seed =
    config.mode == RateMode::Recovery ? config.master_seed : config.simulation.master_seed;
  fit_rate(report, config.bootstrap, seed);
  return report;
}

std::string
rate_csv(const RateReport& report)
{
  std::ostringstream os;
  os << "label,x,replicates,mean,se\n";
  for (const auto& p : report.points)
    os << report.label << ',' << p.x << ',' << p.values.size() << ',' << format_double(p.mean)
       << ',' << format_double(p.se) << '\n';
  return os.str();
}

std::string
rate_json(const RateReport& report)
{
  nlohmann::json j;
  j["label"] = report.label;
  j["mode"] = report.mode == RateMode::Recovery ? "recovery" : "regression";
  j["slope"] = report.slope;
  j["slope_se"] = report.slope_se;
  j["expected_slope"] = report.expected_slope ? nlohmann::json(*report.expected_slope) : nlohmann::json(nullptr);
  j["failed_replicates"] = report.failed;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : report.points)
    pts.push_back({ { "x", p.x }, { "mean", p.mean }, { "se", p.se }, { "replicates", p.values.size() } });
  j["points"] = std::move(pts);
  try {
    j["config"] = nlohmann::json::parse(report.config_json);
  } catch (const nlohmann::json::parse_error&) {
    j["config"] = nullptr;
  }
  return j.dump(1) + "\n";
}

} // namespace frem::bench
