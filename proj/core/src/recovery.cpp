#include "frem/recovery.hpp"

#include "frem/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace frem {

void
validate(const DiscreteObservations& obs, std::size_t min_count)
{
  if (obs.times.empty())
    raise(ErrorCode::EmptyObservations, "no observations");
  if (obs.times.size() != obs.values.size())
    raise(ErrorCode::InvalidSettings, "times and values differ in length");
  if (obs.times.size() < min_count)
    raise(ErrorCode::InvalidSettings,
          "need at least " + std::to_string(min_count) + " observations");
  for (std::size_t j = 0; j < obs.times.size(); ++j) {
    if (!std::isfinite(obs.times[j]) || !std::isfinite(obs.values[j]))
      raise(ErrorCode::InvalidSettings,
            "observation " + std::to_string(j) + " is not finite");
  }
}

double
local_linear_at(std::span<const double> times,
                std::span<const double> values,
                double t,
                double bandwidth,
                double ridge,
                std::optional<std::size_t> skip)
{
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, r0 = 0.0, r1 = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (skip && *skip == j)
      continue;
    ++used;
    const double u = (times[j] - t) / bandwidth;
    const double k = kernel_eval(u);
    if (k == 0.0)
      continue;
    const double ku = k * u;
    s0 += k;
    s1 += ku;
    s2 += ku * u;
    r0 += k * values[j];
    r1 += ku * values[j];
  }
  const double norm = 1.0 / (static_cast<double>(used) * bandwidth);
  s0 *= norm;
  s1 *= norm;
  s2 *= norm;
  r0 *= norm;
  r1 *= norm;

  double den = s0 * s2 - s1 * s1;
  if (std::abs(den) < ridge)
    den += ridge;
  return (r0 * s2 - r1 * s1) / den;
}

GridFunction
smooth_curve(const DiscreteObservations& obs, const SmootherSettings& settings)
{
  validate(obs, 1);
  if (!(settings.bandwidth > 0.0) || !std::isfinite(settings.bandwidth))
    raise(ErrorCode::InvalidSettings, "smoother bandwidth must be positive");
  if (!(settings.ridge > 0.0) || !std::isfinite(settings.ridge))
    raise(ErrorCode::InvalidSettings, "smoother ridge must be positive");
  if (!settings.grid)
    raise(ErrorCode::InvalidSettings, "smoother needs an output grid");

  const Grid& grid = *settings.grid;
  Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    out(static_cast<Eigen::Index>(g)) = local_linear_at(
      obs.times, obs.values, grid.point(g), settings.bandwidth, settings.ridge);
  }
  return GridFunction(settings.grid, std::move(out));
}

double
default_bandwidth(std::size_t m, double nu, double scale, Domain domain)
{
  if (m < 4)
    raise(ErrorCode::InvalidSettings, "default bandwidth needs m >= 4");
  if (!(nu > 0.0 && nu <= 2.0))
    raise(ErrorCode::InvalidSettings, "smoothness nu must lie in (0, 2]");
  if (!(scale > 0.0))
    raise(ErrorCode::InvalidSettings, "bandwidth scale must be positive");
  if (!(domain.length() > 0.0))
    raise(ErrorCode::InvalidSettings, "domain must have positive length");
  return scale * domain.length() *
         std::pow(static_cast<double>(m), -1.0 / (2.0 * nu + 1.0));
}

double
loo_error(const DiscreteObservations& obs, double bandwidth, double ridge)
{
  double sse = 0.0;
  for (std::size_t j = 0; j < obs.size(); ++j) {
    const double fit = local_linear_at(
      obs.times, obs.values, obs.times[j], bandwidth, ridge, j);
    const double r = obs.values[j] - fit;
    sse += r * r;
  }
  return sse / static_cast<double>(obs.size());
}

double
cv_bandwidth(const DiscreteObservations& obs, std::span<const double> candidates)
{
  validate(obs, 3);
  if (candidates.empty())
    raise(ErrorCode::InvalidSettings, "no bandwidth candidates");
  for (double h : candidates) {
    if (!(h > 0.0) || !std::isfinite(h))
      raise(ErrorCode::InvalidSettings, "bandwidth candidates must be positive");
  }
  if (candidates.size() == 1)
    return candidates.front();

  // Errors below this floor are indistinguishable from exact reproduction.
  double mean_sq = 0.0;
  for (double v : obs.values)
    mean_sq += v * v;
  mean_sq /= static_cast<double>(obs.size());
  const double tie = 1e-12 * (1.0 + mean_sq);

  const double ridge = default_ridge(obs.size());
  double best_h = 0.0;
  double best_err = std::numeric_limits<double>::infinity();
  for (double h : candidates) {
    const double err = loo_error(obs, h, ridge);
    if (!std::isfinite(err))
      continue;
    const bool better = err < best_err - tie;
    const bool tied_smaller = std::abs(err - best_err) <= tie && h < best_h;
    if (better || tied_smaller) {
      best_err = std::min(err, best_err);
      best_h = h;
    }
  }
  if (!std::isfinite(best_err))
    raise(ErrorCode::InvalidSettings, "no bandwidth candidate gave a finite error");
  return best_h;
}

std::vector<double>
bandwidth_candidates(std::size_t m,
                     Domain domain,
                     double nu,
                     std::size_t count,
                     double spread)
{
  const double center = default_bandwidth(m, nu, 1.0, domain);
  if (count == 1)
    return { center };
  std::vector<double> out(count);
  const double lo = std::log(center / spread);
  const double hi = std::log(center * spread);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = std::exp(lo + (hi - lo) * static_cast<double>(k) /
                             static_cast<double>(count - 1));
  return out;
}

GridFunction
recover_curve(const DiscreteObservations& obs,
              const GridPtr& grid,
              const RecoveryOptions& options,
              Domain domain)
{
  validate(obs);
  double h = 0.0;
  if (options.fixed_bandwidth) {
    h = *options.fixed_bandwidth;
  } else {
    const auto candidates = bandwidth_candidates(obs.size(),
                                                 domain,
                                                 options.nu,
                                                 options.candidate_count,
                                                 options.candidate_spread);
    h = cv_bandwidth(obs, candidates);
  }
  const double ridge = options.ridge.value_or(default_ridge(obs.size()));
  return smooth_curve(obs, { h, ridge, grid });
}

} // namespace frem
