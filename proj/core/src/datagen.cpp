#include "frem/datagen.hpp"

#include "frem/error.hpp"
#include "frem/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace frem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMixgCenterU = 0.35;
constexpr double kMixgCenterV = 0.65;
constexpr double kMixgRadius = 0.25;

// Stream tags keep latent, response and measurement draws independent.
constexpr std::uint64_t kLatentStream = 0x1A7E;
constexpr std::uint64_t kResponseStream = 0x5E5B;
constexpr std::uint64_t kObserveStream = 0x0B5E;

double
gaussian_density(double t, double mu)
{
  const double z = t - mu;
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
}

double
unscaled_value(const ManifoldSample& s, std::size_t i, double t)
{
  const auto row = static_cast<Eigen::Index>(i);
  switch (s.setting) {
    case Setting::So3: {
      const Eigen::Matrix3d z = so3_matrix(s.latents(row, 0), s.latents(row, 1), s.latents(row, 2));
      double x = 0.0;
      for (std::size_t k = 0; k < 9; ++k)
        x += z.data()[k] * basis_function(k + 1, t);
      return x;
    }
    case Setting::Klein: {
      const Eigen::Vector4d xi = klein_coefficients(s.latents(row, 0), s.latents(row, 1));
      double x = 0.0;
      for (std::size_t k = 0; k < 4; ++k)
        x += xi(static_cast<Eigen::Index>(k)) * basis_function(k + 1, t);
      return x;
    }
    case Setting::Mixg:
      return gaussian_density(t, s.latents(row, 0)) + gaussian_density(t, s.latents(row, 1));
    case Setting::Circle: {
      const double omega = s.latents(row, 0);
      double norm = 0.0;
      for (std::size_t k = 1; k <= s.circle_terms; ++k)
        norm += std::pow(static_cast<double>(k), -2.0 * s.circle_c + 2.0);
      const double root_c = std::sqrt(1.0 / norm);
      double x = 0.0;
      for (std::size_t k = 1; k <= s.circle_terms; ++k) {
        const double kd = static_cast<double>(k);
        const double a = std::pow(kd, -s.circle_c);
        x += a * (std::cos(kd * omega) * circle_basis_function(2 * k - 1, t) +
                  std::sin(kd * omega) * circle_basis_function(2 * k, t));
      }
      return root_c * x;
    }
  }
  return 0.0;
}

Eigen::MatrixXd
draw_latents(Setting setting, std::size_t n, std::uint64_t seed)
{
  const Eigen::Index cols = setting == Setting::So3 || setting == Setting::Mixg ? 3
                            : setting == Setting::Klein                        ? 2
                                                                               : 1;
  Eigen::MatrixXd lat(static_cast<Eigen::Index>(n), cols);
  const std::uint64_t base = mix_seed(seed, kLatentStream);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = make_rng(base, i);
    const auto r = static_cast<Eigen::Index>(i);
    switch (setting) {
      case Setting::So3:
        lat(r, 0) = 2.0 * kPi * unit(rng);
        lat(r, 1) = kPi * unit(rng);
        lat(r, 2) = 2.0 * kPi * unit(rng);
        break;
      case Setting::Klein:
        lat(r, 0) = 2.0 * kPi * unit(rng);
        lat(r, 1) = 2.0 * kPi * unit(rng);
        break;
      case Setting::Mixg: {
        const double a = 2.0 * kPi * unit(rng);
        lat(r, 0) = kMixgCenterU + kMixgRadius * std::cos(a);
        lat(r, 1) = kMixgCenterV + kMixgRadius * std::sin(a);
        lat(r, 2) = a;
        break;
      }
      case Setting::Circle:
        lat(r, 0) = 2.0 * kPi * unit(rng);
        break;
    }
  }
  return lat;
}

double
population_variance(const Eigen::VectorXd& v)
{
  const double mean = v.mean();
  return (v.array() - mean).square().mean();
}

} // namespace

std::string
to_string(Setting s)
{
  switch (s) {
    case Setting::So3:
      return "so3";
    case Setting::Klein:
      return "klein";
    case Setting::Mixg:
      return "mixg";
    case Setting::Circle:
      return "circle";
  }
  return "unknown";
}

Setting
parse_setting(std::string_view name)
{
  if (name == "so3")
    return Setting::So3;
  if (name == "klein")
    return Setting::Klein;
  if (name == "mixg")
    return Setting::Mixg;
  if (name == "circle")
    return Setting::Circle;
  raise(ErrorCode::InvalidSettings, "unknown setting '" + std::string(name) + "'");
}

int
true_dimension(Setting s)
{
  switch (s) {
    case Setting::So3:
      return 3;
    case Setting::Klein:
      return 2;
    case Setting::Mixg:
    case Setting::Circle:
      return 1;
  }
  return 1;
}

double
ManifoldSample::evaluate(std::size_t i, double t) const
{
  return scale * unscaled_value(*this, i, t);
}

void
NoiseSpec::validate() const
{
  if (!(snr_x > 0.0) || !(snr_y > 0.0))
    raise(ErrorCode::InvalidSettings, "signal-to-noise ratios must be positive");
}

Eigen::Matrix3d
rotation(const Eigen::Vector3d& r, double theta)
{
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix3d m;
  m << c, -r(2) * s, r(1) * s,
       r(2) * s, c, -r(0) * s,
       -r(1) * s, r(0) * s, c;
  return (1.0 - c) * r * r.transpose() + m;
}

Eigen::Matrix3d
so3_matrix(double u, double v, double w)
{
  const Eigen::Vector3d e2(0.0, 1.0, 0.0), e3(0.0, 0.0, 1.0);
  return rotation(e3, u) * rotation(e2, v) * rotation(e3, w);
}

Eigen::Vector4d
klein_coefficients(double u, double v)
{
  const double r = 2.0 * std::cos(v) + 1.0;
  return { r * std::cos(u), r * std::sin(u), 2.0 * std::sin(v) * std::cos(0.5 * u),
           2.0 * std::sin(v) * std::sin(0.5 * u) };
}

double
basis_function(std::size_t k, double t)
{
  if (k < 1 || k > 9)
    raise(ErrorCode::InvalidSettings, "basis index must lie in 1..9");
  const double root5 = std::sqrt(5.0);
  if (k == 9)
    return std::cos(9.0 * kPi * t / 10.0) / root5;
  const double freq = static_cast<double>(2 * ((k + 1) / 2) - 1);
  const double arg = freq * kPi * t / 10.0;
  return (k % 2 == 1 ? std::cos(arg) : std::sin(arg)) / root5;
}

double
circle_basis_function(std::size_t index, double t)
{
  if (index < 1)
    raise(ErrorCode::InvalidSettings, "circle basis index starts at 1");
  const double k = static_cast<double>((index + 1) / 2);
  const double arg = 2.0 * kPi * k * t;
  return std::sqrt(2.0) * (index % 2 == 1 ? std::cos(arg) : std::sin(arg));
}

GridPtr
default_grid()
{
  static const GridPtr grid = Grid::regular(0.0, 1.0, 100);
  return grid;
}

ManifoldSample
sample_from_latents(Setting setting,
                    Eigen::MatrixXd latents,
                    GridPtr grid,
                    double circle_c,
                    std::size_t circle_terms)
{
  if (setting == Setting::Circle) {
    if (!(circle_c > 1.5))
      raise(ErrorCode::InvalidSettings, "circle decay exponent c must exceed 1.5");
    if (circle_terms < 1)
      raise(ErrorCode::InvalidSettings, "circle fixture needs at least one term");
  }
  ManifoldSample s;
  s.setting = setting;
  s.latents = std::move(latents);
  s.circle_c = circle_c;
  s.circle_terms = circle_terms;
  const std::size_t n = static_cast<std::size_t>(s.latents.rows());
  const std::size_t g = grid->size();
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(g));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < g; ++j)
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        unscaled_value(s, i, grid->point(j));
  s.curves = CurveSet(std::move(grid), std::move(values));
  return s;
}

ManifoldSample
gen_so3(std::size_t n, std::uint64_t seed, GridPtr grid)
{
  return sample_from_latents(Setting::So3, draw_latents(Setting::So3, n, seed), std::move(grid));
}

ManifoldSample
gen_klein(std::size_t n, std::uint64_t seed, GridPtr grid)
{
  return sample_from_latents(Setting::Klein, draw_latents(Setting::Klein, n, seed), std::move(grid));
}

ManifoldSample
gen_mixg(std::size_t n, std::uint64_t seed, GridPtr grid)
{
  return sample_from_latents(Setting::Mixg, draw_latents(Setting::Mixg, n, seed), std::move(grid));
}

ManifoldSample
gen_circle_example(std::size_t n, double c, std::size_t k_terms, std::uint64_t seed, GridPtr grid)
{
  if (!(c > 1.5))
    raise(ErrorCode::InvalidSettings, "circle decay exponent c must exceed 1.5");
  return sample_from_latents(
    Setting::Circle, draw_latents(Setting::Circle, n, seed), std::move(grid), c, k_terms);
}

ManifoldSample
generate(Setting setting, std::size_t n, std::uint64_t seed, GridPtr grid)
{
  switch (setting) {
    case Setting::So3:
      return gen_so3(n, seed, std::move(grid));
    case Setting::Klein:
      return gen_klein(n, seed, std::move(grid));
    case Setting::Mixg:
      return gen_mixg(n, seed, std::move(grid));
    case Setting::Circle:
      return gen_circle_example(n, 2.0, 12, seed, std::move(grid));
  }
  raise(ErrorCode::InvalidSettings, "unknown setting");
}

double
unit_scale_factor(const CurveSet& curves)
{
  if (curves.empty())
    raise(ErrorCode::DegenerateSample, "cannot normalize an empty sample");
  const double mean_sq = curves.squared_norms().mean();
  if (!(mean_sq > 0.0))
    raise(ErrorCode::DegenerateSample, "every curve is zero");
  return 1.0 / std::sqrt(mean_sq);
}

ManifoldSample
apply_scale(ManifoldSample sample, double factor)
{
  sample.curves = sample.curves.scaled(factor);
  sample.scale *= factor;
  return sample;
}

ManifoldSample
normalize_scale(ManifoldSample sample)
{
  const double f = unit_scale_factor(sample.curves);
  return apply_scale(std::move(sample), f);
}

double
response_function(double z)
{
  return 4.0 * std::sin(4.0 * z) * std::cos(z * z) + 2.0 * std::tgamma(1.0 + 0.5 * z);
}

Eigen::VectorXd
response_index(const CurveSet& curves)
{
  const Grid& g = curves.grid();
  if (std::abs(g.lower()) > 1e-12 || std::abs(g.upper() - 1.0) > 1e-12)
    raise(ErrorCode::InvalidSettings, "response model needs a grid spanning [0, 1]");
  Eigen::VectorXd tw(static_cast<Eigen::Index>(g.size()));
  for (std::size_t j = 0; j < g.size(); ++j)
    tw(static_cast<Eigen::Index>(j)) = g.weights()(static_cast<Eigen::Index>(j)) * g.point(j);
  return curves.values().array().square().matrix() * tw;
}

ResponseDraw
draw_responses_with_sd(const CurveSet& curves, double noise_sd, std::uint64_t seed)
{
  if (!(noise_sd >= 0.0))
    raise(ErrorCode::InvalidSettings, "noise standard deviation must be nonnegative");
  ResponseDraw out;
  out.signal = response_index(curves).unaryExpr([](double z) { return response_function(z); });
  out.noise_sd = noise_sd;
  out.observed = out.signal;
  const std::uint64_t base = mix_seed(seed, kResponseStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < out.observed.size(); ++i) {
    Rng rng = make_rng(base, static_cast<std::uint64_t>(i));
    out.observed(i) += noise_sd * normal(rng);
  }
  return out;
}

ResponseDraw
draw_responses(const CurveSet& curves, double snr_y, std::uint64_t seed)
{
  if (!(snr_y > 0.0))
    raise(ErrorCode::InvalidSettings, "snr_y must be positive");
  const Eigen::VectorXd signal =
    response_index(curves).unaryExpr([](double z) { return response_function(z); });
  const double sd = std::sqrt(population_variance(signal) / snr_y);
  return draw_responses_with_sd(curves, sd, seed);
}

Eigen::VectorXd
gen_response(const ManifoldSample& sample, double snr_y, std::uint64_t seed)
{
  return draw_responses(sample.curves, snr_y, seed).observed;
}

std::vector<double>
design_points(std::size_t m, Domain domain)
{
  if (m < 2)
    raise(ErrorCode::InvalidSettings, "a design needs at least two points");
  std::vector<double> t(m);
  for (std::size_t j = 0; j < m; ++j)
    t[j] = domain.lower + domain.length() * static_cast<double>(j) / static_cast<double>(m - 1);
  t.back() = domain.upper;
  return t;
}

std::vector<double>
observation_noise_sd(const ManifoldSample& sample, std::span<const double> times, double snr_x)
{
  if (!(snr_x > 0.0))
    raise(ErrorCode::InvalidSettings, "snr_x must be positive");
  if (sample.size() == 0)
    raise(ErrorCode::DegenerateSample, "cannot calibrate noise on an empty sample");
  std::vector<double> sd(times.size());
  Eigen::VectorXd col(static_cast<Eigen::Index>(sample.size()));
  for (std::size_t j = 0; j < times.size(); ++j) {
    for (std::size_t i = 0; i < sample.size(); ++i)
      col(static_cast<Eigen::Index>(i)) = sample.evaluate(i, times[j]);
    sd[j] = std::sqrt(population_variance(col) / snr_x);
  }
  return sd;
}

std::vector<DiscreteObservations>
observe_with_sd(const ManifoldSample& sample,
                std::span<const double> times,
                std::span<const double> noise_sd,
                std::uint64_t seed)
{
  if (times.size() != noise_sd.size())
    raise(ErrorCode::InvalidSettings, "one noise level per design point required");
  const std::uint64_t base = mix_seed(seed, kObserveStream);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<DiscreteObservations> out(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    Rng rng = make_rng(base, i);
    auto& o = out[i];
    o.times.assign(times.begin(), times.end());
    o.values.resize(times.size());
    for (std::size_t j = 0; j < times.size(); ++j)
      o.values[j] = sample.evaluate(i, times[j]) + noise_sd[j] * normal(rng);
  }
  return out;
}

std::vector<DiscreteObservations>
observe(const ManifoldSample& sample,
        std::size_t m,
        double snr_x,
        std::uint64_t seed,
        Design design)
{
  if (m < 4)
    raise(ErrorCode::InvalidSettings, "observe needs m >= 4");
  const Domain domain = sample.curves.grid().domain();
  if (design == Design::Fixed) {
    const auto times = design_points(m, domain);
    const auto sd = observation_noise_sd(sample, times, snr_x);
    return observe_with_sd(sample, times, sd, seed);
  }

  const Grid& grid = sample.curves.grid();
  const auto grid_sd = observation_noise_sd(sample, grid.points(), snr_x);
  const auto pts = grid.points();
  auto sd_at = [&](double t) {
    const auto it = std::upper_bound(pts.begin(), pts.end(), t);
    if (it == pts.begin())
      return grid_sd.front();
    if (it == pts.end())
      return grid_sd.back();
    const auto hi = static_cast<std::size_t>(it - pts.begin());
    const double f = (t - pts[hi - 1]) / (pts[hi] - pts[hi - 1]);
    const double var = (1.0 - f) * grid_sd[hi - 1] * grid_sd[hi - 1] + f * grid_sd[hi] * grid_sd[hi];
    return std::sqrt(var);
  };

  const std::uint64_t base = mix_seed(seed, kObserveStream);
  std::uniform_real_distribution<double> unit(domain.lower, domain.upper);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<DiscreteObservations> out(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    Rng rng = make_rng(base, i);
    auto& o = out[i];
    o.times.resize(m);
    for (auto& t : o.times)
      t = unit(rng);
    std::sort(o.times.begin(), o.times.end());
    o.values.resize(m);
    for (std::size_t j = 0; j < m; ++j)
      o.values[j] = sample.evaluate(i, o.times[j]) + sd_at(o.times[j]) * normal(rng);
  }
  return out;
}

} // namespace frem
