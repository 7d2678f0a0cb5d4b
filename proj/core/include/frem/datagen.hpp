#pragma once

#include "frem/funcspace.hpp"
#include "frem/recovery.hpp"

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string>
#include <span>
#include <string_view>
#include <vector>

namespace frem {

enum class Setting
{
  So3,
  Klein,
  Mixg,
  Circle
};

std::string to_string(Setting s);
//! Accepts "so3", "klein", "mixg", "circle"; InvalidSettings otherwise.
Setting parse_setting(std::string_view name);
//! True manifold dimension of a setting.
int true_dimension(Setting s);

//! Clean curves together with the latent parameters that generated them.
//! Curves are analytic in t, so they can be evaluated off the grid too.
struct ManifoldSample
{
  Setting setting = Setting::Klein;
  CurveSet curves;
  //! One row per curve: (u, v, w) for so3, (u, v) for klein and mixg
  //! (mixg also stores the circle angle in column 2), (omega) for circle.
  Eigen::MatrixXd latents;
  //! Multiplier applied to every curve by normalize_scale.
  double scale = 1.0;
  //! Circle fixture parameters.
  double circle_c = 2.0;
  std::size_t circle_terms = 1;

  std::size_t size() const { return curves.size(); }
  //! X_i(t) for any t, including the normalization factor.
  double evaluate(std::size_t i, double t) const;
};

struct NoiseSpec
{
  double snr_x = 4.0;
  double snr_y = 2.0;

  void validate() const;
};

//! R(r, theta) = (1 - cos theta) r r^T + cos theta I + sin theta [r]_x.
Eigen::Matrix3d rotation(const Eigen::Vector3d& axis, double theta);
//! R(e3, u) R(e2, v) R(e3, w).
Eigen::Matrix3d so3_matrix(double u, double v, double w);
Eigen::Vector4d klein_coefficients(double u, double v);

//! phi_{2l-1}(t) = cos((2l-1) pi t / 10) / sqrt 5, phi_{2l} the matching
//! sine, for k = 1..8; phi_9(t) = cos(9 pi t / 10) / sqrt 5.
double basis_function(std::size_t k, double t);

//! sqrt 2 cos(2 pi k t) for odd index 2k-1, sqrt 2 sin(2 pi k t) for 2k;
//! orthonormal on [0, 1] and exactly so under the trapezoid rule.
double circle_basis_function(std::size_t index, double t);

GridPtr default_grid();

ManifoldSample gen_so3(std::size_t n, std::uint64_t seed, GridPtr grid = default_grid());
ManifoldSample gen_klein(std::size_t n, std::uint64_t seed, GridPtr grid = default_grid());
ManifoldSample gen_mixg(std::size_t n, std::uint64_t seed, GridPtr grid = default_grid());
ManifoldSample gen_circle_example(std::size_t n,
                                  double c,
                                  std::size_t k_terms,
                                  std::uint64_t seed,
                                  GridPtr grid = default_grid());

//! Curves for explicit latents (one row per curve, layout as in ManifoldSample).
ManifoldSample sample_from_latents(Setting setting,
                                   Eigen::MatrixXd latents,
                                   GridPtr grid = default_grid(),
                                   double circle_c = 2.0,
                                   std::size_t circle_terms = 1);

ManifoldSample generate(Setting setting, std::size_t n, std::uint64_t seed, GridPtr grid = default_grid());

//! 1 / sqrt(mean ||X_i||^2); DegenerateSample if every curve is zero.
double unit_scale_factor(const CurveSet& curves);
ManifoldSample normalize_scale(ManifoldSample sample);
//! Applies an externally computed factor (for example from a pooled sample).
ManifoldSample apply_scale(ManifoldSample sample, double factor);

//! 4 sin(4z) cos(z^2) + 2 Gamma(1 + z/2).
double response_function(double z);
//! Integral of X^2(t) t over the grid; the grid must span [0, 1].
Eigen::VectorXd response_index(const CurveSet& curves);

struct ResponseDraw
{
  Eigen::VectorXd signal;
  Eigen::VectorXd observed;
  double noise_sd = 0.0;
};

//! Signal g(X_i) plus Gaussian noise of variance Var(signal) / snr_y, the
//! variance taken over this sample.
ResponseDraw draw_responses(const CurveSet& curves, double snr_y, std::uint64_t seed);
//! Noise standard deviation supplied by the caller.
ResponseDraw draw_responses_with_sd(const CurveSet& curves, double noise_sd, std::uint64_t seed);
Eigen::VectorXd gen_response(const ManifoldSample& sample, double snr_y, std::uint64_t seed);

enum class Design
{
  Fixed,
  Random
};

//! m equally spaced points over the domain, endpoints included.
std::vector<double> design_points(std::size_t m, Domain domain = {});

//! Per-point noise standard deviations sqrt(Var_pop X(T_j) / snr_x) over the
//! given sample.
std::vector<double> observation_noise_sd(const ManifoldSample& sample,
                                         std::span<const double> times,
                                         double snr_x);

//! Noisy discrete records X_i(T_j) + e_ij. With Design::Random each subject
//! gets its own m sorted uniform times and the noise level at t follows the
//! grid variance linearly interpolated.
std::vector<DiscreteObservations> observe(const ManifoldSample& sample,
                                          std::size_t m,
                                          double snr_x,
                                          std::uint64_t seed,
                                          Design design = Design::Fixed);

//! As observe with fixed design, using given per-point noise levels.
std::vector<DiscreteObservations> observe_with_sd(const ManifoldSample& sample,
                                                  std::span<const double> times,
                                                  std::span<const double> noise_sd,
                                                  std::uint64_t seed);

} // namespace frem
