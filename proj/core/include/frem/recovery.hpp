#pragma once

#include "frem/funcspace.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace frem {

//! Raw measurement pairs (T_j, X*_j) of one subject.
struct DiscreteObservations
{
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const { return times.size(); }
};

//! Throws EmptyObservations / InvalidSettings for malformed records.
void validate(const DiscreteObservations& obs, std::size_t min_count = 4);

struct SmootherSettings
{
  double bandwidth = 0.0;
  double ridge = 0.0;
  GridPtr grid;
};

//! Ridged local linear estimate of the curve at every grid point. The
//! denominator S0 S2 - S1^2 is floored by `ridge` whenever its magnitude
//! falls below it, so the output is always finite.
GridFunction smooth_curve(const DiscreteObservations& obs,
                          const SmootherSettings& settings);

//! Ridged local linear estimate at a single point, optionally leaving one
//! observation out.
double local_linear_at(std::span<const double> times,
                       std::span<const double> values,
                       double t,
                       double bandwidth,
                       double ridge,
                       std::optional<std::size_t> skip = std::nullopt);

//! scale * |D| * m^(-1 / (2 nu + 1)).
double default_bandwidth(std::size_t m,
                         double nu,
                         double scale,
                         Domain domain = {});

inline double
default_ridge(std::size_t m)
{
  const double md = static_cast<double>(m);
  return 1.0 / (md * md);
}

//! Leave-one-out squared prediction error of the smoother on the pairs.
double loo_error(const DiscreteObservations& obs, double bandwidth, double ridge);

//! Candidate minimizing the leave-one-out error; ties go to the smaller
//! bandwidth.
double cv_bandwidth(const DiscreteObservations& obs,
                    std::span<const double> candidates);

//! `count` log-spaced bandwidths spanning [h0 / spread, h0 * spread] with
//! h0 = default_bandwidth(m, nu, 1, domain).
std::vector<double> bandwidth_candidates(std::size_t m,
                                         Domain domain,
                                         double nu = 2.0,
                                         std::size_t count = 10,
                                         double spread = 4.0);

struct RecoveryOptions
{
  double nu = 2.0;
  std::size_t candidate_count = 10;
  double candidate_spread = 4.0;
  //! Skips cross-validation when set.
  std::optional<double> fixed_bandwidth;
  //! Defaults to m^-2 when unset.
  std::optional<double> ridge;
};

//! Full recovery step: pick the bandwidth by leave-one-out CV over
//! candidates centered at the default order, then smooth onto `grid`.
GridFunction recover_curve(const DiscreteObservations& obs,
                           const GridPtr& grid,
                           const RecoveryOptions& options = {},
                           Domain domain = {});

} // namespace frem
