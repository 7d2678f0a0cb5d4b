#pragma once

#include "frem/funcspace.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace frem {

struct DimSettings
{
  std::size_t k1 = 10;
  std::size_t k2 = 20;
  //! Regularizer added to every neighbor distance. When unset it is
  //! median(nearest-neighbor distance) / log n, see default_delta().
  std::optional<double> delta;
  //! Average over this many evenly spaced base points instead of all n.
  std::optional<std::size_t> base_points;
};

struct DimEstimate
{
  double raw = 0.0;
  int rounded = 1;
  std::vector<double> per_k;
  double delta = 0.0;
};

//! max(1, nearest integer to raw).
int round_dimension(double raw);

//! Regularized Levina-Bickel MLE at x from its k nearest sample curves.
//! A single exact self-match (zero distance) is dropped.
double dim_mle_at_point(const GridFunction& x,
                        std::span<const GridFunction> sample,
                        std::size_t k,
                        double delta);

//! Same estimator on sorted neighbor distances (self-match already removed).
double dim_mle_from_sorted(std::span<const double> sorted_distances,
                           std::size_t k,
                           double delta);

//! Scale-aware regularizer: median nearest-neighbor distance over log n.
double default_delta(const Eigen::MatrixXd& pairwise_distances);

DimEstimate estimate_dim(const CurveSet& sample, const DimSettings& settings = {});
//! Same estimate from a precomputed pairwise distance matrix.
DimEstimate estimate_dim_from_distances(const Eigen::MatrixXd& pairwise,
                                        const DimSettings& settings = {});
DimEstimate estimate_dim(std::span<const GridFunction> sample,
                         const DimSettings& settings = {});

} // namespace frem
