#pragma once

#include "frem/funcspace.hpp"
#include "frem/intrinsic_dim.hpp"
#include "frem/recovery.hpp"
#include "frem/tangent.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace frem {

//! Fitted state of the manifold regression estimator.
struct FremModel
{
  CurveSet curves;
  Eigen::VectorXd responses;
  DimEstimate dim;
  double h_pca = 0.0;
  double h_reg = 0.0;

  //! How discretely observed queries are smoothed before evaluation.
  RecoveryOptions recovery;
  Domain domain;
  TangentOptions tangent;

  void validate() const;
};

struct FitDiagnostics
{
  std::size_t effective_neighbors = 0;
  //! min |R_ii| / max |R_ii| of the weighted design's QR factor.
  double condition_indicator = 0.0;
  bool ridge_applied = false;
  std::size_t tangent_neighbors = 0;
  double h_pca_used = 0.0;
  double h_reg_used = 0.0;
};

struct LocalFit
{
  double value = 0.0;
  FitDiagnostics diagnostics;
};

//! Weighted least squares of y on (1, coords); returns the intercept.
//! Rows with zero weight are ignored. If the weighted design is rank
//! deficient a ridge of 1e-8 * trace is added to the coordinate block.
LocalFit weighted_local_linear(const Eigen::MatrixXd& coords,
                               const Eigen::VectorXd& weights,
                               const Eigen::VectorXd& y);

//! Estimate of g(x): tangent frame at x from curves within h_pca, then a
//! local linear fit on tangent coordinates (centered at x) with weights
//! K(||x - X_i|| / h_reg) / h_reg^d. Both radii widen by 1.5 (at most ten
//! times) when too few curves fall inside.
LocalFit fit_local(const FremModel& model, const GridFunction& x);
LocalFit fit_local(const FremModel& model,
                   const GridFunction& x,
                   const Eigen::VectorXd& distances);

//! Second stage only, with a caller-supplied frame.
LocalFit fit_with_frame(const FremModel& model,
                        const GridFunction& x,
                        const TangentFrame& frame,
                        const Eigen::VectorXd& distances);

struct BandwidthGrid
{
  std::vector<double> h_pca;
  std::vector<double> h_reg;
};

//! `count` log-spaced values between the q_low and q_high quantiles of the
//! pairwise distances, used for both bandwidths.
BandwidthGrid distance_quantile_grid(const Eigen::MatrixXd& pairwise,
                                     std::size_t count = 8,
                                     double q_low = 0.05,
                                     double q_high = 0.5);

struct SelectionOptions
{
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  TangentOptions tangent;
};

struct BandwidthChoice
{
  double h_pca = 0.0;
  double h_reg = 0.0;
  double cv_error = 0.0;
  std::size_t failed_folds = 0;
};

//! Joint K-fold CV over the product grid. Pairs that fail on fewer folds
//! win; then lower error; ties go to the smaller h_reg, then smaller h_pca.
BandwidthChoice select_bandwidths(const CurveSet& curves,
                                  const Eigen::VectorXd& responses,
                                  const DimEstimate& dim,
                                  const BandwidthGrid& grid,
                                  const SelectionOptions& options = {});

struct FremOptions
{
  DimSettings dim;
  std::size_t bandwidth_count = 8;
  double quantile_low = 0.05;
  double quantile_high = 0.5;
  SelectionOptions selection;
  RecoveryOptions recovery;
  Domain domain;
};

//! Dimension estimate, bandwidth grid, CV selection; curves are the
//! already recovered training predictors.
FremModel fit_frem(CurveSet curves, Eigen::VectorXd responses, const FremOptions& options = {});

//! Smooths a discretely observed query with the model's recovery settings
//! and evaluates the fit there.
double predict(const FremModel& model, const DiscreteObservations& query);

} // namespace frem
