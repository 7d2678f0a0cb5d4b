#pragma once

#include "frem/funcspace.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace frem::baselines {

// Functional Nadaraya-Watson ------------------------------------------------

struct FnwModel
{
  CurveSet curves;
  Eigen::VectorXd responses;
  double bandwidth = 0.0;
};

//! sum K(||x - X_i|| / h) Y_i / sum K(||x - X_i|| / h); EmptyWindow when no
//! curve lies strictly within h.
double fnw_predict(const FnwModel& model, const GridFunction& x);
double fnw_predict(const FnwModel& model, const Eigen::VectorXd& distances);

//! As fnw_predict, but widens h by 1.5 (at most ten times) on an empty
//! window instead of failing immediately.
double fnw_predict_adaptive(const FnwModel& model, const Eigen::VectorXd& distances);

//! Bandwidth by K-fold CV over `candidates`; ties to the smaller bandwidth.
FnwModel fnw_fit(CurveSet curves,
                 Eigen::VectorXd responses,
                 std::span<const double> candidates,
                 std::size_t folds = 10,
                 std::uint64_t seed = 0);

// Functional linear regression on global FPCA scores ------------------------

struct FlrModel
{
  GridFunction mean;
  std::vector<GridFunction> eigenfunctions;
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd slopes;
  double intercept = 0.0;
  std::size_t p = 0;
};

//! Global FPCA with exactly p components, then least squares of Y on the
//! scores with intercept. RankDeficient when p exceeds the usable spectrum.
FlrModel flr_fit_fixed(const CurveSet& curves, const Eigen::VectorXd& responses, std::size_t p);

//! p chosen by K-fold CV over `p_candidates`; ties toward smaller p.
FlrModel flr_fit(const CurveSet& curves,
                 const Eigen::VectorXd& responses,
                 std::span<const std::size_t> p_candidates,
                 std::size_t folds = 10,
                 std::uint64_t seed = 0);

Eigen::VectorXd flr_scores(const FlrModel& model, const GridFunction& x);
double flr_predict(const FlrModel& model, const GridFunction& x);

} // namespace frem::baselines
