#pragma once

#include "frem/bench/config.hpp"
#include "frem/funcspace.hpp"
#include "frem/recovery.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace frem::bench {

struct MethodOutcome
{
  Eigen::VectorXd predictions;
  double dim_raw = 0.0;
  int dim = 0;
  double h_pca = 0.0;
  double h_reg = 0.0;
  double bandwidth = 0.0;
  std::size_t flr_p = 0;
};

//! Smooths every record onto `grid`.
CurveSet recover_all(std::span<const DiscreteObservations> records,
                     const GridPtr& grid,
                     const RecoveryOptions& options);

//! Fits one method on (train, y) with the shared tuning grids and predicts
//! each test curve. FNW predictions widen an empty window rather than fail.
MethodOutcome run_method(Method method,
                         const CurveSet& train,
                         const Eigen::VectorXd& y,
                         const CurveSet& test,
                         const TuningGrids& tuning,
                         std::uint64_t seed);

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& target);

} // namespace frem::bench
