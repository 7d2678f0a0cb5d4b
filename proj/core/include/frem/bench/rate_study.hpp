#pragma once

#include "frem/bench/config.hpp"
#include "frem/bench/report.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace frem::bench {

struct RatePoint
{
  std::size_t x = 0;
  std::vector<double> values;
  double mean = 0.0;
  double se = 0.0;
};

struct RateReport
{
  RateMode mode = RateMode::Regression;
  std::string label;
  std::string config_json;
  std::vector<RatePoint> points;
  double slope = 0.0;
  double slope_se = 0.0;
  //! -nu / (2 nu + 1) for recovery, -2 / (d + 4) for regression.
  std::optional<double> expected_slope;
  std::size_t failed = 0;
};

//! Least-squares slope of log y on log x.
double log_log_slope(std::span<const double> x, std::span<const double> y);

//! Slope of log(mean) on log(x) with a bootstrap standard error: replicate
//! values are resampled with replacement within each abscissa.
void fit_rate(RateReport& report, std::size_t bootstrap, std::uint64_t seed);

//! Recovery mode: sin(2 pi t) observed at m equally spaced points with noise
//! variance (temporal variance of X over D) / snr_x, smoothed with the
//! leave-one-out bandwidth; y is the L2 recovery error. Regression mode: the
//! simulation at each n, y is the chosen method's test rMSE.
RateReport rate_study(const RateStudyConfig& config, std::size_t workers = 1);

std::string rate_csv(const RateReport& report);
std::string rate_json(const RateReport& report);

} // namespace frem::bench
