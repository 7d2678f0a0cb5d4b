#pragma once

#include "frem/bench/config.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace frem::bench {

//! One method on one replicate (or holdout repeat).
struct ReplicateResult
{
  Method method = Method::Frem;
  std::size_t n = 0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  //! Against observed responses (signal plus noise).
  double rmse = 0.0;
  //! Against the noiseless signal; equals rmse when no signal is known.
  double rmse_signal = 0.0;
  //! Model-size diagnostics; NaN or 0 when not applicable.
  double dim_raw = 0.0;
  int dim = 0;
  double h_pca = 0.0;
  double h_reg = 0.0;
  double bandwidth = 0.0;
  std::size_t flr_p = 0;
};

struct MethodSummary
{
  Method method = Method::Frem;
  std::size_t n = 0;
  std::size_t ok_count = 0;
  std::size_t failed_count = 0;
  double mean_rmse = 0.0;
  double se_rmse = 0.0;
  double mean_rmse_signal = 0.0;
  double se_rmse_signal = 0.0;
  double mean_dim_raw = 0.0;
  double sd_dim_raw = 0.0;
  double mean_flr_p = 0.0;
};

struct EvalReport
{
  std::string label;
  std::string config_json;
  std::uint64_t master_seed = 0;
  std::vector<ReplicateResult> results;
  std::vector<MethodSummary> summaries;
  //! Only written to disk when explicitly requested, since it breaks
  //! byte-identical reruns.
  std::optional<double> wall_seconds;

  const MethodSummary& summary(Method m, std::size_t n) const;
  const MethodSummary* find_summary(Method m, std::size_t n) const;
};

//! Mean and standard error (sd / sqrt(count)) across replicates, grouped by
//! (method, n) in first-appearance order.
std::vector<MethodSummary> summarize(const std::vector<ReplicateResult>& results);

//! TooManyFailures when more than 10% of any group's replicates failed.
void check_failure_rate(const EvalReport& report, double max_fraction = 0.1);

std::string results_csv(const EvalReport& report);
std::string summary_csv(const EvalReport& report);
std::string metadata_json(const EvalReport& report);

//! Writes <prefix>_results.csv, <prefix>_summary.csv and <prefix>_meta.json.
void write_report(const EvalReport& report,
                  const std::filesystem::path& dir,
                  const std::string& prefix);

//! %.17g rendering shared by every report writer.
std::string format_double(double v);

struct ReductionRow
{
  Method method = Method::Frem;
  std::size_t n_small = 0;
  std::size_t n_large = 0;
  double rmse_small = 0.0;
  double rmse_large = 0.0;
  //! rmse_large / rmse_small.
  double ratio = 0.0;
  //! 100 (1 - ratio).
  double reduction_pct = 0.0;
};

struct ReductionTable
{
  std::vector<ReductionRow> rows;
  //! 100 (1 - (n_small / n_large)^(2 / (d + 4))) for the supplied d.
  std::optional<double> theoretical_pct;
};

double theoretical_reduction(std::size_t n_small, std::size_t n_large, int d);

//! Per method, the relative reduction of mean rMSE from the first report to
//! the second. Each report must hold one sample size per method.
//! MethodMismatch unless both cover the same methods.
ReductionTable relative_reduction(const EvalReport& small_n,
                                  const EvalReport& large_n,
                                  std::optional<int> d = std::nullopt,
                                  bool signal_only = false);

//! Per-replicate reductions 100 (1 - rmse_large_r / rmse_small_r) for a
//! method, pairing replicates by index; failed pairs are skipped.
std::vector<double> paired_reductions(const EvalReport& small_n,
                                      const EvalReport& large_n,
                                      Method method,
                                      bool signal_only = false);

} // namespace frem::bench
