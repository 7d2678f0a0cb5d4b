#pragma once

#include "frem/datagen.hpp"
#include "frem/recovery.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace frem::bench {

enum class Method
{
  Frem,
  Fnw,
  Flr
};

std::string to_string(Method m);
Method parse_method(std::string_view name);

//! Candidate grids and fold counts shared by the three pipelines.
struct TuningGrids
{
  std::size_t bandwidth_count = 8;
  double quantile_low = 0.05;
  double quantile_high = 0.5;
  std::size_t frem_folds = 5;
  std::size_t fnw_folds = 10;
  std::size_t flr_folds = 10;
  std::vector<std::size_t> flr_p = { 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20 };
  std::size_t dim_k1 = 10;
  std::size_t dim_k2 = 20;
  std::optional<std::size_t> dim_base_points;
  std::optional<double> dim_delta;
};

struct SimulationConfig
{
  Setting setting = Setting::Klein;
  //! Training sample sizes; one report row block per entry.
  std::vector<std::size_t> n = { 250 };
  //! Measurement points per curve; 0 uses the clean curves directly.
  std::size_t m = 100;
  double snr_x = 4.0;
  double snr_y = 2.0;
  std::size_t replicates = 20;
  std::size_t test_size = 1000;
  std::uint64_t master_seed = 0;
  std::vector<Method> methods = { Method::Frem, Method::Fnw, Method::Flr };
  TuningGrids tuning;
  RecoveryOptions recovery;
  Design design = Design::Fixed;
  bool normalize = true;
  std::size_t grid_points = 100;
  double circle_c = 2.0;
  std::size_t circle_terms = 12;

  void validate() const;
};

//! Strict JSON reader: unknown keys, wrong types and out-of-range values
//! raise SchemaError (ParseError for malformed JSON).
SimulationConfig parse_simulation_config(std::string_view json_text);
//! Canonical JSON echo with every field present.
std::string to_json(const SimulationConfig& config);

enum class RateMode
{
  Regression,
  Recovery
};

struct RateStudyConfig
{
  RateMode mode = RateMode::Regression;
  //! n values (regression) or m values (recovery).
  std::vector<std::size_t> abscissae;
  //! Regression mode reuses every field but n.
  SimulationConfig simulation;
  Method method = Method::Frem;
  //! "rmse" or "rmse_signal".
  std::string target = "rmse_signal";
  std::size_t bootstrap = 200;
  //! Recovery mode: X(t) = sin(2 pi t) observed at m fixed points.
  double nu = 2.0;
  double snr_x = 4.0;
  std::size_t replicates = 200;
  std::uint64_t master_seed = 0;
  std::size_t grid_points = 100;

  void validate() const;
};

RateStudyConfig parse_rate_study_config(std::string_view json_text);
std::string to_json(const RateStudyConfig& config);

//! 64-bit FNV-1a of a string, printed in reports as a config fingerprint.
std::uint64_t fnv1a(std::string_view text) noexcept;

} // namespace frem::bench
