#pragma once

#include "frem/bench/config.hpp"
#include "frem/bench/dataset.hpp"
#include "frem/bench/report.hpp"

#include <cstdint>
#include <vector>

namespace frem::bench {

struct HoldoutConfig
{
  double split = 0.75;
  std::size_t repeats = 20;
  std::vector<Method> methods = { Method::Frem, Method::Fnw, Method::Flr };
  std::uint64_t master_seed = 0;
  TuningGrids tuning;

  void validate() const;
};

//! Training indices of repeat r: a seeded permutation, first round(split n)
//! entries, sorted.
std::vector<std::size_t> holdout_train_indices(std::size_t n, double split, std::uint64_t seed);

//! Per repeat a seeded random split; methods are fit on the training part
//! (curves taken as observed) and scored by rMSE on the rest. The report's
//! n column holds the training size.
EvalReport holdout_eval(const Dataset& data, const HoldoutConfig& config, std::size_t workers = 1);

std::string to_json(const HoldoutConfig& config);

} // namespace frem::bench
