#pragma once

#include "frem/bench/config.hpp"
#include "frem/bench/report.hpp"
#include "frem/datagen.hpp"

#include <cstddef>
#include <cstdint>

namespace frem::bench {

//! Everything one replicate needs, generated from its seed alone.
struct ReplicateData
{
  ManifoldSample train;
  ManifoldSample test;
  std::vector<DiscreteObservations> train_records;
  std::vector<DiscreteObservations> test_records;
  ResponseDraw train_y;
  ResponseDraw test_y;
};

//! Train (n curves) and test samples come from independent streams of
//! `seed`, so the first n' < n training curves coincide across sample
//! sizes. Normalization, measurement noise levels and response noise are
//! calibrated on the pooled clean train and test curves.
ReplicateData make_replicate(const SimulationConfig& config, std::size_t n, std::uint64_t seed);

//! Seed of replicate r.
std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t replicate) noexcept;

//! Every method's full pipeline (smoothing included) per replicate and n.
//! Method failures are recorded in the report; use check_failure_rate to
//! enforce the failure budget. Output does not depend on `workers`.
EvalReport run_simulation(const SimulationConfig& config, std::size_t workers = 1);

} // namespace frem::bench
