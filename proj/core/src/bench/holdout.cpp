#include "frem/bench/holdout.hpp"

#include "frem/bench/pipeline.hpp"
#include "frem/bench/simulation.hpp"
#include "frem/error.hpp"
#include "frem/parallel.hpp"
#include "frem/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>

namespace frem::bench {

namespace {

constexpr std::uint64_t kSplitStream = 0x5917;
constexpr std::uint64_t kMethodStream = 0x3E7D;

} // namespace

void
HoldoutConfig::validate() const
{
  if (!(split > 0.0 && split < 1.0))
    raise(ErrorCode::InvalidSettings, "split must lie strictly between 0 and 1");
  if (repeats < 1)
    raise(ErrorCode::InvalidSettings, "repeats must be at least 1");
  if (methods.empty())
    raise(ErrorCode::InvalidSettings, "methods must not be empty");
}

std::vector<std::size_t>
holdout_train_indices(std::size_t n, double split, std::uint64_t seed)
{
  const auto n_train = static_cast<std::size_t>(std::lround(split * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n)
    raise(ErrorCode::InsufficientSample, "split leaves an empty training or test part");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{ 0 });
  Rng rng = make_rng(seed, kSplitStream);
  std::shuffle(perm.begin(), perm.end(), rng);
  perm.resize(n_train);
  std::sort(perm.begin(), perm.end());
  return perm;
}

EvalReport
holdout_eval(const Dataset& data, const HoldoutConfig& config, std::size_t workers)
{
  config.validate();
  const std::size_t n = data.curves.size();
  if (n == 0)
    raise(ErrorCode::InsufficientSample, "dataset is empty");
  std::vector<std::vector<ReplicateResult>> slots(config.repeats);

  parallel_for(config.repeats, workers, [&](std::size_t r) {
    const std::uint64_t seed = replicate_seed(config.master_seed, r);
    const auto train_idx = holdout_train_indices(n, config.split, seed);
    const auto test_idx = complement(train_idx, n);
    const CurveSet train = data.curves.subset(train_idx);
    const CurveSet test = data.curves.subset(test_idx);
    const Eigen::VectorXd y_train = data.responses(train_idx);
    const Eigen::VectorXd y_test = data.responses(test_idx);

    for (Method method : config.methods) {
      ReplicateResult res;
      res.method = method;
      res.n = train_idx.size();
      res.replicate = r;
      res.seed = seed;
      try {
        const MethodOutcome o =
          run_method(method, train, y_train, test, config.tuning, mix_seed(seed, kMethodStream));
        res.ok = true;
        res.rmse = res.rmse_signal = rmse(o.predictions, y_test);
        res.dim_raw = o.dim_raw;
        res.dim = o.dim;
        res.h_pca = o.h_pca;
        res.h_reg = o.h_reg;
        res.bandwidth = o.bandwidth;
        res.flr_p = o.flr_p;
      } catch (const Error& e) {
        res.ok = false;
        res.error = e.what();
        res.rmse = res.rmse_signal = std::nan("");
      }
      slots[r].push_back(std::move(res));
    }
  });

  EvalReport report;
  report.label = data.name;
  report.config_json = to_json(config);
  report.master_seed = config.master_seed;
  for (auto& slot : slots)
    for (auto& r : slot)
      report.results.push_back(std::move(r));
  report.summaries = summarize(report.results);
  return report;
}

std::string
to_json(const HoldoutConfig& c)
{
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : c.methods)
    methods.push_back(to_string(m));
  const nlohmann::json j = { { "split", c.split },
                             { "repeats", c.repeats },
                             { "methods", methods },
                             { "master_seed", c.master_seed } };
  return j.dump(1);
}

} // namespace frem::bench
