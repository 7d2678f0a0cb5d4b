#include "frem/bench/pipeline.hpp"

#include "frem/baselines.hpp"
#include "frem/error.hpp"
#include "frem/estimator.hpp"
#include "frem/parallel.hpp"
#include "frem/tuning.hpp"

#include <cmath>

namespace frem::bench {

namespace {

constexpr std::uint64_t kFremStream = 0xF4E3;
constexpr std::uint64_t kFnwStream = 0xF9A0;
constexpr std::uint64_t kFlrStream = 0xF1E0;

} // namespace

CurveSet
recover_all(std::span<const DiscreteObservations> records,
            const GridPtr& grid,
            const RecoveryOptions& options)
{
  Eigen::MatrixXd values(static_cast<Eigen::Index>(records.size()),
                         static_cast<Eigen::Index>(grid->size()));
  const Domain domain = grid->domain();
  for (std::size_t i = 0; i < records.size(); ++i)
    values.row(static_cast<Eigen::Index>(i)) =
      recover_curve(records[i], grid, options, domain).values().transpose();
  return CurveSet(grid, std::move(values));
}

double
rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& target)
{
  if (predicted.size() != target.size() || predicted.size() == 0)
    raise(ErrorCode::InvalidSettings, "rMSE needs equally sized nonempty vectors");
  return std::sqrt((predicted - target).squaredNorm() / static_cast<double>(predicted.size()));
}

MethodOutcome
run_method(Method method,
           const CurveSet& train,
           const Eigen::VectorXd& y,
           const CurveSet& test,
           const TuningGrids& tuning,
           std::uint64_t seed)
{
  MethodOutcome out;
  out.predictions.resize(static_cast<Eigen::Index>(test.size()));
  switch (method) {
    case Method::Frem: {
      FremOptions opts;
      opts.dim.k1 = tuning.dim_k1;
      opts.dim.k2 = tuning.dim_k2;
      opts.dim.base_points = tuning.dim_base_points;
      opts.dim.delta = tuning.dim_delta;
      opts.bandwidth_count = tuning.bandwidth_count;
      opts.quantile_low = tuning.quantile_low;
      opts.quantile_high = tuning.quantile_high;
      opts.selection.folds = tuning.frem_folds;
      opts.selection.seed = mix_seed(seed, kFremStream);
      opts.selection.workers = 1;
      opts.domain = train.grid().domain();
      const FremModel model = fit_frem(train, y, opts);
      for (std::size_t i = 0; i < test.size(); ++i)
        out.predictions(static_cast<Eigen::Index>(i)) =
          fit_local(model, test.curve(i)).value;
      out.dim_raw = model.dim.raw;
      out.dim = model.dim.rounded;
      out.h_pca = model.h_pca;
      out.h_reg = model.h_reg;
      break;
    }
    case Method::Fnw: {
      const BandwidthGrid grid = distance_quantile_grid(
        train.pairwise_distances(), tuning.bandwidth_count, tuning.quantile_low, tuning.quantile_high);
      const baselines::FnwModel model =
        baselines::fnw_fit(train, y, grid.h_reg, tuning.fnw_folds, mix_seed(seed, kFnwStream));
      for (std::size_t i = 0; i < test.size(); ++i)
        out.predictions(static_cast<Eigen::Index>(i)) =
          baselines::fnw_predict_adaptive(model, train.distances_to(test.curve(i)));
      out.bandwidth = model.bandwidth;
      break;
    }
    case Method::Flr: {
      std::vector<std::size_t> ps;
      for (std::size_t p : tuning.flr_p)
        if (p + 2 < train.size())
          ps.push_back(p);
      if (ps.empty())
        raise(ErrorCode::InvalidSettings, "no FLR component count fits the sample size");
      const baselines::FlrModel model =
        baselines::flr_fit(train, y, ps, tuning.flr_folds, mix_seed(seed, kFlrStream));
      for (std::size_t i = 0; i < test.size(); ++i)
        out.predictions(static_cast<Eigen::Index>(i)) = baselines::flr_predict(model, test.curve(i));
      out.flr_p = model.p;
      break;
    }
  }
  return out;
}

} // namespace frem::bench
