#include "frem/baselines.hpp"

#include "frem/error.hpp"
#include "frem/tuning.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace frem::baselines {

namespace {

constexpr double kWidenFactor = 1.5;
constexpr int kWidenSteps = 10;
constexpr double kRankTolerance = 1e-12;

// Kernel-weighted mean over the rows in `rows` (all rows when empty).
bool
nw_mean(const Eigen::VectorXd& distances,
        const Eigen::VectorXd& y,
        double h,
        const std::vector<std::size_t>* rows,
        double& out)
{
  double num = 0.0, den = 0.0;
  auto visit = [&](Eigen::Index i) {
    const double w = kernel_eval(distances(i) / h);
    num += w * y(i);
    den += w;
  };
  if (rows) {
    for (std::size_t i : *rows)
      visit(static_cast<Eigen::Index>(i));
  } else {
    for (Eigen::Index i = 0; i < distances.size(); ++i)
      visit(i);
  }
  if (!(den > 0.0))
    return false;
  out = num / den;
  return true;
}

double
nw_adaptive(const Eigen::VectorXd& distances,
            const Eigen::VectorXd& y,
            double h,
            const std::vector<std::size_t>* rows)
{
  double out = 0.0;
  for (int step = 0; step <= kWidenSteps; ++step) {
    if (nw_mean(distances, y, h, rows, out))
      return out;
    h *= kWidenFactor;
  }
  raise(ErrorCode::EmptyWindow, "no training curve within the widened FNW window");
}

void
fix_sign(Eigen::Ref<Eigen::VectorXd> v)
{
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0)
    return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12 * scale) {
      if (v(i) < 0.0)
        v = -v;
      return;
    }
  }
}

} // namespace

double
fnw_predict(const FnwModel& model, const Eigen::VectorXd& distances)
{
  if (!(model.bandwidth > 0.0))
    raise(ErrorCode::InvalidSettings, "FNW bandwidth must be positive");
  double out = 0.0;
  if (!nw_mean(distances, model.responses, model.bandwidth, nullptr, out))
    raise(ErrorCode::EmptyWindow, "no training curve within the FNW window");
  return out;
}

double
fnw_predict(const FnwModel& model, const GridFunction& x)
{
  return fnw_predict(model, model.curves.distances_to(x));
}

double
fnw_predict_adaptive(const FnwModel& model, const Eigen::VectorXd& distances)
{
  if (!(model.bandwidth > 0.0))
    raise(ErrorCode::InvalidSettings, "FNW bandwidth must be positive");
  return nw_adaptive(distances, model.responses, model.bandwidth, nullptr);
}

FnwModel
fnw_fit(CurveSet curves,
        Eigen::VectorXd responses,
        std::span<const double> candidates,
        std::size_t folds,
        std::uint64_t seed)
{
  const std::size_t n = curves.size();
  if (static_cast<std::size_t>(responses.size()) != n)
    raise(ErrorCode::InvalidSettings, "curve and response counts differ");
  if (candidates.empty())
    raise(ErrorCode::InvalidSettings, "FNW needs at least one bandwidth candidate");
  for (double h : candidates)
    if (!(h > 0.0))
      raise(ErrorCode::InvalidSettings, "FNW bandwidth candidates must be positive");

  FnwModel model{ std::move(curves), std::move(responses), candidates.front() };
  if (candidates.size() == 1)
    return model;

  const Eigen::MatrixXd dist = model.curves.pairwise_distances();
  const auto fold_sets = make_folds(n, std::min(folds, n), seed);
  const double tol = tie_tolerance(model.responses);

  double best_err = std::numeric_limits<double>::infinity();
  for (double h : candidates) {
    double sse = 0.0;
    for (const auto& fold : fold_sets) {
      const auto train = complement(fold, n);
      for (std::size_t v : fold) {
        const Eigen::VectorXd drow = dist.row(static_cast<Eigen::Index>(v)).transpose();
        const double r = nw_adaptive(drow, model.responses, h, &train) -
                         model.responses(static_cast<Eigen::Index>(v));
        sse += r * r;
      }
    }
    const double err = sse / static_cast<double>(n);
    if (err < best_err - tol) {
      best_err = err;
      model.bandwidth = h;
    }
  }
  return model;
}

FlrModel
flr_fit_fixed(const CurveSet& curves, const Eigen::VectorXd& responses, std::size_t p)
{
  const std::size_t n = curves.size();
  if (n == 0)
    raise(ErrorCode::InsufficientSample, "FLR needs at least one curve");
  if (static_cast<std::size_t>(responses.size()) != n)
    raise(ErrorCode::InvalidSettings, "curve and response counts differ");
  if (p + 1 > n)
    raise(ErrorCode::RankDeficient,
          "FLR with p=" + std::to_string(p) + " needs more than " + std::to_string(p) +
            " curves");

  const GridPtr& grid = curves.grid_ptr();
  const Eigen::VectorXd& w = grid->weights();
  const Eigen::VectorXd& sw = grid->sqrt_weights();
  const Eigen::RowVectorXd mean = curves.values().colwise().mean();
  const Eigen::MatrixXd centered = curves.values().rowwise() - mean;

  FlrModel model{ GridFunction(grid, mean.transpose()), {}, Eigen::VectorXd(), {}, 0.0, p };
  Eigen::MatrixXd scores(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  if (p > 0) {
    const Eigen::MatrixXd b = centered * sw.asDiagonal() / std::sqrt(static_cast<double>(n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b.transpose() * b);
    const Eigen::VectorXd ev = eig.eigenvalues().reverse();
    const double top = ev(0);
    std::size_t usable = 0;
    if (top > 0.0)
      for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > kRankTolerance * top)
          ++usable;
    if (usable < p)
      raise(ErrorCode::RankDeficient,
            "sample covariance has " + std::to_string(usable) + " usable components, " +
              std::to_string(p) + " requested");
    model.eigenvalues = ev.head(static_cast<Eigen::Index>(p));
    const Eigen::Index g = eig.eigenvectors().cols();
    for (std::size_t k = 0; k < p; ++k) {
      Eigen::VectorXd v = eig.eigenvectors().col(g - 1 - static_cast<Eigen::Index>(k));
      fix_sign(v);
      model.eigenfunctions.emplace_back(grid, v.cwiseQuotient(sw));
      scores.col(static_cast<Eigen::Index>(k)) =
        centered * w.cwiseProduct(model.eigenfunctions.back().values());
    }
  } else {
    model.eigenvalues.resize(0);
  }

  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p + 1));
  design.col(0).setOnes();
  design.rightCols(static_cast<Eigen::Index>(p)) = scores;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(qr.rank()) < p + 1)
    raise(ErrorCode::RankDeficient, "FLR score design is rank deficient");
  const Eigen::VectorXd coef = qr.solve(responses);
  model.intercept = coef(0);
  model.slopes = coef.tail(static_cast<Eigen::Index>(p));
  return model;
}

FlrModel
flr_fit(const CurveSet& curves,
        const Eigen::VectorXd& responses,
        std::span<const std::size_t> p_candidates,
        std::size_t folds,
        std::uint64_t seed)
{
  const std::size_t n = curves.size();
  if (p_candidates.empty())
    raise(ErrorCode::InvalidSettings, "FLR needs at least one p candidate");
  if (p_candidates.size() == 1)
    return flr_fit_fixed(curves, responses, p_candidates.front());

  const auto fold_sets = make_folds(n, std::min(folds, n), seed);
  const double tol = tie_tolerance(responses);

  std::vector<std::size_t> sorted(p_candidates.begin(), p_candidates.end());
  std::sort(sorted.begin(), sorted.end());

  std::size_t best_p = sorted.front();
  std::size_t best_failed = std::numeric_limits<std::size_t>::max();
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t p : sorted) {
    double sse = 0.0;
    std::size_t scored = 0, failed = 0;
    for (const auto& fold : fold_sets) {
      const auto train = complement(fold, n);
      try {
        const FlrModel m = flr_fit_fixed(curves.subset(train), responses(train), p);
        for (std::size_t v : fold) {
          const double r =
            flr_predict(m, curves.curve(v)) - responses(static_cast<Eigen::Index>(v));
          sse += r * r;
          ++scored;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RankDeficient)
          throw;
        ++failed;
      }
    }
    if (failed == fold_sets.size())
      continue;
    const double err = sse / static_cast<double>(scored);
    if (failed < best_failed || (failed == best_failed && err < best_err - tol)) {
      best_failed = failed;
      best_err = err;
      best_p = p;
    }
  }
  if (best_failed == std::numeric_limits<std::size_t>::max())
    raise(ErrorCode::RankDeficient, "no FLR component count fits on any fold");
  return flr_fit_fixed(curves, responses, best_p);
}

Eigen::VectorXd
flr_scores(const FlrModel& model, const GridFunction& x)
{
  require_same_grid(x, model.mean);
  const Eigen::VectorXd c = (x.values() - model.mean.values()).cwiseProduct(x.grid().weights());
  Eigen::VectorXd s(static_cast<Eigen::Index>(model.p));
  for (std::size_t k = 0; k < model.p; ++k)
    s(static_cast<Eigen::Index>(k)) = model.eigenfunctions[k].values().dot(c);
  return s;
}

double
flr_predict(const FlrModel& model, const GridFunction& x)
{
  return model.intercept + model.slopes.dot(flr_scores(model, x));
}

} // namespace frem::baselines
