#include "frem/estimator.hpp"

#include "frem/error.hpp"
#include "frem/parallel.hpp"
#include "frem/tuning.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace frem {

namespace {

constexpr double kWidenFactor = 1.5;
constexpr std::size_t kMaxWiden = 10;

// Coordinates <X_i - x, phi_k> of every curve, one row per curve.
Eigen::MatrixXd
centered_coordinates(const CurveSet& curves, const GridFunction& x, const TangentFrame& frame)
{
  const Eigen::MatrixXd weighted_basis =
    frame.basis_matrix() * curves.grid().weights().asDiagonal();
  return (curves.values().rowwise() - x.values().transpose()) * weighted_basis.transpose();
}

// Local linear stage given coordinates for all curves. Widens h_reg until at
// least d + 2 curves carry weight.
LocalFit
second_stage(const Eigen::MatrixXd& coords,
             const Eigen::VectorXd& distances,
             const Eigen::VectorXd& responses,
             double h_reg)
{
  const auto d = static_cast<std::size_t>(coords.cols());
  const std::size_t needed = d + 2;
  double h = h_reg;
  auto count_inside = [&](double radius) {
    return static_cast<std::size_t>((distances.array() < radius).count());
  };
  std::size_t inside = count_inside(h);
  for (std::size_t step = 0; inside < needed && step < kMaxWiden; ++step) {
    h *= kWidenFactor;
    inside = count_inside(h);
  }
  if (inside < needed)
    raise(ErrorCode::InsufficientNeighborhood,
          "only " + std::to_string(inside) + " curves within h_reg=" + std::to_string(h));

  const double norm = std::pow(h, static_cast<double>(d));
  Eigen::MatrixXd local_coords(static_cast<Eigen::Index>(inside), coords.cols());
  Eigen::VectorXd w(static_cast<Eigen::Index>(inside));
  Eigen::VectorXd y(static_cast<Eigen::Index>(inside));
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < distances.size(); ++i) {
    if (distances(i) < h) {
      local_coords.row(r) = coords.row(i);
      w(r) = kernel_eval(distances(i) / h) / norm;
      y(r) = responses(i);
      ++r;
    }
  }
  LocalFit fit = weighted_local_linear(local_coords, w, y);
  fit.diagnostics.h_reg_used = h;
  return fit;
}

} // namespace

void
FremModel::validate() const
{
  if (curves.empty())
    raise(ErrorCode::InvalidSettings, "model has no curves");
  if (static_cast<std::size_t>(responses.size()) != curves.size())
    raise(ErrorCode::InvalidSettings, "curve and response counts differ");
  if (dim.rounded < 1)
    raise(ErrorCode::InvalidSettings, "model dimension must be >= 1");
  if (curves.size() < static_cast<std::size_t>(dim.rounded) + 2)
    raise(ErrorCode::InsufficientSample, "need at least d + 2 training curves");
  if (!(h_pca > 0.0) || !(h_reg > 0.0))
    raise(ErrorCode::InvalidSettings, "bandwidths must be positive");
}

LocalFit
weighted_local_linear(const Eigen::MatrixXd& coords,
                      const Eigen::VectorXd& weights,
                      const Eigen::VectorXd& y)
{
  const Eigen::Index p = coords.cols() + 1;
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    if (weights(i) > 0.0)
      active.push_back(i);
  if (active.empty())
    raise(ErrorCode::InsufficientNeighborhood, "no curve carries positive weight");

  const auto na = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd a(na, p);
  Eigen::VectorXd b(na);
  for (Eigen::Index r = 0; r < na; ++r) {
    const Eigen::Index i = active[static_cast<std::size_t>(r)];
    const double sw = std::sqrt(weights(i));
    a(r, 0) = sw;
    a.row(r).tail(p - 1) = sw * coords.row(i);
    b(r) = sw * y(i);
  }

  LocalFit fit;
  fit.diagnostics.effective_neighbors = static_cast<std::size_t>(na);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  const Eigen::VectorXd rdiag = qr.matrixQR().diagonal().cwiseAbs().head(std::min(na, p));
  fit.diagnostics.condition_indicator =
    rdiag.size() > 0 && rdiag.maxCoeff() > 0.0 ? rdiag.minCoeff() / rdiag.maxCoeff() : 0.0;

  if (qr.rank() == p) {
    const Eigen::VectorXd beta = qr.solve(b);
    fit.value = beta(0);
    return fit;
  }

  Eigen::MatrixXd normal = a.transpose() * a;
  double trace = normal.diagonal().tail(p - 1).sum();
  if (!(trace > 0.0))
    trace = normal(0, 0);
  const double ridge = 1e-8 * trace;
  for (Eigen::Index k = 1; k < p; ++k)
    normal(k, k) += ridge;
  const Eigen::VectorXd beta = normal.ldlt().solve(a.transpose() * b);
  fit.value = beta(0);
  fit.diagnostics.ridge_applied = true;
  return fit;
}

LocalFit
fit_with_frame(const FremModel& model,
               const GridFunction& x,
               const TangentFrame& frame,
               const Eigen::VectorXd& distances)
{
  if (!same_grid(model.curves.grid_ptr(), x.grid_ptr()))
    raise(ErrorCode::GridMismatch, "query is not on the model grid");
  const Eigen::MatrixXd coords = centered_coordinates(model.curves, x, frame);
  LocalFit fit = second_stage(coords, distances, model.responses, model.h_reg);
  fit.diagnostics.tangent_neighbors = frame.neighborhood_size;
  fit.diagnostics.h_pca_used = frame.h_pca_used;
  return fit;
}

LocalFit
fit_local(const FremModel& model, const GridFunction& x, const Eigen::VectorXd& distances)
{
  const auto d = static_cast<std::size_t>(model.dim.rounded);
  const TangentFrame frame =
    estimate_tangent(x, model.curves, distances, d, model.h_pca, model.tangent);
  return fit_with_frame(model, x, frame, distances);
}

LocalFit
fit_local(const FremModel& model, const GridFunction& x)
{
  return fit_local(model, x, model.curves.distances_to(x));
}

BandwidthGrid
distance_quantile_grid(const Eigen::MatrixXd& pairwise,
                       std::size_t count,
                       double q_low,
                       double q_high)
{
  if (pairwise.rows() < 2)
    raise(ErrorCode::InsufficientSample, "need two curves for a bandwidth grid");
  if (count < 1 || !(q_low > 0.0) || !(q_high > q_low) || q_high > 1.0)
    raise(ErrorCode::InvalidSettings, "bad bandwidth grid settings");
  const std::vector<double> all = upper_triangle(pairwise);
  const double lo = quantile(all, q_low);
  const double hi = quantile(all, q_high);
  if (!(lo > 0.0) || !(hi > lo))
    raise(ErrorCode::DegenerateSample, "pairwise distances have no spread");
  std::vector<double> h = log_spaced(lo, hi, count);
  return { h, h };
}

BandwidthChoice
select_bandwidths(const CurveSet& curves,
                  const Eigen::VectorXd& responses,
                  const DimEstimate& dim,
                  const BandwidthGrid& grid,
                  const SelectionOptions& options)
{
  const std::size_t n = curves.size();
  if (static_cast<std::size_t>(responses.size()) != n)
    raise(ErrorCode::InvalidSettings, "curve and response counts differ");
  if (grid.h_pca.empty() || grid.h_reg.empty())
    raise(ErrorCode::InvalidSettings, "empty bandwidth grid");
  for (double h : grid.h_pca)
    if (!(h > 0.0))
      raise(ErrorCode::InvalidSettings, "h_pca candidates must be positive");
  for (double h : grid.h_reg)
    if (!(h > 0.0))
      raise(ErrorCode::InvalidSettings, "h_reg candidates must be positive");

  std::vector<double> hp = grid.h_pca, hr = grid.h_reg;
  std::sort(hp.begin(), hp.end());
  std::sort(hr.begin(), hr.end());
  if (hp.size() == 1 && hr.size() == 1)
    return { hp.front(), hr.front(), 0.0, 0 };

  const auto d = static_cast<std::size_t>(dim.rounded);
  const auto na = static_cast<Eigen::Index>(hp.size());
  const auto nb = static_cast<Eigen::Index>(hr.size());
  const auto folds = make_folds(n, options.folds, options.seed);
  const std::size_t nf = folds.size();

  std::vector<Eigen::MatrixXd> sse(nf, Eigen::MatrixXd::Zero(na, nb));
  std::vector<Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>> failed(
    nf, Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(na, nb, false));

  parallel_for(nf, options.workers, [&](std::size_t f) {
    const auto train_idx = complement(folds[f], n);
    const CurveSet train = curves.subset(train_idx);
    Eigen::VectorXd y_train(static_cast<Eigen::Index>(train_idx.size()));
    for (std::size_t i = 0; i < train_idx.size(); ++i)
      y_train(static_cast<Eigen::Index>(i)) = responses(static_cast<Eigen::Index>(train_idx[i]));

    for (std::size_t v : folds[f]) {
      const GridFunction x = curves.curve(v);
      const double target = responses(static_cast<Eigen::Index>(v));
      const Eigen::VectorXd dist = train.distances_to(x);
      for (Eigen::Index a = 0; a < na; ++a) {
        if (failed[f].row(a).all())
          continue;
        Eigen::MatrixXd coords;
        try {
          const TangentFrame frame =
            estimate_tangent(x, train, dist, d, hp[static_cast<std::size_t>(a)], options.tangent);
          coords = centered_coordinates(train, x, frame);
        } catch (const Error&) {
          failed[f].row(a).setConstant(true);
          continue;
        }
        for (Eigen::Index b = 0; b < nb; ++b) {
          if (failed[f](a, b))
            continue;
          try {
            const double pred =
              second_stage(coords, dist, y_train, hr[static_cast<std::size_t>(b)]).value;
            const double r = pred - target;
            sse[f](a, b) += r * r;
          } catch (const Error&) {
            failed[f](a, b) = true;
          }
        }
      }
    }
  });

  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(na, nb);
  Eigen::MatrixXd counted = Eigen::MatrixXd::Zero(na, nb);
  Eigen::MatrixXi fails = Eigen::MatrixXi::Zero(na, nb);
  for (std::size_t f = 0; f < nf; ++f) {
    for (Eigen::Index a = 0; a < na; ++a) {
      for (Eigen::Index b = 0; b < nb; ++b) {
        if (failed[f](a, b)) {
          ++fails(a, b);
        } else {
          total(a, b) += sse[f](a, b);
          counted(a, b) += static_cast<double>(folds[f].size());
        }
      }
    }
  }

  const double tie = tie_tolerance(responses);
  BandwidthChoice best;
  best.failed_folds = nf + 1;
  best.cv_error = std::numeric_limits<double>::infinity();
  for (Eigen::Index b = 0; b < nb; ++b) {
    for (Eigen::Index a = 0; a < na; ++a) {
      const auto nfail = static_cast<std::size_t>(fails(a, b));
      if (nfail == nf)
        continue;
      const double err = total(a, b) / counted(a, b);
      const bool better = nfail < best.failed_folds ||
                          (nfail == best.failed_folds && err < best.cv_error - tie);
      if (better)
        best = { hp[static_cast<std::size_t>(a)], hr[static_cast<std::size_t>(b)], err, nfail };
    }
  }
  if (best.failed_folds > nf)
    raise(ErrorCode::AllFoldsFailed, "every bandwidth pair failed on every fold");
  return best;
}

FremModel
fit_frem(CurveSet curves, Eigen::VectorXd responses, const FremOptions& options)
{
  if (static_cast<std::size_t>(responses.size()) != curves.size())
    raise(ErrorCode::InvalidSettings, "curve and response counts differ");
  const Eigen::MatrixXd pairwise = curves.pairwise_distances();

  FremModel model;
  model.dim = estimate_dim_from_distances(pairwise, options.dim);
  const BandwidthGrid grid = distance_quantile_grid(
    pairwise, options.bandwidth_count, options.quantile_low, options.quantile_high);
  SelectionOptions selection = options.selection;
  const BandwidthChoice choice =
    select_bandwidths(curves, responses, model.dim, grid, selection);

  model.curves = std::move(curves);
  model.responses = std::move(responses);
  model.h_pca = choice.h_pca;
  model.h_reg = choice.h_reg;
  model.recovery = options.recovery;
  model.domain = options.domain;
  model.tangent = selection.tangent;
  model.validate();
  return model;
}

double
predict(const FremModel& model, const DiscreteObservations& query)
{
  const GridFunction x = recover_curve(query, model.curves.grid_ptr(), model.recovery, model.domain);
  return fit_local(model, x).value;
}

} // namespace frem
