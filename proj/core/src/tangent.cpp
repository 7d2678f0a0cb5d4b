#include "frem/tangent.hpp"

#include "frem/error.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace frem {

namespace {

constexpr double kRankTolerance = 1e-12;

// Orients v so its first entry that is not negligible is positive.
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

// Turns quadrature coordinates (columns of `coords`, leading first) into a
// frame.
TangentFrame
assemble_frame(const Eigen::MatrixXd& coords,
               const std::vector<double>& eigenvalues,
               const GridFunction& x,
               GridFunction mean,
               std::size_t neighborhood_size)
{
  const GridPtr& grid = x.grid_ptr();
  const Eigen::VectorXd& sw = grid->sqrt_weights();
  TangentFrame frame{ x, std::move(mean), eigenvalues, {}, neighborhood_size, 0.0 };
  frame.basis.reserve(static_cast<std::size_t>(coords.cols()));
  for (Eigen::Index k = 0; k < coords.cols(); ++k) {
    Eigen::VectorXd v = coords.col(k);
    fix_sign(v);
    frame.basis.emplace_back(grid, v.cwiseQuotient(sw));
  }
  return frame;
}

void
check_rank(const Eigen::VectorXd& descending, std::size_t d)
{
  const double top = descending.size() > 0 ? descending(0) : 0.0;
  std::size_t usable = 0;
  if (top > 0.0) {
    for (Eigen::Index i = 0; i < descending.size(); ++i)
      if (descending(i) > kRankTolerance * top)
        ++usable;
  }
  if (usable < d)
    raise(ErrorCode::RankDeficient,
          "local covariance has " + std::to_string(usable) +
            " usable components, " + std::to_string(d) + " requested");
}

} // namespace

Eigen::MatrixXd
TangentFrame::basis_matrix() const
{
  Eigen::MatrixXd b(static_cast<Eigen::Index>(basis.size()),
                    static_cast<Eigen::Index>(base.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    b.row(static_cast<Eigen::Index>(k)) = basis[k].values().transpose();
  return b;
}

std::vector<std::size_t>
neighborhood(const Eigen::VectorXd& distances, double h_pca)
{
  if (!(h_pca > 0.0))
    raise(ErrorCode::InvalidSettings, "h_pca must be positive");
  std::vector<std::size_t> idx;
  for (Eigen::Index i = 0; i < distances.size(); ++i)
    if (distances(i) < h_pca)
      idx.push_back(static_cast<std::size_t>(i));
  return idx;
}

std::vector<std::size_t>
neighborhood(const GridFunction& x, std::span<const GridFunction> curves, double h_pca)
{
  Eigen::VectorXd d(static_cast<Eigen::Index>(curves.size()));
  for (std::size_t i = 0; i < curves.size(); ++i)
    d(static_cast<Eigen::Index>(i)) = l2_distance(x, curves[i]);
  return neighborhood(d, h_pca);
}

LocalCovariance
local_covariance(const CurveSet& neighbors)
{
  if (neighbors.size() < 2)
    raise(ErrorCode::InsufficientNeighborhood,
          "local covariance needs at least two neighbors");
  const auto count = static_cast<double>(neighbors.size());
  const Eigen::RowVectorXd mean = neighbors.values().colwise().mean();
  const Eigen::MatrixXd centered = neighbors.values().rowwise() - mean;
  Eigen::MatrixXd kernel = (centered.transpose() * centered) / count;
  return { GridFunction(neighbors.grid_ptr(), mean.transpose()),
           std::move(kernel),
           neighbors.size() };
}

LocalCovariance
local_covariance(std::span<const GridFunction> neighbors)
{
  if (neighbors.size() < 2)
    raise(ErrorCode::InsufficientNeighborhood,
          "local covariance needs at least two neighbors");
  return local_covariance(CurveSet::from_functions(neighbors));
}

TangentFrame
tangent_basis(const Eigen::MatrixXd& covariance,
              std::size_t d,
              const GridFunction& x,
              const GridFunction& mean,
              std::size_t neighborhood_size)
{
  require_same_grid(x, mean);
  const auto g = static_cast<Eigen::Index>(x.size());
  if (covariance.rows() != g || covariance.cols() != g)
    raise(ErrorCode::GridMismatch, "covariance size does not match grid");
  if (d < 1)
    raise(ErrorCode::InvalidSettings, "tangent dimension must be >= 1");
  if (static_cast<Eigen::Index>(d) > g)
    raise(ErrorCode::RankDeficient, "tangent dimension exceeds grid size");

  const Eigen::VectorXd& sw = x.grid().sqrt_weights();
  const Eigen::MatrixXd weighted = sw.asDiagonal() * covariance * sw.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(weighted);
  if (solver.info() != Eigen::Success)
    raise(ErrorCode::RankDeficient, "eigen decomposition failed");

  const Eigen::VectorXd descending = solver.eigenvalues().reverse();
  check_rank(descending, d);

  const auto dd = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd coords(g, dd);
  std::vector<double> values(d);
  for (Eigen::Index k = 0; k < dd; ++k) {
    coords.col(k) = solver.eigenvectors().col(g - 1 - k);
    values[static_cast<std::size_t>(k)] = descending(k);
  }
  return assemble_frame(coords, values, x, mean, neighborhood_size);
}

TangentFrame
tangent_basis(const LocalCovariance& cov, std::size_t d, const GridFunction& x)
{
  return tangent_basis(cov.kernel, d, x, cov.mean, cov.count);
}

TangentFrame
tangent_basis_gram(const CurveSet& neighbors, std::size_t d, const GridFunction& x)
{
  if (neighbors.size() < 2)
    raise(ErrorCode::InsufficientNeighborhood,
          "local covariance needs at least two neighbors");
  if (!same_grid(neighbors.grid_ptr(), x.grid_ptr()))
    raise(ErrorCode::GridMismatch, "neighbors and query differ in grid");
  if (d < 1)
    raise(ErrorCode::InvalidSettings, "tangent dimension must be >= 1");

  const auto count = static_cast<double>(neighbors.size());
  const Eigen::RowVectorXd mean = neighbors.values().colwise().mean();
  const Eigen::VectorXd& sw = x.grid().sqrt_weights();
  // B = Xc W^1/2 / sqrt|N|; B B^T shares the nonzero spectrum of B^T B.
  const Eigen::MatrixXd b =
    ((neighbors.values().rowwise() - mean) * sw.asDiagonal()) / std::sqrt(count);
  const Eigen::MatrixXd gram = b * b.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    raise(ErrorCode::RankDeficient, "eigen decomposition failed");

  const Eigen::VectorXd descending = solver.eigenvalues().reverse();
  check_rank(descending, d);

  const Eigen::Index n = gram.rows();
  const auto dd = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd coords(b.cols(), dd);
  std::vector<double> values(d);
  for (Eigen::Index k = 0; k < dd; ++k) {
    const double lambda = descending(k);
    coords.col(k) = b.transpose() * solver.eigenvectors().col(n - 1 - k) / std::sqrt(lambda);
    // Renormalize against rounding in lambda.
    coords.col(k).normalize();
    values[static_cast<std::size_t>(k)] = lambda;
  }
  return assemble_frame(coords,
                        values,
                        x,
                        GridFunction(x.grid_ptr(), mean.transpose()),
                        neighbors.size());
}

Eigen::VectorXd
project(const GridFunction& curve, const TangentFrame& frame)
{
  require_same_grid(curve, frame.base);
  Eigen::VectorXd out(static_cast<Eigen::Index>(frame.dim()));
  for (std::size_t k = 0; k < frame.dim(); ++k)
    out(static_cast<Eigen::Index>(k)) = inner_product(curve, frame.basis[k]);
  return out;
}

Eigen::MatrixXd
project(const CurveSet& curves, const TangentFrame& frame)
{
  if (!same_grid(curves.grid_ptr(), frame.base.grid_ptr()))
    raise(ErrorCode::GridMismatch, "curves and frame differ in grid");
  const Eigen::MatrixXd weighted_basis =
    frame.basis_matrix() * curves.grid().weights().asDiagonal();
  return curves.values() * weighted_basis.transpose();
}

TangentFrame
estimate_tangent(const GridFunction& x,
                 const CurveSet& curves,
                 const Eigen::VectorXd& distances,
                 std::size_t d,
                 double h_pca,
                 const TangentOptions& options)
{
  if (!(h_pca > 0.0))
    raise(ErrorCode::InvalidSettings, "h_pca must be positive");
  const std::size_t needed = std::max(d + 2, options.min_neighbors);
  double h = h_pca;
  auto idx = neighborhood(distances, h);
  for (std::size_t step = 0; idx.size() < needed && step < options.max_growth_steps; ++step) {
    h *= options.growth;
    idx = neighborhood(distances, h);
  }
  if (idx.size() < needed)
    raise(ErrorCode::InsufficientNeighborhood,
          "only " + std::to_string(idx.size()) + " curves within h_pca=" +
            std::to_string(h) + ", need " + std::to_string(needed));

  const CurveSet local = curves.subset(idx);
  TangentFrame frame = local.size() < curves.grid().size()
                         ? tangent_basis_gram(local, d, x)
                         : tangent_basis(local_covariance(local), d, x);
  frame.h_pca_used = h;
  return frame;
}

TangentFrame
estimate_tangent(const GridFunction& x,
                 const CurveSet& curves,
                 std::size_t d,
                 double h_pca,
                 const TangentOptions& options)
{
  return estimate_tangent(x, curves, curves.distances_to(x), d, h_pca, options);
}

} // namespace frem
