#include "frem/funcspace.hpp"

#include "frem/error.hpp"

#include <cmath>
#include <string>

namespace frem {

Grid::Grid(std::vector<double> points)
  : points_(std::move(points))
{
  if (points_.size() < 2)
    raise(ErrorCode::InvalidSettings, "grid needs at least two points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i]))
      raise(ErrorCode::InvalidSettings, "grid point is not finite");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      raise(ErrorCode::InvalidSettings,
            "grid points must be strictly increasing (index " +
              std::to_string(i) + ")");
  }

  const auto n = static_cast<Eigen::Index>(points_.size());
  weights_.resize(n);
  weights_(0) = 0.5 * (points_[1] - points_[0]);
  weights_(n - 1) = 0.5 * (points_[n - 1] - points_[n - 2]);
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    weights_(i) = 0.5 * (points_[i + 1] - points_[i - 1]);
  sqrt_weights_ = weights_.cwiseSqrt();

  const double first = points_[1] - points_[0];
  regular_ = true;
  for (std::size_t i = 2; i < points_.size(); ++i) {
    if (std::abs((points_[i] - points_[i - 1]) - first) > 1e-12 * std::abs(first)) {
      regular_ = false;
      break;
    }
  }
}

std::shared_ptr<const Grid>
Grid::regular(double lower, double upper, std::size_t count)
{
  if (count < 2 || !(upper > lower))
    raise(ErrorCode::InvalidSettings, "regular grid needs count >= 2 and upper > lower");
  std::vector<double> pts(count);
  const double step = (upper - lower) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    pts[i] = lower + step * static_cast<double>(i);
  pts.back() = upper;
  return std::make_shared<const Grid>(std::move(pts));
}

bool
Grid::same_points(const Grid& other) const
{
  return points_ == other.points_;
}

bool
same_grid(const GridPtr& a, const GridPtr& b)
{
  return a == b || (a && b && a->same_points(*b));
}

GridFunction::GridFunction(GridPtr grid, Eigen::VectorXd values)
  : grid_(std::move(grid))
  , values_(std::move(values))
{
  if (!grid_)
    raise(ErrorCode::InvalidSettings, "grid function without a grid");
  if (static_cast<std::size_t>(values_.size()) != grid_->size())
    raise(ErrorCode::GridMismatch, "value count does not match grid size");
  if (!values_.allFinite())
    raise(ErrorCode::InvalidSettings, "grid function values must be finite");
}

GridFunction
GridFunction::constant(GridPtr grid, double c)
{
  const auto n = static_cast<Eigen::Index>(grid->size());
  return GridFunction(std::move(grid), Eigen::VectorXd::Constant(n, c));
}

GridFunction
GridFunction::operator+(const GridFunction& other) const
{
  require_same_grid(*this, other);
  return GridFunction(grid_, values_ + other.values_);
}

GridFunction
GridFunction::operator-(const GridFunction& other) const
{
  require_same_grid(*this, other);
  return GridFunction(grid_, values_ - other.values_);
}

GridFunction
GridFunction::operator*(double c) const
{
  return GridFunction(grid_, values_ * c);
}

void
require_same_grid(const GridFunction& f, const GridFunction& g)
{
  if (!same_grid(f.grid_ptr(), g.grid_ptr()))
    raise(ErrorCode::GridMismatch, "functions are defined on different grids");
}

double
inner_product(const GridFunction& f, const GridFunction& g)
{
  require_same_grid(f, g);
  const auto& w = f.grid().weights();
  return (w.array() * f.values().array() * g.values().array()).sum();
}

double
l2_norm(const GridFunction& f)
{
  const auto& w = f.grid().weights();
  return std::sqrt((w.array() * f.values().array().square()).sum());
}

double
l2_distance(const GridFunction& f, const GridFunction& g)
{
  require_same_grid(f, g);
  const auto& w = f.grid().weights();
  const double s =
    (w.array() * (f.values() - g.values()).array().square()).sum();
  return std::sqrt(s);
}

double
kernel_eval(double u) noexcept
{
  const double a = std::abs(u);
  return a <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

CurveSet::CurveSet(GridPtr grid, Eigen::MatrixXd values)
  : grid_(std::move(grid))
  , values_(std::move(values))
{
  if (!grid_)
    raise(ErrorCode::InvalidSettings, "curve set without a grid");
  if (static_cast<std::size_t>(values_.cols()) != grid_->size())
    raise(ErrorCode::GridMismatch, "curve length does not match grid size");
  if (!values_.allFinite())
    raise(ErrorCode::InvalidSettings, "curve values must be finite");
}

CurveSet
CurveSet::from_functions(std::span<const GridFunction> curves)
{
  if (curves.empty())
    raise(ErrorCode::InsufficientSample, "empty curve list");
  const GridPtr& grid = curves.front().grid_ptr();
  Eigen::MatrixXd values(static_cast<Eigen::Index>(curves.size()),
                         static_cast<Eigen::Index>(grid->size()));
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (!same_grid(grid, curves[i].grid_ptr()))
      raise(ErrorCode::GridMismatch, "curves do not share one grid");
    values.row(static_cast<Eigen::Index>(i)) = curves[i].values().transpose();
  }
  return CurveSet(grid, std::move(values));
}

GridFunction
CurveSet::curve(std::size_t i) const
{
  return GridFunction(grid_, values_.row(static_cast<Eigen::Index>(i)).transpose());
}

std::vector<GridFunction>
CurveSet::to_functions() const
{
  std::vector<GridFunction> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i)
    out.push_back(curve(i));
  return out;
}

CurveSet
CurveSet::subset(std::span<const std::size_t> indices) const
{
  Eigen::MatrixXd values(static_cast<Eigen::Index>(indices.size()), values_.cols());
  for (std::size_t r = 0; r < indices.size(); ++r)
    values.row(static_cast<Eigen::Index>(r)) =
      values_.row(static_cast<Eigen::Index>(indices[r]));
  CurveSet out;
  out.grid_ = grid_;
  out.values_ = std::move(values);
  return out;
}

CurveSet
CurveSet::scaled(double factor) const
{
  return CurveSet(grid_, values_ * factor);
}

Eigen::VectorXd
CurveSet::distances_to(const GridFunction& x) const
{
  if (!same_grid(grid_, x.grid_ptr()))
    raise(ErrorCode::GridMismatch, "query is defined on a different grid");
  const Eigen::RowVectorXd w = grid_->weights().transpose();
  const Eigen::RowVectorXd xv = x.values().transpose();
  Eigen::VectorXd d(values_.rows());
  for (Eigen::Index i = 0; i < values_.rows(); ++i)
    d(i) = std::sqrt((w.array() * (values_.row(i) - xv).array().square()).sum());
  return d;
}

Eigen::VectorXd
CurveSet::distances_to_row(std::size_t r) const
{
  const Eigen::RowVectorXd w = grid_->weights().transpose();
  const Eigen::RowVectorXd xv = values_.row(static_cast<Eigen::Index>(r));
  Eigen::VectorXd d(values_.rows());
  for (Eigen::Index i = 0; i < values_.rows(); ++i)
    d(i) = std::sqrt((w.array() * (values_.row(i) - xv).array().square()).sum());
  return d;
}

Eigen::MatrixXd
CurveSet::pairwise_distances() const
{
  const Eigen::Index n = values_.rows();
  const Eigen::RowVectorXd w = grid_->weights().transpose();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s =
        (w.array() * (values_.row(i) - values_.row(j)).array().square()).sum();
      d(i, j) = d(j, i) = std::sqrt(s);
    }
  }
  return d;
}

Eigen::VectorXd
CurveSet::squared_norms() const
{
  return values_.array().square().matrix() * grid_->weights();
}

} // namespace frem
