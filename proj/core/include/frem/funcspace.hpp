#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace frem {

//! Closed interval D = [lower, upper] on which curves live.
struct Domain
{
  double lower = 0.0;
  double upper = 1.0;

  double length() const { return upper - lower; }
  bool contains(double t) const { return t >= lower && t <= upper; }
};

//! Ordered evaluation points over D with cached trapezoid weights.
class Grid
{
public:
  explicit Grid(std::vector<double> points);

  static std::shared_ptr<const Grid> regular(double lower,
                                             double upper,
                                             std::size_t count);
  static std::shared_ptr<const Grid> regular(Domain domain, std::size_t count)
  {
    return regular(domain.lower, domain.upper, count);
  }

  std::size_t size() const { return points_.size(); }
  std::span<const double> points() const { return points_; }
  double point(std::size_t i) const { return points_[i]; }
  double lower() const { return points_.front(); }
  double upper() const { return points_.back(); }
  Domain domain() const { return { lower(), upper() }; }
  bool is_regular() const { return regular_; }

  //! Trapezoid quadrature weights; they sum to upper() - lower().
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& sqrt_weights() const { return sqrt_weights_; }

  bool same_points(const Grid& other) const;

private:
  std::vector<double> points_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd sqrt_weights_;
  bool regular_ = false;
};

using GridPtr = std::shared_ptr<const Grid>;

bool same_grid(const GridPtr& a, const GridPtr& b);

//! A curve evaluated on a shared grid; the discretized element of L2(D).
class GridFunction
{
public:
  GridFunction(GridPtr grid, Eigen::VectorXd values);

  template<class F>
  static GridFunction evaluate(GridPtr grid, F&& f)
  {
    Eigen::VectorXd v(static_cast<Eigen::Index>(grid->size()));
    for (std::size_t i = 0; i < grid->size(); ++i)
      v(static_cast<Eigen::Index>(i)) = f(grid->point(i));
    return GridFunction(std::move(grid), std::move(v));
  }

  static GridFunction constant(GridPtr grid, double c);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const
  {
    return values_(static_cast<Eigen::Index>(i));
  }

  GridFunction operator+(const GridFunction& other) const;
  GridFunction operator-(const GridFunction& other) const;
  GridFunction operator*(double c) const;

private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

inline GridFunction
operator*(double c, const GridFunction& f)
{
  return f * c;
}

//! Throws GridMismatch unless both functions live on the same points.
void require_same_grid(const GridFunction& f, const GridFunction& g);

double inner_product(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);
double l2_distance(const GridFunction& f, const GridFunction& g);

//! Epanechnikov kernel 0.75 (1 - u^2) on [-1, 1].
double kernel_eval(double u) noexcept;

struct Kernel
{
  static constexpr double support_radius = 1.0;
  double operator()(double u) const noexcept { return kernel_eval(u); }
};

//! A sample of curves sharing one grid, stored row-wise for bulk L2 work.
class CurveSet
{
public:
  CurveSet() = default;
  CurveSet(GridPtr grid, Eigen::MatrixXd values);

  static CurveSet from_functions(std::span<const GridFunction> curves);

  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  bool empty() const { return size() == 0; }
  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Eigen::MatrixXd& values() const { return values_; }

  GridFunction curve(std::size_t i) const;
  std::vector<GridFunction> to_functions() const;
  CurveSet subset(std::span<const std::size_t> indices) const;
  CurveSet scaled(double factor) const;

  //! L2 distances from x to every curve.
  Eigen::VectorXd distances_to(const GridFunction& x) const;
  Eigen::VectorXd distances_to_row(std::size_t i) const;
  //! Symmetric matrix of pairwise L2 distances.
  Eigen::MatrixXd pairwise_distances() const;
  Eigen::VectorXd squared_norms() const;

private:
  GridPtr grid_;
  Eigen::MatrixXd values_;
};

} // namespace frem
