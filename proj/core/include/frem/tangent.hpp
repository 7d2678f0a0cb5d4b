#pragma once

#include "frem/funcspace.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace frem {

//! Local mean, leading eigenvalues and orthonormal eigenfunctions of the
//! local covariance at a query curve; spans the estimated tangent space.
struct TangentFrame
{
  GridFunction base;
  GridFunction mean;
  std::vector<double> eigenvalues;
  std::vector<GridFunction> basis;
  std::size_t neighborhood_size = 0;
  double h_pca_used = 0.0;

  std::size_t dim() const { return basis.size(); }
  //! d x G matrix whose rows are the basis functions.
  Eigen::MatrixXd basis_matrix() const;
};

//! Indices i with ||x - X_i|| < h_pca, ascending.
std::vector<std::size_t> neighborhood(const GridFunction& x,
                                      std::span<const GridFunction> curves,
                                      double h_pca);
std::vector<std::size_t> neighborhood(const Eigen::VectorXd& distances, double h_pca);

struct LocalCovariance
{
  GridFunction mean;
  //! C(s, t) on grid points, G x G.
  Eigen::MatrixXd kernel;
  std::size_t count = 0;
};

LocalCovariance local_covariance(std::span<const GridFunction> neighbors);
LocalCovariance local_covariance(const CurveSet& neighbors);

//! Top-d eigenpairs of the covariance operator, solved as the symmetric
//! problem W^1/2 C W^1/2 and mapped back so the basis is orthonormal under
//! the quadrature inner product. Each basis function is signed so its first
//! nonzero quadrature coordinate is positive.
TangentFrame tangent_basis(const Eigen::MatrixXd& covariance,
                           std::size_t d,
                           const GridFunction& x,
                           const GridFunction& mean,
                           std::size_t neighborhood_size = 0);
TangentFrame tangent_basis(const LocalCovariance& cov,
                           std::size_t d,
                           const GridFunction& x);

//! Same eigenpairs through the |N| x |N| Gram matrix of the centered
//! neighbors; cheaper whenever |N| is below the grid size.
TangentFrame tangent_basis_gram(const CurveSet& neighbors,
                                std::size_t d,
                                const GridFunction& x);

//! Raw coordinates <curve, phi_k>.
Eigen::VectorXd project(const GridFunction& curve, const TangentFrame& frame);
//! Raw coordinates of every curve, one row per curve.
Eigen::MatrixXd project(const CurveSet& curves, const TangentFrame& frame);

struct TangentOptions
{
  std::size_t min_neighbors = 10;
  double growth = 1.5;
  std::size_t max_growth_steps = 10;
};

//! Neighborhood + local FPCA at x. The radius grows by `growth` (at most
//! `max_growth_steps` times) until max(d + 2, min_neighbors) curves fall
//! inside; otherwise InsufficientNeighborhood.
TangentFrame estimate_tangent(const GridFunction& x,
                              const CurveSet& curves,
                              const Eigen::VectorXd& distances,
                              std::size_t d,
                              double h_pca,
                              const TangentOptions& options = {});
TangentFrame estimate_tangent(const GridFunction& x,
                              const CurveSet& curves,
                              std::size_t d,
                              double h_pca,
                              const TangentOptions& options = {});

} // namespace frem
