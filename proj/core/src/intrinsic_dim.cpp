#include "frem/intrinsic_dim.hpp"

#include "frem/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace frem {

int
round_dimension(double raw)
{
  return std::max(1, static_cast<int>(std::lround(raw)));
}

double
dim_mle_from_sorted(std::span<const double> sorted, std::size_t k, double delta)
{
  if (k < 2)
    raise(ErrorCode::InvalidSettings, "dimension MLE needs k >= 2");
  if (sorted.size() < k)
    raise(ErrorCode::InsufficientSample,
          "need " + std::to_string(k) + " neighbors, have " +
            std::to_string(sorted.size()));
  const double top = std::log(sorted[k - 1] + delta);
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < k; ++j)
    sum += top - std::log(sorted[j] + delta);
  if (!std::isfinite(sum) || !(sum > 0.0))
    raise(ErrorCode::InsufficientSpread,
          "neighbor distances carry no spread for the dimension MLE");
  return static_cast<double>(k - 1) / sum;
}

double
dim_mle_at_point(const GridFunction& x,
                 std::span<const GridFunction> sample,
                 std::size_t k,
                 double delta)
{
  if (sample.size() < k)
    raise(ErrorCode::InsufficientSample, "sample smaller than k");
  std::vector<double> dist;
  dist.reserve(sample.size());
  bool self_dropped = false;
  for (const auto& s : sample) {
    const double d = l2_distance(x, s);
    if (d == 0.0 && !self_dropped) {
      self_dropped = true;
      continue;
    }
    dist.push_back(d);
  }
  if (dist.size() < k)
    raise(ErrorCode::InsufficientSample, "sample smaller than k after removing x");
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  return dim_mle_from_sorted(dist, k, delta);
}

double
default_delta(const Eigen::MatrixXd& pairwise)
{
  const Eigen::Index n = pairwise.rows();
  if (n < 2)
    raise(ErrorCode::InsufficientSample, "need two curves for a distance scale");
  std::vector<double> nearest(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i)
        best = std::min(best, pairwise(i, j));
    nearest[static_cast<std::size_t>(i)] = best;
  }
  const auto mid = nearest.begin() + static_cast<std::ptrdiff_t>(nearest.size() / 2);
  std::nth_element(nearest.begin(), mid, nearest.end());
  double median = *mid;
  if (nearest.size() % 2 == 0) {
    const double lower = *std::max_element(nearest.begin(), mid);
    median = 0.5 * (median + lower);
  }
  return median / std::log(static_cast<double>(n));
}

DimEstimate
estimate_dim(const CurveSet& sample, const DimSettings& settings)
{
  if (sample.size() <= settings.k2)
    raise(ErrorCode::InsufficientSample,
          "dimension estimate needs n > k2 (n=" + std::to_string(sample.size()) +
            ", k2=" + std::to_string(settings.k2) + ")");
  return estimate_dim_from_distances(sample.pairwise_distances(), settings);
}

DimEstimate
estimate_dim_from_distances(const Eigen::MatrixXd& dist, const DimSettings& settings)
{
  const auto n = static_cast<std::size_t>(dist.rows());
  if (settings.k1 < 2 || settings.k1 > settings.k2)
    raise(ErrorCode::InvalidSettings, "need 2 <= k1 <= k2");
  if (n <= settings.k2)
    raise(ErrorCode::InsufficientSample,
          "dimension estimate needs n > k2 (n=" + std::to_string(n) +
            ", k2=" + std::to_string(settings.k2) + ")");
  if (settings.delta && !(*settings.delta >= 0.0))
    raise(ErrorCode::InvalidSettings, "delta must be nonnegative");

  const double delta = settings.delta ? *settings.delta : default_delta(dist);

  std::vector<std::size_t> bases(n);
  std::iota(bases.begin(), bases.end(), std::size_t{ 0 });
  if (settings.base_points && *settings.base_points > 0 && *settings.base_points < n) {
    const std::size_t b = *settings.base_points;
    bases.resize(b);
    for (std::size_t i = 0; i < b; ++i)
      bases[i] = (i * n) / b;
  }

  const std::size_t kcount = settings.k2 - settings.k1 + 1;
  std::vector<double> sums(kcount, 0.0);
  std::vector<double> row;
  row.reserve(n);
  for (std::size_t i : bases) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i)
        row.push_back(dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    std::partial_sort(row.begin(),
                      row.begin() + static_cast<std::ptrdiff_t>(settings.k2),
                      row.end());
    for (std::size_t k = settings.k1; k <= settings.k2; ++k)
      sums[k - settings.k1] += dim_mle_from_sorted(row, k, delta);
  }

  DimEstimate est;
  est.delta = delta;
  est.per_k.resize(kcount);
  double total = 0.0;
  for (std::size_t q = 0; q < kcount; ++q) {
    est.per_k[q] = sums[q] / static_cast<double>(bases.size());
    total += est.per_k[q];
  }
  est.raw = total / static_cast<double>(kcount);
  est.rounded = round_dimension(est.raw);
  return est;
}

DimEstimate
estimate_dim(std::span<const GridFunction> sample, const DimSettings& settings)
{
  return estimate_dim(CurveSet::from_functions(sample), settings);
}

} // namespace frem
