#include "frem/tuning.hpp"

#include "frem/error.hpp"
#include "frem/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace frem {

std::vector<double>
log_spaced(double lo, double hi, std::size_t count)
{
  if (!(lo > 0.0) || !(hi >= lo) || count == 0)
    raise(ErrorCode::InvalidSettings, "log_spaced needs 0 < lo <= hi and count >= 1");
  if (count == 1)
    return { lo };
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

double
quantile(std::vector<double> values, double q)
{
  if (values.empty())
    raise(ErrorCode::InsufficientSample, "quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<double>
upper_triangle(const Eigen::MatrixXd& d)
{
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(d.rows() * (d.rows() - 1) / 2));
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = i + 1; j < d.cols(); ++j)
      out.push_back(d(i, j));
  return out;
}

std::vector<std::vector<std::size_t>>
make_folds(std::size_t n, std::size_t k, std::uint64_t seed)
{
  if (k < 2 || k > n)
    raise(ErrorCode::InvalidSettings, "fold count must lie in [2, n]");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{ 0 });
  Rng rng = make_rng(seed, 0xF01D);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < n; ++i)
    folds[i % k].push_back(perm[i]);
  for (auto& f : folds)
    std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::size_t>
complement(const std::vector<std::size_t>& fold, std::size_t n)
{
  std::vector<char> in(n, 0);
  for (std::size_t i : fold)
    in[i] = 1;
  std::vector<std::size_t> out;
  out.reserve(n - fold.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!in[i])
      out.push_back(i);
  return out;
}

double
tie_tolerance(const Eigen::VectorXd& responses)
{
  const double ms = responses.size() > 0 ? responses.squaredNorm() / static_cast<double>(responses.size()) : 0.0;
  return 1e-12 * (1.0 + ms);
}

} // namespace frem
