#include "frem/datagen.hpp"
#include "frem/error.hpp"
#include "frem/intrinsic_dim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace frem;

namespace {

// Uniform sample of the unit cube in span{e_1..e_q}, e_k orthonormal.
CurveSet
linear_patch(std::size_t n, std::size_t q, std::uint64_t seed)
{
  const auto grid = default_grid();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(grid->size()));
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd xi(static_cast<Eigen::Index>(q));
    for (std::size_t k = 0; k < q; ++k)
      xi(static_cast<Eigen::Index>(k)) = u(rng);
    for (std::size_t g = 0; g < grid->size(); ++g) {
      double v = 0.0;
      for (std::size_t k = 0; k < q; ++k)
        v += xi(static_cast<Eigen::Index>(k)) * circle_basis_function(k + 1, grid->point(g));
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(g)) = v;
    }
  }
  return CurveSet(grid, values);
}

} // namespace

TEST(DimMle, RoundingRule)
{
  EXPECT_EQ(round_dimension(0.2), 1);
  EXPECT_EQ(round_dimension(1.49), 1);
  EXPECT_EQ(round_dimension(1.51), 2);
  EXPECT_EQ(round_dimension(3.5), 4);
}

TEST(DimMle, KnownDistances)
{
  // Distances r_j = (j / k)^(1/d) give an estimate close to d for large k;
  // for a small k the closed form is (k - 1) / sum log(r_k / r_j).
  const std::vector<double> r = { 1.0, 2.0, 4.0 };
  const double expected = 2.0 / (std::log(4.0) + std::log(2.0));
  EXPECT_NEAR(dim_mle_from_sorted(r, 3, 0.0), expected, 1e-15);
  const double with_delta = 2.0 / (std::log(5.0 / 2.0) + std::log(5.0 / 3.0));
  EXPECT_NEAR(dim_mle_from_sorted(r, 3, 1.0), with_delta, 1e-15);
}

TEST(DimMle, IdenticalPointsHaveNoSpread)
{
  const auto grid = default_grid();
  const auto x = GridFunction::constant(grid, 0.5);
  std::vector<GridFunction> sample(20, x);
  try {
    dim_mle_at_point(x, sample, 10, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientSpread);
  }
}

TEST(DimMle, SelfMatchDropped)
{
  const CurveSet s = linear_patch(40, 1, 3);
  const auto fs = s.to_functions();
  std::vector<double> others;
  for (std::size_t j = 1; j < fs.size(); ++j)
    others.push_back(l2_distance(fs[0], fs[j]));
  std::sort(others.begin(), others.end());
  EXPECT_NEAR(dim_mle_at_point(fs[0], fs, 10, 0.0), dim_mle_from_sorted(others, 10, 0.0), 1e-14);
}

TEST(DimMle, SegmentIsOneDimensional)
{
  const CurveSet s = linear_patch(500, 1, 17);
  const auto fs = s.to_functions();
  double mean = 0.0;
  for (const auto& x : fs)
    mean += dim_mle_at_point(x, fs, 15, 0.0);
  mean /= static_cast<double>(fs.size());
  EXPECT_NEAR(mean, 1.0, 0.2);
}

TEST(DimMle, CircleEmbeddingIsOneDimensional)
{
  const auto sample = gen_circle_example(1000, 2.0, 12, 23);
  DimSettings s;
  s.k1 = s.k2 = 20;
  s.delta = 0.0;
  EXPECT_NEAR(estimate_dim(sample.curves, s).raw, 1.0, 0.2);
}

TEST(EstimateDim, InsufficientSample)
{
  const CurveSet s = linear_patch(10, 2, 1);
  try {
    estimate_dim(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientSample);
  }
  DimSettings bad;
  bad.k1 = 5;
  bad.k2 = 4;
  EXPECT_THROW(estimate_dim(linear_patch(50, 2, 1), bad), Error);
  DimSettings negative;
  negative.delta = -1.0;
  EXPECT_THROW(estimate_dim(linear_patch(50, 2, 1), negative), Error);
}

TEST(EstimateDim, RelabelingAndShiftInvariant)
{
  const CurveSet s = linear_patch(200, 2, 4);
  const DimEstimate base = estimate_dim(s);

  std::vector<std::size_t> order(s.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = order.size() - 1 - i;
  EXPECT_NEAR(estimate_dim(s.subset(order)).raw, base.raw, 1e-12);

  Eigen::MatrixXd shifted = s.values();
  shifted.array() += 3.0;
  EXPECT_NEAR(estimate_dim(CurveSet(s.grid_ptr(), shifted)).raw, base.raw, 1e-9);
}

TEST(EstimateDim, PerKAverage)
{
  const CurveSet s = linear_patch(150, 2, 5);
  DimSettings settings;
  settings.delta = 0.01;
  const DimEstimate est = estimate_dim(s, settings);
  ASSERT_EQ(est.per_k.size(), 11u);
  double mean = 0.0;
  for (double v : est.per_k)
    mean += v;
  EXPECT_NEAR(est.raw, mean / 11.0, 1e-12);
  EXPECT_EQ(est.rounded, round_dimension(est.raw));
  EXPECT_EQ(est.delta, 0.01);
}

TEST(EstimateDim, DefaultDeltaIsMedianNearestOverLogN)
{
  Eigen::MatrixXd d(4, 4);
  d << 0, 1, 2, 3,
       1, 0, 4, 5,
       2, 4, 0, 6,
       3, 5, 6, 0;
  // Nearest distances 1, 1, 2, 3 -> median 1.5.
  EXPECT_NEAR(default_delta(d), 1.5 / std::log(4.0), 1e-15);
}

TEST(EstimateDim, BasePointSubsample)
{
  const CurveSet s = linear_patch(400, 2, 6);
  DimSettings settings;
  settings.base_points = 100;
  const DimEstimate sub = estimate_dim(s, settings);
  EXPECT_NEAR(sub.raw, estimate_dim(s).raw, 0.3);
}

TEST(EstimateDim, LinearPatchesRecoverDimension)
{
  for (std::size_t q = 1; q <= 3; ++q) {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
      if (estimate_dim(linear_patch(1000, q, 100 * q + seed)).rounded == static_cast<int>(q))
        ++hits;
    EXPECT_GE(hits, 16) << "q=" << q;
  }
}

TEST(EstimateDim, So3NoiselessIsThreeDimensional)
{
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sample = normalize_scale(gen_so3(1000, 500 + seed));
    if (estimate_dim(sample.curves).rounded == 3)
      ++hits;
  }
  EXPECT_GT(hits, 10);
}
