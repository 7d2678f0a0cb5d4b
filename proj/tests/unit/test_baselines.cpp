#include "frem/baselines.hpp"
#include "frem/datagen.hpp"
#include "frem/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace frem;
using namespace frem::baselines;

namespace {

GridFunction
basis_curve(const GridPtr& grid, std::size_t index)
{
  return GridFunction::evaluate(grid, [index](double t) { return circle_basis_function(index, t); });
}

// Curves mean + sum_k s_ik e_k whose score columns are centered and mutually
// orthogonal with distinct norms, so the sample eigenfunctions are e_1..e_3.
struct ThreeComponentSample
{
  CurveSet curves;
  GridFunction mean;
  std::vector<GridFunction> e;
  Eigen::MatrixXd scores;
};

ThreeComponentSample
three_components(std::size_t n, std::uint64_t seed)
{
  const auto grid = default_grid();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd s(static_cast<Eigen::Index>(n), 3);
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index k = 0; k < 3; ++k)
      s(i, k) = z(rng);
  s.rowwise() -= s.colwise().mean();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(s);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(s.rows(), 3);
  const double scale = std::sqrt(static_cast<double>(n));
  q.col(0) *= 3.0 * scale;
  q.col(1) *= 2.0 * scale;
  q.col(2) *= 1.0 * scale;

  const auto mean = GridFunction::evaluate(grid, [](double t) { return std::exp(-t); });
  std::vector<GridFunction> e = { basis_curve(grid, 1), basis_curve(grid, 2), basis_curve(grid, 3) };
  Eigen::MatrixXd v(s.rows(), static_cast<Eigen::Index>(grid->size()));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::VectorXd row = mean.values();
    for (std::size_t k = 0; k < 3; ++k)
      row += q(i, static_cast<Eigen::Index>(k)) * e[k].values();
    v.row(i) = row.transpose();
  }
  return { CurveSet(grid, v), mean, e, q };
}

} // namespace

TEST(Fnw, SingleWeightedPairGivesItsResponse)
{
  const auto grid = default_grid();
  const auto a = GridFunction::constant(grid, 0.0), b = GridFunction::constant(grid, 5.0);
  const std::vector<GridFunction> fs = { a, b };
  FnwModel m{ CurveSet::from_functions(fs), Eigen::Vector2d(1.5, -4.0), 1.0 };
  EXPECT_DOUBLE_EQ(fnw_predict(m, GridFunction::constant(grid, 0.2)), 1.5);
  try {
    fnw_predict(m, GridFunction::constant(grid, 2.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyWindow);
  }
  // 2.5 from both; widening by 1.5 three times reaches 3.375 > 2.5.
  EXPECT_NEAR(fnw_predict_adaptive(m, m.curves.distances_to(GridFunction::constant(grid, 2.5))), -1.25, 1e-12);
}

TEST(Fnw, ConstantResponsesAndRange)
{
  const auto s = normalize_scale(gen_klein(200, 1));
  const auto test = normalize_scale(gen_klein(30, 2));
  FnwModel c{ s.curves, Eigen::VectorXd::Constant(200, 2.5), 0.6 };
  const auto y = draw_responses(s.curves, 2.0, 3).observed;
  FnwModel m{ s.curves, y, 0.6 };
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto x = test.curves.curve(i);
    EXPECT_NEAR(fnw_predict(c, x), 2.5, 1e-10);
    const double p = fnw_predict(m, x);
    EXPECT_GE(p, y.minCoeff());
    EXPECT_LE(p, y.maxCoeff());
  }
}

TEST(Fnw, CvBandwidthSelection)
{
  const auto s = normalize_scale(gen_klein(150, 4));
  const auto y = draw_responses(s.curves, 2.0, 5).observed;
  const std::vector<double> cands = { 0.1, 0.3, 0.6, 1.2 };
  const FnwModel a = fnw_fit(s.curves, y, cands, 10, 7);
  const FnwModel b = fnw_fit(s.curves, y, cands, 10, 7);
  EXPECT_EQ(a.bandwidth, b.bandwidth);
  EXPECT_NE(std::find(cands.begin(), cands.end(), a.bandwidth), cands.end());

  const FnwModel tie = fnw_fit(s.curves, Eigen::VectorXd::Constant(150, 1.0), cands, 10, 7);
  EXPECT_EQ(tie.bandwidth, 0.1);
  EXPECT_THROW(fnw_fit(s.curves, y, std::vector<double>{}, 10, 7), Error);
}

TEST(Flr, ExactRecoveryOfLinearScoreModel)
{
  const auto sample = three_components(120, 6);
  Eigen::VectorXd y(120);
  for (Eigen::Index i = 0; i < 120; ++i)
    y(i) = 2.0 + 3.0 * inner_product(sample.curves.curve(static_cast<std::size_t>(i)) - sample.mean, sample.e[0]);
  const std::vector<std::size_t> ps = { 1, 2, 3, 4, 5 };
  const FlrModel m = flr_fit(sample.curves, y, ps, 10, 1);
  for (std::size_t i = 0; i < sample.curves.size(); ++i)
    EXPECT_NEAR(flr_predict(m, sample.curves.curve(i)), y(static_cast<Eigen::Index>(i)), 1e-6);

  const FlrModel one = flr_fit_fixed(sample.curves, y, 1);
  EXPECT_NEAR(std::abs(one.slopes(0)), 3.0, 1e-8);
  EXPECT_NEAR(one.intercept, 2.0, 1e-8);
}

TEST(Flr, EigenfunctionsOrthonormal)
{
  const auto s = normalize_scale(gen_so3(200, 7));
  const auto y = draw_responses(s.curves, 2.0, 8).observed;
  const FlrModel m = flr_fit_fixed(s.curves, y, 6);
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      EXPECT_NEAR(inner_product(m.eigenfunctions[a], m.eigenfunctions[b]), a == b ? 1.0 : 0.0, 1e-8);
  for (std::size_t k = 1; k < 6; ++k)
    EXPECT_GE(m.eigenvalues(static_cast<Eigen::Index>(k - 1)), m.eigenvalues(static_cast<Eigen::Index>(k)));
}

TEST(Flr, ResidualsOrthogonalToScores)
{
  const auto s = normalize_scale(gen_klein(150, 9));
  const auto y = draw_responses(s.curves, 2.0, 10).observed;
  const FlrModel m = flr_fit_fixed(s.curves, y, 3);
  Eigen::VectorXd resid(150);
  Eigen::MatrixXd scores(150, 3);
  for (std::size_t i = 0; i < 150; ++i) {
    const auto x = s.curves.curve(i);
    resid(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(i)) - flr_predict(m, x);
    scores.row(static_cast<Eigen::Index>(i)) = flr_scores(m, x).transpose();
  }
  EXPECT_NEAR(resid.sum(), 0.0, 1e-8);
  EXPECT_LT((scores.transpose() * resid).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Flr, MeanAndUnitScoreQueries)
{
  const auto s = normalize_scale(gen_klein(100, 11));
  const auto y = draw_responses(s.curves, 2.0, 12).observed;
  const FlrModel m = flr_fit_fixed(s.curves, y, 3);
  EXPECT_NEAR(flr_predict(m, m.mean), m.intercept, 1e-12);
  EXPECT_NEAR(flr_predict(m, m.mean + m.eigenfunctions[0]), m.intercept + m.slopes(0), 1e-10);
  double unit = 0.0;
  for (double a : { 0.5, 1.0, 2.0 }) {
    const double delta = flr_predict(m, m.mean + a * m.eigenfunctions[0]) - m.intercept;
    if (a == 0.5)
      unit = delta / 0.5;
    EXPECT_NEAR(delta, a * unit, 1e-10);
  }
  const auto alien = GridFunction::constant(Grid::regular(0.0, 1.0, 9), 1.0);
  EXPECT_THROW(flr_predict(m, alien), Error);
}

TEST(Flr, ConstantResponsesGiveInterceptOnlyModel)
{
  const auto s = normalize_scale(gen_klein(80, 13));
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(80, -0.4);
  const std::vector<std::size_t> ps = { 0, 1, 2, 3 };
  const FlrModel m = flr_fit(s.curves, y, ps, 10, 2);
  EXPECT_EQ(m.p, 0u);
  const auto test = normalize_scale(gen_klein(10, 14));
  for (std::size_t i = 0; i < test.size(); ++i)
    EXPECT_NEAR(flr_predict(m, test.curves.curve(i)), -0.4, 1e-10);
  const FlrModel fixed = flr_fit_fixed(s.curves, y, 3);
  for (std::size_t i = 0; i < test.size(); ++i)
    EXPECT_NEAR(flr_predict(fixed, test.curves.curve(i)), -0.4, 1e-10);
}

TEST(Flr, RankDeficientRequests)
{
  const auto sample = three_components(40, 15);
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(40, 0.0, 1.0);
  try {
    flr_fit_fixed(sample.curves, y, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
  }
  EXPECT_THROW(flr_fit_fixed(sample.curves.subset(std::vector<std::size_t>{ 0, 1 }), y.head(2), 2), Error);
}
