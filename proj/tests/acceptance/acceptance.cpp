// Acceptance runner: one PASS/FAIL line per criterion.
#include "frem/baselines.hpp"
#include "frem/bench/dataset.hpp"
#include "frem/bench/holdout.hpp"
#include "frem/bench/pipeline.hpp"
#include "frem/bench/rate_study.hpp"
#include "frem/bench/report.hpp"
#include "frem/bench/simulation.hpp"
#include "frem/datagen.hpp"
#include "frem/error.hpp"
#include "frem/estimator.hpp"
#include "frem/intrinsic_dim.hpp"
#include "frem/parallel.hpp"
#include "frem/recovery.hpp"
#include "frem/tangent.hpp"

#include <CLI11.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace frem;
using namespace frem::bench;
namespace fs = std::filesystem;

namespace {

// Criterion 1
constexpr double kRecoverySlope = -0.4;
constexpr double kRecoverySlopeTol = 0.15;
constexpr std::size_t kRecoveryReplicates = 200;

// Criterion 2
constexpr std::size_t kDimSampleSize = 1000;
constexpr std::size_t kDimRuns = 20;
constexpr double kDimExactShare = 0.9;
constexpr double kDimWithinOneShare = 0.9;
constexpr std::size_t kDimContaminationM = 100;
constexpr double kDimContaminationSnr = 4.0;

// Criterion 3
constexpr std::size_t kTangentSampleSize = 2000;
constexpr std::size_t kTangentReplicates = 20;
constexpr double kTangentAlpha = 0.05;

// Criterion 4
constexpr double kConstantTol = 1e-10;
constexpr double kLinearTol = 1e-8;
constexpr double kAffineTol = 1e-8;
constexpr double kRotationTol = 1e-10;

// Criterion 5
constexpr std::size_t kTableReplicates = 20;
constexpr std::size_t kTableTestSize = 1000;
constexpr double kDirectionShare = 0.9;
constexpr double kKleinMagnitudeLow = 0.07;
constexpr double kKleinMagnitudeHigh = 0.20;

// Criterion 6
constexpr double kReductionTarget = 20.6;
constexpr double kReductionTol = 10.0;
constexpr double kPairedShare = 0.8;

// Criterion 7
constexpr std::size_t kHoldoutRepeats = 20;

struct Outcome
{
  bool pass = false;
  std::string detail;
};

std::string
fmt(double v, int digits = 4)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string
pct(double share)
{
  return fmt(100.0 * share, 3) + "%";
}

struct Context
{
  std::size_t workers = 1;
  std::string cli;
  fs::path data_dir;
  std::map<Setting, EvalReport> tables;
};

// ---------------------------------------------------------------------------

Outcome
recovery_rate(Context& ctx)
{
  RateStudyConfig c;
  c.mode = RateMode::Recovery;
  c.abscissae = { 50, 100, 200, 400, 800 };
  c.replicates = kRecoveryReplicates;
  c.nu = 2.0;
  c.snr_x = 4.0;
  c.master_seed = 1;
  const RateReport r = rate_study(c, ctx.workers);
  const bool pass = std::abs(r.slope - kRecoverySlope) <= kRecoverySlopeTol;
  return { pass, "slope " + fmt(r.slope) + " (se " + fmt(r.slope_se, 2) + "), target " + fmt(kRecoverySlope) +
                   " +/- " + fmt(kRecoverySlopeTol) };
}

// ---------------------------------------------------------------------------

struct DimTally
{
  std::size_t exact = 0;
  std::size_t within_one = 0;
  double raw_sum = 0.0;
};

Outcome
dimension_consistency(Context& ctx)
{
  const std::vector<Setting> settings = { Setting::Circle, Setting::Klein, Setting::So3 };
  bool pass = true;
  std::string detail;
  for (bool contaminated : { false, true }) {
    for (Setting s : settings) {
      const int truth = true_dimension(s);
      std::vector<DimEstimate> est(kDimRuns);
      parallel_for(kDimRuns, ctx.workers, [&](std::size_t r) {
        const std::uint64_t seed = replicate_seed(0xD1, r);
        ManifoldSample sample = normalize_scale(generate(s, kDimSampleSize, seed));
        CurveSet curves = sample.curves;
        if (contaminated) {
          const auto records = observe(sample, kDimContaminationM, kDimContaminationSnr, mix_seed(seed, 1));
          curves = recover_all(records, sample.curves.grid_ptr(), RecoveryOptions{});
        }
        est[r] = estimate_dim(curves);
      });
      DimTally t;
      for (const auto& e : est) {
        t.exact += e.rounded == truth;
        t.within_one += std::abs(e.rounded - truth) <= 1;
        t.raw_sum += e.raw;
      }
      const double exact = static_cast<double>(t.exact) / kDimRuns;
      const double near = static_cast<double>(t.within_one) / kDimRuns;
      bool ok = false;
      if (contaminated)
        ok = near >= kDimWithinOneShare && exact > 0.5;
      else
        ok = exact >= kDimExactShare;
      pass = pass && ok;
      detail += std::string(detail.empty() ? "" : "; ") + (contaminated ? "m=100 " : "clean ") + to_string(s) +
                " exact " + pct(exact) + (contaminated ? " within1 " + pct(near) : "") + " mean " +
                fmt(t.raw_sum / kDimRuns, 3);
    }
  }
  return { pass, detail };
}

// ---------------------------------------------------------------------------

GridFunction
basis_curve(const GridPtr& grid, std::size_t index)
{
  return GridFunction::evaluate(grid, [index](double t) { return circle_basis_function(index, t); });
}

std::vector<double>
average_ranks(const std::vector<double>& v)
{
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
      ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double
pearson(const std::vector<double>& a, const std::vector<double>& b)
{
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i] / n;
    mb += b[i] / n;
  }
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

Outcome
tangent_quality(Context& ctx)
{
  const auto grid = default_grid();
  const std::size_t terms = 12;
  const double c = 2.0;
  Eigen::MatrixXd latent(1, 1);
  latent(0, 0) = 0.0;
  const GridFunction x = sample_from_latents(Setting::Circle, latent, grid, c, terms).curves.curve(0);
  // d/d omega of the fixture at omega = 0.
  Eigen::VectorXd tangent = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->size()));
  for (std::size_t k = 1; k <= terms; ++k)
    tangent += std::pow(static_cast<double>(k), 1.0 - c) * basis_curve(grid, 2 * k).values();
  const GridFunction tau(grid, tangent);

  const std::vector<double> hs = { 0.4, 0.2, 0.1 };
  std::vector<double> angle(kTangentReplicates * hs.size());
  parallel_for(kTangentReplicates, ctx.workers, [&](std::size_t r) {
    const auto sample = gen_circle_example(kTangentSampleSize, c, terms, replicate_seed(0x7A, r), grid);
    const Eigen::VectorXd dist = sample.curves.distances_to(x);
    for (std::size_t j = 0; j < hs.size(); ++j) {
      const TangentFrame f = estimate_tangent(x, sample.curves, dist, 1, hs[j]);
      const double cosine = std::abs(inner_product(f.basis[0], tau)) / l2_norm(tau);
      angle[r * hs.size() + j] = std::acos(std::min(1.0, cosine));
    }
  });

  std::vector<double> h_col, a_col;
  std::vector<double> mean(hs.size(), 0.0);
  for (std::size_t r = 0; r < kTangentReplicates; ++r)
    for (std::size_t j = 0; j < hs.size(); ++j) {
      h_col.push_back(hs[j]);
      a_col.push_back(angle[r * hs.size() + j]);
      mean[j] += angle[r * hs.size() + j] / kTangentReplicates;
    }
  const double rho = pearson(average_ranks(h_col), average_ranks(a_col));
  const double df = static_cast<double>(h_col.size()) - 2.0;
  const double t = rho * std::sqrt(df / std::max(1e-300, 1.0 - rho * rho));
  const boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  const bool monotone = mean[0] > mean[1] && mean[1] > mean[2];
  const bool pass = rho > 0.0 && p < kTangentAlpha;
  return { pass, "mean angle h=0.4/0.2/0.1: " + fmt(mean[0]) + "/" + fmt(mean[1]) + "/" + fmt(mean[2]) +
                   (monotone ? " (monotone)" : " (not monotone)") + ", spearman rho " + fmt(rho, 3) + " p " +
                   fmt(p, 3) };
}

// ---------------------------------------------------------------------------

FremModel
manual_model(CurveSet curves, Eigen::VectorXd y, int d, double h_pca, double h_reg)
{
  FremModel m;
  m.curves = std::move(curves);
  m.responses = std::move(y);
  m.dim.raw = d;
  m.dim.rounded = d;
  m.h_pca = h_pca;
  m.h_reg = h_reg;
  m.validate();
  return m;
}

Outcome
exactness(Context&)
{
  double constant_err = 0.0, linear_err = 0.0, affine_err = 0.0, rotation_err = 0.0;

  {
    const auto train = normalize_scale(gen_klein(200, 41));
    const auto test = normalize_scale(gen_klein(30, 42));
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(200, 3.25);
    TuningGrids tuning;
    tuning.bandwidth_count = 4;
    for (Method m : { Method::Frem, Method::Fnw, Method::Flr }) {
      const auto o = run_method(m, train.curves, y, test.curves, tuning, 43);
      constant_err = std::max(constant_err, (o.predictions.array() - 3.25).abs().maxCoeff());
    }
  }

  {
    const auto grid = default_grid();
    const auto offset = GridFunction::evaluate(grid, [](double t) { return 0.5 - t; });
    const auto e1 = basis_curve(grid, 1), e2 = basis_curve(grid, 2);
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd v(120, static_cast<Eigen::Index>(grid->size()));
    Eigen::VectorXd y(120);
    const auto truth = [&](const GridFunction& f) { return 1.0 + 2.0 * inner_product(f, e1) - inner_product(f, e2); };
    for (Eigen::Index i = 0; i < 120; ++i) {
      const GridFunction f = offset + u(rng) * e1 + u(rng) * e2;
      v.row(i) = f.values().transpose();
      y(i) = truth(f);
    }
    const FremModel m = manual_model(CurveSet(grid, v), y, 2, 0.8, 0.7);
    for (double a : { -0.3, 0.0, 0.45 }) {
      const GridFunction f = offset + a * e1 + (0.2 - a) * e2;
      linear_err = std::max(linear_err, std::abs(fit_local(m, f).value - truth(f)));
    }
  }

  {
    const auto grid = Grid::regular(0.0, 1.0, 100);
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DiscreteObservations obs;
    for (int j = 0; j < 50; ++j)
      obs.times.push_back(u(rng));
    std::sort(obs.times.begin(), obs.times.end());
    for (double t : obs.times)
      obs.values.push_back(2.0 + 3.0 * t);
    const auto f = smooth_curve(obs, { 0.2, default_ridge(50), grid });
    for (std::size_t g = 0; g < grid->size(); ++g)
      affine_err = std::max(affine_err, std::abs(f[g] - (2.0 + 3.0 * grid->point(g))));
  }

  {
    const auto s = normalize_scale(gen_klein(300, 46));
    const auto y = draw_responses(s.curves, 2.0, 47).observed;
    const FremModel m = manual_model(s.curves, y, 2, 0.5, 0.45);
    const auto test = normalize_scale(gen_klein(10, 48));
    std::mt19937_64 rng(49);
    std::normal_distribution<double> z;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const GridFunction x = test.curves.curve(i);
      const Eigen::VectorXd dist = m.curves.distances_to(x);
      const TangentFrame frame = estimate_tangent(x, m.curves, dist, 2, m.h_pca);
      Eigen::MatrixXd g(2, 2);
      g << z(rng), z(rng), z(rng), z(rng);
      const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
      TangentFrame turned = frame;
      const Eigen::MatrixXd b = q * frame.basis_matrix();
      for (std::size_t k = 0; k < 2; ++k)
        turned.basis[k] = GridFunction(x.grid_ptr(), b.row(static_cast<Eigen::Index>(k)).transpose());
      rotation_err = std::max(rotation_err, std::abs(fit_with_frame(m, x, turned, dist).value -
                                                     fit_with_frame(m, x, frame, dist).value));
    }
  }

  const bool pass = constant_err <= kConstantTol && linear_err <= kLinearTol && affine_err <= kAffineTol &&
                    rotation_err <= kRotationTol;
  return { pass, "constant " + fmt(constant_err, 2) + ", linear " + fmt(linear_err, 2) + ", affine " +
                   fmt(affine_err, 2) + ", rotation " + fmt(rotation_err, 2) };
}

// ---------------------------------------------------------------------------

const EvalReport&
table(Context& ctx, Setting s)
{
  auto it = ctx.tables.find(s);
  if (it != ctx.tables.end())
    return it->second;
  SimulationConfig c;
  c.setting = s;
  c.n = s == Setting::Klein ? std::vector<std::size_t>{ 250, 500, 1000 } : std::vector<std::size_t>{ 250, 500 };
  c.replicates = kTableReplicates;
  c.test_size = kTableTestSize;
  c.master_seed = 2024;
  const auto start = std::chrono::steady_clock::now();
  EvalReport r = run_simulation(c, ctx.workers);
  std::cerr << "  " << to_string(s) << " simulation: "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s\n";
  return ctx.tables.emplace(s, std::move(r)).first->second;
}

const ReplicateResult*
find_result(const EvalReport& r, Method m, std::size_t n, std::size_t rep)
{
  for (const auto& x : r.results)
    if (x.method == m && x.n == n && x.replicate == rep)
      return &x;
  return nullptr;
}

Outcome
table_direction(Context& ctx)
{
  bool pass = true;
  std::string detail;
  for (Setting s : { Setting::Klein, Setting::Mixg }) {
    const EvalReport& r = table(ctx, s);
    for (std::size_t n : { 250u, 500u }) {
      std::size_t wins = 0;
      for (std::size_t rep = 0; rep < kTableReplicates; ++rep) {
        const auto* a = find_result(r, Method::Frem, n, rep);
        const auto* b = find_result(r, Method::Fnw, n, rep);
        const auto* c = find_result(r, Method::Flr, n, rep);
        if (a && b && c && a->ok && b->ok && c->ok && a->rmse_signal < b->rmse_signal &&
            a->rmse_signal < c->rmse_signal)
          ++wins;
      }
      const double share = static_cast<double>(wins) / kTableReplicates;
      pass = pass && share >= kDirectionShare;
      detail += std::string(detail.empty() ? "" : "; ") + to_string(s) + " n=" + std::to_string(n) + " wins " +
                pct(share) + " (frem/fnw/flr " + fmt(r.summary(Method::Frem, n).mean_rmse_signal, 3) + "/" +
                fmt(r.summary(Method::Fnw, n).mean_rmse_signal, 3) + "/" +
                fmt(r.summary(Method::Flr, n).mean_rmse_signal, 3) + ")";
    }
  }
  const double klein = table(ctx, Setting::Klein).summary(Method::Frem, 500).mean_rmse_signal;
  const bool magnitude = klein >= kKleinMagnitudeLow && klein <= kKleinMagnitudeHigh;
  detail += "; klein n=500 frem " + fmt(klein, 3) + " in [" + fmt(kKleinMagnitudeLow) + ", " +
            fmt(kKleinMagnitudeHigh) + "]: " + (magnitude ? "yes" : "no");
  return { pass && magnitude, detail };
}

Outcome
rate_in_n(Context& ctx)
{
  const EvalReport& r = table(ctx, Setting::Klein);
  EvalReport small, large;
  for (const auto& x : r.results) {
    if (x.method == Method::Flr)
      continue;
    if (x.n == 500)
      small.results.push_back(x);
    else if (x.n == 1000)
      large.results.push_back(x);
  }
  small.summaries = summarize(small.results);
  large.summaries = summarize(large.results);
  const ReductionTable t = relative_reduction(small, large, 2, true);
  double frem_pct = 0.0, fnw_pct = 0.0;
  for (const auto& row : t.rows)
    (row.method == Method::Frem ? frem_pct : fnw_pct) = row.reduction_pct;
  const auto a = paired_reductions(small, large, Method::Frem, true);
  const auto b = paired_reductions(small, large, Method::Fnw, true);
  std::size_t smaller = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    smaller += b[i] < a[i];
  const double share = a.empty() ? 0.0 : static_cast<double>(smaller) / static_cast<double>(a.size());
  const bool pass = std::abs(frem_pct - kReductionTarget) <= kReductionTol && share >= kPairedShare;
  return { pass, "frem reduction " + fmt(frem_pct, 3) + "% (target " + fmt(kReductionTarget) + " +/- " +
                   fmt(kReductionTol) + "), fnw " + fmt(fnw_pct, 3) + "%, fnw smaller in " + pct(share) +
                   " of pairs" };
}

// ---------------------------------------------------------------------------

Outcome
real_data(Context& ctx)
{
  const Dataset data = load_dataset(ctx.data_dir / "tecator.csv", Preprocess::DifferenceQuotient);
  HoldoutConfig c;
  c.repeats = kHoldoutRepeats;
  const EvalReport r = holdout_eval(data, c, ctx.workers);
  const std::size_t n = r.results.front().n;
  const auto& a = r.summary(Method::Frem, n);
  const auto& b = r.summary(Method::Fnw, n);
  const auto& f = r.summary(Method::Flr, n);
  const bool pass = a.failed_count == 0 && a.mean_rmse < b.mean_rmse && a.mean_rmse < f.mean_rmse;
  return { pass, "rMSE frem " + fmt(a.mean_rmse, 3) + ", fnw " + fmt(b.mean_rmse, 3) + ", flr " +
                   fmt(f.mean_rmse, 3) + "; dim " + fmt(a.mean_dim_raw, 3) + " +/- " + fmt(a.sd_dim_raw, 3) };
}

// ---------------------------------------------------------------------------

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Concatenated stdout and every file the run wrote, in path order.
std::string
cli_fingerprint(const std::string& cli, const std::string& args, const fs::path& dir)
{
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = "\"" + cli + "\" " + args + " >\"" + out.string() + "\" 2>\"" + (dir / "stderr").string() + "\"";
  const int raw = std::system(cmd.c_str());
  std::string fp = "exit " + std::to_string(WIFEXITED(raw) ? WEXITSTATUS(raw) : -1) + "\n";
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != "stderr")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files)
    fp += fs::relative(p, dir).string() + "\n" + slurp(p);
  return fp;
}

Outcome
determinism(Context& ctx)
{
  const fs::path root = fs::temp_directory_path() / "frem_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);
  const fs::path sim = root / "sim.json";
  std::ofstream(sim) << R"({"setting": "klein", "n": [80, 120], "m": 40, "replicates": 4, "test_size": 60,
    "tuning": {"bandwidth_count": 4}})";
  const fs::path rate = root / "rate.json";
  std::ofstream(rate) << R"({"mode": "recovery", "abscissae": [20, 40, 80], "replicates": 16, "bootstrap": 50})";
  const fs::path small = root / "small.csv";
  {
    const auto s = normalize_scale(gen_mixg(90, 5));
    const auto y = draw_responses(s.curves, 2.0, 6).observed;
    std::ofstream out(small);
    const auto& g = s.curves.grid();
    for (std::size_t j = 0; j < g.size(); ++j)
      out << format_double(g.point(j)) << ',';
    out << "y\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j)
        out << format_double(s.curves.values()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << ',';
      out << format_double(y(static_cast<Eigen::Index>(i))) << '\n';
    }
  }
  const std::string tecator = (ctx.data_dir / "tecator.csv").string();
  const fs::path model = root / "model.json";

  struct Case
  {
    std::string name;
    std::string args;
  };
  const std::vector<Case> cases = {
    { "simulate", "simulate --config \"" + sim.string() + "\" --out {out}" },
    { "rate-study", "rate-study --config \"" + rate.string() + "\" --out {out}" },
    { "real", "real --data \"" + tecator + "\" --preprocess difference-quotient --repeats 3 --out {out}" },
    { "fit", "fit --data \"" + small.string() + "\" --model \"" + model.string() + "\"" },
    { "dim", "dim --data \"" + tecator + "\" --preprocess difference-quotient" },
  };

  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    std::string reference;
    bool same = true;
    for (int w : { 1, 4, 8 }) {
      const fs::path dir = root / (c.name + "_w" + std::to_string(w));
      std::string args = c.args;
      for (std::size_t pos; (pos = args.find("{out}")) != std::string::npos;)
        args.replace(pos, 5, "\"" + dir.string() + "\"");
      std::string fp = cli_fingerprint(ctx.cli, "--workers " + std::to_string(w) + " " + args, dir);
      if (c.name == "fit")
        fp += slurp(model);
      if (w == 1)
        reference = fp;
      same = same && fp == reference && fp.rfind("exit 0", 0) == 0;
    }
    pass = pass && same;
    detail += std::string(detail.empty() ? "" : ", ") + c.name + (same ? " identical" : " DIFFERS");
  }
  {
    std::string reference;
    bool same = true;
    for (int w : { 1, 4, 8 }) {
      const fs::path dir = root / ("predict_w" + std::to_string(w));
      const std::string fp = cli_fingerprint(
        ctx.cli, "--workers " + std::to_string(w) + " predict --model \"" + model.string() + "\" --data \"" +
                   small.string() + "\"",
        dir);
      if (w == 1)
        reference = fp;
      same = same && fp == reference && fp.rfind("exit 0", 0) == 0;
    }
    pass = pass && same;
    detail += std::string(", predict") + (same ? " identical" : " DIFFERS");
  }
  fs::remove_all(root);
  return { pass, detail };
}

struct Criterion
{
  int id;
  std::string name;
  std::function<Outcome(Context&)> run;
};

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Acceptance criteria" };
  Context ctx;
  std::vector<int> only;
  bool strict = false;
  ctx.cli = FREM_CLI_PATH;
  std::string data_dir = FREM_DATA_DIR;
  app.add_option("--only", only, "Run only these criteria");
  app.add_flag("--strict", strict, "Exit nonzero if any criterion fails");
  app.add_option("--workers", ctx.workers, "Worker threads");
  app.add_option("--cli", ctx.cli, "Path to the frem executable");
  app.add_option("--data-dir", data_dir, "Directory holding tecator.csv");
  std::string report_path = "acceptance_results.txt";
  app.add_option("--report", report_path, "Also write the result lines here (empty to skip)");
  CLI11_PARSE(app, argc, argv);
  ctx.data_dir = data_dir;

  const std::vector<Criterion> criteria = {
    { 1, "recovery rate in m", recovery_rate },
    { 2, "dimension consistency", dimension_consistency },
    { 3, "tangent angle trend in h_pca", tangent_quality },
    { 4, "exactness properties", exactness },
    { 5, "simulation ordering and magnitude", table_direction },
    { 6, "rate in n", rate_in_n },
    { 7, "tecator holdout ordering", real_data },
    { 8, "cli determinism across workers", determinism },
  };

  std::ofstream report;
  if (!report_path.empty())
    report.open(report_path);
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o = { false, std::string("error: ") + e.what() };
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::ostringstream line;
    line << "CRITERION " << c.id << ' ' << (o.pass ? "PASS" : "FAIL") << " [" << c.name << "] " << o.detail << " ("
         << fmt(secs, 3) << " s)";
    std::cout << line.str() << std::endl;
    if (report)
      report << line.str() << std::endl;
  }
  return strict && failures > 0 ? 1 : 0;
}
