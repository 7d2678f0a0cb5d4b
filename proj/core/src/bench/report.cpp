#include "frem/bench/report.hpp"

#include "frem/error.hpp"
#include "frem/serialize.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

namespace frem::bench {

using nlohmann::json;

namespace {

std::string
csv_escape(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

struct Moments
{
  double mean = 0.0;
  double sd = 0.0;
};

Moments
moments(const std::vector<double>& v)
{
  Moments m;
  if (v.empty()) {
    m.mean = std::nan("");
    m.sd = std::nan("");
    return m;
  }
  for (double x : v)
    m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v)
      ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

std::string
hex64(std::uint64_t v)
{
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

json
number_or_null(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

const MethodSummary&
single_summary(const EvalReport& r, Method m)
{
  const MethodSummary* found = nullptr;
  for (const auto& s : r.summaries) {
    if (s.method != m)
      continue;
    if (found)
      raise(ErrorCode::InvalidSettings,
            "report '" + r.label + "' holds several sample sizes for " + to_string(m));
    found = &s;
  }
  if (!found)
    raise(ErrorCode::MethodMismatch, "report '" + r.label + "' has no results for " + to_string(m));
  return *found;
}

std::vector<Method>
methods_of(const EvalReport& r)
{
  std::vector<Method> out;
  for (const auto& s : r.summaries)
    if (std::find(out.begin(), out.end(), s.method) == out.end())
      out.push_back(s.method);
  return out;
}

} // namespace

std::string
format_double(double v)
{
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const MethodSummary*
EvalReport::find_summary(Method m, std::size_t n) const
{
  for (const auto& s : summaries)
    if (s.method == m && s.n == n)
      return &s;
  return nullptr;
}

const MethodSummary&
EvalReport::summary(Method m, std::size_t n) const
{
  if (const auto* s = find_summary(m, n))
    return *s;
  raise(ErrorCode::MethodMismatch,
        "no summary for " + to_string(m) + " at n=" + std::to_string(n));
}

std::vector<MethodSummary>
summarize(const std::vector<ReplicateResult>& results)
{
  std::vector<MethodSummary> out;
  std::vector<std::pair<Method, std::size_t>> keys;
  for (const auto& r : results)
    if (std::find(keys.begin(), keys.end(), std::make_pair(r.method, r.n)) == keys.end())
      keys.emplace_back(r.method, r.n);

  for (const auto& [method, n] : keys) {
    std::vector<double> rmse, rmse_sig, dims, ps;
    MethodSummary s;
    s.method = method;
    s.n = n;
    for (const auto& r : results) {
      if (r.method != method || r.n != n)
        continue;
      if (!r.ok) {
        ++s.failed_count;
        continue;
      }
      ++s.ok_count;
      rmse.push_back(r.rmse);
      rmse_sig.push_back(r.rmse_signal);
      if (method == Method::Frem)
        dims.push_back(r.dim_raw);
      if (method == Method::Flr)
        ps.push_back(static_cast<double>(r.flr_p));
    }
    const Moments a = moments(rmse), b = moments(rmse_sig);
    const double root = std::sqrt(static_cast<double>(std::max<std::size_t>(s.ok_count, 1)));
    s.mean_rmse = a.mean;
    s.se_rmse = a.sd / root;
    s.mean_rmse_signal = b.mean;
    s.se_rmse_signal = b.sd / root;
    if (!dims.empty()) {
      const Moments d = moments(dims);
      s.mean_dim_raw = d.mean;
      s.sd_dim_raw = d.sd;
    }
    if (!ps.empty())
      s.mean_flr_p = moments(ps).mean;
    out.push_back(s);
  }
  return out;
}

void
check_failure_rate(const EvalReport& report, double max_fraction)
{
  for (const auto& s : report.summaries) {
    const double total = static_cast<double>(s.ok_count + s.failed_count);
    if (total > 0 && static_cast<double>(s.failed_count) > max_fraction * total)
      raise(ErrorCode::TooManyFailures,
            to_string(s.method) + " at n=" + std::to_string(s.n) + " failed on " +
              std::to_string(s.failed_count) + " of " +
              std::to_string(s.ok_count + s.failed_count) + " replicates");
  }
}

std::string
results_csv(const EvalReport& report)
{
  std::ostringstream os;
  os << "label,method,n,replicate,seed,status,rmse,rmse_signal,dim_raw,dim,h_pca,h_reg,"
        "bandwidth,flr_p,error\n";
  for (const auto& r : report.results) {
    os << csv_escape(report.label) << ',' << to_string(r.method) << ',' << r.n << ','
       << r.replicate << ',' << r.seed << ',' << (r.ok ? "ok" : "failed") << ','
       << format_double(r.rmse) << ',' << format_double(r.rmse_signal) << ','
       << format_double(r.dim_raw) << ',' << r.dim << ',' << format_double(r.h_pca) << ','
       << format_double(r.h_reg) << ',' << format_double(r.bandwidth) << ',' << r.flr_p << ','
       << csv_escape(r.error) << '\n';
  }
  return os.str();
}

std::string
summary_csv(const EvalReport& report)
{
  std::ostringstream os;
  os << "label,method,n,ok,failed,mean_rmse,se_rmse,mean_rmse_signal,se_rmse_signal,"
        "mean_dim,sd_dim,mean_flr_p\n";
  for (const auto& s : report.summaries) {
    os << csv_escape(report.label) << ',' << to_string(s.method) << ',' << s.n << ','
       << s.ok_count << ',' << s.failed_count << ',' << format_double(s.mean_rmse) << ','
       << format_double(s.se_rmse) << ',' << format_double(s.mean_rmse_signal) << ','
       << format_double(s.se_rmse_signal) << ',' << format_double(s.mean_dim_raw) << ','
       << format_double(s.sd_dim_raw) << ',' << format_double(s.mean_flr_p) << '\n';
  }
  return os.str();
}

std::string
metadata_json(const EvalReport& report)
{
  json j;
  j["label"] = report.label;
  j["master_seed"] = report.master_seed;
  j["config_hash"] = hex64(fnv1a(report.config_json));
  j["library_version"] = "0.1.0";
  try {
    j["config"] = report.config_json.empty() ? json(nullptr) : json::parse(report.config_json);
  } catch (const json::parse_error&) {
    j["config"] = report.config_json;
  }
  json summaries = json::array();
  for (const auto& s : report.summaries)
    summaries.push_back({ { "method", to_string(s.method) },
                          { "n", s.n },
                          { "ok", s.ok_count },
                          { "failed", s.failed_count },
                          { "mean_rmse", number_or_null(s.mean_rmse) },
                          { "se_rmse", number_or_null(s.se_rmse) },
                          { "mean_rmse_signal", number_or_null(s.mean_rmse_signal) },
                          { "se_rmse_signal", number_or_null(s.se_rmse_signal) },
                          { "mean_dim", number_or_null(s.mean_dim_raw) },
                          { "sd_dim", number_or_null(s.sd_dim_raw) },
                          { "mean_flr_p", number_or_null(s.mean_flr_p) } });
  j["summaries"] = std::move(summaries);
  if (report.wall_seconds)
    j["wall_seconds"] = *report.wall_seconds;
  return j.dump(1) + "\n";
}

void
write_report(const EvalReport& report, const std::filesystem::path& dir, const std::string& prefix)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    raise(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  write_text_file(dir / (prefix + "_results.csv"), results_csv(report));
  write_text_file(dir / (prefix + "_summary.csv"), summary_csv(report));
  write_text_file(dir / (prefix + "_meta.json"), metadata_json(report));
}

double
theoretical_reduction(std::size_t n_small, std::size_t n_large, int d)
{
  if (n_small == 0 || n_large == 0 || d < 1)
    raise(ErrorCode::InvalidSettings, "theoretical reduction needs positive n and d");
  const double ratio = static_cast<double>(n_small) / static_cast<double>(n_large);
  return 100.0 * (1.0 - std::pow(ratio, 2.0 / (static_cast<double>(d) + 4.0)));
}

ReductionTable
relative_reduction(const EvalReport& small_n,
                   const EvalReport& large_n,
                   std::optional<int> d,
                   bool signal_only)
{
  auto a = methods_of(small_n), b = methods_of(large_n);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b)
    raise(ErrorCode::MethodMismatch, "reports cover different methods");

  ReductionTable table;
  for (Method m : methods_of(small_n)) {
    const auto& s = single_summary(small_n, m);
    const auto& l = single_summary(large_n, m);
    ReductionRow row;
    row.method = m;
    row.n_small = s.n;
    row.n_large = l.n;
    row.rmse_small = signal_only ? s.mean_rmse_signal : s.mean_rmse;
    row.rmse_large = signal_only ? l.mean_rmse_signal : l.mean_rmse;
    row.ratio = row.rmse_large / row.rmse_small;
    row.reduction_pct = 100.0 * (1.0 - row.ratio);
    table.rows.push_back(row);
  }
  if (d && !table.rows.empty())
    table.theoretical_pct = theoretical_reduction(table.rows.front().n_small, table.rows.front().n_large, *d);
  return table;
}

std::vector<double>
paired_reductions(const EvalReport& small_n, const EvalReport& large_n, Method method, bool signal_only)
{
  std::vector<double> out;
  for (const auto& s : small_n.results) {
    if (s.method != method || !s.ok)
      continue;
    for (const auto& l : large_n.results) {
      if (l.method != method || !l.ok || l.replicate != s.replicate)
        continue;
      const double a = signal_only ? s.rmse_signal : s.rmse;
      const double b = signal_only ? l.rmse_signal : l.rmse;
      out.push_back(100.0 * (1.0 - b / a));
    }
  }
  return out;
}

} // namespace frem::bench
