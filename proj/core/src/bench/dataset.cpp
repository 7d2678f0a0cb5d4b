#include "frem/bench/dataset.hpp"

#include "frem/error.hpp"
#include "frem/serialize.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

namespace frem::bench {

namespace {

std::string_view
trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view>
split(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

bool
to_double(std::string_view s, double& out)
{
  if (s.empty())
    return false;
  if (s.front() == '+')
    s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

} // namespace

Preprocess
parse_preprocess(std::string_view name)
{
  if (name == "none")
    return Preprocess::None;
  if (name == "difference-quotient" || name == "difference_quotient")
    return Preprocess::DifferenceQuotient;
  raise(ErrorCode::InvalidSettings, "unknown preprocess '" + std::string(name) + "'");
}

CurveSet
difference_quotient(const CurveSet& curves)
{
  const Grid& g = curves.grid();
  const std::size_t q = g.size();
  if (q < 3)
    raise(ErrorCode::InvalidSettings, "difference quotient needs at least three grid points");
  std::vector<double> mid(q - 1);
  Eigen::VectorXd inv(static_cast<Eigen::Index>(q - 1));
  for (std::size_t j = 0; j + 1 < q; ++j) {
    mid[j] = 0.5 * (g.point(j) + g.point(j + 1));
    inv(static_cast<Eigen::Index>(j)) = 1.0 / (g.point(j + 1) - g.point(j));
  }
  const auto cols = static_cast<Eigen::Index>(q - 1);
  Eigen::MatrixXd d = curves.values().rightCols(cols) - curves.values().leftCols(cols);
  d = d * inv.asDiagonal();
  return CurveSet(std::make_shared<const Grid>(std::move(mid)), std::move(d));
}

Dataset
parse_dataset(std::string_view text, Preprocess preprocess, std::string name)
{
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos)
      nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!trim(line).empty())
      lines.push_back(line);
    start = nl + 1;
  }
  if (lines.empty())
    raise(ErrorCode::SchemaError, "dataset is empty");

  const auto header = split(lines.front());
  if (header.size() < 3)
    raise(ErrorCode::SchemaError, "header needs at least two evaluation points and a response");
  const std::size_t q = header.size() - 1;
  std::vector<double> points(q);
  for (std::size_t c = 0; c < q; ++c)
    if (!to_double(header[c], points[c]))
      raise(ErrorCode::SchemaError,
            "header column " + std::to_string(c + 1) + " ('" + std::string(header[c]) +
              "') is not a numeric evaluation point");
  for (std::size_t c = 1; c < q; ++c)
    if (!(points[c] > points[c - 1]))
      raise(ErrorCode::SchemaError, "header evaluation points must be strictly increasing");

  const std::size_t n = lines.size() - 1;
  if (n == 0)
    raise(ErrorCode::SchemaError, "dataset has a header but no rows");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto cells = split(lines[r + 1]);
    const std::string row_label = "row " + std::to_string(r + 2);
    if (cells.size() != q + 1)
      raise(ErrorCode::ParseError,
            row_label + ": expected " + std::to_string(q + 1) + " columns, found " +
              std::to_string(cells.size()));
    for (std::size_t c = 0; c <= q; ++c) {
      double v = 0.0;
      if (!to_double(cells[c], v) || !std::isfinite(v))
        raise(ErrorCode::ParseError,
              row_label + ", column " + std::to_string(c + 1) + ": cannot read '" +
                std::string(cells[c]) + "' as a number");
      if (c < q)
        values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      else
        y(static_cast<Eigen::Index>(r)) = v;
    }
  }

  Dataset ds{ std::move(name),
              CurveSet(std::make_shared<const Grid>(std::move(points)), std::move(values)),
              std::move(y) };
  if (preprocess == Preprocess::DifferenceQuotient)
    ds.curves = difference_quotient(ds.curves);
  return ds;
}

Dataset
load_dataset(const std::filesystem::path& path, Preprocess preprocess)
{
  return parse_dataset(read_text_file(path), preprocess, path.stem().string());
}

} // namespace frem::bench
