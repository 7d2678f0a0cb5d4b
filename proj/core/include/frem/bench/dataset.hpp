#pragma once

#include "frem/funcspace.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace frem::bench {

enum class Preprocess
{
  None,
  DifferenceQuotient
};

Preprocess parse_preprocess(std::string_view name);

//! Curves on the column grid plus one response per curve.
struct Dataset
{
  std::string name;
  CurveSet curves;
  Eigen::VectorXd responses;
};

//! Forward differences (x_{j+1} - x_j) / (t_{j+1} - t_j) placed on the
//! midpoints of the original grid.
CurveSet difference_quotient(const CurveSet& curves);

//! CSV schema: a header whose leading columns are numeric evaluation points
//! (strictly increasing) and whose last column names the response; then one
//! row per subject. ParseError names the offending row and column; SchemaError
//! covers header problems and ragged rows.
Dataset parse_dataset(std::string_view csv_text,
                      Preprocess preprocess = Preprocess::None,
                      std::string name = "dataset");
Dataset load_dataset(const std::filesystem::path& path, Preprocess preprocess = Preprocess::None);

} // namespace frem::bench
