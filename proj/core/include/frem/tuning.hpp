#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace frem {

//! `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

//! Linear-interpolation sample quantile (R type 7).
double quantile(std::vector<double> values, double q);

//! Off-diagonal entries of a symmetric distance matrix.
std::vector<double> upper_triangle(const Eigen::MatrixXd& distances);

//! Seeded random partition of [0, n) into k folds of near-equal size.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n,
                                                 std::size_t k,
                                                 std::uint64_t seed);

//! Complement of a fold within [0, n), ascending.
std::vector<std::size_t> complement(const std::vector<std::size_t>& fold, std::size_t n);

//! Squared errors below this are treated as ties.
double tie_tolerance(const Eigen::VectorXd& responses);

} // namespace frem
