// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pipopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Default threshold separating "positive" from "zero" complementarity
// components; subproblem solutions carry LP round-off.
inline constexpr double kPositiveTol = 1e-8;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix. Desk-scale sizes only; no sparsity.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw Error("Matrix: negative dimension");
  }

  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

inline void matvec_add(const Matrix& M, const std::vector<double>& v, std::vector<double>& out) {
  for (int r = 0; r < M.rows(); ++r) {
    double acc = 0.0;
    for (int c = 0; c < M.cols(); ++c) acc += M(r, c) * v[c];
    out[r] += acc;
  }
}

inline std::vector<double> matvec(const Matrix& M, const std::vector<double>& v) {
  std::vector<double> out(M.rows(), 0.0);
  matvec_add(M, v, out);
  return out;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// splitmix64-based generator: identical streams on every platform, unlike
// the standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53-bit resolution
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // inclusive range
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal() {
    // Marsaglia polar, deterministic given the stream
    while (true) {
      double u = uniform(-1.0, 1.0), v = uniform(-1.0, 1.0);
      double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace pipopt
