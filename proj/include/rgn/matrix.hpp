// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

#ifndef RGN_MATRIX_HPP_
#define RGN_MATRIX_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rgn/error.hpp"
#include "rgn/rng.hpp"

namespace rgn {

// Dense row-major float32 matrix. Row vectors are 1xC, column vectors Rx1.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<float> data;

  Matrix() = default;
  Matrix(int r, int c, float fill = 0.0f)
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw dim_error("Matrix: negative dimension");
  }

  static Matrix zeros(int r, int c) { return Matrix(r, c, 0.0f); }

  static Matrix filled(int r, int c, float v) { return Matrix(r, c, v); }

  // Uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
  static Matrix uniform_init(int r, int c, int fan_in, Rng& rng) {
    Matrix m(r, c);
    float bound = 1.0f / std::sqrt(static_cast<float>(fan_in));
    for (auto& v : m.data) v = rng.uniform(-bound, bound);
    return m;
  }

  float& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  float at(int r, int c) const {
    return data[static_cast<size_t>(r) * cols + c];
  }

  float* row_ptr(int r) { return data.data() + static_cast<size_t>(r) * cols; }
  const float* row_ptr(int r) const {
    return data.data() + static_cast<size_t>(r) * cols;
  }

  size_t size() const { return data.size(); }

  bool same_shape(const Matrix& o) const {
    return rows == o.rows && cols == o.cols;
  }

  bool all_finite() const {
    for (float v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  std::string shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
  }

  bool operator==(const Matrix& o) const {
    return rows == o.rows && cols == o.cols && data == o.data;
  }
};

}  // namespace rgn

#endif  // RGN_MATRIX_HPP_
