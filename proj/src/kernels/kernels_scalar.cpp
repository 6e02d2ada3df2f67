// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

// Scalar reference lane. Every SIMD variant is equivalence-tested against
// these loops, so keep them obvious.

#include <cmath>
#include <cstddef>

#include "rgn/kernels.hpp"

namespace rgn {
namespace kernels {
namespace {

void s_gemm_nn(float* c, const float* a, const float* b, int m, int k, int n,
               bool accumulate) {
  if (!accumulate) {
    for (size_t i = 0; i < static_cast<size_t>(m) * n; ++i) c[i] = 0.0f;
  }
  for (int i = 0; i < m; ++i) {
    const float* arow = a + static_cast<size_t>(i) * k;
    float* crow = c + static_cast<size_t>(i) * n;
    for (int l = 0; l < k; ++l) {
      float av = arow[l];
      const float* brow = b + static_cast<size_t>(l) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void s_gemm_nt(float* c, const float* a, const float* b, int m, int k, int n,
               bool accumulate) {
  for (int i = 0; i < m; ++i) {
    const float* arow = a + static_cast<size_t>(i) * k;
    float* crow = c + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const float* brow = b + static_cast<size_t>(j) * k;
      float acc = 0.0f;
      for (int l = 0; l < k; ++l) acc += arow[l] * brow[l];
      crow[j] = accumulate ? crow[j] + acc : acc;
    }
  }
}

void s_gemm_tn(float* c, const float* a, const float* b, int m, int k, int n,
               bool accumulate) {
  if (!accumulate) {
    for (size_t i = 0; i < static_cast<size_t>(m) * n; ++i) c[i] = 0.0f;
  }
  for (int l = 0; l < k; ++l) {
    const float* arow = a + static_cast<size_t>(l) * m;
    const float* brow = b + static_cast<size_t>(l) * n;
    for (int i = 0; i < m; ++i) {
      float av = arow[i];
      float* crow = c + static_cast<size_t>(i) * n;
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void s_add(float* out, const float* a, const float* b, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void s_sub(float* out, const float* a, const float* b, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void s_mul(float* out, const float* a, const float* b, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void s_scale(float* out, const float* x, float c, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = x[i] * c;
}

void s_axpy(float* y, float a, const float* x, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_relu(float* out, const float* x, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void s_relu_grad(float* dx, const float* x, const float* dy, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (x[i] > 0.0f) dx[i] += dy[i];
  }
}

float s_dot(const float* a, const float* b, size_t n) {
  float acc = 0.0f;
  for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

float s_sum(const float* x, size_t n) {
  float acc = 0.0f;
  for (size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

float s_max(const float* x, size_t n) {
  float best = x[0];
  for (size_t i = 1; i < n; ++i) {
    if (x[i] > best) best = x[i];
  }
  return best;
}

void s_adam_update(float* w, const float* g, float* m, float* v, size_t n,
                   float lr, float beta1, float beta2, float eps,
                   float inv_bias1, float inv_bias2) {
  const float one_minus_b1 = 1.0f - beta1;
  const float one_minus_b2 = 1.0f - beta2;
  for (size_t i = 0; i < n; ++i) {
    float gi = g[i];
    float mi = beta1 * m[i] + one_minus_b1 * gi;
    float vi = beta2 * v[i] + one_minus_b2 * (gi * gi);
    m[i] = mi;
    v[i] = vi;
    float mhat = mi * inv_bias1;
    float vhat = vi * inv_bias2;
    w[i] = w[i] - lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      "scalar",   s_gemm_nn, s_gemm_nt, s_gemm_tn, s_add,
      s_sub,      s_mul,     s_scale,   s_axpy,    s_relu,
      s_relu_grad, s_dot,    s_sum,     s_max,     s_adam_update,
  };
  return table;
}

}  // namespace kernels
}  // namespace rgn
