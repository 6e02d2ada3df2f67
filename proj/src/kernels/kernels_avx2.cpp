// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

// AVX2 lane. Built with -mavx2 in its own translation unit; dispatch.cpp
// decides at runtime whether this table may run.
//
// Deliberately mul+add instead of fmadd: the scalar lane rounds after every
// multiply, and matching that keeps broadcast-order kernels bitwise equal
// across lanes.

#include "rgn/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace rgn {
namespace kernels {
namespace {

void v_gemm_nn(float* c, const float* a, const float* b, int m, int k, int n,
               bool accumulate) {
  if (!accumulate) {
    for (size_t i = 0; i < static_cast<size_t>(m) * n; ++i) c[i] = 0.0f;
  }
  for (int i = 0; i < m; ++i) {
    const float* arow = a + static_cast<size_t>(i) * k;
    float* crow = c + static_cast<size_t>(i) * n;
    for (int l = 0; l < k; ++l) {
      const float av = arow[l];
      const float* brow = b + static_cast<size_t>(l) * n;
      const __m256 av8 = _mm256_set1_ps(av);
      int j = 0;
      for (; j + 8 <= n; j += 8) {
        __m256 cv = _mm256_loadu_ps(crow + j);
        __m256 bv = _mm256_loadu_ps(brow + j);
        cv = _mm256_add_ps(cv, _mm256_mul_ps(av8, bv));
        _mm256_storeu_ps(crow + j, cv);
      }
      for (; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// per-row dot products; 8-wide partial sums then horizontal reduce
void v_gemm_nt(float* c, const float* a, const float* b, int m, int k, int n,
               bool accumulate) {
  for (int i = 0; i < m; ++i) {
    const float* arow = a + static_cast<size_t>(i) * k;
    float* crow = c + static_cast<size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      const float* brow = b + static_cast<size_t>(j) * k;
      __m256 acc8 = _mm256_setzero_ps();
      int l = 0;
      for (; l + 8 <= k; l += 8) {
        __m256 av = _mm256_loadu_ps(arow + l);
        __m256 bv = _mm256_loadu_ps(brow + l);
        acc8 = _mm256_add_ps(acc8, _mm256_mul_ps(av, bv));
      }
      __m128 lo = _mm256_castps256_ps128(acc8);
      __m128 hi = _mm256_extractf128_ps(acc8, 1);
      __m128 s = _mm_add_ps(lo, hi);
      s = _mm_hadd_ps(s, s);
      s = _mm_hadd_ps(s, s);
      float acc = _mm_cvtss_f32(s);
      for (; l < k; ++l) acc += arow[l] * brow[l];
      crow[j] = accumulate ? crow[j] + acc : acc;
    }
  }
}

void v_gemm_tn(float* c, const float* a, const float* b, int m, int k, int n,
               bool accumulate) {
  if (!accumulate) {
    for (size_t i = 0; i < static_cast<size_t>(m) * n; ++i) c[i] = 0.0f;
  }
  for (int l = 0; l < k; ++l) {
    const float* arow = a + static_cast<size_t>(l) * m;
    const float* brow = b + static_cast<size_t>(l) * n;
    for (int i = 0; i < m; ++i) {
      const float av = arow[i];
      float* crow = c + static_cast<size_t>(i) * n;
      const __m256 av8 = _mm256_set1_ps(av);
      int j = 0;
      for (; j + 8 <= n; j += 8) {
        __m256 cv = _mm256_loadu_ps(crow + j);
        __m256 bv = _mm256_loadu_ps(brow + j);
        cv = _mm256_add_ps(cv, _mm256_mul_ps(av8, bv));
        _mm256_storeu_ps(crow + j, cv);
      }
      for (; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void v_add(float* out, const float* a, const float* b, size_t n) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i, _mm256_add_ps(_mm256_loadu_ps(a + i),
                                            _mm256_loadu_ps(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

void v_sub(float* out, const float* a, const float* b, size_t n) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i, _mm256_sub_ps(_mm256_loadu_ps(a + i),
                                            _mm256_loadu_ps(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void v_mul(float* out, const float* a, const float* b, size_t n) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(a + i),
                                            _mm256_loadu_ps(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void v_scale(float* out, const float* x, float c, size_t n) {
  const __m256 c8 = _mm256_set1_ps(c);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), c8));
  }
  for (; i < n; ++i) out[i] = x[i] * c;
}

void v_axpy(float* y, float a, const float* x, size_t n) {
  const __m256 a8 = _mm256_set1_ps(a);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 yv = _mm256_loadu_ps(y + i);
    yv = _mm256_add_ps(yv, _mm256_mul_ps(a8, _mm256_loadu_ps(x + i)));
    _mm256_storeu_ps(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_relu(float* out, const float* x, size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i, _mm256_max_ps(_mm256_loadu_ps(x + i), zero));
  }
  for (; i < n; ++i) out[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void v_relu_grad(float* dx, const float* x, const float* dy, size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 xv = _mm256_loadu_ps(x + i);
    __m256 maskv = _mm256_cmp_ps(xv, zero, _CMP_GT_OQ);
    __m256 dyv = _mm256_and_ps(_mm256_loadu_ps(dy + i), maskv);
    _mm256_storeu_ps(dx + i, _mm256_add_ps(_mm256_loadu_ps(dx + i), dyv));
  }
  for (; i < n; ++i) {
    if (x[i] > 0.0f) dx[i] += dy[i];
  }
}

float v_dot(const float* a, const float* b, size_t n) {
  __m256 acc8 = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc8 = _mm256_add_ps(
        acc8, _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
  }
  __m128 lo = _mm256_castps256_ps128(acc8);
  __m128 hi = _mm256_extractf128_ps(acc8, 1);
  __m128 s = _mm_add_ps(lo, hi);
  s = _mm_hadd_ps(s, s);
  s = _mm_hadd_ps(s, s);
  float acc = _mm_cvtss_f32(s);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

float v_sum(const float* x, size_t n) {
  __m256 acc8 = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) acc8 = _mm256_add_ps(acc8, _mm256_loadu_ps(x + i));
  __m128 lo = _mm256_castps256_ps128(acc8);
  __m128 hi = _mm256_extractf128_ps(acc8, 1);
  __m128 s = _mm_add_ps(lo, hi);
  s = _mm_hadd_ps(s, s);
  s = _mm_hadd_ps(s, s);
  float acc = _mm_cvtss_f32(s);
  for (; i < n; ++i) acc += x[i];
  return acc;
}

float v_max(const float* x, size_t n) {
  if (n < 8) {
    float best = x[0];
    for (size_t i = 1; i < n; ++i) best = x[i] > best ? x[i] : best;
    return best;
  }
  __m256 best8 = _mm256_loadu_ps(x);
  size_t i = 8;
  for (; i + 8 <= n; i += 8) {
    best8 = _mm256_max_ps(best8, _mm256_loadu_ps(x + i));
  }
  __m128 lo = _mm256_castps256_ps128(best8);
  __m128 hi = _mm256_extractf128_ps(best8, 1);
  __m128 b4 = _mm_max_ps(lo, hi);
  b4 = _mm_max_ps(b4, _mm_movehl_ps(b4, b4));
  b4 = _mm_max_ss(b4, _mm_shuffle_ps(b4, b4, 1));
  float best = _mm_cvtss_f32(b4);
  for (; i < n; ++i) best = x[i] > best ? x[i] : best;
  return best;
}

void v_adam_update(float* w, const float* g, float* m, float* v, size_t n,
                   float lr, float beta1, float beta2, float eps,
                   float inv_bias1, float inv_bias2) {
  const __m256 b1 = _mm256_set1_ps(beta1);
  const __m256 b2 = _mm256_set1_ps(beta2);
  const __m256 omb1 = _mm256_set1_ps(1.0f - beta1);
  const __m256 omb2 = _mm256_set1_ps(1.0f - beta2);
  const __m256 lr8 = _mm256_set1_ps(lr);
  const __m256 eps8 = _mm256_set1_ps(eps);
  const __m256 ib1 = _mm256_set1_ps(inv_bias1);
  const __m256 ib2 = _mm256_set1_ps(inv_bias2);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 gi = _mm256_loadu_ps(g + i);
    __m256 mi = _mm256_add_ps(_mm256_mul_ps(b1, _mm256_loadu_ps(m + i)),
                              _mm256_mul_ps(omb1, gi));
    __m256 vi = _mm256_add_ps(_mm256_mul_ps(b2, _mm256_loadu_ps(v + i)),
                              _mm256_mul_ps(omb2, _mm256_mul_ps(gi, gi)));
    _mm256_storeu_ps(m + i, mi);
    _mm256_storeu_ps(v + i, vi);
    __m256 mhat = _mm256_mul_ps(mi, ib1);
    __m256 vhat = _mm256_mul_ps(vi, ib2);
    __m256 denom = _mm256_add_ps(_mm256_sqrt_ps(vhat), eps8);
    __m256 upd = _mm256_div_ps(_mm256_mul_ps(lr8, mhat), denom);
    _mm256_storeu_ps(w + i, _mm256_sub_ps(_mm256_loadu_ps(w + i), upd));
  }
  const float one_minus_b1 = 1.0f - beta1;
  const float one_minus_b2 = 1.0f - beta2;
  for (; i < n; ++i) {
    float gi = g[i];
    float mi = beta1 * m[i] + one_minus_b1 * gi;
    float vi = beta2 * v[i] + one_minus_b2 * (gi * gi);
    m[i] = mi;
    v[i] = vi;
    w[i] = w[i] - lr * (mi * inv_bias1) / (std::sqrt(vi * inv_bias2) + eps);
  }
}

}  // namespace

const KernelTable* avx2_table_impl() {
  static const KernelTable table = {
      "avx2",     v_gemm_nn, v_gemm_nt, v_gemm_tn, v_add,
      v_sub,      v_mul,     v_scale,   v_axpy,    v_relu,
      v_relu_grad, v_dot,    v_sum,     v_max,     v_adam_update,
  };
  return &table;
}

}  // namespace kernels
}  // namespace rgn

#else  // !__AVX2__

namespace rgn {
namespace kernels {

const KernelTable* avx2_table_impl() { return nullptr; }

}  // namespace kernels
}  // namespace rgn

#endif
