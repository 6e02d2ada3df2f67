// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

#ifndef RGN_KERNELS_HPP_
#define RGN_KERNELS_HPP_

#include <cstddef>
#include <cstdint>

namespace rgn {
namespace kernels {

// Inner-loop kernels behind the matrix ops. A table per lane: a scalar
// reference implementation and an AVX2 variant chosen at runtime.
//
// Lane parity: elementwise kernels (add/sub/mul/scale/axpy/relu/adam) and the
// broadcast-accumulation gemms (nn/tn) keep the scalar accumulation order and
// avoid FP contraction, so they are bitwise-identical across lanes. Reduction
// kernels (gemm_nt, dot, sum) use lane-parallel partial sums and agree only
// to rounding; the equivalence tests assert accordingly.
struct KernelTable {
  const char* name;

  // C[m x n] (+)= A[m x k] * B[k x n]
  void (*gemm_nn)(float* c, const float* a, const float* b, int m, int k,
                  int n, bool accumulate);
  // C[m x n] (+)= A[m x k] * B[n x k]^T
  void (*gemm_nt)(float* c, const float* a, const float* b, int m, int k,
                  int n, bool accumulate);
  // C[m x n] (+)= A[k x m]^T * B[k x n]
  void (*gemm_tn)(float* c, const float* a, const float* b, int m, int k,
                  int n, bool accumulate);

  void (*add)(float* out, const float* a, const float* b, size_t n);
  void (*sub)(float* out, const float* a, const float* b, size_t n);
  void (*mul)(float* out, const float* a, const float* b, size_t n);
  void (*scale)(float* out, const float* x, float c, size_t n);
  // y += a * x
  void (*axpy)(float* y, float a, const float* x, size_t n);
  void (*relu)(float* out, const float* x, size_t n);
  // dx += (x > 0) * dy
  void (*relu_grad)(float* dx, const float* x, const float* dy, size_t n);

  float (*dot)(const float* a, const float* b, size_t n);
  float (*sum)(const float* x, size_t n);
  float (*max)(const float* x, size_t n);  // requires n >= 1

  // In-place Adam update with precomputed bias corrections.
  void (*adam_update)(float* w, const float* g, float* m, float* v, size_t n,
                      float lr, float beta1, float beta2, float eps,
                      float inv_bias1, float inv_bias2);
};

enum class Lane { scalar, avx2 };

const KernelTable& scalar_table();
// nullptr when the CPU (or build) lacks AVX2.
const KernelTable* avx2_table();

// Active lane: best available at first use, overridable for tests.
const KernelTable& active();
void set_active(Lane lane);  // throws state_error if lane unavailable
Lane active_lane();

// Matmul FLOP accounting (2*m*n*k per gemm call; elementwise ops not
// counted). Used by the benchmark command and the FLOP-formula tests.
void reset_flop_counter();
uint64_t flop_count();
void count_gemm_flops(int m, int k, int n);

// Counting entry points used by the tape; tests call table entries directly.
inline void gemm_nn(float* c, const float* a, const float* b, int m, int k,
                    int n, bool accumulate) {
  count_gemm_flops(m, k, n);
  active().gemm_nn(c, a, b, m, k, n, accumulate);
}
inline void gemm_nt(float* c, const float* a, const float* b, int m, int k,
                    int n, bool accumulate) {
  count_gemm_flops(m, k, n);
  active().gemm_nt(c, a, b, m, k, n, accumulate);
}
inline void gemm_tn(float* c, const float* a, const float* b, int m, int k,
                    int n, bool accumulate) {
  count_gemm_flops(m, k, n);
  active().gemm_tn(c, a, b, m, k, n, accumulate);
}

}  // namespace kernels
}  // namespace rgn

#endif  // RGN_KERNELS_HPP_
