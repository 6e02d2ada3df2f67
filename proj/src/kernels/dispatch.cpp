// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

#include <atomic>
#include <cstdint>

#include "rgn/error.hpp"
#include "rgn/kernels.hpp"

namespace rgn {
namespace kernels {

// Defined in kernels_avx2.cpp; nullptr when that TU was built without AVX2.
const KernelTable* avx2_table_impl();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* g_active = nullptr;
uint64_t g_flops = 0;

const KernelTable* pick_best() {
  const KernelTable* v = avx2_table();
  return v != nullptr ? v : &scalar_table();
}

}  // namespace

const KernelTable* avx2_table() {
  const KernelTable* t = avx2_table_impl();
  if (t == nullptr) return nullptr;
  return cpu_has_avx2() ? t : nullptr;
}

const KernelTable& active() {
  if (g_active == nullptr) g_active = pick_best();
  return *g_active;
}

void set_active(Lane lane) {
  if (lane == Lane::scalar) {
    g_active = &scalar_table();
    return;
  }
  const KernelTable* t = avx2_table();
  if (t == nullptr) throw state_error("kernels: avx2 lane unavailable on this CPU/build");
  g_active = t;
}

Lane active_lane() {
  return &active() == &scalar_table() ? Lane::scalar : Lane::avx2;
}

void reset_flop_counter() { g_flops = 0; }

uint64_t flop_count() { return g_flops; }

void count_gemm_flops(int m, int k, int n) {
  g_flops += 2ull * static_cast<uint64_t>(m) * static_cast<uint64_t>(k) *
             static_cast<uint64_t>(n);
}

}  // namespace kernels
}  // namespace rgn
