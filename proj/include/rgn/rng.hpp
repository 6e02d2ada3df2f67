// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

#ifndef RGN_RNG_HPP_
#define RGN_RNG_HPP_

#include <cstdint>
#include <random>

namespace rgn {

// mt19937-64 with hand-rolled real/int draws. std::uniform_*_distribution is
// not bit-specified across standard libraries; these draws are, so a seed
// pins the full stream on any toolchain.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // [0, 1)
  float next_float() {
    return static_cast<float>(engine_() >> 40) * (1.0f / 16777216.0f);
  }
  double next_double() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
  }

  // [lo, hi)
  float uniform(float lo, float hi) { return lo + (hi - lo) * next_float(); }

  // [0, n)
  int next_index(int n) {
    return static_cast<int>(engine_() % static_cast<uint64_t>(n));
  }

  bool next_bool(double p) { return next_double() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = engine_() % i;
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rgn

#endif  // RGN_RNG_HPP_
