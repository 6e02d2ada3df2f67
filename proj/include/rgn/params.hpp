// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

#ifndef RGN_PARAMS_HPP_
#define RGN_PARAMS_HPP_

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "rgn/matrix.hpp"

namespace rgn {

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;        // same shape, accumulated by Tape::backward
  bool frozen = false;  // skipped by the optimizer while set
};

// Owns all trainable parameters of a model. Names are unique; iteration
// order is creation order, which makes optimizer traversal deterministic.
class ParamStore {
 public:
  Parameter& create(const std::string& name, int rows, int cols);
  // Weight init: uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
  Parameter& create_uniform(const std::string& name, int rows, int cols,
                            int fan_in, Rng& rng);
  // Bias init: zeros.
  Parameter& create_zeros(const std::string& name, int rows, int cols);

  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;

  const std::vector<std::unique_ptr<Parameter>>& all() const {
    return params_;
  }

  void zero_grads();
  size_t total_entries() const;
  size_t count() const { return params_.size(); }

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, Parameter*> by_name_;
};

}  // namespace rgn

#endif  // RGN_PARAMS_HPP_
