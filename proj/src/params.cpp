// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

#include "rgn/params.hpp"

#include "rgn/error.hpp"

namespace rgn {

Parameter& ParamStore::create(const std::string& name, int rows, int cols) {
  if (by_name_.count(name) != 0) {
    throw state_error("ParamStore: duplicate parameter name '" + name + "'");
  }
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Matrix::zeros(rows, cols);
  p->grad = Matrix::zeros(rows, cols);
  Parameter& ref = *p;
  by_name_[name] = p.get();
  params_.push_back(std::move(p));
  return ref;
}

Parameter& ParamStore::create_uniform(const std::string& name, int rows,
                                      int cols, int fan_in, Rng& rng) {
  Parameter& p = create(name, rows, cols);
  p.value = Matrix::uniform_init(rows, cols, fan_in, rng);
  return p;
}

Parameter& ParamStore::create_zeros(const std::string& name, int rows,
                                    int cols) {
  return create(name, rows, cols);
}

Parameter* ParamStore::find(const std::string& name) {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

const Parameter* ParamStore::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

void ParamStore::zero_grads() {
  for (auto& p : params_) {
    std::fill(p->grad.data.begin(), p->grad.data.end(), 0.0f);
  }
}

size_t ParamStore::total_entries() const {
  size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

}  // namespace rgn
