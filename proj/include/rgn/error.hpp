// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

#ifndef RGN_ERROR_HPP_
#define RGN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace rgn {

// Shape/dimension violations (matmul chains, row scaling, concat).
class dim_error : public std::runtime_error {
 public:
  explicit dim_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Illegal object state transitions (double backward, missing Adam state).
class state_error : public std::runtime_error {
 public:
  explicit state_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values where finite ones are required.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad run configuration (unknown keys, invalid combinations).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Data ingestion failures (missing files, malformed records, unmapped enums).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Model file problems, each a distinct class so callers can tell them apart.
class load_error : public std::runtime_error {
 public:
  explicit load_error(const std::string& msg) : std::runtime_error(msg) {}
};
class version_error : public load_error {
 public:
  explicit version_error(const std::string& msg) : load_error(msg) {}
};
class truncation_error : public load_error {
 public:
  explicit truncation_error(const std::string& msg) : load_error(msg) {}
};
class compat_error : public load_error {
 public:
  explicit compat_error(const std::string& msg) : load_error(msg) {}
};

}  // namespace rgn

#endif  // RGN_ERROR_HPP_
