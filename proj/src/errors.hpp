// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The ionrep Authors

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ionrep {

/// A parameter lies outside its physical domain. `field()` names the
/// offending field using the same key the config schema uses.
class ParameterError : public std::invalid_argument {
public:
  ParameterError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// The memory-lifetime requirement for a given block is violated.
class FeasibilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// No grid point satisfies the optimizer's constraints.
class InfeasibleError : public std::runtime_error {
public:
  InfeasibleError(const std::string& what, std::vector<std::string> binding)
      : std::runtime_error(what), binding_(std::move(binding)) {}

  const std::vector<std::string>& binding_constraints() const noexcept { return binding_; }

private:
  std::vector<std::string> binding_;
};

} // namespace ionrep
