// Copyright (c) 2026 The flextdd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace flextdd {

/// Invalid or inconsistent configuration (bad SCS, out-of-range BLER, ...).
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A timeline walk could not find a usable transmission or control
/// opportunity within the search horizon (e.g. an all-UL schedule asked
/// to carry a DL packet).
class starvation_error : public std::runtime_error {
public:
  explicit starvation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace flextdd
