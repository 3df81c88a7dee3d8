// Copyright 2026 The gpedd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file errors.hpp
 * Exception types shared by every module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace gpedd {

/// Invalid user-supplied configuration (qubit counts, depths, config files).
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Vector length or index does not match the object it is applied to.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A state with zero mass where a rescaling needs a nonzero one.
class DegenerateStateError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Non-finite values or a solver that failed to converge.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {
inline void require_dim(bool ok, const std::string &what) {
    if (!ok) {
        throw DimensionError(what);
    }
}
} // namespace detail

} // namespace gpedd
