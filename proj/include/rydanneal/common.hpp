// Copyright 2026 The rydanneal Authors
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

#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rydanneal {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Basis-state label. Bit j holds variable j (x_j for binary models, the
/// excitation n_j for atoms). 64 bits cover every size we can enumerate.
using Bitstring = std::uint64_t;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline bool bit(Bitstring b, Index j) { return (b >> j) & 1u; }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed inputs (bad indices, mismatched sizes, bad schemas).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace rydanneal
