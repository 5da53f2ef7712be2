/*
 Copyright 2026 The ptsafe Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef PTSAFE_TYPES_HPP
#define PTSAFE_TYPES_HPP

#include <Eigen/Dense>
#include <random>
#include <stdexcept>
#include <string>

namespace ptsafe {

using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;
using Mat = Eigen::MatrixXd;

/// State outside the admissible domain (safe set, open interval, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Inconsistent dimensions, parameter ranges, or malformed configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numeric breakdown: singular weight matrix, non-finite state, overflow.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Shortest round-trippable decimal form, used for every number the tool
/// writes to disk so that identical runs produce identical bytes.
std::string fmt17(double value);

/// Uniform double in [0, 1) built from the top 53 bits of one 64-bit draw,
/// so seeded streams do not depend on a library's distribution code.
double uniform01(std::mt19937_64& gen);

}  // namespace ptsafe

#endif  // PTSAFE_TYPES_HPP
