// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The emfbf Authors
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

#include <stdexcept>
#include <string>

namespace emfbf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration field failed validation. `field()` holds the dotted path.
class InvalidConfig : public Error {
 public:
  InvalidConfig(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class PlacementInfeasible : public Error {
 public:
  using Error::Error;
};

/// An angle or argument lies outside the domain of a pattern function.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularGeometry : public Error {
 public:
  using Error::Error;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  RankDeficient(const std::string& message, double condition_number)
      : Error(message), condition_number_(condition_number) {}
  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

}  // namespace emfbf
