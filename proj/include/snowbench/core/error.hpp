// Copyright 2026 The Snowbench Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SNOWBENCH_CORE_ERROR_HPP_
#define SNOWBENCH_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace snowbench {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad flags or parameter values supplied by the caller (CLI exit 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Bad input data: files, manifests, inconsistent datasets (CLI exit 2).
class DataError : public Error {
 public:
  using Error::Error;
};

class UnknownInstanceError : public DataError {
 public:
  using DataError::DataError;
};

class DimensionMismatchError : public DataError {
 public:
  using DataError::DataError;
};

class IdSetMismatchError : public DataError {
 public:
  using DataError::DataError;
};

class CorruptFileError : public DataError {
 public:
  using DataError::DataError;
};

class UnsupportedVersionError : public DataError {
 public:
  using DataError::DataError;
};

class InconsistentPlanesError : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

// Numerically or geometrically unusable input (too few points, collinear).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// API misuse, e.g. observing a finished early-stopping session.
class LogicError : public Error {
 public:
  using Error::Error;
};

}  // namespace snowbench

#endif  // SNOWBENCH_CORE_ERROR_HPP_
