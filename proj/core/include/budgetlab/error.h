// Copyright 2026 The budgetlab Authors.
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

#ifndef BUDGETLAB_ERROR_H_
#define BUDGETLAB_ERROR_H_

#include <stdexcept>
#include <string>

namespace budgetlab {

// Base class for every error raised by the library. The CLI maps any
// budgetlab::Error to a non-zero exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidGrantError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Inconsistent shapes or configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// A selection (filter, threshold, model name) matched nothing.
class EmptySelectionError : public Error {
 public:
  using Error::Error;
};

class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

class NoCandidateError : public Error {
 public:
  using Error::Error;
};

// Learned positional embeddings cannot be evaluated past their table.
class ExtrapolationUnsupportedError : public Error {
 public:
  using Error::Error;
};

class CheckFailure : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace budgetlab

#endif  // BUDGETLAB_ERROR_H_
