/*
 * Copyright 2026 The fvn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace fvn {

/// Base class of every error the library reports for bad user input.
/// Internal invariant violations throw std::logic_error instead.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

/// Syntax error in one of the DSLs, with 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  const char* kind() const noexcept override { return "parse"; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A well-formed input that violates a semantic rule (unknown name, duplicate, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg, std::string identifier = {},
                           std::optional<std::size_t> line = std::nullopt)
      : Error(msg), identifier_(std::move(identifier)), line_(line) {}
  const char* kind() const noexcept override { return "validation"; }
  const std::string& identifier() const noexcept { return identifier_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::string identifier_;
  std::optional<std::size_t> line_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "dimension"; }
};

/// The state space (or an intermediate STP product) exceeds the column cap.
class SizeCapError : public Error {
 public:
  SizeCapError(const std::string& msg, std::size_t requested, std::size_t cap)
      : Error(msg), requested_(requested), cap_(cap) {}
  const char* kind() const noexcept override { return "size_cap"; }
  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

/// A probabilistic operation hit an all-zero count column. `column` is 0-based.
class DeadColumnError : public Error {
 public:
  explicit DeadColumnError(std::size_t column)
      : Error("dead column " + std::to_string(column + 1) + ": no transitions to normalize"),
        column_(column) {}
  const char* kind() const noexcept override { return "dead_column"; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

}  // namespace fvn
