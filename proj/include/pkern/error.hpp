// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pkern {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A structural invariant of an input was violated; index() names the first
// offending row, entry or segment (-1 when no single index applies).
class StructureError : public Error {
 public:
  StructureError(const std::string& what, std::int64_t index)
      : Error(what), index_(index) {}
  std::int64_t index() const noexcept { return index_; }

 private:
  std::int64_t index_;
};

// A handle was used with a matrix whose pattern differs from the one its
// symbolic state was computed for.
class StaleHandleError : public Error {
 public:
  using Error::Error;
};

// Zero pivot or zero diagonal. batch() is -1 for non-batched kernels.
class SingularError : public Error {
 public:
  SingularError(const std::string& what, std::int64_t batch, std::int64_t row)
      : Error(what), batch_(batch), row_(row) {}
  std::int64_t batch() const noexcept { return batch_; }
  std::int64_t row() const noexcept { return row_; }

 private:
  std::int64_t batch_;
  std::int64_t row_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::int64_t line)
      : Error(what), line_(line) {}
  std::int64_t line() const noexcept { return line_; }

 private:
  std::int64_t line_;
};

}  // namespace pkern
