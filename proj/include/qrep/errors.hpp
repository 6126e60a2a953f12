// Copyright 2026 The QRep Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrep {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed OpenQASM text. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error(
            "syntax error at line " + std::to_string(line) + ", column " +
            std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnsupportedGate : public Error {
 public:
  explicit UnsupportedGate(const std::string& name)
      : Error("unsupported gate '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnsupportedFeature : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class QubitOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidGate : public Error {
 public:
  using Error::Error;
};

class WidthMismatch : public Error {
 public:
  using Error::Error;
};

class TooWide : public Error {
 public:
  using Error::Error;
};

/// The circuit handed to localisation or repair passes every test case.
class NoFailingTest : public Error {
 public:
  NoFailingTest() : Error("circuit passes every test case; nothing to repair") {}
};

class NoNonEquivalentMutant : public Error {
 public:
  NoNonEquivalentMutant()
      : Error("every generated mutant is equivalent under the test suite") {}
};

class UnknownGate : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

}  // namespace qrep
