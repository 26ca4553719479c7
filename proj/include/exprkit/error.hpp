// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace exprkit {

// Error taxonomy shared by every module. The CLI maps these onto process
// exit codes: config/validation -> 2, I/O -> 3, numerics -> 4.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration value or precondition violation.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error("config: " + msg) {}
};

// Malformed annotation or data file.
class FormatError : public Error {
public:
  explicit FormatError(const std::string& msg) : Error("format: " + msg) {}
};

// Semantically invalid data (empty dataset, label out of range).
class DataError : public Error {
public:
  explicit DataError(const std::string& msg) : Error("data: " + msg) {}
};

// Filesystem access failure.
class IOError : public Error {
public:
  explicit IOError(const std::string& msg) : Error("io: " + msg) {}
};

// Tensor shape mismatch.
class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& msg) : Error("shape: " + msg) {}
};

// Non-finite value where a finite one is required.
class NumericsError : public Error {
public:
  explicit NumericsError(const std::string& msg) : Error("numerics: " + msg) {}
};

inline int exit_code_for(const Error& e) {
  if (dynamic_cast<const IOError*>(&e)) return 3;
  if (dynamic_cast<const NumericsError*>(&e)) return 4;
  return 2;
}

} // namespace exprkit
