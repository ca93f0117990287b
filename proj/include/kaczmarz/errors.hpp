#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace kaczmarz {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand lengths or matrix shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Every row of the matrix is zero, so no row distribution exists.
class DegenerateMatrixError : public Error {
 public:
  using Error::Error;
};

// A projection was requested onto a zero (possibly weighted) row.
class DegenerateRowError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class WriteError : public Error {
 public:
  using Error::Error;
};

}  // namespace kaczmarz
