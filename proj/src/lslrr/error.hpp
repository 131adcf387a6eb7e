#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lslrr {

// Base of every error raised by the core. The C API maps each subclass onto
// one status code, the CLI maps status codes onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SplitError : public Error {
 public:
  SplitError(int class_id, const std::string& what)
      : Error(what), class_id_(class_id) {}
  int class_id() const { return class_id_; }

 private:
  int class_id_;
};

// Raised by file readers. Carries the offending path and the byte offset
// (or line number for text formats) where parsing stopped.
class LoadError : public Error {
 public:
  LoadError(std::string path, std::size_t offset, const std::string& what)
      : Error(path + " @" + std::to_string(offset) + ": " + what),
        path_(std::move(path)),
        offset_(offset) {}
  const std::string& path() const { return path_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string path_;
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(int iteration, const std::string& what)
      : Error("diverged at iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

}  // namespace lslrr
