#ifndef GKL_ERROR_HPP
#define GKL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gkl {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rational literal malformed or outside [0,1].
class ValueError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// An atom (variable or modal formula) has no value in the valuation used.
class UnknownAtomError : public Error {
 public:
  using Error::Error;
};

/// Model, algebra or proof data violating its schema or invariants.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(path) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace gkl

#endif  // GKL_ERROR_HPP
