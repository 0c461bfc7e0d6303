#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace frob {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Evaluation left the expression's domain (log/sqrt of a non-positive value,
// division by zero, overflow). `subterm` is the canonical text of the node.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subterm)
      : Error(what + " in " + subterm), subterm_(std::move(subterm)) {}
  const std::string& subterm() const { return subterm_; }

 private:
  std::string subterm_;
};

// Metric not positive definite, frame degenerate, precondition on vector
// membership violated, etc.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace frob
