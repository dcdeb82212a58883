#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace haantjes {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or manifest text. `offset` is a byte offset into the
/// text that was being parsed; `expected` lists the tokens that would have
/// been accepted there.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t offset, std::vector<std::string> expected = {});

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

  /// Same error with a field path prepended to the message.
  ParseError with_path(const std::string& path) const;

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownVariable : public Error {
 public:
  UnknownVariable(std::string name, std::size_t offset, const std::string& context = {});
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  PreconditionViolated(std::string condition, std::vector<int> worst_index, double residual);

  const std::string& condition() const noexcept { return condition_; }
  const std::vector<int>& worst_index() const noexcept { return worst_index_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string condition_;
  std::vector<int> worst_index_;
  double residual_;
};

class DegenerateFrame : public Error {
 public:
  using Error::Error;
};

class NotClosed : public Error {
 public:
  using Error::Error;
};

class QuadratureStall : public Error {
 public:
  using Error::Error;
};

class NoGenerator : public Error {
 public:
  using Error::Error;
};

class FrameIntegrationFailure : public Error {
 public:
  using Error::Error;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};

class CflViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace haantjes
