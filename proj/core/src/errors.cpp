#include "haantjes/errors.hpp"

#include <sstream>
#include <utility>

namespace haantjes {

namespace {

std::string describe_parse(const std::string& message, std::size_t offset,
                           const std::vector<std::string>& expected) {
  std::ostringstream out;
  out << message << " at offset " << offset;
  if (!expected.empty()) {
    out << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      out << (i ? ", " : "") << expected[i];
    }
    out << ")";
  }
  return out.str();
}

std::string describe_violation(const std::string& condition, const std::vector<int>& index,
                               double residual) {
  std::ostringstream out;
  out << "precondition violated: " << condition << " fails at index (";
  for (std::size_t i = 0; i < index.size(); ++i) out << (i ? "," : "") << index[i] + 1;
  out << ") with residual " << residual;
  return out.str();
}

}  // namespace

ParseError::ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
    : Error(describe_parse(message, offset, expected)),
      offset_(offset),
      expected_(std::move(expected)) {}

ParseError ParseError::with_path(const std::string& path) const {
  ParseError copy(*this);
  static_cast<std::runtime_error&>(copy) = std::runtime_error(path + ": " + what());
  return copy;
}

UnknownVariable::UnknownVariable(std::string name, std::size_t offset, const std::string& context)
    : Error((context.empty() ? "" : context + ": ") + "unknown identifier '" + name + "' at offset " +
            std::to_string(offset)),
      name_(std::move(name)),
      offset_(offset) {}

PreconditionViolated::PreconditionViolated(std::string condition, std::vector<int> worst_index,
                                           double residual)
    : Error(describe_violation(condition, worst_index, residual)),
      condition_(std::move(condition)),
      worst_index_(std::move(worst_index)),
      residual_(residual) {}

}  // namespace haantjes
