#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cw4 {

// A named condition (e.g. "C1", "D2[1,2,5]") does not hold for the input.
class PreconditionError : public std::domain_error {
 public:
  PreconditionError(std::string condition, const std::string& detail)
      : std::domain_error(condition + " violated: " + detail), condition_(std::move(condition)) {}
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

}  // namespace cw4

namespace cw4 {

// The bound formula divides by a non-positive Δx.
class DegenerateCertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A bound was requested for parameters whose constraint report fails.
class UnsatisfiedConstraintsError : public std::runtime_error {
 public:
  UnsatisfiedConstraintsError(std::vector<std::string> names)
      : std::runtime_error(join(names)), names_(std::move(names)) {}
  const std::vector<std::string>& names() const { return names_; }

 private:
  static std::string join(const std::vector<std::string>& names) {
    std::string s = "unsatisfied constraints:";
    for (const auto& n : names) s += " " + n;
    return s;
  }
  std::vector<std::string> names_;
};

}  // namespace cw4
