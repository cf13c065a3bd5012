#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace inertid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model description. Carries every violation found.
class ModelError : public Error {
 public:
  explicit ModelError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  explicit ModelError(const std::string& what) : Error(what), violations_{what} {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid model:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

/// Malformed or inconsistent input data (CSV, parameter files, dimensions).
class DataError : public Error {
 public:
  using Error::Error;
};

/// The optimizer did not return a certified optimum.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace inertid
