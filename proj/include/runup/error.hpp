#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace runup {

// Base for all library errors. `stage` names the pipeline step that raised
// it when the error crossed a stage boundary, and is empty otherwise.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string stage = {})
      : std::runtime_error(what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Bad input: malformed series, config out of range, violated precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical diagnostic tripped (pole assumption, breaking, no convergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Runs fn and re-throws library errors tagged with the given stage name.
template <class Fn>
decltype(auto) run_stage(const char* stage, Fn&& fn) {
  try {
    return std::forward<Fn>(fn)();
  } catch (const ValidationError& e) {
    if (!e.stage().empty()) throw;
    throw ValidationError(e.what(), stage);
  } catch (const NumericalError& e) {
    if (!e.stage().empty()) throw;
    throw NumericalError(e.what(), stage);
  }
}

}  // namespace runup
