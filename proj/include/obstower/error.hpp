#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace obstower {

enum class Errc {
  NotNormal,
  SearchBudgetExceeded,
  MixedTargets,
  NotACocycle,
  TargetMismatch,
  DegreeTooLarge,
  RamificationMismatch,
  IncompatibleLocalData,
  TruncationInsufficient,
  NotAbelian,
  NotAbelianKernel,
  InvalidInput,
  Inadmissible,
};

std::string_view errc_name(Errc code) noexcept;

/// Single exception type for the library; `code()` tells callers which
/// contract was violated (the CLI maps these onto exit codes).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace obstower
