#pragma once

#include <stdexcept>
#include <string>

namespace fredev {

enum class ErrorKind {
  Config,
  EssentialSpectrum,
  NearMultipleRoots,
  IllConditioned,
  SignMismatch,
  StiffnessFailure,
  CountMismatch,
  PhaseJump,
  NoConvergence,
};

const char* to_string(ErrorKind kind);

/// Base class for every error raised by the library. `kind()` lets callers
/// branch without string matching; the CLI maps it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  bool is_config() const noexcept { return kind_ == ErrorKind::Config; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace fredev
