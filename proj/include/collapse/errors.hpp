#pragma once

#include <stdexcept>
#include <string>

namespace collapse {

// Failure categories surfaced by the library.  The CLI maps these onto
// process exit codes: config/validation problems -> 2, numerical failures
// (divergence, non-convergence, step limits) -> 3, I/O -> 4.
enum class Errc {
  invalid_argument,
  grid_too_coarse,
  out_of_domain,
  not_normalized,
  non_positive_step,
  step_too_large,
  absorbed_at_boundary,
  negative_rate,
  zero_constituents,
  empty_posterior,
  quadrature_not_converged,
  negative_energy,
  non_decaying,
  no_exclusion,
  config_invalid,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::grid_too_coarse: return "grid_too_coarse";
    case Errc::out_of_domain: return "out_of_domain";
    case Errc::not_normalized: return "not_normalized";
    case Errc::non_positive_step: return "non_positive_step";
    case Errc::step_too_large: return "step_too_large";
    case Errc::absorbed_at_boundary: return "absorbed_at_boundary";
    case Errc::negative_rate: return "negative_rate";
    case Errc::zero_constituents: return "zero_constituents";
    case Errc::empty_posterior: return "empty_posterior";
    case Errc::quadrature_not_converged: return "quadrature_not_converged";
    case Errc::negative_energy: return "negative_energy";
    case Errc::non_decaying: return "non_decaying";
    case Errc::no_exclusion: return "no_exclusion";
    case Errc::config_invalid: return "config_invalid";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

// Exit code for the CLI given a failure category.
inline int exit_code_for(Errc c) {
  switch (c) {
    case Errc::config_invalid:
    case Errc::invalid_argument:
      return 2;
    case Errc::io_error:
      return 4;
    default:
      return 3;
  }
}

}  // namespace collapse
