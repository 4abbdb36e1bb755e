#pragma once

// Typed error hierarchy. Every failure the library can raise carries a short
// stable machine code (used by the CLI to pick exit codes and by tests) plus
// a human-readable message.

#include <stdexcept>
#include <string>

namespace pmlab {

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// configuration / validation problems (CLI exit 2)
struct ConfigError : Error {
  using Error::Error;
};

// requested analysis cannot reach a conclusion (CLI exit 3)
struct InconclusiveError : Error {
  using Error::Error;
};

// barrier family incompatible with the exponent regime (CLI exit 4)
struct FamilyIncompatible : Error {
  FamilyIncompatible(const std::string& what) : Error("family_incompatible", what) {}
};

inline ConfigError exponent_out_of_range(const std::string& what) {
  return ConfigError("exponent_out_of_range", what);
}
inline ConfigError negative_kernel(const std::string& what) {
  return ConfigError("negative_kernel", what);
}
inline ConfigError negative_initial_data(const std::string& what) {
  return ConfigError("negative_initial_data", what);
}
inline ConfigError too_few_cells(const std::string& what) {
  return ConfigError("too_few_cells", what);
}
inline ConfigError layer_too_deep(const std::string& what) {
  return ConfigError("layer_too_deep", what);
}
inline ConfigError bad_barrier_params(const std::string& what) {
  return ConfigError("invalid_barrier_parameters", what);
}
inline ConfigError order_violation(const std::string& what) {
  return ConfigError("order_violation_in_inputs", what);
}
inline ConfigError spec_mismatch(const std::string& what) {
  return ConfigError("spec_mismatch", what);
}
inline Error outside_validity_window(const std::string& what) {
  return Error("outside_validity_window", what);
}
inline Error cfl_violation(const std::string& what) {
  return Error("cfl_violation", what);
}
inline InconclusiveError no_convergence(const std::string& what) {
  return InconclusiveError("no_convergence", what);
}
inline InconclusiveError search_exhausted(const std::string& what) {
  return InconclusiveError("search_exhausted", what);
}
inline InconclusiveError not_blowing_up(const std::string& what) {
  return InconclusiveError("not_blowing_up", what);
}

}  // namespace pmlab
