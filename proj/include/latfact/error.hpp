#pragma once

#include <stdexcept>
#include <string>

namespace latfact {

/// Error categories shared across the library.
enum class errc {
  bad_input,
  not_closed,
  missing_bounds,
  not_a_partial_order,
  foreign_element,
  arity_mismatch,
  bounds_not_ordered,
  bounds_missing,
  boundary_violated,
  bc1_violated,
  phi_not_admissible,
  not_pseudo_polynomial,
  cap_exceeded,
  not_a_chain,
  precondition_violated,
};

inline const char* to_string(errc c) {
  switch (c) {
    case errc::bad_input: return "bad_input";
    case errc::not_closed: return "not_closed";
    case errc::missing_bounds: return "missing_bounds";
    case errc::not_a_partial_order: return "not_a_partial_order";
    case errc::foreign_element: return "foreign_element";
    case errc::arity_mismatch: return "arity_mismatch";
    case errc::bounds_not_ordered: return "bounds_not_ordered";
    case errc::bounds_missing: return "bounds_missing";
    case errc::boundary_violated: return "boundary_violated";
    case errc::bc1_violated: return "bc1_violated";
    case errc::phi_not_admissible: return "phi_not_admissible";
    case errc::not_pseudo_polynomial: return "not_pseudo_polynomial";
    case errc::cap_exceeded: return "cap_exceeded";
    case errc::not_a_chain: return "not_a_chain";
    case errc::precondition_violated: return "precondition_violated";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace latfact
