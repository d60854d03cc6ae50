#pragma once

#include <stdexcept>
#include <string>

namespace greencm {

// Bad user input: malformed config, precision mismatch, invalid discriminants.
struct ConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A lattice-sum term hit t = 1, or an evaluation on a Hecke correspondence.
struct SingularConfiguration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance outside the supported scope (h(F) > 1, nonprincipal ledger, ...).
struct UnsupportedInstance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Local datum with no closed form (ramified derivative, dyadic ramification).
struct UnsupportedLocalDatum : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotImplementedScope : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace greencm
