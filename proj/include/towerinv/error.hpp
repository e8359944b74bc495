#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace towerinv {

enum class Errc {
  InvalidArgument,
  InvalidCharacter,
  NotASubfield,
  NonIntegralExponent,
  InconsistentRamification,
  PrincipalCharacter,
  ZeroGenus,
  NumericalMismatch,
  PrimeBoundExceeded,
  CapExceeded,
  InsufficientLevels,
  UnramifiedTower,
  UndecidableTail,
  HypothesisViolated,
  MonotonicityViolated,
  TransitivityViolated,
  UnknownSubgroup,
  InconsistentLattice,
  NoPrimePowerMatch,
  AmbiguousMatch,
  ParseError,
  InvalidSpec,
  UnsupportedSchema,
  Internal,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidCharacter: return "InvalidCharacter";
    case Errc::NotASubfield: return "NotASubfield";
    case Errc::NonIntegralExponent: return "NonIntegralExponent";
    case Errc::InconsistentRamification: return "InconsistentRamification";
    case Errc::PrincipalCharacter: return "PrincipalCharacter";
    case Errc::ZeroGenus: return "ZeroGenus";
    case Errc::NumericalMismatch: return "NumericalMismatch";
    case Errc::PrimeBoundExceeded: return "PrimeBoundExceeded";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::InsufficientLevels: return "InsufficientLevels";
    case Errc::UnramifiedTower: return "UnramifiedTower";
    case Errc::UndecidableTail: return "UndecidableTail";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::MonotonicityViolated: return "MonotonicityViolated";
    case Errc::TransitivityViolated: return "TransitivityViolated";
    case Errc::UnknownSubgroup: return "UnknownSubgroup";
    case Errc::InconsistentLattice: return "InconsistentLattice";
    case Errc::NoPrimePowerMatch: return "NoPrimePowerMatch";
    case Errc::AmbiguousMatch: return "AmbiguousMatch";
    case Errc::ParseError: return "ParseError";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::UnsupportedSchema: return "UnsupportedSchema";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

/// Process exit code for an error escaping a CLI command: 2 for bad input
/// (including data that contradicts a hypothesis), 3 for internal faults.
constexpr int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::NumericalMismatch:
    case Errc::Internal:
      return 3;
    default:
      return 2;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool condition, Errc code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace towerinv
