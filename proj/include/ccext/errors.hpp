#pragma once

#include <stdexcept>
#include <string>

namespace ccext {

// Every failure the library reports deliberately. Callers that care about
// the failure kind should catch ccext::Error and switch on code().
enum class Errc {
  // table validation
  not_latin,
  no_identity,
  not_associative,
  // subgroup machinery
  not_a_subgroup,
  not_normal,
  // skew-morphisms
  identity_moved,
  no_power_function,
  not_invariant,
  // extended power functions
  not_multiple,
  congruence_mismatch,
  identity_value,
  product_law,
  divisibility_violation,
  non_unit_average,
  // extensions
  associativity_failure,
  not_exact_product,
  factorization_collision,
  // classifier
  not_coprime,
  validation_failure,
  // limits
  cap_exceeded,
  budget_exceeded,
  // cli
  ambiguous_selector,
  // misc
  bad_input,
  internal,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_latin: return "NotLatin";
    case Errc::no_identity: return "NoIdentity";
    case Errc::not_associative: return "NotAssociative";
    case Errc::not_a_subgroup: return "NotASubgroup";
    case Errc::not_normal: return "NotNormal";
    case Errc::identity_moved: return "IdentityMoved";
    case Errc::no_power_function: return "NoPowerFunction";
    case Errc::not_invariant: return "NotInvariant";
    case Errc::not_multiple: return "NotMultiple";
    case Errc::congruence_mismatch: return "CongruenceMismatch";
    case Errc::identity_value: return "IdentityValue";
    case Errc::product_law: return "ProductLaw";
    case Errc::divisibility_violation: return "DivisibilityViolation";
    case Errc::non_unit_average: return "NonUnitAverage";
    case Errc::associativity_failure: return "AssociativityFailure";
    case Errc::not_exact_product: return "NotExactProduct";
    case Errc::factorization_collision: return "FactorizationCollision";
    case Errc::not_coprime: return "NotCoprime";
    case Errc::validation_failure: return "ValidationFailure";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::ambiguous_selector: return "AmbiguousSelector";
    case Errc::bad_input: return "BadInput";
    case Errc::internal: return "InternalError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace ccext
