#pragma once

namespace ccext {

// Limits for the exhaustive algorithms. Anything that could blow up
// (order^3 verification, permutation search, assignment search) consults
// one of these and reports CapExceeded / BudgetExceeded instead of hanging.
struct Caps {
  // Orders up to this get full O(n^3) associativity verification and are
  // eligible for Cayley-table export and structural verification. Larger
  // tables are spot-checked with 10*n random triples and flagged "sampled".
  int order_cap = 512;
  // Group order limit for skew-morphism enumeration ((n-1)! search).
  int skew_enum_cap = 12;
  // Group order limit for automorphism enumeration.
  int aut_enum_cap = 64;
  // Candidate-assignment budget for extended-power-function search.
  long long epf_budget = 10'000'000;
};

}  // namespace ccext
