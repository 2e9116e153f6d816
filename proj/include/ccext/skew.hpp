#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ccext/group.hpp"

namespace ccext {

// A skew-morphism of a finite group A: a permutation phi fixing the identity
// that admits a power function pi with
//
//   phi(x*y) = phi(x) * phi^{pi(x)}(y)   for all x, y in A.
//
// m is the order of phi as a permutation; pi is stored as least nonnegative
// residues mod m. pi is unique mod m, which validate_skew enforces.
struct SkewMorphism {
  GroupPtr group;
  std::vector<Elem> perm;
  std::vector<int> pi;
  int m = 1;

  int order() const { return m; }

  // phi^k(x); k may be negative or exceed m.
  Elem apply(Elem x, long long k = 1) const {
    long long r = k % m;
    if (r < 0) r += m;
    Elem z = x;
    for (long long i = 0; i < r; ++i) z = perm[z];
    return z;
  }

  bool is_automorphism() const {
    for (int v : pi)
      if (v != 1 % m) return false;
    return true;
  }

  friend bool operator==(const SkewMorphism& a, const SkewMorphism& b) {
    return a.perm == b.perm && a.group->same_table(*b.group);
  }
};

inline int perm_order(const std::vector<Elem>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  long long m = 1;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    int len = 0;
    for (Elem x = s; !seen[x]; x = perm[x]) {
      seen[x] = true;
      ++len;
    }
    m = std::lcm(m, static_cast<long long>(len));
  }
  return static_cast<int>(m);
}

// Tables of phi^0 .. phi^{m-1}.
inline std::vector<std::vector<Elem>> perm_powers(const std::vector<Elem>& perm, int m) {
  std::vector<std::vector<Elem>> pows;
  pows.reserve(m);
  std::vector<Elem> id(perm.size());
  std::iota(id.begin(), id.end(), 0);
  pows.push_back(std::move(id));
  for (int i = 1; i < m; ++i) {
    std::vector<Elem> next(perm.size());
    for (std::size_t x = 0; x < perm.size(); ++x) next[x] = perm[pows[i - 1][x]];
    pows.push_back(std::move(next));
  }
  return pows;
}

namespace detail {

struct SkewDefect {
  Errc code;
  std::string msg;
};

// Computes the power function of `perm` on G, or reports why none exists.
// For each x the exponent i with phi(x*y) = phi(x)*phi^i(y) for all y is
// pinned to a unique residue mod m; two solutions would mean |phi| < m,
// so duplicates are reported as internal errors.
inline std::variant<SkewMorphism, SkewDefect> solve_power_function(const GroupPtr& g,
                                                                   const std::vector<Elem>& perm) {
  const int n = g->order();
  if (static_cast<int>(perm.size()) != n)
    return SkewDefect{Errc::bad_input, "permutation length != group order"};
  std::vector<bool> seen(n, false);
  for (Elem v : perm) {
    if (v < 0 || v >= n || seen[v]) return SkewDefect{Errc::bad_input, "not a permutation"};
    seen[v] = true;
  }
  if (perm[0] != 0) return SkewDefect{Errc::identity_moved, "permutation moves the identity"};

  const int m = perm_order(perm);
  auto pows = perm_powers(perm, m);
  std::vector<int> pi(n, -1);
  for (Elem x = 0; x < n; ++x) {
    Elem fx = perm[x];
    for (int i = 0; i < m; ++i) {
      bool ok = true;
      for (Elem y = 0; y < n; ++y)
        if (perm[g->mul(x, y)] != g->mul(fx, pows[i][y])) {
          ok = false;
          break;
        }
      if (ok) {
        if (pi[x] >= 0)
          return SkewDefect{Errc::internal,
                            "duplicate power exponent at x=" + std::to_string(x)};
        pi[x] = i;
      }
    }
    if (pi[x] < 0)
      return SkewDefect{Errc::no_power_function, "no exponent works for x=" + std::to_string(x)};
  }
  return SkewMorphism{g, perm, std::move(pi), m};
}

}  // namespace detail

// Validates `perm` as a skew-morphism of G and fills in its power function.
inline SkewMorphism validate_skew(const GroupPtr& g, const std::vector<Elem>& perm) {
  auto r = detail::solve_power_function(g, perm);
  if (auto* defect = std::get_if<detail::SkewDefect>(&r)) fail(defect->code, defect->msg);
  return std::get<SkewMorphism>(std::move(r));
}

inline SkewMorphism identity_skew(const GroupPtr& g) {
  std::vector<Elem> id(g->order());
  std::iota(id.begin(), id.end(), 0);
  return validate_skew(g, id);
}

// All skew-morphisms of G, by backtracking over permutations fixing the
// identity. A partial permutation is rejected as soon as some determined
// pair (x,y) admits no exponent: the chain y, phi(y), phi^2(y), ... either
// hits the required value, runs into an unassigned image (inconclusive), or
// closes into a cycle without hitting it (dead branch).
inline std::vector<SkewMorphism> enumerate_skew(const GroupPtr& g, const Caps& caps = Caps{}) {
  const int n = g->order();
  if (n > caps.skew_enum_cap)
    fail(Errc::cap_exceeded,
         "skew-morphism enumeration capped at order " + std::to_string(caps.skew_enum_cap));

  std::vector<Elem> perm(n, -1);
  perm[0] = 0;
  std::vector<bool> used(n, false);
  used[0] = true;
  std::vector<SkewMorphism> out;

  auto feasible = [&]() {
    for (Elem x = 1; x < n; ++x) {
      if (perm[x] < 0) continue;
      Elem fx_inv = g->inv(perm[x]);
      for (Elem y = 1; y < n; ++y) {
        Elem xy = g->mul(x, y);
        if (perm[xy] < 0) continue;
        Elem target = g->mul(fx_inv, perm[xy]);
        Elem z = y;
        bool dead = true;
        for (int step = 0; step <= n; ++step) {
          if (z == target || perm[z] < 0) {
            dead = false;
            break;
          }
          z = perm[z];
          if (z == y) break;
        }
        if (dead) return false;
      }
    }
    return true;
  };

  auto rec = [&](auto&& self, Elem x) -> void {
    if (x == n) {
      auto r = detail::solve_power_function(g, perm);
      if (auto* sm = std::get_if<SkewMorphism>(&r)) {
        out.push_back(std::move(*sm));
      } else if (std::get<detail::SkewDefect>(r).code == Errc::internal) {
        // Anything but "no exponent works" is a bug, not a rejection.
        fail(Errc::internal, std::get<detail::SkewDefect>(r).msg);
      }
      return;
    }
    for (Elem c = 0; c < n; ++c) {
      if (used[c]) continue;
      perm[x] = c;
      used[c] = true;
      if (feasible()) self(self, x + 1);
      perm[x] = -1;
      used[c] = false;
    }
  };
  rec(rec, 1);
  // Candidates are generated in lexicographic order of the image vector.
  return out;
}

// Derived power function sigma_pi(x,k) = sum_{i=1..k} pi(phi^{i-1}(x)),
// as a residue mod m. Large k reduces via sigma(x, qm+r) = sigma(x, r).
inline int sigma_pi(const SkewMorphism& sm, Elem x, unsigned long long k) {
  const int m = sm.m;
  int r = static_cast<int>(k % static_cast<unsigned long long>(m));
  long long acc = 0;
  Elem z = x;
  for (int i = 0; i < r; ++i) {
    acc += sm.pi[z];
    z = sm.perm[z];
  }
  return static_cast<int>(acc % m);
}

// Ker pi = {x : pi(x) = 1 mod m}, always a subgroup.
inline ElementSet kernel_pi(const SkewMorphism& sm) {
  std::vector<Elem> members;
  const int one = 1 % sm.m;
  for (Elem x = 0; x < sm.group->order(); ++x)
    if (sm.pi[x] == one) members.push_back(x);
  ElementSet ker{sm.group, std::move(members)};
  if (!is_subgroup(ker)) fail(Errc::internal, "kernel of pi is not closed");
  return ker;
}

// Core pi = ∩_i phi^i(Ker pi): the largest phi-invariant subgroup of Ker pi,
// normal in A.
inline ElementSet core_pi(const SkewMorphism& sm) {
  const int n = sm.group->order();
  ElementSet ker = kernel_pi(sm);
  std::vector<bool> in(n, false);
  for (Elem x : ker.members) in[x] = true;
  auto pows = perm_powers(sm.perm, sm.m);
  for (int i = 1; i < sm.m; ++i) {
    std::vector<bool> img(n, false);
    for (Elem x : ker.members) img[pows[i][x]] = true;
    for (int x = 0; x < n; ++x) in[x] = in[x] && img[x];
  }
  std::vector<Elem> members;
  for (Elem x = 0; x < n; ++x)
    if (in[x]) members.push_back(x);
  ElementSet core{sm.group, std::move(members)};
  if (!is_subgroup(core)) fail(Errc::internal, "core of pi is not a subgroup");
  for (Elem x : core.members)
    if (!core.contains(sm.perm[x])) fail(Errc::internal, "core of pi is not phi-invariant");
  if (!is_normal_subgroup(core)) fail(Errc::internal, "core of pi is not normal");
  return core;
}

// Least p >= 1 with pi(phi^p(x)) = pi(x) for all x. Divides m.
inline int period_of(const SkewMorphism& sm) {
  auto pows = perm_powers(sm.perm, sm.m);
  for (int p = 1; p <= sm.m; ++p) {
    bool ok = true;
    for (Elem x = 0; x < sm.group->order() && ok; ++x) ok = sm.pi[pows[p % sm.m][x]] == sm.pi[x];
    if (ok) {
      if (sm.m % p != 0) fail(Errc::internal, "period does not divide the order");
      return p;
    }
  }
  fail(Errc::internal, "no period found");
}

inline bool is_smooth(const SkewMorphism& sm) { return period_of(sm) == 1; }

// Quotient skew-morphism induced by a phi-invariant normal subgroup N:
// phibar(xbar) = phi(x)bar on A/N, with pibar(xbar) = pi(x) mod |phibar|.
inline SkewMorphism quotient_skew(const SkewMorphism& sm, const ElementSet& nset,
                                  const Caps& caps = Caps{}) {
  if (!nset.group->same_table(*sm.group)) fail(Errc::bad_input, "subgroup of a different group");
  if (!is_subgroup(nset)) fail(Errc::not_a_subgroup, "quotient requires a subgroup");
  if (!is_normal_subgroup(nset)) fail(Errc::not_normal, "quotient requires a normal subgroup");
  for (Elem x : nset.members)
    if (!nset.contains(sm.perm[x]))
      fail(Errc::not_invariant, "subgroup is not phi-invariant at x=" + std::to_string(x));

  auto [quot, proj] = quotient_group(sm.group, nset, caps);
  std::vector<Elem> pbar(quot->order(), -1);
  for (Elem x = 0; x < sm.group->order(); ++x) {
    Elem from = proj(x), to = proj(sm.perm[x]);
    if (pbar[from] < 0)
      pbar[from] = to;
    else if (pbar[from] != to)
      fail(Errc::internal, "quotient permutation not well defined");
  }
  SkewMorphism q = validate_skew(quot, pbar);
  for (Elem x = 0; x < sm.group->order(); ++x)
    if ((sm.pi[x] - q.pi[proj(x)]) % q.m != 0)
      fail(Errc::internal, "quotient power function mismatch");
  return q;
}

// phi^k as a skew-morphism, when one exists. Solvability of
// k*t = sigma_pi(x,k) (mod m) for every x is the exact criterion.
inline std::optional<SkewMorphism> power_skew(const SkewMorphism& sm, unsigned long long k) {
  const int m = sm.m;
  const int kr = static_cast<int>(k % static_cast<unsigned long long>(m));
  const int g = std::gcd(m, kr);
  for (Elem x = 0; x < sm.group->order(); ++x)
    if (sigma_pi(sm, x, k) % g != 0) return std::nullopt;
  std::vector<Elem> pk(sm.group->order());
  for (Elem x = 0; x < sm.group->order(); ++x) pk[x] = sm.apply(x, kr);
  auto r = detail::solve_power_function(sm.group, pk);
  if (std::holds_alternative<detail::SkewDefect>(r))
    fail(Errc::internal, "power criterion satisfied but validation failed");
  return std::get<SkewMorphism>(std::move(r));
}

// Average function of pi: av(x) = sigma_pi(x,p)/p in Z_{m/p}, the power
// function of the smooth skew-morphism phi^p. The division is always exact
// on valid input; a violation means the input is not a skew-morphism.
inline std::vector<int> av_function(const SkewMorphism& sm) {
  const int p = period_of(sm);
  const int mp = sm.m / p;
  std::vector<int> av(sm.group->order());
  for (Elem x = 0; x < sm.group->order(); ++x) {
    long long sum = 0;
    Elem z = x;
    for (int i = 0; i < p; ++i) {
      sum += sm.pi[z];
      z = sm.perm[z];
    }
    if (sum % p != 0)
      fail(Errc::divisibility_violation, "sigma_pi(x,p) not divisible by p at x=" + std::to_string(x));
    av[x] = static_cast<int>((sum / p) % mp);
  }
  return av;
}

// Mate function lambda(x) = (pi(x) - pibar(xbar))/p in Z_{m/p}, where pibar
// is the power function of the quotient by Core pi. The subtrahend uses the
// representative in {1..p} so that automorphisms get lambda = 0.
inline std::vector<int> mate_lambda(const SkewMorphism& sm, const Caps& caps = Caps{}) {
  const int p = period_of(sm);
  const int mp = sm.m / p;
  ElementSet core = core_pi(sm);
  SkewMorphism q = quotient_skew(sm, core, caps);
  if (q.m != p) fail(Errc::internal, "quotient order differs from period");
  auto [quot, proj] = quotient_group(sm.group, core, caps);
  (void)quot;
  std::vector<int> lam(sm.group->order());
  for (Elem x = 0; x < sm.group->order(); ++x) {
    int pibar = q.pi[proj(x)];
    if (pibar == 0) pibar = p;
    int diff = sm.pi[x] - pibar;
    if (diff % p != 0)
      fail(Errc::divisibility_violation, "pi - pibar not divisible by p at x=" + std::to_string(x));
    lam[x] = static_cast<int>(((diff / p) % mp + mp) % mp);
  }
  return lam;
}

// Period data bundle: the period p, the quotient skew-morphism on A/Core pi
// (of order exactly p) and the smooth power phi^p (of order m/p, period 1).
struct PeriodData {
  int p;
  SkewMorphism quotient;
  SkewMorphism smooth_power;
};

inline PeriodData period(const SkewMorphism& sm, const Caps& caps = Caps{}) {
  PeriodData pd{period_of(sm), quotient_skew(sm, core_pi(sm), caps), SkewMorphism{}};
  if (pd.quotient.m != pd.p) fail(Errc::internal, "quotient order differs from period");
  auto sp = power_skew(sm, static_cast<unsigned long long>(pd.p));
  if (!sp) fail(Errc::internal, "phi^p is not a skew-morphism");
  pd.smooth_power = std::move(*sp);
  if (pd.smooth_power.m != sm.m / pd.p) fail(Errc::internal, "phi^p has unexpected order");
  if (period_of(pd.smooth_power) != 1) fail(Errc::internal, "phi^p is not smooth");
  return pd;
}

}  // namespace ccext
