#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccext/skew.hpp"

namespace ccext {

// An extended power function of a skew-morphism phi of order m: a map
// Pi: A -> Z_n, for n a positive multiple of m, with
//   (a) Pi(x) = pi(x) (mod m),
//   (b) Pi(1_A) = 1 (mod n),
//   (c) Pi(x*y) = sum_{i=1..Pi(x)} Pi(phi^{i-1}(y)) (mod n).
// Values are stored as least nonnegative residues mod n; the choice of
// representative in the summation bound of (c) does not matter mod n.
struct ExtendedPowerFunction {
  SkewMorphism skew;
  int n = 1;
  std::vector<int> values;

  friend bool operator==(const ExtendedPowerFunction& a, const ExtendedPowerFunction& b) {
    return a.n == b.n && a.values == b.values && a.skew == b.skew;
  }
};

namespace detail {

struct EpfDefect {
  Errc code;
  std::string msg;
};

// Prefix sums along the phi-orbit of x: S[j] = sum_{i=1..j} values[phi^{i-1}(x)],
// j = 0..m. sigma(x, qm+r) = q*S[m] + S[r].
inline std::vector<long long> sigma_prefix(const SkewMorphism& sm, const std::vector<int>& values,
                                           Elem x) {
  std::vector<long long> s(sm.m + 1, 0);
  Elem z = x;
  for (int j = 1; j <= sm.m; ++j) {
    s[j] = s[j - 1] + values[z];
    z = sm.perm[z];
  }
  return s;
}

inline std::optional<EpfDefect> check_epf_values(const SkewMorphism& sm, int n,
                                                 const std::vector<int>& values) {
  const int nA = sm.group->order();
  if (n < 1) return EpfDefect{Errc::bad_input, "modulus must be positive"};
  if (n % sm.m != 0)
    return EpfDefect{Errc::not_multiple,
                     "n=" + std::to_string(n) + " is not a multiple of m=" + std::to_string(sm.m)};
  if (static_cast<int>(values.size()) != nA)
    return EpfDefect{Errc::bad_input, "value vector length != group order"};
  for (Elem x = 0; x < nA; ++x)
    if (values[x] < 0 || values[x] >= n)
      return EpfDefect{Errc::bad_input, "value out of range at x=" + std::to_string(x)};
  for (Elem x = 0; x < nA; ++x)
    if (values[x] % sm.m != sm.pi[x])
      return EpfDefect{Errc::congruence_mismatch,
                       "Pi(x) != pi(x) mod m at x=" + std::to_string(x)};
  if (values[0] != 1 % n)
    return EpfDefect{Errc::identity_value, "Pi(identity) != 1 mod n"};

  std::vector<std::vector<long long>> pre(nA);
  for (Elem y = 0; y < nA; ++y) pre[y] = sigma_prefix(sm, values, y);
  auto sigma = [&](Elem y, int k) {
    int q = k / sm.m, r = k % sm.m;
    return static_cast<int>((static_cast<long long>(q) * (pre[y][sm.m] % n) + pre[y][r]) % n);
  };
  for (Elem x = 0; x < nA; ++x)
    for (Elem y = 0; y < nA; ++y)
      if (values[sm.group->mul(x, y)] != sigma(y, values[x]))
        return EpfDefect{Errc::product_law, "product law fails at (x,y)=(" + std::to_string(x) +
                                                "," + std::to_string(y) + ")"};
  return std::nullopt;
}

}  // namespace detail

// Checks the three defining conditions exhaustively and wraps the result.
inline ExtendedPowerFunction validate_epf(const SkewMorphism& sm, int n,
                                          const std::vector<int>& values) {
  if (auto defect = detail::check_epf_values(sm, n, values)) fail(defect->code, defect->msg);
  return ExtendedPowerFunction{sm, n, values};
}

// The power function itself, as the n = m extended power function.
inline ExtendedPowerFunction epf_from_pi(const SkewMorphism& sm) {
  return validate_epf(sm, sm.m, sm.pi);
}

// sigma_Pi(x,k) = sum_{i=1..k} Pi(phi^{i-1}(x)) mod n, for arbitrary k,
// computed with the reduction sigma(x, qm+r) = q*sigma(x,m) + sigma(x,r).
inline int sigma_Pi(const ExtendedPowerFunction& e, Elem x, unsigned long long k) {
  const int m = e.skew.m;
  auto pre = detail::sigma_prefix(e.skew, e.values, x);
  unsigned long long q = k / static_cast<unsigned long long>(m);
  int r = static_cast<int>(k % static_cast<unsigned long long>(m));
  long long qn = static_cast<long long>(q % static_cast<unsigned long long>(e.n));
  return static_cast<int>((qn * (pre[m] % e.n) + pre[r]) % e.n);
}

// Ker Pi = {x : Pi(x) = 1 mod n}; a subgroup, contained in Ker pi.
inline ElementSet kernel_Pi(const ExtendedPowerFunction& e) {
  std::vector<Elem> members;
  const int one = 1 % e.n;
  for (Elem x = 0; x < e.skew.group->order(); ++x)
    if (e.values[x] == one) members.push_back(x);
  ElementSet ker{e.skew.group, std::move(members)};
  if (!is_subgroup(ker)) fail(Errc::internal, "kernel of Pi is not closed");
  return ker;
}

// Core Pi = ∩_{i=1..m} phi^{i-1}(Ker Pi); a phi-invariant subgroup.
inline ElementSet core_Pi(const ExtendedPowerFunction& e) {
  const int nA = e.skew.group->order();
  ElementSet ker = kernel_Pi(e);
  std::vector<bool> in(nA, false);
  for (Elem x : ker.members) in[x] = true;
  auto pows = perm_powers(e.skew.perm, e.skew.m);
  for (int i = 1; i < e.skew.m; ++i) {
    std::vector<bool> img(nA, false);
    for (Elem x : ker.members) img[pows[i][x]] = true;
    for (int x = 0; x < nA; ++x) in[x] = in[x] && img[x];
  }
  std::vector<Elem> members;
  for (Elem x = 0; x < nA; ++x)
    if (in[x]) members.push_back(x);
  ElementSet core{e.skew.group, std::move(members)};
  if (!is_subgroup(core)) fail(Errc::internal, "core of Pi is not a subgroup");
  for (Elem x : core.members)
    if (!core.contains(e.skew.perm[x])) fail(Errc::internal, "core of Pi is not phi-invariant");
  return core;
}

// Average function Av(x) = sigma_Pi(x,m)/m in Z_{n/m}. The division is exact
// and every value is a unit mod n/m; violations mean the input is invalid.
inline std::vector<int> Av(const ExtendedPowerFunction& e) {
  const int m = e.skew.m;
  const int nm = e.n / m;
  std::vector<int> av(e.skew.group->order());
  for (Elem x = 0; x < e.skew.group->order(); ++x) {
    long long sum = 0;
    Elem z = x;
    for (int i = 0; i < m; ++i) {
      sum += e.values[z];
      z = e.skew.perm[z];
    }
    if (sum % m != 0)
      fail(Errc::divisibility_violation,
           "sigma_Pi(x,m) not divisible by m at x=" + std::to_string(x));
    av[x] = static_cast<int>((sum / m) % nm);
    if (std::gcd(av[x], nm) != 1)
      fail(Errc::non_unit_average, "Av(x) is not a unit mod n/m at x=" + std::to_string(x));
  }
  return av;
}

// Mate function Lambda(x) = (Pi(x) - pi(x))/m in Z_{n/m}. The subtrahend is
// the representative of pi(x) in {1..m}, which is what makes the law
// Lambda(xy) = Lambda(y) + Lambda(x) Av(y) come out exactly (automorphisms
// have pi = 1, so there Lambda(x) = (Pi(x) - 1)/m).
inline std::vector<int> Lambda(const ExtendedPowerFunction& e) {
  const int m = e.skew.m;
  const int nm = e.n / m;
  std::vector<int> lam(e.skew.group->order());
  for (Elem x = 0; x < e.skew.group->order(); ++x) {
    int pi_rep = e.skew.pi[x] == 0 ? m : e.skew.pi[x];
    int diff = e.values[x] - pi_rep;
    if (diff % m != 0)
      fail(Errc::divisibility_violation, "Pi - pi not divisible by m at x=" + std::to_string(x));
    lam[x] = ((diff / m) % nm + nm) % nm;
  }
  return lam;
}

// Pi(phi(x)) = Pi(x) mod n for all x. Implies smoothness of phi itself.
inline bool is_smooth_epf(const ExtendedPowerFunction& e) {
  for (Elem x = 0; x < e.skew.group->order(); ++x)
    if (e.values[e.skew.perm[x]] != e.values[x]) return false;
  return true;
}

namespace detail {

// Enumeration core shared by the orbit search and the full scan: odometer
// over candidate values on `unknowns`, then fill/verify.
inline std::vector<ExtendedPowerFunction> enumerate_epfs_over(
    const SkewMorphism& sm, int n, const std::vector<Elem>& unknowns, long long budget) {
  const int m = sm.m;
  const int M = n / m;
  const GroupPtr& g = sm.group;
  const int nA = g->order();

  long long total = 1;
  for (std::size_t i = 0; i < unknowns.size(); ++i) {
    if (total > budget / std::max(1, M)) {
      // One more digit overflows the budget; an exact product is pointless.
      total = budget + 1;
      break;
    }
    total *= M;
  }
  if (total > budget)
    fail(Errc::budget_exceeded, std::to_string(unknowns.size()) + " unknowns with " +
                                    std::to_string(M) + " choices each exceeds the budget");

  std::vector<Elem> gens = greedy_generators(g);
  // Spanning structure: each element reached once from the identity by right
  // multiplication with generators.
  struct Edge {
    Elem from, gen, to;
  };
  std::vector<Edge> edges;
  {
    std::vector<bool> vis(nA, false);
    vis[0] = true;
    std::vector<Elem> queue{0};
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (Elem s : gens) {
        Elem w = g->mul(queue[i], s);
        if (!vis[w]) {
          vis[w] = true;
          edges.push_back({queue[i], s, w});
          queue.push_back(w);
        }
      }
    if (static_cast<int>(queue.size()) != nA)
      fail(Errc::internal, "generators do not generate the group");
  }

  std::vector<int> digit(unknowns.size(), 0);
  std::vector<int> v(nA);
  std::vector<ExtendedPowerFunction> out;
  for (;;) {
    std::fill(v.begin(), v.end(), -1);
    v[0] = 1 % n;
    bool consistent = true;
    for (std::size_t i = 0; i < unknowns.size(); ++i) {
      int val = sm.pi[unknowns[i]] + digit[i] * m;
      if (v[unknowns[i]] >= 0 && v[unknowns[i]] != val) {
        consistent = false;
        break;
      }
      v[unknowns[i]] = val;
    }
    if (consistent) {
      // Propagate Pi(x*s) = sigma_Pi(s, Pi(x)) along the spanning edges.
      // sigma needs Pi on the phi-orbit of s, which the assignment covers
      // for generator orbits (and the full scan covers trivially).
      std::vector<std::vector<long long>> pre(nA);
      auto sigma = [&](Elem y, int k) -> long long {
        if (pre[y].empty()) pre[y] = sigma_prefix(sm, v, y);
        int q = k / m, r = k % m;
        return (static_cast<long long>(q) * (pre[y][m] % n) + pre[y][r]) % n;
      };
      bool ok = true;
      for (const Edge& e : edges) {
        int val = static_cast<int>(sigma(e.gen, v[e.from]));
        if (v[e.to] < 0)
          v[e.to] = val;
        else if (v[e.to] != val) {
          ok = false;
          break;
        }
      }
      if (ok && !check_epf_values(sm, n, v)) out.push_back(ExtendedPowerFunction{sm, n, v});
    }
    // Next odometer state.
    std::size_t pos = 0;
    while (pos < digit.size() && ++digit[pos] == M) digit[pos++] = 0;
    if (pos == digit.size()) break;
  }
  std::sort(out.begin(), out.end(),
            [](const ExtendedPowerFunction& a, const ExtendedPowerFunction& b) {
              return a.values < b.values;
            });
  return out;
}

}  // namespace detail

// All extended power functions of sm with modulus n. Unknowns are assigned
// only on the phi-orbit closure of a greedy generating set; the product law
// then determines the rest, and every candidate is verified in full.
inline std::vector<ExtendedPowerFunction> enumerate_epfs(const SkewMorphism& sm, int n,
                                                         const Caps& caps = Caps{}) {
  if (n < 1 || n % sm.m != 0)
    fail(Errc::not_multiple, "n must be a positive multiple of m=" + std::to_string(sm.m));
  std::vector<Elem> gens = greedy_generators(sm.group);
  const int nA = sm.group->order();
  std::vector<bool> in_orbit(nA, false);
  std::vector<Elem> orbit;
  for (Elem s : gens)
    for (Elem z = s; !in_orbit[z]; z = sm.perm[z]) {
      in_orbit[z] = true;
      orbit.push_back(z);
    }
  return detail::enumerate_epfs_over(sm, n, orbit, caps.epf_budget);
}

// Plain (n/m)^(|A|-1) scan over all non-identity elements. Exists to
// cross-check the orbit search; only sensible for very small groups.
inline std::vector<ExtendedPowerFunction> enumerate_epfs_full_scan(const SkewMorphism& sm, int n,
                                                                   const Caps& caps = Caps{}) {
  if (n < 1 || n % sm.m != 0)
    fail(Errc::not_multiple, "n must be a positive multiple of m=" + std::to_string(sm.m));
  std::vector<Elem> unknowns;
  for (Elem x = 1; x < sm.group->order(); ++x) unknowns.push_back(x);
  return detail::enumerate_epfs_over(sm, n, unknowns, caps.epf_budget);
}

}  // namespace ccext
