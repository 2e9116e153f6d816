#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccext/epf.hpp"

namespace ccext {

// Element of an extended skew product: the pair x*c^e with x in A and
// 0 <= e < n.
struct ExtElement {
  Elem a = 0;
  int e = 0;

  friend bool operator==(const ExtElement& x, const ExtElement& y) {
    return x.a == y.a && x.e == y.e;
  }
  friend bool operator!=(const ExtElement& x, const ExtElement& y) { return !(x == y); }
};

class ExtSkewProduct;
ExtSkewProduct build_extension(const ExtendedPowerFunction& epf, const Caps& caps);

// The extended skew product Ext(A, phi, Pi): the group on A x Z_n under
//
//   (x, c^i) * (y, c^j) = (x * phi^i(y), c^{sigma_Pi(y,i) + j}).
//
// Pairs are encoded as a*n + e, so the identity (1_A, c^0) has index 0.
// A embeds as {(a, c^0)} and c = (1_A, c^1) generates the cyclic factor.
class ExtSkewProduct {
 public:
  const ExtendedPowerFunction& epf() const { return epf_; }
  const SkewMorphism& skew() const { return epf_.skew; }
  GroupPtr base() const { return epf_.skew.group; }
  int n() const { return epf_.n; }
  int order() const { return order_; }
  // True when the order exceeded the cap and only random triples were checked.
  bool axioms_sampled() const { return sampled_; }

  ExtElement identity() const { return {0, 0}; }
  ExtElement c() const { return {0, 1 % epf_.n}; }
  ExtElement embed(Elem x) const { return {x, 0}; }

  int encode(const ExtElement& g) const { return g.a * epf_.n + g.e; }
  ExtElement decode(int idx) const { return {idx / epf_.n, idx % epf_.n}; }

  ExtElement multiply(const ExtElement& g1, const ExtElement& g2) const {
    Elem a = base()->mul(g1.a, phi_pow_[g1.e % epf_.skew.m][g2.a]);
    int e = static_cast<int>((sigma(g2.a, g1.e) + g2.e) % epf_.n);
    return {a, e};
  }

  // (x, c^i)^-1 = (phi^{-i}(x^-1), c^{sigma_Pi(x^-1, n-i)}).
  ExtElement inverse(const ExtElement& g) const {
    const int m = epf_.skew.m;
    Elem xi = base()->inv(g.a);
    int back = ((m - g.e % m) % m);
    Elem a = phi_pow_[back][xi];
    int e = static_cast<int>(sigma(xi, (epf_.n - g.e) % epf_.n));
    return {a, e};
  }

  ExtElement power(const ExtElement& g, long long k) const {
    ExtElement base_el = g;
    if (k < 0) {
      base_el = inverse(g);
      k = -k;
    }
    ExtElement acc = identity();
    while (k > 0) {
      if (k & 1) acc = multiply(acc, base_el);
      base_el = multiply(base_el, base_el);
      k >>= 1;
    }
    return acc;
  }

  int element_order(const ExtElement& g) const {
    int e = 1;
    ExtElement x = g;
    while (x != identity()) {
      x = multiply(x, g);
      ++e;
    }
    return e;
  }

  // Encoded product table (order x order, row-major).
  const std::vector<int>& flat_table() const { return table_; }
  int table_at(int i, int j) const { return table_[static_cast<std::size_t>(i) * order_ + j]; }

 private:
  friend ExtSkewProduct build_extension(const ExtendedPowerFunction&, const Caps&);

  explicit ExtSkewProduct(ExtendedPowerFunction epf) : epf_(std::move(epf)) {
    order_ = epf_.skew.group->order() * epf_.n;
    phi_pow_ = perm_powers(epf_.skew.perm, epf_.skew.m);
    pre_.resize(epf_.skew.group->order());
    for (Elem y = 0; y < epf_.skew.group->order(); ++y)
      pre_[y] = detail::sigma_prefix(epf_.skew, epf_.values, y);
  }

  long long sigma(Elem y, int k) const {
    const int m = epf_.skew.m;
    int q = k / m, r = k % m;
    return (static_cast<long long>(q) * (pre_[y][m] % epf_.n) + pre_[y][r]) % epf_.n;
  }

  ExtendedPowerFunction epf_;
  int order_ = 0;
  bool sampled_ = false;
  std::vector<std::vector<Elem>> phi_pow_;
  std::vector<std::vector<long long>> pre_;
  std::vector<int> table_;
};

// Free-function spellings of the product and inverse.
inline ExtElement ext_multiply(const ExtSkewProduct& ext, const ExtElement& g1,
                               const ExtElement& g2) {
  return ext.multiply(g1, g2);
}
inline ExtElement ext_inverse(const ExtSkewProduct& ext, const ExtElement& g) {
  return ext.inverse(g);
}

// Builds Ext(A, phi, Pi) and re-verifies the group axioms: exhaustive
// associativity up to caps.order_cap, sampled beyond; identity and two-sided
// inverses always in full.
inline ExtSkewProduct build_extension(const ExtendedPowerFunction& epf,
                                      const Caps& caps = Caps{}) {
  ExtSkewProduct ext(epf);
  const int order = ext.order_;
  ext.table_.resize(static_cast<std::size_t>(order) * order);
  for (int i = 0; i < order; ++i) {
    ExtElement gi = ext.decode(i);
    for (int j = 0; j < order; ++j)
      ext.table_[static_cast<std::size_t>(i) * order + j] =
          ext.encode(ext.multiply(gi, ext.decode(j)));
  }
  auto at = [&](int i, int j) { return ext.table_[static_cast<std::size_t>(i) * order + j]; };

  for (int i = 0; i < order; ++i)
    if (at(0, i) != i || at(i, 0) != i)
      fail(Errc::associativity_failure, "identity fails at element " + std::to_string(i));
  for (int i = 0; i < order; ++i) {
    int j = ext.encode(ext.inverse(ext.decode(i)));
    if (at(i, j) != 0 || at(j, i) != 0)
      fail(Errc::associativity_failure, "inverse fails at element " + std::to_string(i));
  }

  if (order <= caps.order_cap) {
    for (int x = 0; x < order; ++x)
      for (int y = 0; y < order; ++y) {
        int xy = at(x, y);
        for (int z = 0; z < order; ++z)
          if (at(xy, z) != at(x, at(y, z)))
            fail(Errc::associativity_failure,
                 "witness triple " + detail::triple(x, y, z));
      }
  } else {
    ext.sampled_ = true;
    std::mt19937_64 rng(detail::kSampleSeed);
    std::uniform_int_distribution<int> pick(0, order - 1);
    for (int i = 0; i < 10 * order; ++i) {
      int x = pick(rng), y = pick(rng), z = pick(rng);
      if (at(at(x, y), z) != at(x, at(y, z)))
        fail(Errc::associativity_failure, "witness triple " + detail::triple(x, y, z));
    }
  }
  return ext;
}

// Export as a validated FiniteGroup (identity is already index 0).
inline GroupPtr to_cayley(const ExtSkewProduct& ext, const Caps& caps = Caps{}) {
  if (ext.order() > caps.order_cap)
    fail(Errc::cap_exceeded, "Cayley export capped at order " + std::to_string(caps.order_cap));
  std::vector<std::vector<Elem>> rows(ext.order(), std::vector<Elem>(ext.order()));
  for (int i = 0; i < ext.order(); ++i)
    for (int j = 0; j < ext.order(); ++j) rows[i][j] = ext.table_at(i, j);
  return from_cayley_table(rows, "ext:" + ext.base()->label() + ":n" + std::to_string(ext.n()),
                           caps);
}

// The skew product A<phi>: the n = m, Pi = pi case. Its cyclic factor is
// core-free.
inline ExtSkewProduct skew_product(const SkewMorphism& sm, const Caps& caps = Caps{}) {
  return build_extension(epf_from_pi(sm), caps);
}

// The pair (phi, Pi) read off a concrete factorization G = A<c>, plus the
// index |<c> : <c>_G|, which must equal the order of phi.
struct ExtractionResult {
  SkewMorphism skew;
  ExtendedPowerFunction epf;
  int core_index = 1;
};

// Reads phi and Pi from the equations c*x = phi(x)*c^{Pi(x)} in G, given a
// complement subgroup A and a generator c of the cyclic factor. The
// extracted pair passes both validators.
inline ExtractionResult extract_pair(const GroupPtr& g, const ElementSet& a_set, Elem c,
                                     const Caps& caps = Caps{}) {
  if (!a_set.group || !a_set.group->same_table(*g))
    fail(Errc::bad_input, "subgroup belongs to a different group");
  if (!is_subgroup(a_set)) fail(Errc::not_a_subgroup, "complement is not a subgroup");
  if (c < 0 || c >= g->order()) fail(Errc::bad_input, "c out of range");

  const int n = g->element_order(c);
  std::vector<Elem> cpow(n);
  cpow[0] = 0;
  for (int i = 1; i < n; ++i) cpow[i] = g->mul(cpow[i - 1], c);
  for (int i = 1; i < n; ++i)
    if (a_set.contains(cpow[i]))
      fail(Errc::not_exact_product, "A meets <c> at c^" + std::to_string(i));
  if (static_cast<long long>(a_set.size()) * n != g->order())
    fail(Errc::not_exact_product, "|A| * |c| != |G|");

  const int nA = static_cast<int>(a_set.size());
  std::vector<int> local_of(g->order(), -1);
  for (int i = 0; i < nA; ++i) local_of[a_set.members[i]] = i;

  // Unique factorization g = a * c^i.
  std::vector<int> fac_a(g->order(), -1), fac_i(g->order(), -1);
  for (int i = 0; i < nA; ++i)
    for (int j = 0; j < n; ++j) {
      Elem h = g->mul(a_set.members[i], cpow[j]);
      if (fac_a[h] >= 0)
        fail(Errc::factorization_collision, "element " + std::to_string(h) + " factors twice");
      fac_a[h] = i;
      fac_i[h] = j;
    }

  // The complement as a group of its own, elements in sorted order.
  std::vector<std::vector<Elem>> rows(nA, std::vector<Elem>(nA));
  for (int i = 0; i < nA; ++i)
    for (int j = 0; j < nA; ++j)
      rows[i][j] = local_of[g->mul(a_set.members[i], a_set.members[j])];
  GroupPtr a_grp = from_cayley_table(rows, g->label() + "|A" + std::to_string(nA), caps);

  std::vector<Elem> phi(nA);
  std::vector<int> pi_ext(nA);
  for (int x = 0; x < nA; ++x) {
    Elem h = g->mul(c, a_set.members[x]);
    phi[x] = fac_a[h];
    pi_ext[x] = fac_i[h];
  }

  SkewMorphism sm = validate_skew(a_grp, phi);
  for (int x = 0; x < nA; ++x)
    if (pi_ext[x] % sm.m != sm.pi[x])
      fail(Errc::internal, "Pi incongruent to pi at x=" + std::to_string(x));
  ExtendedPowerFunction epf = validate_epf(sm, n, pi_ext);

  ElementSet cyc = make_element_set(g, cpow);
  int core_index = n / static_cast<int>(core_of_subgroup(cyc).size());
  if (core_index != sm.m) fail(Errc::internal, "core index != order of phi");
  return ExtractionResult{std::move(sm), std::move(epf), core_index};
}

struct StructureCheck {
  std::string name;
  bool pass = false;
  std::string witness;  // empty on pass
};

struct StructureReport {
  std::vector<StructureCheck> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Structural facts about Ext(A, phi, Pi):
//   - <c^m> is normal, and G/<c^m> is the skew product A<phi> via
//     Phi(x c^i) = x phi^i, whose kernel <c^m> has order n/m;
//   - x^-1 c^m x = (c^m)^{sigma_Pi(x,m)/m} for all x in A;
//   - Av is trivial exactly when c^m is central;
//   - Ker Pi = A ∩ A^c and Core Pi = ∩_{i=1..n} A^{c^i}.
// Each failed assertion is reported with a witness element.
inline StructureReport verify_structure(const ExtSkewProduct& ext, const Caps& caps = Caps{}) {
  if (ext.order() > caps.order_cap)
    fail(Errc::cap_exceeded, "structure verification capped at order " +
                                 std::to_string(caps.order_cap));
  const int order = ext.order();
  const int n = ext.n();
  const int m = ext.skew().m;
  StructureReport report;
  auto add = [&](std::string name, bool pass, std::string witness) {
    report.checks.push_back({std::move(name), pass, pass ? "" : std::move(witness)});
  };

  // <c^m> as encoded set.
  std::vector<bool> in_cm(order, false);
  std::vector<int> cm_set;
  for (int j = 0; j * m < n || j == 0; ++j) {
    if (j * m >= n) break;
    int enc = ext.encode({0, (j * m) % n});
    if (!in_cm[enc]) {
      in_cm[enc] = true;
      cm_set.push_back(enc);
    }
  }

  {
    bool pass = true;
    std::string witness;
    for (int g = 0; g < order && pass; ++g) {
      int gi = ext.encode(ext.inverse(ext.decode(g)));
      for (int h : cm_set) {
        int conj = ext.table_at(ext.table_at(gi, h), g);
        if (!in_cm[conj]) {
          pass = false;
          witness = "g=" + std::to_string(g) + " h=" + std::to_string(h);
          break;
        }
      }
    }
    add("cm_normal", pass, std::move(witness));
  }

  {
    // Phi: x c^i -> x phi^i, onto the skew product A<phi>.
    ExtSkewProduct sp = skew_product(ext.skew(), caps);
    auto Phi = [&](int enc) {
      ExtElement g = ext.decode(enc);
      return sp.encode({g.a, g.e % m});
    };
    bool hom = true;
    std::string witness;
    for (int x = 0; x < order && hom; ++x)
      for (int y = 0; y < order; ++y)
        if (Phi(ext.table_at(x, y)) != sp.table_at(Phi(x), Phi(y))) {
          hom = false;
          witness = "pair (" + std::to_string(x) + "," + std::to_string(y) + ")";
          break;
        }
    add("phi_homomorphism", hom, std::move(witness));

    std::vector<int> kernel;
    for (int x = 0; x < order; ++x)
      if (Phi(x) == 0) kernel.push_back(x);
    std::vector<int> cm_sorted = cm_set;
    std::sort(cm_sorted.begin(), cm_sorted.end());
    bool ker_ok = kernel == cm_sorted && static_cast<int>(kernel.size()) == n / m;
    add("phi_kernel_is_cm", ker_ok,
        ker_ok ? "" : "kernel size " + std::to_string(kernel.size()));
  }

  {
    // Conjugation exponent on <c^m>: x^-1 c^m x = (c^m)^{Av(x)}.
    std::vector<int> av = Av(ext.epf());
    ExtElement cm{0, m % n};
    bool pass = true;
    std::string witness;
    for (Elem x = 0; x < ext.base()->order(); ++x) {
      ExtElement lhs = ext.multiply(ext.multiply(ext.inverse(ext.embed(x)), cm), ext.embed(x));
      ExtElement rhs{0, static_cast<int>((static_cast<long long>(m) * av[x]) % n)};
      if (lhs != rhs) {
        pass = false;
        witness = "x=" + std::to_string(x);
        break;
      }
    }
    add("conjugation_exponent", pass, std::move(witness));
  }

  {
    std::vector<int> av = Av(ext.epf());
    bool av_trivial = true;
    const int one = 1 % (n / m);
    for (int v : av) av_trivial = av_trivial && v == one;
    int cm = ext.encode({0, m % n});
    bool central = true;
    for (int g = 0; g < order && central; ++g)
      central = ext.table_at(g, cm) == ext.table_at(cm, g);
    add("av_trivial_iff_cm_central", av_trivial == central,
        "Av trivial=" + std::to_string(av_trivial) + " central=" + std::to_string(central));
  }

  {
    // Ker Pi = A ∩ A^c and Core Pi = ∩_{i=1..n} A^{c^i}, inside the table.
    auto conjugate_of_A = [&](int i) {
      // A^{c^i} = c^-i A c^i.
      ExtElement ci = ext.power(ext.c(), i);
      ExtElement ci_inv = ext.inverse(ci);
      std::vector<bool> in(order, false);
      for (Elem a = 0; a < ext.base()->order(); ++a)
        in[ext.encode(ext.multiply(ext.multiply(ci_inv, ext.embed(a)), ci))] = true;
      return in;
    };
    auto a_indices = [&](const std::vector<bool>& in) {
      std::vector<Elem> out;
      for (Elem a = 0; a < ext.base()->order(); ++a)
        if (in[ext.encode(ext.embed(a))]) out.push_back(a);
      return out;
    };

    std::vector<bool> ac = conjugate_of_A(1);
    std::vector<Elem> ker_table = a_indices(ac);
    bool ker_ok = ker_table == kernel_Pi(ext.epf()).members;
    add("kernel_Pi_is_A_meet_Ac", ker_ok, ker_ok ? "" : "sets differ");

    std::vector<bool> inter(order, true);
    for (int i = 1; i <= n; ++i) {
      std::vector<bool> conj = conjugate_of_A(i);
      for (int x = 0; x < order; ++x) inter[x] = inter[x] && conj[x];
    }
    std::vector<Elem> core_table = a_indices(inter);
    // The intersection includes i = n, i.e. A itself, so it lies inside A.
    bool inside_A = true;
    for (int x = 0; x < order; ++x)
      if (inter[x] && ext.decode(x).e != 0) inside_A = false;
    bool core_ok = inside_A && core_table == core_Pi(ext.epf()).members;
    add("core_Pi_is_meet_Acis", core_ok, core_ok ? "" : "sets differ");
  }

  return report;
}

// First automorphism theta of A (in one-line image order) with
// phi2 = theta phi1 theta^-1 and Pi2 = Pi1 theta^-1, if the pairs are
// equivalent; empty otherwise.
inline std::optional<GroupMorphism> equivalent_pairs_over(
    const std::vector<GroupMorphism>& auts, const ExtendedPowerFunction& e1,
    const ExtendedPowerFunction& e2) {
  if (!e1.skew.group->same_table(*e2.skew.group))
    fail(Errc::bad_input, "pairs live on different groups");
  if (e1.n != e2.n) fail(Errc::bad_input, "pairs have different moduli");
  for (const GroupMorphism& theta : auts) {
    bool ok = true;
    for (Elem x = 0; x < e1.skew.group->order() && ok; ++x)
      ok = e2.skew.perm[theta(x)] == theta(e1.skew.perm[x]) &&
           e2.values[theta(x)] == e1.values[x];
    if (ok) return theta;
  }
  return std::nullopt;
}

inline std::optional<GroupMorphism> equivalent_pairs(const ExtendedPowerFunction& e1,
                                                     const ExtendedPowerFunction& e2,
                                                     const Caps& caps = Caps{}) {
  return equivalent_pairs_over(automorphisms(e1.skew.group, caps), e1, e2);
}

struct EquivalenceClasses {
  // Indices into the input list, one vector per class, each sorted by
  // serialization order; the first entry is the canonical representative.
  std::vector<std::vector<std::size_t>> classes;
};

inline EquivalenceClasses classify_equivalence(const std::vector<ExtendedPowerFunction>& pairs,
                                               const Caps& caps = Caps{}) {
  EquivalenceClasses out;
  if (pairs.empty()) return out;
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (!pairs[i].skew.group->same_table(*pairs[0].skew.group))
      fail(Errc::bad_input, "pairs live on different groups");
    if (pairs[i].n != pairs[0].n) fail(Errc::bad_input, "pairs have different moduli");
  }
  auto key = [&](std::size_t i) {
    return std::make_pair(pairs[i].skew.perm, pairs[i].values);
  };
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  const std::vector<GroupMorphism> auts = automorphisms(pairs[0].skew.group, caps);
  std::vector<bool> assigned(pairs.size(), false);
  for (std::size_t idx : order) {
    if (assigned[idx]) continue;
    std::vector<std::size_t> cls{idx};
    assigned[idx] = true;
    for (std::size_t j : order) {
      if (assigned[j]) continue;
      if (equivalent_pairs_over(auts, pairs[idx], pairs[j])) {
        cls.push_back(j);
        assigned[j] = true;
      }
    }
    out.classes.push_back(std::move(cls));
  }
  return out;
}

}  // namespace ccext
