#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ccext/caps.hpp"
#include "ccext/errors.hpp"

namespace ccext {

// Element of a group, as an index into its multiplication table.
using Elem = int;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

GroupPtr from_cayley_table(const std::vector<std::vector<Elem>>& table, std::string label,
                           const Caps& caps);

// A finite group given by its full multiplication table over indices
// 0..order-1, with index 0 the identity (constructors relabel if needed).
// Instances are immutable after validation and may be shared freely.
class FiniteGroup {
 public:
  int order() const { return n_; }
  Elem mul(Elem x, Elem y) const { return mul_[static_cast<std::size_t>(x) * n_ + y]; }
  Elem inv(Elem x) const { return inv_[x]; }
  const std::string& label() const { return label_; }

  // True when the order exceeded the associativity cap and only random
  // triples were checked.
  bool assoc_sampled() const { return assoc_sampled_; }

  // x^e, with negative exponents via the inverse.
  Elem power(Elem x, long long e) const {
    Elem base = x;
    if (e < 0) {
      base = inv_[x];
      e = -e;
    }
    Elem acc = 0;
    while (e > 0) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  }

  // Least e >= 1 with g^e = identity.
  int element_order(Elem g) const {
    int e = 1;
    Elem x = g;
    while (x != 0) {
      x = mul(x, g);
      ++e;
    }
    return e;
  }

  const std::vector<Elem>& flat_table() const { return mul_; }

  std::vector<std::vector<Elem>> rows() const {
    std::vector<std::vector<Elem>> out(n_);
    for (int i = 0; i < n_; ++i)
      out[i].assign(mul_.begin() + static_cast<std::size_t>(i) * n_,
                    mul_.begin() + static_cast<std::size_t>(i + 1) * n_);
    return out;
  }

  bool same_table(const FiniteGroup& other) const {
    return n_ == other.n_ && mul_ == other.mul_;
  }

 private:
  friend GroupPtr from_cayley_table(const std::vector<std::vector<Elem>>&, std::string,
                                    const Caps&);

  FiniteGroup(int n, std::vector<Elem> mul, std::vector<Elem> inv, std::string label,
              bool sampled)
      : n_(n),
        mul_(std::move(mul)),
        inv_(std::move(inv)),
        label_(std::move(label)),
        assoc_sampled_(sampled) {}

  int n_;
  std::vector<Elem> mul_;
  std::vector<Elem> inv_;
  std::string label_;
  bool assoc_sampled_;
};

// Sorted set of element indices of one group. `members` is strictly
// increasing; subgroup-ness is a property checked on demand, not a type
// invariant.
struct ElementSet {
  GroupPtr group;
  std::vector<Elem> members;

  bool contains(Elem x) const {
    return std::binary_search(members.begin(), members.end(), x);
  }
  std::size_t size() const { return members.size(); }

  friend bool operator==(const ElementSet& a, const ElementSet& b) {
    return a.members == b.members;
  }
};

inline ElementSet make_element_set(GroupPtr group, std::vector<Elem> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return ElementSet{std::move(group), std::move(members)};
}

inline bool is_subgroup(const ElementSet& s) {
  const FiniteGroup& g = *s.group;
  if (!s.contains(0)) return false;
  for (Elem a : s.members) {
    if (!s.contains(g.inv(a))) return false;
    for (Elem b : s.members)
      if (!s.contains(g.mul(a, b))) return false;
  }
  return true;
}

// A map between groups given by its image vector. For automorphisms
// source and target coincide.
struct GroupMorphism {
  GroupPtr source;
  GroupPtr target;
  std::vector<Elem> image;

  Elem operator()(Elem x) const { return image[x]; }

  bool is_homomorphism() const {
    if (image[0] != 0) return false;
    const int n = source->order();
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        if (image[source->mul(x, y)] != target->mul(image[x], image[y])) return false;
    return true;
  }

  bool is_bijection() const {
    if (source->order() != target->order()) return false;
    std::vector<bool> seen(image.size(), false);
    for (Elem v : image) {
      if (v < 0 || v >= static_cast<Elem>(image.size()) || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  bool is_automorphism() const {
    return source->same_table(*target) && is_bijection() && is_homomorphism();
  }

  friend bool operator==(const GroupMorphism& a, const GroupMorphism& b) {
    return a.image == b.image && a.source->same_table(*b.source) &&
           a.target->same_table(*b.target);
  }
};

// f after g.
inline GroupMorphism compose(const GroupMorphism& f, const GroupMorphism& g) {
  if (!f.source->same_table(*g.target)) fail(Errc::bad_input, "morphisms do not compose");
  std::vector<Elem> image(g.image.size());
  for (std::size_t x = 0; x < image.size(); ++x) image[x] = f.image[g.image[x]];
  return GroupMorphism{g.source, f.target, std::move(image)};
}

inline GroupMorphism inverse_morphism(const GroupMorphism& f) {
  if (!f.is_bijection()) fail(Errc::bad_input, "morphism is not a bijection");
  std::vector<Elem> image(f.image.size());
  for (std::size_t x = 0; x < image.size(); ++x) image[f.image[x]] = static_cast<Elem>(x);
  return GroupMorphism{f.target, f.source, std::move(image)};
}

namespace detail {

constexpr std::uint64_t kSampleSeed = 0x9e3779b97f4a7c15ull;

inline std::string cell(int r, int c) {
  return "(" + std::to_string(r) + "," + std::to_string(c) + ")";
}

inline std::string triple(int x, int y, int z) {
  return "(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
}

}  // namespace detail

// Validates a multiplication table and wraps it as a FiniteGroup. The
// identity is relabeled to index 0 when it sits elsewhere. Associativity is
// exhaustive up to caps.order_cap and sampled (10*n random triples) beyond.
inline GroupPtr from_cayley_table(const std::vector<std::vector<Elem>>& table,
                                  std::string label = {}, const Caps& caps = Caps{}) {
  const int n = static_cast<int>(table.size());
  if (n == 0) fail(Errc::bad_input, "empty table");
  std::vector<Elem> mul(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(table[r].size()) != n)
      fail(Errc::bad_input, "table is not square at row " + std::to_string(r));
    for (int c = 0; c < n; ++c) {
      Elem v = table[r][c];
      if (v < 0 || v >= n)
        fail(Errc::not_latin, "entry out of range at cell " + detail::cell(r, c));
      mul[static_cast<std::size_t>(r) * n + c] = v;
    }
  }

  // Latin square: each row and column is a permutation of 0..n-1.
  std::vector<int> seen(n);
  for (int r = 0; r < n; ++r) {
    std::fill(seen.begin(), seen.end(), -1);
    for (int c = 0; c < n; ++c) {
      Elem v = mul[static_cast<std::size_t>(r) * n + c];
      if (seen[v] >= 0)
        fail(Errc::not_latin, "row " + std::to_string(r) + " repeats value " +
                                  std::to_string(v) + " at cell " + detail::cell(r, c));
      seen[v] = c;
    }
  }
  for (int c = 0; c < n; ++c) {
    std::fill(seen.begin(), seen.end(), -1);
    for (int r = 0; r < n; ++r) {
      Elem v = mul[static_cast<std::size_t>(r) * n + c];
      if (seen[v] >= 0)
        fail(Errc::not_latin, "column " + std::to_string(c) + " repeats value " +
                                  std::to_string(v) + " at cell " + detail::cell(r, c));
      seen[v] = r;
    }
  }

  // Two-sided identity.
  int identity = -1;
  for (int e = 0; e < n && identity < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      ok = mul[static_cast<std::size_t>(e) * n + x] == x &&
           mul[static_cast<std::size_t>(x) * n + e] == x;
    if (ok) identity = e;
  }
  if (identity < 0) fail(Errc::no_identity, "no two-sided identity element");

  if (identity != 0) {
    // Swap labels 0 <-> identity.
    auto relab = [&](Elem x) { return x == 0 ? identity : x == identity ? 0 : x; };
    std::vector<Elem> re(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        re[static_cast<std::size_t>(r) * n + c] =
            relab(mul[static_cast<std::size_t>(relab(r)) * n + relab(c)]);
    mul.swap(re);
  }

  std::vector<Elem> inv(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y)
      if (mul[static_cast<std::size_t>(x) * n + y] == 0) {
        inv[x] = y;
        break;
      }
    Elem y = inv[x];
    if (mul[static_cast<std::size_t>(y) * n + x] != 0)
      // A one-sided inverse implies an associativity defect: (y*x)*y != y*(x*y).
      fail(Errc::not_associative, "one-sided inverse, witness triple " + detail::triple(y, x, y));
  }

  bool sampled = false;
  auto at = [&](Elem x, Elem y) { return mul[static_cast<std::size_t>(x) * n + y]; };
  if (n <= caps.order_cap) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        Elem xy = at(x, y);
        for (int z = 0; z < n; ++z)
          if (at(xy, z) != at(x, at(y, z)))
            fail(Errc::not_associative, "witness triple " + detail::triple(x, y, z));
      }
  } else {
    sampled = true;
    std::mt19937_64 rng(detail::kSampleSeed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int i = 0; i < 10 * n; ++i) {
      int x = pick(rng), y = pick(rng), z = pick(rng);
      if (at(at(x, y), z) != at(x, at(y, z)))
        fail(Errc::not_associative, "witness triple " + detail::triple(x, y, z));
    }
  }

  return GroupPtr(new FiniteGroup(n, std::move(mul), std::move(inv), std::move(label), sampled));
}

// Additive group of residues mod k; element i is the residue i.
inline GroupPtr cyclic_group(int k, const Caps& caps = Caps{}) {
  if (k < 1) fail(Errc::bad_input, "cyclic group order must be positive");
  std::vector<std::vector<Elem>> table(k, std::vector<Elem>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) table[i][j] = (i + j) % k;
  return from_cayley_table(table, "cyclic:" + std::to_string(k), caps);
}

// Dihedral group <rho, sigma | rho^k = sigma^2 = 1, sigma rho sigma = rho^-1>
// of order 2k. Rotations rho^i sit at indices 0..k-1, reflections rho^i sigma
// at k..2k-1.
inline GroupPtr dihedral_group(int k, const Caps& caps = Caps{}) {
  if (k < 1) fail(Errc::bad_input, "dihedral parameter must be positive");
  const int n = 2 * k;
  auto idx = [&](int i, int f) { return i + f * k; };
  std::vector<std::vector<Elem>> table(n, std::vector<Elem>(n));
  for (int i = 0; i < k; ++i)
    for (int f = 0; f < 2; ++f)
      for (int j = 0; j < k; ++j)
        for (int g = 0; g < 2; ++g) {
          int jj = f ? (k - j) % k : j;
          table[idx(i, f)][idx(j, g)] = idx((i + jj) % k, f ^ g);
        }
  return from_cayley_table(table, "dihedral:" + std::to_string(k), caps);
}

// Closure of `gens` under multiplication and inversion.
inline ElementSet subgroup_generated(const GroupPtr& g, const std::vector<Elem>& gens) {
  const int n = g->order();
  for (Elem x : gens)
    if (x < 0 || x >= n) fail(Errc::bad_input, "generator out of range");
  std::vector<bool> in(n, false);
  std::vector<Elem> work{0};
  in[0] = true;
  for (Elem x : gens)
    if (!in[x]) {
      in[x] = true;
      work.push_back(x);
    }
  for (std::size_t i = 0; i < work.size(); ++i) {
    Elem a = work[i];
    Elem ia = g->inv(a);
    if (!in[ia]) {
      in[ia] = true;
      work.push_back(ia);
    }
    for (std::size_t j = 0; j < work.size(); ++j) {
      for (Elem p : {g->mul(a, work[j]), g->mul(work[j], a)})
        if (!in[p]) {
          in[p] = true;
          work.push_back(p);
        }
    }
  }
  std::vector<Elem> members;
  for (Elem x = 0; x < n; ++x)
    if (in[x]) members.push_back(x);
  return ElementSet{g, std::move(members)};
}

// Greedy minimal generating sequence: scan elements in index order and keep
// those outside the closure of what was already picked. Deterministic.
inline std::vector<Elem> greedy_generators(const GroupPtr& g) {
  std::vector<Elem> gens;
  ElementSet closure = subgroup_generated(g, {});
  for (Elem x = 1; x < g->order(); ++x) {
    if (!closure.contains(x)) {
      gens.push_back(x);
      closure = subgroup_generated(g, gens);
      if (static_cast<int>(closure.size()) == g->order()) break;
    }
  }
  return gens;
}

// Intersection of all conjugates g^-1 H g; the largest normal subgroup of G
// inside H.
inline ElementSet core_of_subgroup(const ElementSet& h) {
  if (!is_subgroup(h)) fail(Errc::not_a_subgroup, "core requires a subgroup");
  const FiniteGroup& g = *h.group;
  const int n = g.order();
  std::vector<bool> in(n, false);
  for (Elem x : h.members) in[x] = true;
  for (Elem c = 0; c < n; ++c) {
    std::vector<bool> conj(n, false);
    Elem ci = g.inv(c);
    for (Elem x : h.members) conj[g.mul(g.mul(ci, x), c)] = true;
    for (int x = 0; x < n; ++x) in[x] = in[x] && conj[x];
  }
  std::vector<Elem> members;
  for (Elem x = 0; x < n; ++x)
    if (in[x]) members.push_back(x);
  ElementSet core{h.group, std::move(members)};
  // The result is a normal subgroup by construction; treat a failure here as
  // a bug rather than user error.
  if (!is_subgroup(core)) fail(Errc::internal, "core is not a subgroup");
  for (Elem c = 0; c < n; ++c)
    for (Elem x : core.members)
      if (!core.contains(g.mul(g.mul(g.inv(c), x), c)))
        fail(Errc::internal, "core is not normal");
  return core;
}

inline bool is_normal_subgroup(const ElementSet& nset) {
  if (!is_subgroup(nset)) return false;
  const FiniteGroup& g = *nset.group;
  for (Elem c = 0; c < g.order(); ++c)
    for (Elem x : nset.members)
      if (!nset.contains(g.mul(g.mul(g.inv(c), x), c))) return false;
  return true;
}

// Quotient G/N on cosets (canonical representative: least element of the
// coset, so the identity coset keeps index 0), plus the projection map.
inline std::pair<GroupPtr, GroupMorphism> quotient_group(const GroupPtr& g,
                                                         const ElementSet& nset,
                                                         const Caps& caps = Caps{}) {
  if (!is_subgroup(nset)) fail(Errc::not_a_subgroup, "quotient requires a subgroup");
  if (!is_normal_subgroup(nset)) fail(Errc::not_normal, "quotient requires a normal subgroup");
  const int n = g->order();
  std::vector<Elem> rep(n, -1);
  std::vector<Elem> reps;
  for (Elem x = 0; x < n; ++x) {
    if (rep[x] >= 0) continue;
    Elem least = x;  // elements are scanned in increasing order
    for (Elem h : nset.members) least = std::min(least, g->mul(x, h));
    for (Elem h : nset.members) rep[g->mul(x, h)] = least;
    reps.push_back(least);
  }
  std::sort(reps.begin(), reps.end());
  std::vector<int> index_of(n, -1);
  for (std::size_t i = 0; i < reps.size(); ++i) index_of[reps[i]] = static_cast<int>(i);

  const int q = static_cast<int>(reps.size());
  std::vector<std::vector<Elem>> table(q, std::vector<Elem>(q));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) table[i][j] = index_of[rep[g->mul(reps[i], reps[j])]];
  GroupPtr quot = from_cayley_table(table, g->label() + "/N" + std::to_string(nset.size()), caps);

  std::vector<Elem> image(n);
  for (Elem x = 0; x < n; ++x) image[x] = index_of[rep[x]];
  GroupMorphism proj{g, quot, std::move(image)};
  if (!proj.is_homomorphism()) fail(Errc::internal, "quotient projection is not a homomorphism");
  return {quot, std::move(proj)};
}

// All automorphisms of G, by backtracking over images of a greedy generating
// sequence, sorted by one-line image notation.
inline std::vector<GroupMorphism> automorphisms(const GroupPtr& g, const Caps& caps = Caps{}) {
  const int n = g->order();
  if (n > caps.aut_enum_cap)
    fail(Errc::cap_exceeded, "automorphism enumeration capped at order " +
                                 std::to_string(caps.aut_enum_cap));
  std::vector<Elem> gens = greedy_generators(g);
  std::vector<int> gen_order(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) gen_order[i] = g->element_order(gens[i]);

  std::vector<GroupMorphism> out;
  std::vector<Elem> image(n, -1);
  image[0] = 0;

  // Extends the partial map by right-multiplying known elements with the
  // already-assigned generators. Returns false on any inconsistency.
  auto close_map = [&](std::vector<Elem>& img, std::size_t gens_known) {
    std::vector<Elem> known{0};
    std::vector<bool> in_known(n, false), hit(n, false);
    in_known[0] = true;
    hit[0] = true;
    for (std::size_t i = 0; i < gens_known; ++i)
      if (!in_known[gens[i]]) {
        known.push_back(gens[i]);
        in_known[gens[i]] = true;
        if (hit[img[gens[i]]]) return false;
        hit[img[gens[i]]] = true;
      }
    for (std::size_t i = 0; i < known.size(); ++i) {
      Elem x = known[i];
      for (std::size_t s = 0; s < gens_known; ++s) {
        Elem xs = g->mul(x, gens[s]);
        Elem want = g->mul(img[x], img[gens[s]]);
        if (img[xs] < 0) {
          img[xs] = want;
          if (hit[want] && xs != 0) return false;
          hit[want] = true;
          known.push_back(xs);
          in_known[xs] = true;
        } else if (img[xs] != want) {
          return false;
        } else if (!in_known[xs]) {
          known.push_back(xs);
          in_known[xs] = true;
        }
      }
    }
    return true;
  };

  std::vector<Elem> stack_img;
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == gens.size()) {
      std::vector<Elem> img = image;
      if (!close_map(img, gens.size())) return;
      for (Elem x = 0; x < n; ++x)
        if (img[x] < 0) return;  // generators failed to generate: bug upstream
      GroupMorphism cand{g, g, img};
      if (cand.is_bijection() && cand.is_homomorphism()) out.push_back(std::move(cand));
      return;
    }
    for (Elem c = 0; c < n; ++c) {
      if (g->element_order(c) != gen_order[depth]) continue;
      std::vector<Elem> saved = image;
      image[gens[depth]] = c;
      std::vector<Elem> img = image;
      if (close_map(img, depth + 1)) self(self, depth + 1);
      image = saved;
    }
  };
  rec(rec, 0);

  std::sort(out.begin(), out.end(),
            [](const GroupMorphism& a, const GroupMorphism& b) { return a.image < b.image; });
  return out;
}

}  // namespace ccext
