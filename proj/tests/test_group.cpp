#include <algorithm>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "ccext/group.hpp"

using namespace ccext;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a ccext::Error");
  return Errc::internal;
}

// Brute-force automorphism count: try every permutation fixing the identity.
// Independent of the backtracking enumerator.
int count_automorphisms_brute(const GroupPtr& g) {
  const int n = g->order();
  std::vector<Elem> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    bool hom = true;
    for (Elem x = 0; x < n && hom; ++x)
      for (Elem y = 0; y < n; ++y)
        if (perm[g->mul(x, y)] != g->mul(perm[x], perm[y])) {
          hom = false;
          break;
        }
    if (hom) ++count;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return count;
}

}  // namespace

TEST_CASE("cyclic groups") {
  GroupPtr g1 = cyclic_group(1);
  REQUIRE(g1->order() == 1);
  REQUIRE(g1->mul(0, 0) == 0);

  GroupPtr g8 = cyclic_group(8);
  REQUIRE(g8->element_order(1) == 8);
  REQUIRE(g8->element_order(2) == 4);
  REQUIRE(g8->element_order(0) == 1);

  GroupPtr g4 = cyclic_group(4);
  REQUIRE(g4->mul(1, 3) == 0);
  REQUIRE(g4->inv(1) == 3);

  // element i has order k/gcd(i,k)
  for (int k = 1; k <= 10; ++k) {
    GroupPtr g = cyclic_group(k);
    for (Elem i = 0; i < k; ++i) REQUIRE(g->element_order(i) == k / std::gcd(i, k));
  }

  REQUIRE(code_of([] { cyclic_group(0); }) == Errc::bad_input);
}

TEST_CASE("dihedral groups") {
  GroupPtr d1 = dihedral_group(1);
  REQUIRE(d1->order() == 2);
  REQUIRE(d1->same_table(*cyclic_group(2)));

  GroupPtr d3 = dihedral_group(3);
  REQUIRE(d3->order() == 6);
  Elem rho = 1, sigma = 3;
  REQUIRE(d3->mul(rho, sigma) != d3->mul(sigma, rho));
  // sigma rho sigma = rho^-1
  REQUIRE(d3->mul(sigma, d3->mul(rho, sigma)) == d3->inv(rho));

  GroupPtr d4 = dihedral_group(4);
  REQUIRE(d4->order() == 8);
  int order4 = 0;
  for (Elem x = 0; x < 8; ++x)
    if (d4->element_order(x) == 4) ++order4;
  REQUIRE(order4 == 2);

  REQUIRE(code_of([] { dihedral_group(0); }) == Errc::bad_input);
}

TEST_CASE("from_cayley_table validation") {
  // Round trip.
  GroupPtr g3 = cyclic_group(3);
  GroupPtr again = from_cayley_table(g3->rows(), "copy");
  REQUIRE(again->same_table(*g3));

  // Repeated entry.
  REQUIRE(code_of([] { from_cayley_table({{0, 1}, {1, 1}}); }) == Errc::not_latin);

  // Latin square without identity.
  REQUIRE(code_of([] {
            from_cayley_table({{1, 0, 2}, {2, 1, 0}, {0, 2, 1}});
          }) == Errc::no_identity);

  // Latin square with identity that is a quasigroup but not associative:
  // (1*1)*2 = 0*2 = 2 while 1*(1*2) = 1*3 = 4.
  REQUIRE(code_of([] {
            from_cayley_table({{0, 1, 2, 3, 4},
                               {1, 0, 3, 4, 2},
                               {2, 3, 4, 0, 1},
                               {3, 4, 1, 2, 0},
                               {4, 2, 0, 1, 3}});
          }) == Errc::not_associative);
}

TEST_CASE("identity is relabeled to index 0") {
  // Z_3 with the identity moved to index 2 via the relabeling 0<->2.
  GroupPtr g3 = cyclic_group(3);
  auto relab = [](Elem x) { return x == 0 ? 2 : x == 2 ? 0 : x; };
  std::vector<std::vector<Elem>> rows(3, std::vector<Elem>(3));
  for (Elem x = 0; x < 3; ++x)
    for (Elem y = 0; y < 3; ++y) rows[relab(x)][relab(y)] = relab(g3->mul(x, y));
  GroupPtr back = from_cayley_table(rows);
  REQUIRE(back->mul(0, 0) == 0);
  REQUIRE(back->same_table(*g3));
}

TEST_CASE("automorphisms") {
  REQUIRE(automorphisms(cyclic_group(1)).size() == 1);

  // Aut(Z_8) = the four unit multiplications.
  auto auts = automorphisms(cyclic_group(8));
  REQUIRE(auts.size() == 4);
  std::set<Elem> images_of_1;
  for (const auto& a : auts) {
    REQUIRE(a.is_automorphism());
    images_of_1.insert(a.image[1]);
  }
  REQUIRE(images_of_1 == std::set<Elem>{1, 3, 5, 7});

  REQUIRE(automorphisms(dihedral_group(3)).size() == 6);

  // Backtracking agrees with the brute-force scan on small groups.
  for (const GroupPtr& g : {cyclic_group(4), cyclic_group(6), dihedral_group(2),
                            dihedral_group(3)})
    REQUIRE(static_cast<int>(automorphisms(g).size()) == count_automorphisms_brute(g));

  // Deterministic lexicographic order, closed under composition and inverse.
  auto auts_d4 = automorphisms(dihedral_group(4));
  REQUIRE(auts_d4.size() == 8);
  REQUIRE(std::is_sorted(auts_d4.begin(), auts_d4.end(),
                         [](const GroupMorphism& a, const GroupMorphism& b) {
                           return a.image < b.image;
                         }));
  std::set<std::vector<Elem>> images;
  for (const auto& a : auts_d4) images.insert(a.image);
  for (const auto& a : auts_d4) {
    REQUIRE(images.count(inverse_morphism(a).image) == 1);
    for (const auto& b : auts_d4) REQUIRE(images.count(compose(a, b).image) == 1);
  }

  Caps tight;
  tight.aut_enum_cap = 4;
  REQUIRE(code_of([&] { automorphisms(cyclic_group(8), tight); }) == Errc::cap_exceeded);
}

TEST_CASE("subgroup_generated") {
  GroupPtr g8 = cyclic_group(8);
  REQUIRE(subgroup_generated(g8, {}).members == std::vector<Elem>{0});
  REQUIRE(subgroup_generated(g8, {2}).members == std::vector<Elem>{0, 2, 4, 6});

  GroupPtr d4 = dihedral_group(4);
  ElementSet h = subgroup_generated(d4, {2, 4});  // rho^2 and sigma
  REQUIRE(h.members == std::vector<Elem>{0, 2, 4, 6});
  REQUIRE(is_subgroup(h));
}

TEST_CASE("core_of_subgroup") {
  GroupPtr d4 = dihedral_group(4);
  ElementSet sigma_sub = subgroup_generated(d4, {4});
  ElementSet core = core_of_subgroup(sigma_sub);
  REQUIRE(core.members == std::vector<Elem>{0});

  // Normal subgroup is its own core; in abelian groups every subgroup is.
  ElementSet rot = subgroup_generated(d4, {1});
  REQUIRE(core_of_subgroup(rot).members == rot.members);
  GroupPtr g8 = cyclic_group(8);
  for (Elem gen = 0; gen < 8; ++gen) {
    ElementSet h = subgroup_generated(g8, {gen});
    REQUIRE(core_of_subgroup(h).members == h.members);
  }

  ElementSet not_sub{d4, {0, 1}};
  REQUIRE(code_of([&] { core_of_subgroup(not_sub); }) == Errc::not_a_subgroup);

  // Core is always normal and contained in its input.
  ElementSet refl = subgroup_generated(d4, {5});
  ElementSet c = core_of_subgroup(refl);
  REQUIRE(is_normal_subgroup(c));
  for (Elem x : c.members) REQUIRE(refl.contains(x));
}

TEST_CASE("quotient_group") {
  GroupPtr g8 = cyclic_group(8);

  auto [q1, p1] = quotient_group(g8, subgroup_generated(g8, {}));
  REQUIRE(q1->order() == 8);
  REQUIRE(p1.is_bijection());

  auto [q2, p2] = quotient_group(g8, subgroup_generated(g8, {1}));
  REQUIRE(q2->order() == 1);
  REQUIRE(p2.image == std::vector<Elem>(8, 0));

  auto [q3, p3] = quotient_group(g8, subgroup_generated(g8, {4}));
  REQUIRE(q3->order() == 4);
  REQUIRE(q3->element_order(p3(1)) == 4);
  REQUIRE(p3.is_homomorphism());

  // |G| = |N| * |G/N| across the subgroup lattice of D_4.
  GroupPtr d4 = dihedral_group(4);
  for (Elem a = 0; a < 8; ++a) {
    ElementSet h = subgroup_generated(d4, {a});
    if (!is_normal_subgroup(h)) continue;
    auto [q, p] = quotient_group(d4, h);
    REQUIRE(static_cast<int>(h.size()) * q->order() == d4->order());
  }

  ElementSet refl = subgroup_generated(d4, {4});
  REQUIRE(code_of([&] { quotient_group(d4, refl); }) == Errc::not_normal);
}

TEST_CASE("element orders divide the group order") {
  for (const GroupPtr& g : {cyclic_group(6), cyclic_group(8), dihedral_group(3),
                            dihedral_group(4)})
    for (Elem x = 0; x < g->order(); ++x) REQUIRE(g->order() % g->element_order(x) == 0);
}

TEST_CASE("group file invariants") {
  // Associativity is checked exhaustively for every constructed group here.
  for (const GroupPtr& g : {cyclic_group(6), dihedral_group(3)}) {
    REQUIRE_FALSE(g->assoc_sampled());
    for (Elem x = 0; x < g->order(); ++x)
      for (Elem y = 0; y < g->order(); ++y)
        for (Elem z = 0; z < g->order(); ++z)
          REQUIRE(g->mul(g->mul(x, y), z) == g->mul(x, g->mul(y, z)));
  }
}
