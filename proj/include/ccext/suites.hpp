#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ccext/cyclic_auto.hpp"
#include "ccext/extension.hpp"

namespace ccext {

struct SuiteOptions {
  unsigned long long seed = 0x5eed0001ull;
  long long budget = 10'000'000;  // extended-power-function search budget
  int probes = 10'000;            // randomized (x,y,k) probes per suite
  int jobs = 1;
  Caps caps{};
};

struct SuiteCheck {
  std::string name;
  long long cases = 0;
  long long failed = 0;
  std::vector<std::string> witnesses;  // first few failures only

  SuiteCheck() = default;
  explicit SuiteCheck(std::string check_name) : name(std::move(check_name)) {}

  void count(bool ok, const std::string& witness) {
    ++cases;
    if (!ok) {
      ++failed;
      if (witnesses.size() < 8) witnesses.push_back(witness);
    }
  }
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCheck> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (c.failed > 0) return false;
    return true;
  }
  long long total_cases() const {
    long long n = 0;
    for (const auto& c : checks) n += c.cases;
    return n;
  }
};

// The default verification corpus: cyclic groups of order 2..8 and dihedral
// groups D_2..D_4, all of their skew-morphisms, and every extended power
// function with n <= 16, m | n and |A|*n <= 128.
struct CorpusInstance {
  SkewMorphism sm;
  int n;
  std::vector<ExtendedPowerFunction> epfs;
};

struct Corpus {
  std::vector<GroupPtr> groups;
  std::vector<SkewMorphism> skews;
  std::vector<CorpusInstance> instances;
};

inline const Corpus& default_corpus() {
  static const Corpus corpus = [] {
    Corpus c;
    for (int k = 2; k <= 8; ++k) c.groups.push_back(cyclic_group(k));
    for (int k = 2; k <= 4; ++k) c.groups.push_back(dihedral_group(k));
    for (const GroupPtr& g : c.groups)
      for (SkewMorphism& sm : enumerate_skew(g)) c.skews.push_back(std::move(sm));
    for (const SkewMorphism& sm : c.skews)
      for (int n = sm.m; n <= 16 && sm.group->order() * n <= 128; n += sm.m)
        c.instances.push_back({sm, n, enumerate_epfs(sm, n)});
    return c;
  }();
  return corpus;
}

namespace detail {

// Literal-definition reference sums, independent of the reduced fast paths.
inline int literal_sigma_pi(const SkewMorphism& sm, Elem x, long long k) {
  long long acc = 0;
  Elem z = x;
  for (long long i = 0; i < k; ++i) {
    acc += sm.pi[z];
    z = sm.perm[z];
  }
  return static_cast<int>(acc % sm.m);
}

inline int literal_sigma_Pi(const ExtendedPowerFunction& e, Elem x, long long k) {
  long long acc = 0;
  Elem z = x;
  for (long long i = 0; i < k; ++i) {
    acc += e.values[z];
    z = e.skew.perm[z];
  }
  return static_cast<int>(acc % e.n);
}

// Runs fn(begin, end, check) over [0, count) in `jobs` chunks and merges the
// per-chunk tallies in chunk order, so results do not depend on job count.
template <typename Fn>
inline void parallel_cases(long long count, int jobs, SuiteCheck& check, Fn&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count < 2 * jobs) {
    fn(0, count, check);
    return;
  }
  std::vector<std::future<SuiteCheck>> futures;
  long long chunk = (count + jobs - 1) / jobs;
  for (int j = 0; j < jobs; ++j) {
    long long begin = j * chunk, end = std::min(count, begin + chunk);
    if (begin >= end) break;
    futures.push_back(std::async(std::launch::async, [&, begin, end] {
      SuiteCheck local;
      fn(begin, end, local);
      return local;
    }));
  }
  for (auto& f : futures) {
    SuiteCheck local = f.get();
    check.cases += local.cases;
    check.failed += local.failed;
    for (auto& w : local.witnesses)
      if (check.witnesses.size() < 8) check.witnesses.push_back(std::move(w));
  }
}

inline std::string skew_tag(const SkewMorphism& sm) {
  std::string s = sm.group->label() + " perm=[";
  for (std::size_t i = 0; i < sm.perm.size(); ++i)
    s += (i ? "," : "") + std::to_string(sm.perm[i]);
  return s + "]";
}

inline std::string epf_tag(const ExtendedPowerFunction& e) {
  std::string s = skew_tag(e.skew) + " n=" + std::to_string(e.n) + " Pi=[";
  for (std::size_t i = 0; i < e.values.size(); ++i)
    s += (i ? "," : "") + std::to_string(e.values[i]);
  return s + "]";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// skew suite
// ---------------------------------------------------------------------------

inline SuiteReport run_suite_skew(const SuiteOptions& opt) {
  SuiteReport rep{"skew", {}};
  const Corpus& corpus = default_corpus();

  {
    SuiteCheck chk{"enumeration_counts"};
    // Cyclic orders 3, 5, 7 are forced to automorphisms by the coprimality
    // criterion; the other counts come from the exhaustive search itself.
    const std::vector<std::pair<GroupPtr, std::size_t>> expected = {
        {cyclic_group(3), 2},  {cyclic_group(4), 2},  {cyclic_group(5), 4},
        {cyclic_group(6), 4},  {cyclic_group(7), 6},  {cyclic_group(8), 6},
        {dihedral_group(2), 6}, {dihedral_group(3), 12}, {dihedral_group(4), 20},
    };
    for (const auto& [g, want] : expected)
      chk.count(enumerate_skew(g, opt.caps).size() == want, g->label());
    for (int k : {3, 5, 7}) {
      GroupPtr g = cyclic_group(k);
      auto sk = enumerate_skew(g, opt.caps);
      bool all_auto = true;
      for (const auto& sm : sk) all_auto = all_auto && sm.is_automorphism();
      chk.count(all_auto && sk.size() == automorphisms(g, opt.caps).size(),
                "gcd criterion at " + g->label());
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"bijective_homs_equal_automorphisms"};
    for (const GroupPtr& g : corpus.groups) {
      std::set<std::vector<Elem>> from_skews;
      for (const SkewMorphism& sm : enumerate_skew(g, opt.caps))
        if (sm.is_automorphism()) from_skews.insert(sm.perm);
      std::set<std::vector<Elem>> from_auts;
      for (const GroupMorphism& a : automorphisms(g, opt.caps)) from_auts.insert(a.image);
      chk.count(from_skews == from_auts, g->label());
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"power_function_identities"};
    for (const SkewMorphism& sm : corpus.skews) {
      const FiniteGroup& g = *sm.group;
      bool ok = true;
      std::string w;
      for (Elem x = 0; x < g.order() && ok; ++x) {
        if (sigma_pi(sm, x, static_cast<unsigned long long>(sm.m)) != 0) {
          ok = false;
          w = "sigma(x,m)!=0 at x=" + std::to_string(x);
          break;
        }
        for (Elem y = 0; y < g.order(); ++y) {
          if (sm.pi[g.mul(x, y)] !=
              sigma_pi(sm, y, static_cast<unsigned long long>(sm.pi[x]))) {
            ok = false;
            w = "pi(xy) law at (" + std::to_string(x) + "," + std::to_string(y) + ")";
            break;
          }
          for (int k = 0; k <= 2 * sm.m && ok; ++k) {
            int sg = sigma_pi(sm, x, static_cast<unsigned long long>(k));
            if (sm.apply(g.mul(x, y), k) != g.mul(sm.apply(x, k), sm.apply(y, sg))) {
              ok = false;
              w = "phi^k product law at k=" + std::to_string(k);
            }
          }
        }
      }
      chk.count(ok, detail::skew_tag(sm) + " " + w);
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"power_criteria"};
    for (const SkewMorphism& sm : corpus.skews) {
      const FiniteGroup& g = *sm.group;
      for (int k = 0; k <= 2 * sm.m; ++k) {
        std::vector<Elem> pk(g.order());
        for (Elem x = 0; x < g.order(); ++x) pk[x] = sm.apply(x, k);
        auto direct = detail::solve_power_function(sm.group, pk);
        bool is_skew = std::holds_alternative<SkewMorphism>(direct);
        auto via_criterion = power_skew(sm, static_cast<unsigned long long>(k));
        chk.count(is_skew == via_criterion.has_value(),
                  detail::skew_tag(sm) + " power criterion k=" + std::to_string(k));
        if (is_skew && via_criterion)
          chk.count(std::get<SkewMorphism>(direct).perm == via_criterion->perm,
                    detail::skew_tag(sm) + " power k=" + std::to_string(k));
        bool sigma_is_k = true;
        for (Elem x = 0; x < g.order(); ++x)
          sigma_is_k = sigma_is_k &&
                       sigma_pi(sm, x, static_cast<unsigned long long>(k)) == k % sm.m;
        bool is_aut = is_skew && std::get<SkewMorphism>(direct).is_automorphism();
        chk.count(sigma_is_k == is_aut,
                  detail::skew_tag(sm) + " automorphism criterion k=" + std::to_string(k));
      }
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"period_properties"};
    for (const SkewMorphism& sm : corpus.skews) {
      PeriodData pd = period(sm, opt.caps);
      chk.count(sm.m % pd.p == 0, detail::skew_tag(sm) + " p|m");
      chk.count(pd.quotient.m == pd.p, detail::skew_tag(sm) + " |quotient|=p");
      chk.count(pd.smooth_power.m == sm.m / pd.p && is_smooth(pd.smooth_power),
                detail::skew_tag(sm) + " phi^p smooth of order m/p");
      chk.count(is_smooth(sm) == (pd.p == 1), detail::skew_tag(sm) + " smooth iff p=1");
      for (int k = 1; k <= 2 * sm.m; ++k) {
        bool all_zero = true;
        for (Elem x = 0; x < sm.group->order(); ++x)
          all_zero = all_zero && sigma_pi(sm, x, static_cast<unsigned long long>(k)) % pd.p == 0;
        chk.count(all_zero == (k % pd.p == 0),
                  detail::skew_tag(sm) + " period divisibility at k=" + std::to_string(k));
      }
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"av_lambda_laws"};
    for (const SkewMorphism& sm : corpus.skews) {
      const FiniteGroup& g = *sm.group;
      const int p = period_of(sm);
      const int mp = sm.m / p;
      std::vector<int> av = av_function(sm);
      std::vector<int> lam = mate_lambda(sm, opt.caps);
      bool ok = true;
      std::string w;
      for (Elem x = 0; x < g.order() && ok; ++x) {
        if (av[sm.perm[x]] != av[x]) {
          ok = false;
          w = "av not phi-invariant";
        }
        if (std::gcd(av[x], mp) != 1) {
          ok = false;
          w = "av not a unit";
        }
        for (Elem y = 0; y < g.order() && ok; ++y)
          if (av[g.mul(x, y)] != av[x] * av[y] % mp) {
            ok = false;
            w = "av not multiplicative";
          }
      }
      SkewMorphism quot = quotient_skew(sm, core_pi(sm), opt.caps);
      if (ok && quot.is_automorphism()) {
        for (Elem x = 0; x < g.order() && ok; ++x)
          for (Elem y = 0; y < g.order() && ok; ++y)
            if (lam[g.mul(x, y)] != (av[y] * lam[x] + lam[y]) % mp) {
              ok = false;
              w = "lambda law";
            }
      }
      if (ok && sm.is_automorphism()) {
        for (Elem x = 0; x < g.order() && ok; ++x)
          if (av[x] != 1 % mp || lam[x] != 0) {
            ok = false;
            w = "automorphism must have av=1, lambda=0";
          }
      }
      chk.count(ok, detail::skew_tag(sm) + " " + w);
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"sigma_pi_laws"};
    for (const SkewMorphism& sm : corpus.skews) {
      const FiniteGroup& g = *sm.group;
      bool ok = true;
      std::string w;
      for (int k = 0; k <= 4 * sm.m && ok; ++k)
        for (Elem x = 0; x < g.order() && ok; ++x) {
          if (detail::literal_sigma_pi(sm, x, k) !=
              sigma_pi(sm, x, static_cast<unsigned long long>(k))) {
            ok = false;
            w = "reduction disagrees with literal sum";
          }
          for (Elem y = 0; y < g.order() && ok; ++y)
            if (sigma_pi(sm, g.mul(x, y), static_cast<unsigned long long>(k)) !=
                sigma_pi(sm, y,
                         static_cast<unsigned long long>(
                             sigma_pi(sm, x, static_cast<unsigned long long>(k))))) {
              ok = false;
              w = "sigma composition law";
            }
        }
      // Vanishing and agreement of sigma exactly characterize k mod m.
      for (int k1 = 0; k1 <= 2 * sm.m && ok; ++k1) {
        bool zero = true;
        for (Elem x = 0; x < g.order(); ++x)
          zero = zero && sigma_pi(sm, x, static_cast<unsigned long long>(k1)) == 0;
        if (zero != (k1 % sm.m == 0)) {
          ok = false;
          w = "sigma vanishing at k=" + std::to_string(k1);
        }
        for (int k2 = 0; k2 <= 2 * sm.m && ok; ++k2) {
          bool agree = true;
          for (Elem x = 0; x < g.order(); ++x)
            agree = agree && sigma_pi(sm, x, static_cast<unsigned long long>(k1)) ==
                                 sigma_pi(sm, x, static_cast<unsigned long long>(k2));
          if (agree != ((k1 - k2) % sm.m == 0)) {
            ok = false;
            w = "sigma agreement";
          }
        }
      }
      chk.count(ok, detail::skew_tag(sm) + " " + w);
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"randomized_probes"};
    std::mt19937_64 rng(opt.seed);
    const auto& skews = corpus.skews;
    std::uniform_int_distribution<std::size_t> pick_sm(0, skews.size() - 1);
    std::uniform_int_distribution<unsigned long long> pick_k(0, 1'000'000'000ull);
    detail::parallel_cases(opt.probes, 1, chk, [&](long long b, long long e, SuiteCheck& c) {
      for (long long i = b; i < e; ++i) {
        const SkewMorphism& sm = skews[pick_sm(rng)];
        const FiniteGroup& g = *sm.group;
        std::uniform_int_distribution<Elem> pick_x(0, g.order() - 1);
        Elem x = pick_x(rng), y = pick_x(rng);
        unsigned long long k = pick_k(rng);
        bool ok = sigma_pi(sm, g.mul(x, y), k) ==
                  sigma_pi(sm, y, static_cast<unsigned long long>(sigma_pi(sm, x, k)));
        ok = ok && sigma_pi(sm, x, k) ==
                       sigma_pi(sm, x, k % static_cast<unsigned long long>(sm.m));
        ok = ok && sm.apply(g.mul(x, y), static_cast<long long>(k % 997)) ==
                       g.mul(sm.apply(x, static_cast<long long>(k % 997)),
                             sm.apply(y, sigma_pi(sm, x, k % 997)));
        c.count(ok, detail::skew_tag(sm) + " probe " + std::to_string(i));
      }
    });
    rep.checks.push_back(std::move(chk));
  }

  return rep;
}

// ---------------------------------------------------------------------------
// epf suite
// ---------------------------------------------------------------------------

inline SuiteReport run_suite_epf(const SuiteOptions& opt) {
  SuiteReport rep{"epf", {}};
  const Corpus& corpus = default_corpus();

  {
    SuiteCheck chk{"enumerate_at_m_gives_pi"};
    for (const SkewMorphism& sm : corpus.skews) {
      auto epfs = enumerate_epfs(sm, sm.m, opt.caps);
      chk.count(epfs.size() == 1 && epfs[0].values == sm.pi, detail::skew_tag(sm));
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"outputs_revalidate"};
    for (const CorpusInstance& inst : corpus.instances)
      for (const ExtendedPowerFunction& e : inst.epfs)
        chk.count(!detail::check_epf_values(e.skew, e.n, e.values).has_value(),
                  detail::epf_tag(e));
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"full_scan_agreement"};
    for (const CorpusInstance& inst : corpus.instances) {
      if (inst.sm.group->order() > 6) continue;
      double raw = std::pow(static_cast<double>(inst.n / inst.sm.m),
                            static_cast<double>(inst.sm.group->order() - 1));
      if (raw > 2e5) continue;  // the cross-check does not need the huge scans
      auto full = enumerate_epfs_full_scan(inst.sm, inst.n, opt.caps);
      bool same = full.size() == inst.epfs.size();
      for (std::size_t i = 0; same && i < full.size(); ++i)
        same = full[i].values == inst.epfs[i].values;
      chk.count(same, detail::skew_tag(inst.sm) + " n=" + std::to_string(inst.n));
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"sigma_Pi_laws"};
    for (const CorpusInstance& inst : corpus.instances)
      for (const ExtendedPowerFunction& e : inst.epfs) {
        const FiniteGroup& g = *e.skew.group;
        const int m = e.skew.m;
        bool ok = true;
        std::string w;
        for (int k = 0; k <= 2 * e.n + 1 && ok; ++k)
          for (Elem x = 0; x < g.order() && ok; ++x) {
            if (detail::literal_sigma_Pi(e, x, k) !=
                sigma_Pi(e, x, static_cast<unsigned long long>(k))) {
              ok = false;
              w = "reduction disagrees with literal sum";
            }
            // Block reduction: sigma(x, qm+r) = q sigma(x,m) + sigma(x,r).
            int q = k / m, r = k % m;
            int want = static_cast<int>(
                (static_cast<long long>(q) * sigma_Pi(e, x, static_cast<unsigned long long>(m)) +
                 sigma_Pi(e, x, static_cast<unsigned long long>(r))) %
                e.n);
            if (sigma_Pi(e, x, static_cast<unsigned long long>(k)) != want) {
              ok = false;
              w = "block reduction";
            }
            for (Elem y = 0; y < g.order() && ok; ++y)
              if (sigma_Pi(e, g.mul(x, y), static_cast<unsigned long long>(k)) !=
                  sigma_Pi(e, y,
                           static_cast<unsigned long long>(
                               sigma_Pi(e, x, static_cast<unsigned long long>(k))))) {
                ok = false;
                w = "sigma composition law";
              }
          }
        for (int k = 0; k <= 2 * e.n + 1 && ok; ++k) {
          bool zero = true;
          for (Elem x = 0; x < g.order(); ++x)
            zero = zero && sigma_Pi(e, x, static_cast<unsigned long long>(k)) == 0;
          if (zero != (k % e.n == 0)) {
            ok = false;
            w = "sigma vanishing at k=" + std::to_string(k);
          }
        }
        chk.count(ok, detail::epf_tag(e) + " " + w);
      }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"Av_Lambda_laws"};
    for (const CorpusInstance& inst : corpus.instances)
      for (const ExtendedPowerFunction& e : inst.epfs) {
        const FiniteGroup& g = *e.skew.group;
        const int nm = e.n / e.skew.m;
        std::vector<int> av = Av(e);
        std::vector<int> lam = Lambda(e);
        bool ok = true;
        std::string w;
        for (Elem x = 0; x < g.order() && ok; ++x) {
          if (av[e.skew.perm[x]] != av[x]) {
            ok = false;
            w = "Av not phi-invariant";
          }
          for (Elem y = 0; y < g.order() && ok; ++y)
            if (av[g.mul(x, y)] != av[x] * av[y] % nm) {
              ok = false;
              w = "Av not multiplicative";
            }
        }
        if (ok && e.skew.is_automorphism()) {
          bool av_trivial = true;
          for (Elem x = 0; x < g.order(); ++x) av_trivial = av_trivial && av[x] == 1 % nm;
          for (Elem x = 0; x < g.order() && ok; ++x)
            for (Elem y = 0; y < g.order() && ok; ++y) {
              if (lam[g.mul(x, y)] != (lam[y] + lam[x] * av[y]) % nm) {
                ok = false;
                w = "mate law";
              }
              if (av_trivial && lam[g.mul(x, y)] != (lam[x] + lam[y]) % nm) {
                ok = false;
                w = "mate law, additive case";
              }
            }
        }
        chk.count(ok, detail::epf_tag(e) + " " + w);
      }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"kernel_core_containment"};
    for (const CorpusInstance& inst : corpus.instances)
      for (const ExtendedPowerFunction& e : inst.epfs) {
        ElementSet kp = kernel_Pi(e), cp = core_Pi(e);
        ElementSet kpi = kernel_pi(e.skew), cpi = core_pi(e.skew);
        bool ok = std::includes(kpi.members.begin(), kpi.members.end(), kp.members.begin(),
                                kp.members.end()) &&
                  std::includes(cpi.members.begin(), cpi.members.end(), cp.members.begin(),
                                cp.members.end());
        for (Elem x : cp.members) ok = ok && kp.contains(x);
        chk.count(ok, detail::epf_tag(e));
        chk.count(!is_smooth_epf(e) || is_smooth(e.skew),
                  detail::epf_tag(e) + " smooth Pi must force smooth phi");
      }
    rep.checks.push_back(std::move(chk));
  }

  {
    // Classifier completeness: the Pi_{r,s,t} route and the exhaustive
    // search agree for every automorphism x -> rx of Z_k, k*n <= 256.
    SuiteCheck chk{"classifier_completeness"};
    Caps caps = opt.caps;
    caps.epf_budget = opt.budget;
    for (int k = 1; k <= 10; ++k) {
      GroupPtr g = cyclic_group(k, caps);
      for (int r = (k == 1 ? 0 : 1); r < std::max(k, 1); ++r) {
        if (k > 1 && std::gcd(r, k) != 1) continue;
        const int m = multiplicative_order(r, k);
        std::vector<Elem> perm(k);
        for (int x = 0; x < k; ++x)
          perm[x] = static_cast<Elem>((static_cast<long long>(r) * x) % k);
        SkewMorphism sm = validate_skew(g, perm);
        for (int n = m; static_cast<long long>(k) * n <= 256; n += m) {
          std::set<std::vector<int>> via_triples;
          for (const AutoTriple& tr : dedupe_triples(enumerate_triples(k, n, r), caps))
            via_triples.insert(epf_from_triple(tr, caps).values);
          std::set<std::vector<int>> via_search;
          for (const ExtendedPowerFunction& e : enumerate_epfs(sm, n, caps))
            via_search.insert(e.values);
          chk.count(via_triples == via_search,
                    "k=" + std::to_string(k) + " r=" + std::to_string(r) +
                        " n=" + std::to_string(n) + " triples=" +
                        std::to_string(via_triples.size()) + " search=" +
                        std::to_string(via_search.size()));
        }
        if (k == 1) break;
      }
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"randomized_probes"};
    std::mt19937_64 rng(opt.seed);
    std::vector<const ExtendedPowerFunction*> all;
    for (const CorpusInstance& inst : corpus.instances)
      for (const ExtendedPowerFunction& e : inst.epfs) all.push_back(&e);
    std::uniform_int_distribution<std::size_t> pick_e(0, all.size() - 1);
    std::uniform_int_distribution<unsigned long long> pick_k(0, 1'000'000'000ull);
    for (int i = 0; i < opt.probes; ++i) {
      const ExtendedPowerFunction& e = *all[pick_e(rng)];
      const FiniteGroup& g = *e.skew.group;
      std::uniform_int_distribution<Elem> pick_x(0, g.order() - 1);
      Elem x = pick_x(rng), y = pick_x(rng);
      unsigned long long k = pick_k(rng);
      bool ok = sigma_Pi(e, g.mul(x, y), k) ==
                sigma_Pi(e, y, static_cast<unsigned long long>(sigma_Pi(e, x, k)));
      ok = ok && sigma_Pi(e, x, k) == sigma_Pi(e, x, k % static_cast<unsigned long long>(e.n));
      chk.count(ok, detail::epf_tag(e) + " probe " + std::to_string(i));
    }
    rep.checks.push_back(std::move(chk));
  }

  return rep;
}

// ---------------------------------------------------------------------------
// extension suite
// ---------------------------------------------------------------------------

inline SuiteReport run_suite_extension(const SuiteOptions& opt) {
  SuiteReport rep{"extension", {}};
  const Corpus& corpus = default_corpus();
  std::vector<const ExtendedPowerFunction*> all;
  for (const CorpusInstance& inst : corpus.instances)
    for (const ExtendedPowerFunction& e : inst.epfs) all.push_back(&e);

  {
    SuiteCheck chk{"round_trip_exact"};
    detail::parallel_cases(
        static_cast<long long>(all.size()), opt.jobs, chk,
        [&](long long b, long long e_, SuiteCheck& c) {
          for (long long i = b; i < e_; ++i) {
            const ExtendedPowerFunction& e = *all[i];
            ExtSkewProduct ext = build_extension(e, opt.caps);
            bool ok = !ext.axioms_sampled();
            GroupPtr g = to_cayley(ext, opt.caps);
            std::vector<Elem> a_emb;
            for (Elem a = 0; a < e.skew.group->order(); ++a)
              a_emb.push_back(ext.encode(ext.embed(a)));
            ExtractionResult res =
                extract_pair(g, make_element_set(g, a_emb), ext.encode(ext.c()), opt.caps);
            ok = ok && res.skew == e.skew && res.skew.pi == e.skew.pi &&
                 res.skew.m == e.skew.m && res.epf.n == e.n && res.epf.values == e.values;
            c.count(ok, detail::epf_tag(e));
          }
        });
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"defining_properties"};
    for (const ExtendedPowerFunction* ep : all) {
      const ExtendedPowerFunction& e = *ep;
      ExtSkewProduct ext = build_extension(e, opt.caps);
      const FiniteGroup& a = *e.skew.group;
      bool ok = true;
      std::string w;
      // A embeds: (x,0)*(y,0) = (xy,0).
      for (Elem x = 0; x < a.order() && ok; ++x)
        for (Elem y = 0; y < a.order(); ++y)
          if (ext.multiply(ext.embed(x), ext.embed(y)) != ext.embed(a.mul(x, y))) {
            ok = false;
            w = "A does not embed";
            break;
          }
      // c has order exactly n; <c> meets A trivially; |G| = |A| n.
      if (ok && e.n > 1 && ext.element_order(ext.c()) != e.n) {
        ok = false;
        w = "|c| != n";
      }
      if (ok) {
        ExtElement ci = ext.identity();
        for (int i = 1; i < e.n; ++i) {
          ci = ext.multiply(ci, ext.c());
          if (ci.e == 0 && ci.a != 0) {
            ok = false;
            w = "<c> leaves the cyclic fiber";
          }
          if (ci == ext.identity() && i < e.n) {
            ok = false;
            w = "<c> collapses early";
          }
        }
      }
      // Commuting rule c*x = phi(x)*c^{Pi(x)}.
      for (Elem x = 0; x < a.order() && ok; ++x) {
        ExtElement lhs = ext.multiply(ext.c(), ext.embed(x));
        if (lhs != ExtElement{e.skew.perm[x], e.values[x] % e.n}) {
          ok = false;
          w = "commuting rule at x=" + std::to_string(x);
        }
      }
      // Two-sided inverses.
      for (int i = 0; i < ext.order() && ok; ++i) {
        ExtElement gi = ext.decode(i);
        ExtElement inv = ext.inverse(gi);
        if (ext.multiply(gi, inv) != ext.identity() ||
            ext.multiply(inv, gi) != ext.identity()) {
          ok = false;
          w = "inverse at " + std::to_string(i);
        }
      }
      chk.count(ok, detail::epf_tag(e) + " " + w);
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"structure_and_section6"};
    detail::parallel_cases(
        static_cast<long long>(all.size()), opt.jobs, chk,
        [&](long long b, long long e_, SuiteCheck& c) {
          for (long long i = b; i < e_; ++i) {
            const ExtendedPowerFunction& e = *all[i];
            StructureReport sr = verify_structure(build_extension(e, opt.caps), opt.caps);
            std::string w;
            for (const StructureCheck& s : sr.checks)
              if (!s.pass) w += s.name + "(" + s.witness + ") ";
            c.count(sr.all_pass(), detail::epf_tag(e) + " " + w);
          }
        });
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"skew_product_core_free"};
    for (const SkewMorphism& sm : corpus.skews) {
      if (sm.group->order() * sm.m > opt.caps.order_cap) continue;
      ExtSkewProduct sp = skew_product(sm, opt.caps);
      GroupPtr g = to_cayley(sp, opt.caps);
      std::vector<Elem> a_emb;
      for (Elem a = 0; a < sm.group->order(); ++a) a_emb.push_back(sp.encode(sp.embed(a)));
      ExtractionResult res =
          extract_pair(g, make_element_set(g, a_emb), sp.encode(sp.c()), opt.caps);
      bool ok = res.core_index == sm.m && res.skew == sm && res.epf.values == sm.pi;
      if (sm.group->order() > 1) ok = ok && sm.m < sm.group->order();
      chk.count(ok, detail::skew_tag(sm));
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"equivalence_relation_and_isomorphism"};
    // Group corpus pairs by (group, n); the relation must be reflexive and
    // symmetric, and any witness theta must induce a table isomorphism.
    for (const CorpusInstance& inst : corpus.instances) {
      if (inst.epfs.empty()) continue;
      auto auts = automorphisms(inst.sm.group, opt.caps);
      for (std::size_t i = 0; i < inst.epfs.size(); ++i) {
        auto self = equivalent_pairs_over(auts, inst.epfs[i], inst.epfs[i]);
        bool refl = self.has_value();
        if (refl) {
          bool ident = true;
          for (Elem x = 0; x < inst.sm.group->order(); ++x)
            ident = ident && (*self)(x) == x;
          refl = ident;
        }
        chk.count(refl, detail::epf_tag(inst.epfs[i]) + " reflexivity");
        for (std::size_t j = i + 1; j < inst.epfs.size(); ++j) {
          auto th = equivalent_pairs_over(auts, inst.epfs[i], inst.epfs[j]);
          auto back = equivalent_pairs_over(auts, inst.epfs[j], inst.epfs[i]);
          chk.count(th.has_value() == back.has_value(),
                    detail::epf_tag(inst.epfs[i]) + " symmetry");
          if (th) {
            // Theta(x c1^k) = theta(x) c2^k must be an isomorphism.
            ExtSkewProduct e1 = build_extension(inst.epfs[i], opt.caps);
            ExtSkewProduct e2 = build_extension(inst.epfs[j], opt.caps);
            const GroupMorphism& theta = *th;
            bool iso = true;
            for (int p = 0; p < e1.order() && iso; ++p)
              for (int q = 0; q < e1.order(); ++q) {
                auto map = [&](int enc) {
                  ExtElement g = e1.decode(enc);
                  return e2.encode({theta(g.a), g.e});
                };
                if (map(e1.table_at(p, q)) != e2.table_at(map(p), map(q))) {
                  iso = false;
                  break;
                }
              }
            chk.count(iso, detail::epf_tag(inst.epfs[i]) + " theta isomorphism");
          }
        }
      }
    }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"table1_classes"};
    GroupPtr z8 = cyclic_group(8);
    SkewMorphism sm = validate_skew(z8, {0, 3, 6, 1, 4, 7, 2, 5});
    std::vector<ExtendedPowerFunction> epfs = enumerate_epfs(sm, 8, opt.caps);
    chk.count(epfs.size() == 6, "six extended power functions");
    EquivalenceClasses cls = classify_equivalence(epfs, opt.caps);
    chk.count(cls.classes.size() == 5, "five equivalence classes");
    // Partition by (s,t) = (Lambda(1), Av(1)).
    std::set<std::set<std::pair<int, int>>> got;
    for (const auto& c : cls.classes) {
      std::set<std::pair<int, int>> one;
      for (std::size_t idx : c) one.insert({Lambda(epfs[idx])[1], Av(epfs[idx])[1]});
      got.insert(std::move(one));
    }
    std::set<std::set<std::pair<int, int>>> want = {
        {{0, 1}}, {{1, 1}, {3, 1}}, {{2, 1}}, {{1, 3}}, {{3, 3}}};
    chk.count(got == want, "class contents");
    rep.checks.push_back(std::move(chk));
  }

  return rep;
}

// ---------------------------------------------------------------------------
// cyclic classifier suite
// ---------------------------------------------------------------------------

inline SuiteReport run_suite_cyclic(const SuiteOptions& opt) {
  SuiteReport rep{"cyclic", {}};

  {
    SuiteCheck chk{"tau_laws"};
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::uint64_t> pick_mod(1, 1u << 20);
    std::uniform_int_distribution<std::uint64_t> pick_xy(0, 1u << 16);
    for (int i = 0; i < opt.probes; ++i) {
      std::uint64_t M = pick_mod(rng);
      std::uint64_t t = pick_xy(rng) % M;
      std::uint64_t x = pick_xy(rng), y = pick_xy(rng);
      bool ok = tau(t, x + y, M) ==
                (tau(t, x, M) + modarith::mulmod(modarith::powmod(t, x, M), tau(t, y, M), M)) % M;
      ok = ok && tau(t, x * y, M) ==
                     modarith::mulmod(tau(t, x, M), tau(modarith::powmod(t, x, M), y, M), M);
      chk.count(ok, "t=" + std::to_string(t) + " x=" + std::to_string(x) +
                        " y=" + std::to_string(y) + " M=" + std::to_string(M));
    }
    chk.count(tau(7, 0, 13) == 0, "empty sum");
    chk.count(tau(1, 9, 5) == 9 % 5, "t=1 degenerates to x");
    chk.count(tau(3, 3, 8) == 5, "tau(3,3) mod 8");
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"reference_table"};
    std::vector<AutoTriple> triples = enumerate_triples(8, 8, 3);
    chk.count(triples.size() == 6, "six triples for (8,8,3)");
    chk.count(dedupe_triples(triples, opt.caps).size() == 6, "no merges for (8,8,3)");
    std::vector<ReferenceDiff> diffs = diff_against_reference(triples, opt.caps);
    bool one_known = diffs.size() == 1 && diffs[0].s == 1 && diffs[0].t == 1 &&
                     diffs[0].field == "relation[0]" && diffs[0].computed == "ca=a^3c^3" &&
                     diffs[0].printed == "ca=a^3c^5";
    chk.count(one_known, "exactly the one misprinted relation");
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"st_are_lambda_av_of_1"};
    for (int k = 2; k <= 10; ++k)
      for (int r = 1; r < k; ++r) {
        if (std::gcd(r, k) != 1) continue;
        const int m = multiplicative_order(r, k);
        for (int n = m; static_cast<long long>(k) * n <= 256; n += m)
          for (const AutoTriple& tr : enumerate_triples(k, n, r)) {
            ExtendedPowerFunction e = epf_from_triple(tr, opt.caps);
            const int nm = tr.n / tr.m;
            chk.count(Av(e)[1] == tr.t % std::max(nm, 1) && Lambda(e)[1] == tr.s,
                      "k=" + std::to_string(k) + " r=" + std::to_string(r) + " n=" +
                          std::to_string(n) + " (s,t)=(" + std::to_string(tr.s) + "," +
                          std::to_string(tr.t) + ")");
          }
      }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"presentations_hold_and_regenerate"};
    for (int k = 1; k <= 8; ++k)
      for (int r = (k == 1 ? 0 : 1); r < std::max(k, 1); ++r) {
        if (k > 1 && std::gcd(r, k) != 1) continue;
        const int m = multiplicative_order(r, k);
        for (int n = m; static_cast<long long>(k) * n <= 128; n += m)
          for (const AutoTriple& tr : dedupe_triples(enumerate_triples(k, n, r), opt.caps)) {
            PresentationRecord rec = presentation(tr, opt.caps);
            chk.count(rec.relations == presentation_text(tr),
                      "bit-exact regeneration k=" + std::to_string(k));
          }
        if (k == 1) break;
      }
    rep.checks.push_back(std::move(chk));
  }

  {
    SuiteCheck chk{"classify_smoke"};
    ClassifyResult c88 = classify(8, 8, true, opt.caps);
    bool found_r3 = false;
    for (const ClassifyBlock& b : c88.blocks)
      if (b.r == 3) {
        found_r3 = true;
        chk.count(b.records.size() == 6, "classify(8,8) r=3 has six records");
        std::set<int> ids;
        for (const ClassifyRecord& rec : b.records) ids.insert(rec.class_id);
        chk.count(ids.size() == 5, "classify(8,8) r=3 has five classes");
      }
    chk.count(found_r3, "classify(8,8) contains the r=3 block");
    ClassifyResult c15 = classify(1, 5, true, opt.caps);
    chk.count(c15.blocks.size() == 1 && c15.blocks[0].records.size() == 1,
              "classify(1,5) is the single cyclic group");
    ClassifyResult c24 = classify(2, 4, true, opt.caps);
    chk.count(c24.blocks.size() == 1 && c24.blocks[0].records.size() == 2,
              "classify(2,4) yields two records");
    rep.checks.push_back(std::move(chk));
  }

  return rep;
}

inline std::vector<SuiteReport> run_suites(const std::string& which, const SuiteOptions& opt) {
  std::vector<SuiteReport> reports;
  if (which == "all" || which == "skew") reports.push_back(run_suite_skew(opt));
  if (which == "all" || which == "epf") reports.push_back(run_suite_epf(opt));
  if (which == "all" || which == "extension") reports.push_back(run_suite_extension(opt));
  if (which == "all" || which == "cyclic") reports.push_back(run_suite_cyclic(opt));
  if (reports.empty()) fail(Errc::bad_input, "unknown suite \"" + which + "\"");
  return reports;
}

}  // namespace ccext
