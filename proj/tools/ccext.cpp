// ccext: construct, validate, enumerate and classify cyclic complementary
// extensions of finite groups from skew-morphisms and extended power
// functions.
//
// Exit codes: 0 success, 1 invariant/validation failure, 2 usage or parse
// error, 3 cap or budget exceeded.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccext/serialize.hpp"
#include "ccext/suites.hpp"

namespace {

using namespace ccext;

struct CliOptions {
  Caps caps;
  std::string catalog;
};

void emit_records(const std::vector<CatalogRecord>& records, const CliOptions& cli,
                  std::ostream& out) {
  for (const CatalogRecord& rec : records) out << record_to_json(rec).dump() << "\n";
  if (!cli.catalog.empty()) catalog_append(cli.catalog, records);
}

// Selects one entry of an enumerated list by decimal index or by digest
// (full or unique prefix).
template <typename T, typename ToJson>
std::size_t select_one(const std::vector<T>& items, const std::string& selector,
                       ToJson&& to_json_fn) {
  // An empty selector falls through to digest matching, where it prefixes
  // everything and is reported as ambiguous unless there is a single record.
  if (!selector.empty() && selector.find_first_not_of("0123456789") == std::string::npos) {
    std::size_t idx = std::stoul(selector);
    if (idx >= items.size())
      fail(Errc::bad_input, "index " + selector + " out of range (have " +
                                std::to_string(items.size()) + ")");
    return idx;
  }
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string digest = fnv1a64_hex(canonical_dump(to_json_fn(items[i])));
    if (digest.rfind(selector, 0) == 0) hits.push_back(i);
  }
  if (hits.empty()) fail(Errc::bad_input, "selector \"" + selector + "\" matches nothing");
  if (hits.size() > 1)
    fail(Errc::ambiguous_selector, "selector \"" + selector + "\" matches " +
                                       std::to_string(hits.size()) + " records");
  return hits[0];
}

int cmd_skew_enumerate(const CliOptions& cli, const std::string& group_spec, bool count_only) {
  GroupPtr g = parse_group_spec(group_spec, cli.caps);
  std::vector<SkewMorphism> skews = enumerate_skew(g, cli.caps);
  if (count_only) {
    std::cout << skews.size() << "\n";
    return 0;
  }
  std::vector<CatalogRecord> records;
  for (const SkewMorphism& sm : skews) records.push_back(make_record("skew", skew_to_json(sm)));
  emit_records(records, cli, std::cout);
  return 0;
}

int cmd_epf_enumerate(const CliOptions& cli, const std::string& group_spec,
                      const std::string& skew_sel, int n, bool count_only) {
  GroupPtr g = parse_group_spec(group_spec, cli.caps);
  std::vector<SkewMorphism> skews = enumerate_skew(g, cli.caps);
  std::size_t idx = select_one(skews, skew_sel, [](const SkewMorphism& s) { return skew_to_json(s); });
  std::vector<ExtendedPowerFunction> epfs = enumerate_epfs(skews[idx], n, cli.caps);
  if (count_only) {
    std::cout << epfs.size() << "\n";
    return 0;
  }
  std::vector<CatalogRecord> records;
  for (const ExtendedPowerFunction& e : epfs) records.push_back(make_record("epf", epf_to_json(e)));
  emit_records(records, cli, std::cout);
  return 0;
}

ExtendedPowerFunction resolve_epf(const CliOptions& cli, const std::string& epf_file,
                                  const std::string& group_spec, const std::string& skew_sel,
                                  int n, const std::string& epf_sel) {
  if (!epf_file.empty()) {
    std::ifstream in(epf_file);
    if (!in) fail(Errc::bad_input, "cannot open " + epf_file);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(Errc::bad_input, "not valid JSON: " + epf_file);
    if (j.contains("payload")) j = j.at("payload");  // accept catalog lines too
    std::string label = group_spec.empty()
                            ? j.at("skew").at("group").get<std::string>()
                            : group_spec;
    GroupPtr g = parse_group_spec(label, cli.caps);
    return epf_from_json(j, g);
  }
  if (group_spec.empty() || skew_sel.empty() || n <= 0)
    fail(Errc::bad_input, "need --epf-file, or --group, --skew and --n");
  GroupPtr g = parse_group_spec(group_spec, cli.caps);
  std::vector<SkewMorphism> skews = enumerate_skew(g, cli.caps);
  std::size_t si = select_one(skews, skew_sel, [](const SkewMorphism& s) { return skew_to_json(s); });
  std::vector<ExtendedPowerFunction> epfs = enumerate_epfs(skews[si], n, cli.caps);
  std::size_t ei = select_one(epfs, epf_sel, [](const ExtendedPowerFunction& e) { return epf_to_json(e); });
  return epfs[ei];
}

int cmd_build(const CliOptions& cli, const ExtendedPowerFunction& epf, const std::string& emit,
              const std::string& out_path) {
  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file_out.open(out_path);
    if (!file_out) fail(Errc::bad_input, "cannot open " + out_path);
    out = &file_out;
  }
  ExtSkewProduct ext = build_extension(epf, cli.caps);
  if (emit == "cayley") {
    GroupPtr g = to_cayley(ext, cli.caps);
    *out << group_to_json(*g).dump() << "\n";
    if (!cli.catalog.empty())
      catalog_append(cli.catalog, {make_record("extension", extension_to_json(ext))});
    return 0;
  }
  if (emit == "presentation") {
    // Only extensions of cyclic groups by automorphisms have the two-relator
    // presentation; recover (r,s,t) from the pair.
    const SkewMorphism& sm = epf.skew;
    if (sm.group->label().rfind("cyclic:", 0) != 0 || !sm.is_automorphism())
      fail(Errc::bad_input, "presentation output needs a cyclic group and an automorphism");
    AutoTriple tr;
    tr.k = sm.group->order();
    tr.n = epf.n;
    tr.r = sm.perm[1 % tr.k];
    tr.m = sm.m;
    tr.s = Lambda(epf)[1 % tr.k];
    tr.t = Av(epf)[1 % tr.k];
    if (epf_from_triple(tr, cli.caps).values != epf.values)
      fail(Errc::internal, "recovered triple does not regenerate Pi");
    *out << presentation(tr, cli.caps).relations << "\n";
    return 0;
  }
  if (emit == "report") {
    StructureReport report = verify_structure(ext, cli.caps);
    *out << report_to_json(report).dump() << "\n";
    return report.all_pass() ? 0 : 1;
  }
  fail(Errc::bad_input, "unknown --emit kind \"" + emit + "\"");
}

void render_table(const ClassifyResult& result, const Caps& caps, std::ostream& out) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"(r,s,t)", "Pi(x) (mod " + std::to_string(result.n) + ")", "phi",
                   "A<c>", "class"});
  for (const ClassifyBlock& block : result.blocks)
    for (const ClassifyRecord& rec : block.records) {
      std::string triple = "(" + std::to_string(rec.triple.r) + "," +
                           std::to_string(rec.triple.s) + "," + std::to_string(rec.triple.t) +
                           ")";
      std::string phi = "a->a^" + std::to_string(rec.triple.r);
      cells.push_back({triple, pi_formula_text(rec.triple), phi, rec.presentation,
                       rec.class_id >= 0 ? std::to_string(rec.class_id) : "-"});
    }
  // Align on code points, not bytes; the math glyphs are single-width.
  auto glyphs = [](const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s)
      if ((c & 0xc0) != 0x80) ++n;
    return n;
  };
  std::vector<std::size_t> width(cells[0].size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], glyphs(row[i]));
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i];
      if (i + 1 < row.size()) out << std::string(width[i] - glyphs(row[i]) + 2, ' ');
    }
    out << "\n";
  }
  for (const ClassifyBlock& block : result.blocks) {
    std::vector<AutoTriple> triples;
    for (const ClassifyRecord& rec : block.records) triples.push_back(rec.triple);
    for (const ReferenceDiff& d : diff_against_reference(triples, caps))
      out << "note: row (" << block.r << "," << d.s << "," << d.t << ") " << d.field
          << ": computed " << d.computed << " but the published table prints " << d.printed
          << " (inconsistent with that row's Pi formula; suspected misprint)\n";
  }
}

int cmd_classify(const CliOptions& cli, int k, int n, std::optional<int> r, bool dedupe,
                 bool classes, bool table) {
  std::vector<CatalogRecord> records;
  ClassifyResult result;
  result.k = k;
  result.n = n;
  if (classes) {
    result = classify(k, n, true, cli.caps);
    if (r) {
      // Keep only the requested block; class ids stay as computed.
      std::vector<ClassifyBlock> keep;
      for (ClassifyBlock& b : result.blocks)
        if (b.r == *r) keep.push_back(std::move(b));
      result.blocks = std::move(keep);
    }
  } else {
    // Raw (or deduped) triples, without the equivalence step.
    for (int rr = 0; rr < k; ++rr) {
      if (k > 1 && rr == 0) continue;
      if (r && rr != *r) continue;
      if (std::gcd(rr, k) != 1) continue;
      const int m = multiplicative_order(rr, k);
      if (n % m != 0) continue;
      std::vector<AutoTriple> triples = enumerate_triples(k, n, rr);
      if (dedupe) triples = dedupe_triples(triples, cli.caps);
      ClassifyBlock block;
      block.r = rr;
      block.m = m;
      for (const AutoTriple& tr : triples) {
        ClassifyRecord rec;
        rec.triple = tr;
        rec.pi_values = epf_from_triple(tr, cli.caps).values;
        rec.presentation = presentation(tr, cli.caps).relations;
        block.records.push_back(std::move(rec));
      }
      result.blocks.push_back(std::move(block));
    }
    if (r && result.blocks.empty())
      fail(Errc::bad_input, "r=" + std::to_string(*r) + " is not usable for k=" +
                                std::to_string(k) + ", n=" + std::to_string(n));
  }
  if (table) {
    render_table(result, cli.caps, std::cout);
    return 0;
  }
  for (const ClassifyBlock& block : result.blocks)
    for (const ClassifyRecord& rec : block.records)
      records.push_back(make_record("triple", triple_to_json(rec)));
  emit_records(records, cli, std::cout);
  return 0;
}

int cmd_extract(const CliOptions& cli, const std::string& group_spec,
                const std::string& subgroup_csv, Elem c) {
  GroupPtr g = parse_group_spec(group_spec, cli.caps);
  std::vector<Elem> members;
  std::stringstream ss(subgroup_csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item.find_first_not_of("0123456789") != std::string::npos)
      fail(Errc::bad_input, "bad subgroup element \"" + item + "\"");
    members.push_back(std::stoi(item));
  }
  ExtractionResult res = extract_pair(g, make_element_set(g, members), c, cli.caps);
  json out{{"skew", skew_to_json(res.skew)},
           {"epf", epf_to_json(res.epf)},
           {"core_index", res.core_index}};
  std::cout << out.dump() << "\n";
  if (!cli.catalog.empty())
    catalog_append(cli.catalog, {make_record("skew", skew_to_json(res.skew)),
                                 make_record("epf", epf_to_json(res.epf))});
  return 0;
}

int cmd_verify(const CliOptions& cli, const std::string& suite, long long budget,
               unsigned long long seed, int jobs) {
  SuiteOptions opt;
  opt.seed = seed;
  opt.budget = budget;
  opt.jobs = jobs;
  opt.caps = cli.caps;
  std::vector<SuiteReport> reports = run_suites(suite, opt);
  bool all_pass = true;
  for (const SuiteReport& rep : reports) {
    for (const SuiteCheck& chk : rep.checks) {
      bool ok = chk.failed == 0;
      all_pass = all_pass && ok;
      std::cout << (ok ? "PASS" : "FAIL") << " " << rep.suite << "." << chk.name << " ("
                << chk.cases << " cases)";
      if (!ok) {
        std::cout << " " << chk.failed << " failed";
        if (!chk.witnesses.empty()) std::cout << "; first witness: " << chk.witnesses[0];
      }
      std::cout << "\n";
    }
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclic complementary extensions from skew-morphisms"};
  app.require_subcommand(1);

  CliOptions cli;
  if (const char* env = std::getenv("CCEXT_CAP_ORDER")) {
    try {
      cli.caps.order_cap = std::stoi(env);
    } catch (...) {
      std::cerr << "bad CCEXT_CAP_ORDER value\n";
      return 2;
    }
  }
  app.add_option("--catalog", cli.catalog, "JSONL catalog file to append records to");

  // skew enumerate
  auto* skew = app.add_subcommand("skew", "skew-morphism operations");
  skew->require_subcommand(1);
  auto* skew_enum = skew->add_subcommand("enumerate", "enumerate all skew-morphisms");
  std::string se_group;
  bool se_count = false;
  skew_enum->add_option("--group", se_group, "cyclic:<k> | dihedral:<k> | file:<path>")
      ->required();
  skew_enum->add_flag("--count", se_count, "print only the total");

  // epf enumerate
  auto* epf = app.add_subcommand("epf", "extended power function operations");
  epf->require_subcommand(1);
  auto* epf_enum = epf->add_subcommand("enumerate", "enumerate extended power functions");
  std::string ee_group, ee_skew;
  int ee_n = 0;
  bool ee_count = false;
  epf_enum->add_option("--group", ee_group, "group spec")->required();
  epf_enum->add_option("--skew", ee_skew, "skew-morphism selector (index or digest)")->required();
  epf_enum->add_option("--n", ee_n, "cyclic factor order (multiple of m)")->required();
  epf_enum->add_flag("--count", ee_count, "print only the total");

  // build
  auto* build = app.add_subcommand("build", "build an extension and emit artifacts");
  std::string b_group, b_skew, b_epf, b_file, b_emit = "cayley", b_out;
  int b_n = 0;
  build->add_option("--group", b_group, "group spec");
  build->add_option("--skew", b_skew, "skew-morphism selector");
  build->add_option("--n", b_n, "cyclic factor order");
  build->add_option("--epf", b_epf, "extended power function selector");
  build->add_option("--epf-file", b_file, "JSON file with an epf record");
  build->add_option("--emit", b_emit, "cayley | presentation | report");
  build->add_option("--out", b_out, "output file (default stdout)");

  // classify
  auto* cls = app.add_subcommand("classify", "classify cyclic-by-cyclic extensions");
  int c_k = 0, c_n = 0, c_r = -1;
  bool c_all_r = false, c_dedupe = false, c_classes = false, c_table = false;
  cls->add_option("--k", c_k, "order of the cyclic base group")->required();
  cls->add_option("--n", c_n, "order of the cyclic complement")->required();
  auto* r_opt = cls->add_option("--r", c_r, "restrict to one automorphism x -> rx");
  cls->add_flag("--all-r", c_all_r, "all eligible r (default when --r is absent)")
      ->excludes(r_opt);
  cls->add_flag("--dedupe", c_dedupe, "merge triples with identical Pi");
  cls->add_flag("--classes", c_classes, "attach equivalence class ids (implies --dedupe)");
  cls->add_flag("--table", c_table, "human-readable aligned table");

  // extract
  auto* extract = app.add_subcommand("extract", "extract (phi, Pi) from a factorized group");
  std::string x_group, x_subgroup;
  int x_c = 0;
  extract->add_option("--group", x_group, "group spec")->required();
  extract->add_option("--subgroup", x_subgroup, "comma-separated element indices of A")
      ->required();
  extract->add_option("--c", x_c, "element index generating the cyclic complement")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  std::string v_suite = "all";
  long long v_budget = 10'000'000;
  unsigned long long v_seed = 0x5eed0001ull;
  int v_jobs = 1;
  verify->add_option("--suite", v_suite, "all | skew | epf | extension | cyclic");
  verify->add_option("--budget", v_budget, "search budget for enumeration checks");
  verify->add_option("--seed", v_seed, "seed for randomized probes");
  verify->add_option("--jobs", v_jobs, "parallel workers for partitionable checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (skew_enum->parsed()) return cmd_skew_enumerate(cli, se_group, se_count);
    if (epf_enum->parsed()) return cmd_epf_enumerate(cli, ee_group, ee_skew, ee_n, ee_count);
    if (build->parsed())
      return cmd_build(cli, resolve_epf(cli, b_file, b_group, b_skew, b_n, b_epf), b_emit, b_out);
    if (cls->parsed())
      return cmd_classify(cli, c_k, c_n, c_r >= 0 ? std::optional<int>(c_r) : std::nullopt,
                          c_dedupe, c_classes, c_table);
    if (extract->parsed()) return cmd_extract(cli, x_group, x_subgroup, x_c);
    if (verify->parsed()) return cmd_verify(cli, v_suite, v_budget, v_seed, v_jobs);
  } catch (const ccext::Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case ccext::Errc::cap_exceeded:
      case ccext::Errc::budget_exceeded:
        return 3;
      case ccext::Errc::bad_input:
      case ccext::Errc::ambiguous_selector:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
