#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccext/cyclic_auto.hpp"
#include "ccext/extension.hpp"

namespace ccext {

using nlohmann::json;

// nlohmann::json objects keep keys sorted, so dump() with no indentation is
// already the canonical form: sorted keys, no whitespace.
inline std::string canonical_dump(const json& j) { return j.dump(); }

// FNV-1a, 64-bit. Used as a stable content digest for catalog records.
inline std::string fnv1a64_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// --- group ---------------------------------------------------------------

inline json group_to_json(const FiniteGroup& g) {
  return json{{"label", g.label()}, {"order", g.order()}, {"mul", g.rows()}};
}

// The inverse table and validation flags are never serialized; loading
// recomputes and revalidates everything.
inline GroupPtr group_from_json(const json& j, const Caps& caps = Caps{}) {
  if (!j.is_object() || !j.contains("mul"))
    fail(Errc::bad_input, "group record needs a \"mul\" table");
  std::vector<std::vector<Elem>> rows = j.at("mul").get<std::vector<std::vector<Elem>>>();
  std::string label = j.value("label", std::string{});
  GroupPtr g = from_cayley_table(rows, label, caps);
  if (j.contains("order") && j.at("order").get<int>() != g->order())
    fail(Errc::bad_input, "declared order disagrees with the table");
  return g;
}

// --- skew-morphism -------------------------------------------------------

inline json skew_to_json(const SkewMorphism& sm) {
  return json{{"group", sm.group->label()}, {"perm", sm.perm}, {"pi", sm.pi}, {"m", sm.m}};
}

inline SkewMorphism skew_from_json(const json& j, const GroupPtr& group) {
  SkewMorphism sm = validate_skew(group, j.at("perm").get<std::vector<Elem>>());
  if (j.contains("m") && j.at("m").get<int>() != sm.m)
    fail(Errc::bad_input, "declared order disagrees with the permutation");
  if (j.contains("pi") && j.at("pi").get<std::vector<int>>() != sm.pi)
    fail(Errc::bad_input, "declared power function disagrees with the permutation");
  return sm;
}

// --- extended power function ---------------------------------------------

inline json epf_to_json(const ExtendedPowerFunction& e) {
  return json{{"skew", skew_to_json(e.skew)}, {"n", e.n}, {"values", e.values}};
}

inline ExtendedPowerFunction epf_from_json(const json& j, const GroupPtr& group) {
  SkewMorphism sm = skew_from_json(j.at("skew"), group);
  return validate_epf(sm, j.at("n").get<int>(), j.at("values").get<std::vector<int>>());
}

// --- extension and reports -----------------------------------------------

inline json extension_to_json(const ExtSkewProduct& ext) {
  return json{{"epf", epf_to_json(ext.epf())}, {"order", ext.order()}};
}

inline json report_to_json(const StructureReport& report) {
  json checks = json::array();
  for (const StructureCheck& c : report.checks)
    checks.push_back(json{{"check", c.name}, {"pass", c.pass}, {"witness", c.witness}});
  return json{{"checks", checks}, {"all_pass", report.all_pass()}};
}

// --- classifier records ----------------------------------------------------

inline json triple_to_json(const ClassifyRecord& rec) {
  json j{{"k", rec.triple.k},
         {"n", rec.triple.n},
         {"r", rec.triple.r},
         {"m", rec.triple.m},
         {"s", rec.triple.s},
         {"t", rec.triple.t},
         {"Pi", rec.pi_values},
         {"presentation", rec.presentation}};
  if (rec.class_id >= 0) j["class"] = rec.class_id;
  return j;
}

// --- catalog ---------------------------------------------------------------

// One line of a JSONL catalog: a kind tag, the module's own record, and a
// content digest of the canonical payload.
struct CatalogRecord {
  std::string kind;
  json payload;
  std::string digest;
};

inline CatalogRecord make_record(std::string kind, json payload) {
  std::string digest = fnv1a64_hex(canonical_dump(payload));
  return CatalogRecord{std::move(kind), std::move(payload), std::move(digest)};
}

inline json record_to_json(const CatalogRecord& rec) {
  return json{{"kind", rec.kind}, {"payload", rec.payload}, {"digest", rec.digest}};
}

// Appends records to a JSONL catalog, skipping digests already present, so
// reruns are idempotent. Returns the number of lines written.
inline std::size_t catalog_append(const std::string& path,
                                  const std::vector<CatalogRecord>& records) {
  std::set<std::string> seen;
  {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      if (!j.is_discarded() && j.contains("digest")) seen.insert(j.at("digest").get<std::string>());
    }
  }
  std::ofstream out(path, std::ios::app);
  if (!out) fail(Errc::bad_input, "cannot open catalog file " + path);
  std::size_t written = 0;
  for (const CatalogRecord& rec : records) {
    if (seen.count(rec.digest)) continue;
    out << record_to_json(rec).dump() << "\n";
    seen.insert(rec.digest);
    ++written;
  }
  return written;
}

// --- group specs -----------------------------------------------------------

// Grammar: cyclic:<k> | dihedral:<k> | file:<path>.
inline GroupPtr parse_group_spec(const std::string& spec, const Caps& caps = Caps{}) {
  auto parse_int = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      fail(Errc::bad_input, "bad group parameter in spec \"" + spec + "\"");
    return std::stoi(s);
  };
  if (spec.rfind("cyclic:", 0) == 0) return cyclic_group(parse_int(spec.substr(7)), caps);
  if (spec.rfind("dihedral:", 0) == 0) return dihedral_group(parse_int(spec.substr(9)), caps);
  if (spec.rfind("file:", 0) == 0) {
    std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) fail(Errc::bad_input, "cannot open group file " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) fail(Errc::bad_input, "group file is not valid JSON: " + path);
    return group_from_json(j, caps);
  }
  fail(Errc::bad_input, "unrecognized group spec \"" + spec + "\" (want cyclic:<k>, dihedral:<k> or file:<path>)");
}

}  // namespace ccext
