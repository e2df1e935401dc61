#ifndef POLITE_JSON_IO_HPP
#define POLITE_JSON_IO_HPP

// JSON views of models, arrangements and reports (nlohmann::json).

#include <json.hpp>

#include "combination.hpp"
#include "lab.hpp"

namespace polite {

using json = nlohmann::ordered_json;

inline json to_json(const Interpretation& m) {
  json j;
  j["sorts"] = json::object();
  for (int k = 0; k < m.structure.sig.num_sorts; ++k) j["sorts"][sort_name(static_cast<SortId>(k))] = m.structure.sizes[k];
  j["functions"] = json::object();
  if (m.structure.sig.has_s) j["functions"]["s"] = m.structure.s;
  j["assignment"] = json::object();
  for (auto& [x, v] : m.assignment) j["assignment"][x.name] = v;
  return j;
}

// Variable sorts come from `vars`; names not listed there are taken as sort S.
inline Interpretation interpretation_from_json(const json& j, const VarSet& vars = {}) {
  Interpretation m;
  auto& st = m.structure;
  st.sig.num_sorts = static_cast<int>(j.at("sorts").size());
  st.sig.has_s = j.at("functions").contains("s");
  for (int k = 0; k < st.sig.num_sorts; ++k) st.sizes.push_back(j.at("sorts").at(sort_name(static_cast<SortId>(k))).get<int>());
  if (st.sig.has_s) st.s = j["functions"]["s"].get<std::vector<int>>();
  validate(st);
  for (auto& [name, v] : j.at("assignment").items()) {
    SortId k = 0;
    for (auto& x : vars)
      if (x.name == name) k = x.sort;
    m.assignment[Var{name, k}] = v.get<int>();
  }
  return m;
}

inline json to_json(const Arrangement& a) {
  json j = json::array();
  for (auto& [s, blocks] : a.blocks)
    for (auto& b : blocks) {
      json block = json::array();
      for (auto& x : b) block.push_back(x.name);
      j.push_back(block);
    }
  return j;
}

inline json to_json(const SatResult& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  if (r.model) j["model"] = to_json(*r.model);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline json profile_json(const Profile& p) {
  json j = json::array();
  for (int n : p) j.push_back(n == kInf ? json("inf") : json(n));
  return j;
}

inline json to_json(const CombinationResult& r) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["psi"] = to_string(r.psi);
  json shared = json::object();
  for (auto& [s, xs] : r.shared) {
    json names = json::array();
    for (auto& x : xs) names.push_back(x.name);
    shared[sort_name(s)] = names;
  }
  j["shared"] = shared;
  j["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
  if (r.verdict == Verdict::Sat) {
    j["side1"] = to_json(r.side1);
    j["side2"] = to_json(r.side2);
  }
  j["stats"] = {{"tried", r.stats.tried},
                {"pruned_subtrees", r.stats.pruned_subtrees},
                {"pruned_leaves", r.stats.pruned_leaves},
                {"examined", r.stats.examined()}};
  j["unsound"] = r.unsound;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

namespace lab {

inline json to_json(const Evidence& e) {
  json j;
  j["kind"] = e.kind;
  j["summary"] = e.summary;
  j["formulas"] = e.formulas;
  j["models"] = e.models;
  j["conditional"] = e.conditional;
  return j;
}

inline json to_json(const std::string& theory, const PropertyVerdict& v) {
  return {{"theory", theory},
          {"property", to_string(v.property)},
          {"status", to_string(v.status)},
          {"evidence", to_json(v.evidence)},
          {"bound", v.bound}};
}

// Timings are left out so identical runs print identical bytes.
inline json to_json(const TheoryReport& r) {
  json j;
  j["theory"] = r.theory->name;
  j["row"] = r.theory->row;
  j["expected"] = r.theory->expected.str();
  j["computed"] = r.computed_str();
  j["match"] = r.matches();
  j["verdicts"] = json::array();
  for (auto& v : r.verdicts) j["verdicts"].push_back(to_json(r.theory->name, v));
  return j;
}

inline json to_json(const MetaCheck& m) {
  return {{"name", m.name}, {"holds", m.holds}, {"instances", m.instances}, {"violations", m.detail}};
}

inline json to_json(const TableReport& t) {
  json j;
  j["bound"] = t.bound;
  j["theories"] = t.rows.size();
  j["mismatches"] = t.mismatches();
  j["rows"] = json::array();
  for (auto& r : t.rows) j["rows"].push_back(to_json(r));
  j["meta"] = json::array();
  for (auto& m : t.meta) j["meta"].push_back(to_json(m));
  return j;
}

}  // namespace lab

}  // namespace polite

#endif  // POLITE_JSON_IO_HPP
