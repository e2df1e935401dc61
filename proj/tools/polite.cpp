// polite: command-line front end.
//
//   polite sat      --theory T --formula F [--finite]
//   polite witness  --theory T --formula F [--strong]
//   polite combine  --t1 T1 --t2 T2 --phi1 F1 --phi2 F2 [--prune] [--lookahead] [--jobs N]
//   polite classify T [--bound N]
//   polite table    [--bound N] [--jobs N]
//   polite fof      [--seed S] [--n N]
//   polite mincard  --theory T (--formula F | --probe N)
//
// Every command takes --json. Exit status: 0 definitive, 1 usage or input error,
// 2 unknown (effort cap), 3 table mismatch.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "polite/polite.hpp"

namespace {

using namespace polite;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// A formula from a file, or inline text when the argument starts with '('.
Formula load_formula(const std::string& arg) {
  bool inline_text = !arg.empty() && arg.front() == '(';
  auto text = inline_text ? arg : slurp(arg);
  try {
    return parse_input(text).formula;
  } catch (const ParseError& e) {
    throw UsageError((inline_text ? std::string("<inline>") : arg) + ":" + e.what());
  }
}

TheoryPtr load_theory(const std::string& spec) {
  try {
    return parse_theory(spec);
  } catch (const UnknownTheory& e) {
    std::string msg = e.what();
    msg += "\nknown theories:";
    for (auto& n : catalog_names()) msg += "\n  " + n;
    throw UsageError(msg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int jobs_default() {
  if (const char* v = std::getenv("POLITE_KIT_JOBS")) {
    try {
      return std::max(1, std::stoi(v));
    } catch (const std::exception&) {
      throw UsageError(std::string("POLITE_KIT_JOBS must be a positive integer, got '") + v + "'");
    }
  }
  return 1;
}

int exit_for(Verdict v) { return v == Verdict::Unknown ? 2 : 0; }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---- commands ----

int cmd_sat(const std::string& theory, const std::string& formula, bool finite, bool as_json) {
  auto t = load_theory(theory);
  auto phi = load_formula(formula);
  t->check_formula(phi);
  auto r = finite ? t->finite_sat(phi) : t->qf_sat(phi);
  if (as_json) {
    auto j = to_json(r);
    j["theory"] = t->name;
    j["formula"] = to_string(phi);
    print_json(j);
  } else {
    std::cout << to_string(r.verdict) << "\n";
    if (r.model) std::cout << "model: " << to_string(*r.model) << "\n";
    if (!r.note.empty()) std::cout << "note: " << r.note << "\n";
  }
  return exit_for(r.verdict);
}

int cmd_witness(const std::string& theory, const std::string& formula, bool strong, bool as_json) {
  auto t = load_theory(theory);
  auto phi = load_formula(formula);
  t->check_formula(phi);
  auto w = strong ? strong_witness_for(*t) : witness_for(*t);
  if (!w) throw UsageError(t->name + " has no " + (strong ? "strong " : "") + "witness");
  auto wf = (*w)(phi);
  if (as_json) {
    print_json({{"theory", t->name}, {"kind", to_string(w->kind)}, {"label", w->label}, {"formula", to_string(phi)}, {"witness", to_string(wf)}});
  } else {
    std::cout << "; " << to_string(w->kind) << " witness " << w->label << " for " << t->name << "\n" << to_script(wf, t->sig);
  }
  return 0;
}

int cmd_combine(const std::string& t1, const std::string& t2, const std::string& f1, const std::string& f2, const CombineOptions& opt,
                bool as_json) {
  CombinationProblem p{load_theory(t1), load_theory(t2), load_formula(f1), load_formula(f2)};
  CombinationResult r;
  try {
    r = polite_combine(p, opt);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (as_json) {
    auto j = to_json(r);
    j["t1"] = p.t1->name;
    j["t2"] = p.t2->name;
    print_json(j);
  } else {
    std::cout << to_string(r.verdict) << "\n";
    if (r.certificate) std::cout << "arrangement: " << to_json(*r.certificate).dump() << "\n";
    std::cout << "arrangements tried: " << r.stats.tried;
    if (opt.prune || opt.lookahead) std::cout << ", pruned: " << r.stats.pruned_leaves;
    std::cout << "\n";
    if (!r.note.empty()) std::cout << "note: " << r.note << "\n";
  }
  return exit_for(r.verdict);
}

void print_report_text(const lab::TheoryReport& r) {
  std::cout << r.theory->name << "  row " << r.theory->row << "  expected " << r.theory->expected.str() << "  computed "
            << r.computed_str() << (r.matches() ? "  ok" : "  MISMATCH") << "\n";
  for (auto& v : r.verdicts) {
    std::cout << "  " << lab::to_string(v.property) << "  " << lab::to_string(v.status) << (v.evidence.conditional ? " (conditional)" : "")
              << "\n    " << v.evidence.summary << "\n";
    for (auto& f : v.evidence.formulas) std::cout << "    formula: " << f << "\n";
    for (auto& m : v.evidence.models) std::cout << "    model: " << m << "\n";
  }
}

lab::ClassifyOptions classify_options(int bound) {
  if (bound < 1) throw UsageError("--bound must be at least 1");
  lab::ClassifyOptions o;
  o.bound = bound;
  return o;
}

int cmd_classify(const std::string& theory, int bound, bool as_json) {
  auto t = load_theory(theory);
  auto r = lab::classify(t, classify_options(bound));
  if (as_json)
    print_json(lab::to_json(r));
  else
    print_report_text(r);
  return 0;
}

int cmd_table(int bound, int jobs, bool as_json) {
  auto rep = lab::reproduce_table(classify_options(bound), jobs);
  if (as_json) {
    print_json(lab::to_json(rep));
  } else {
    for (auto& r : rep.rows)
      std::cout << std::left << std::setw(32) << r.theory->name << " row " << std::setw(3) << r.theory->row << " expected "
                << r.theory->expected.str() << " computed " << r.computed_str() << (r.matches() ? "" : "  MISMATCH") << "\n";
    for (auto& m : rep.meta)
      std::cout << (m.holds ? "holds    " : "VIOLATED ") << m.name << " (" << m.instances << " theories)"
                << (m.detail.empty() ? "" : ": " + m.detail) << "\n";
    std::cout << rep.rows.size() << " theories, " << rep.mismatches() << " mismatches\n";
  }
  bool meta_ok = std::all_of(rep.meta.begin(), rep.meta.end(), [](const lab::MetaCheck& m) { return m.holds; });
  return rep.mismatches() == 0 && meta_ok ? 0 : 3;
}

int cmd_fof(const std::string& seed, int n, bool as_json) {
  if (n < 1) throw UsageError("--n must be positive");
  FofPtr f;
  try {
    f = make_fof(seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<int> F, bits;
  std::vector<std::uint64_t> ones;
  for (int i = 1; i <= n; ++i) {
    F.push_back(f->oracle(static_cast<std::uint64_t>(i)));
    bits.push_back(f->bit(static_cast<std::uint64_t>(i)));
    ones.push_back(f->f1(static_cast<std::uint64_t>(i)));
  }
  if (as_json) {
    print_json({{"oracle", f->label()}, {"n", n}, {"F", F}, {"fof", bits}, {"fof1", ones}});
    return 0;
  }
  int w = static_cast<int>(std::to_string(std::max<std::uint64_t>(n, ones.back())).size()) + 1;
  auto row = [&](const char* label, auto& xs) {
    std::cout << std::left << std::setw(6) << label << std::right;
    for (auto x : xs) std::cout << std::setw(w) << x;
    std::cout << "\n";
  };
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 1);
  row("n", idx);
  row("F", F);
  row("fof", bits);
  row("fof1", ones);
  return 0;
}

int cmd_mincard(const std::string& theory, const std::string& formula, int probe, bool as_json) {
  auto t = load_theory(theory);
  if (probe > 0) {
    std::vector<lab::ProbeRow> rows;
    try {
      rows = lab::mincard_f_probe(*t, probe);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    bool ok = true;
    json j = json::array();
    for (auto& r : rows) {
      ok &= r.consistent;
      j.push_back({{"n", r.n}, {"f_next", r.f_next}, {"mincard", r.mincard.str()}, {"consistent", r.consistent}});
      if (!as_json)
        std::cout << "n=" << r.n << "  f(n+1)=" << r.f_next << "  mincard=" << r.mincard.str() << (r.consistent ? "" : "  INCONSISTENT")
                  << "\n";
    }
    if (as_json) print_json({{"theory", t->name}, {"rows", j}, {"consistent", ok}});
    return ok ? 0 : 3;
  }
  if (formula.empty()) throw UsageError("mincard needs --formula or --probe");
  auto phi = load_formula(formula);
  t->check_formula(phi);
  MincardResult m;
  try {
    m = t->mincard(phi);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (as_json)
    print_json({{"theory", t->name}, {"formula", to_string(phi)}, {"mincard", m.str()}});
  else
    std::cout << m.str() << "\n";
  return m.kind == MincardResult::Kind::Unknown ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polite theory combination toolkit"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "JSON output")->configurable(false);

  std::string theory, formula, t1, t2, phi1, phi2, seed = "fig";
  bool finite = false, strong = false;
  int bound = 4, n = 16, probe = 0, jobs = 0;
  CombineOptions copt;

  auto* sat = app.add_subcommand("sat", "Satisfiability of a formula in a theory");
  sat->add_option("--theory", theory, "Theory spec")->required();
  sat->add_option("--formula", formula, "Formula file, '-' for stdin, or inline text")->required();
  sat->add_flag("--finite", finite, "Only finite models");
  sat->add_flag("--json", as_json);

  auto* wit = app.add_subcommand("witness", "Apply a theory's witness to a formula");
  wit->add_option("--theory", theory, "Theory spec")->required();
  wit->add_option("--formula", formula, "Formula file or inline text")->required();
  wit->add_flag("--strong", strong, "Use the strong witness");
  wit->add_flag("--json", as_json);

  auto* comb = app.add_subcommand("combine", "Decide phi1 and phi2 in the combination of two theories");
  comb->add_option("--t1", t1, "First theory")->required();
  comb->add_option("--t2", t2, "Second theory (needs a strong witness)")->required();
  comb->add_option("--phi1", phi1, "Formula over the first signature")->required();
  comb->add_option("--phi2", phi2, "Formula over the second signature")->required();
  comb->add_flag("--prune", copt.prune, "Skip arrangements contradicting forced (dis)equalities");
  comb->add_flag("--lookahead", copt.lookahead, "Check partial arrangements against both sides");
  comb->add_flag("--unsound-ok", copt.unsound_ok, "Allow a second theory that is not stably infinite");
  comb->add_option("--max-arrangements", copt.max_arrangements, "Effort cap (0 = none)");
  comb->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  comb->add_flag("--json", as_json);

  auto* cls = app.add_subcommand("classify", "Check the five properties of one theory");
  cls->add_option("theory", theory, "Theory spec")->required();
  cls->add_option("--bound", bound, "Domain size bound");
  cls->add_flag("--json", as_json);

  auto* tbl = app.add_subcommand("table", "Classify every catalog theory against the expected flags");
  tbl->add_option("--bound", bound, "Domain size bound");
  tbl->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  tbl->add_flag("--json", as_json);

  auto* fof = app.add_subcommand("fof", "Print F, fof(F) and its running count");
  fof->add_option("--seed", seed, "Oracle: fig, alt, parity or a numeric seed");
  fof->add_option("--n", n, "Last index");
  fof->add_flag("--json", as_json);

  auto* mc = app.add_subcommand("mincard", "Least domain size of a model of a formula");
  mc->add_option("--theory", theory, "Theory spec")->required();
  mc->add_option("--formula", formula, "Formula file or inline text");
  mc->add_option("--probe", probe, "Check f(n+1)=1 iff mincard(phi_n)=n+1 for n up to this value");
  mc->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (jobs == 0) jobs = jobs_default();
    copt.jobs = jobs;
    if (*sat) return cmd_sat(theory, formula, finite, as_json);
    if (*wit) return cmd_witness(theory, formula, strong, as_json);
    if (*comb) return cmd_combine(t1, t2, phi1, phi2, copt, as_json);
    if (*cls) return cmd_classify(theory, bound, as_json);
    if (*tbl) return cmd_table(bound, jobs, as_json);
    if (*fof) return cmd_fof(seed, n, as_json);
    if (*mc) return cmd_mincard(theory, formula, probe, as_json);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
