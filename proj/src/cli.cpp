#include "qrel/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qrel/frontend.hpp"
#include "qrel/properties.hpp"

namespace qrel {

using json = nlohmann::ordered_json;

int merge_exit(int a, int b)
{
  auto rank = [](int c) {
    switch (c) {
    case InputError: return 3;
    case Failed: return 2;
    case Unstable: return 1;
    default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

namespace {

constexpr char const *kVersion = "1.0";

struct Item
{
  std::string name, kind, file;
  bool passed = true;
  std::optional<json> value; // eval items report a value instead of passed
  bool warn = false;
  std::vector<Condition> conditions;
  json extra = json::object();
  double ms = 0.0;
  int code = Ok;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

std::optional<std::string> read_file(std::string const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { return std::nullopt; }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json diagnostics_json(std::vector<Diagnostic> const &ds)
{
  json a = json::array();
  for (auto const &d : ds) {
    json j;
    j["line"] = d.span.begin.line;
    j["col"] = d.span.begin.col;
    j["severity"] = to_string(d.severity);
    j["message"] = d.message;
    if (!d.hint.empty()) { j["hint"] = d.hint; }
    a.push_back(std::move(j));
  }
  return a;
}

// An item standing for a file that could not be read or elaborated.
Item workspace_item(std::string const &file, std::vector<Diagnostic> const &ds, std::ostream *err)
{
  Item it;
  it.name = file;
  it.kind = "workspace";
  it.file = file;
  it.passed = !has_errors(ds);
  it.code = it.passed ? Ok : InputError;
  it.extra["diagnostics"] = diagnostics_json(ds);
  if (err) { *err << format_diagnostics(ds, file); }
  return it;
}

std::optional<ElabResult> load(std::string const &file, std::vector<Item> &items, std::ostream &err,
                               std::optional<ast::Verify> const &extra = std::nullopt)
{
  auto t0 = Clock::now();
  auto text = read_file(file);
  if (!text) {
    Item it;
    it.name = it.file = file;
    it.kind = "workspace";
    it.passed = false;
    it.code = InputError;
    it.extra["diagnostics"] = json::array({json{{"line", 0}, {"col", 0}, {"severity", "error"},
                                                {"message", "cannot read file"}}});
    err << file << ": error: cannot read file\n";
    items.push_back(std::move(it));
    return std::nullopt;
  }
  ElabResult e;
  if (extra) {
    auto p = parse_workspace(*text);
    if (p.ok()) {
      p.ws.decls.push_back(*extra);
      e = elaborate(p.ws);
    }
    e.diagnostics.insert(e.diagnostics.begin(), p.diagnostics.begin(), p.diagnostics.end());
  }
  else {
    e = load_workspace(*text);
  }
  if (!e.ok()) {
    items.push_back(workspace_item(file, e.diagnostics, &err));
    items.back().ms = ms_since(t0);
    return std::nullopt;
  }
  if (!e.diagnostics.empty()) { err << format_diagnostics(e.diagnostics, file); }
  return e;
}

// Endo-relation named by a relation symbol of arity (X, X*) or a function.
Relation endo(Workspace const &ws, std::string const &name)
{
  if (auto it = ws.rels.find(name); it != ws.rels.end()) {
    auto const &a = it->second->arity;
    return unbend(it->second->rel, a[0], QuantumSet::dual(a[1]));
  }
  return ws.fns.at(name)->rel;
}

VerificationReport execute(Workspace const &ws, Workspace::Directive const &d)
{
  auto const &k = d.kind;
  auto const &n = d.names;
  if (k == "graph") { return check_graph(endo(ws, n[0])); }
  if (k == "preorder") { return check_preorder(endo(ws, n[0])); }
  if (k == "poset-weaver") { return check_poset(endo(ws, n[0]), PosetMode::Weaver); }
  if (k == "poset-nilpotent") { return check_poset(endo(ws, n[0]), PosetMode::Nilpotent); }
  if (k == "function") { return check_function(endo(ws, n[0]), FunctionMode::Function); }
  if (k == "injective") { return check_function(endo(ws, n[0]), FunctionMode::Injective); }
  if (k == "surjective") { return check_function(endo(ws, n[0]), FunctionMode::Surjective); }
  if (k == "metric") { return check_metric(ws.metrics.at(n[0]), MetricMode::Metric); }
  if (k == "pseudometric") { return check_metric(ws.metrics.at(n[0]), MetricMode::Pseudometric); }
  if (k == "magic-unitary") { return check_magic_unitary(ws.families.at(n[0]).p); }
  if (k == "hom-witness") {
    return check_hom_witness(ws.families.at(n[0]).p, ws.graphs.at(n[1]).g, ws.graphs.at(n[2]).g);
  }
  if (k == "iso-witness") {
    return check_iso_witness(ws.families.at(n[0]).p, ws.graphs.at(n[1]).g, ws.graphs.at(n[2]).g);
  }
  if (k == "quantum-group") {
    if (n.size() == 1) {
      auto g = dual_group(ws.irreps.at(n[0]));
      return check_quantum_group(g.f, g.c);
    }
    return check_quantum_group(ws.fns.at(n[0])->rel, ws.fns.at(n[1])->rel);
  }
  throw Error(ErrorKind::BadParams, "unknown verification kind '" + k + "'");
}

std::string joined(std::vector<std::string> const &xs, char const *sep = " ")
{
  std::string s;
  for (size_t k = 0; k < xs.size(); ++k) { s += (k ? sep : "") + xs[k]; }
  return s;
}

Item verify_item(Workspace const &ws, Workspace::Directive const &d, std::string const &file)
{
  Item it;
  it.name = joined(d.names);
  it.kind = d.kind;
  it.file = file;
  auto t0 = Clock::now();
  try {
    auto rep = execute(ws, d);
    it.conditions = rep.conditions;
    it.passed = rep.passed;
    it.warn = rep.warn;
    if (rep.empty_sort) { it.extra["empty_sort"] = true; }
    if (!rep.passed) {
      // Unstable when every failing algebraic reading sits in the warn band.
      // Formula readings (ids with a /direct twin) only report 0 or 1, so
      // they cannot place a failure inside the band themselves.
      bool hard = false;
      for (auto const &c : rep.conditions) {
        bool formula_reading = rep.find(c.id + "/direct") != nullptr;
        hard = hard || (!c.passed && !formula_reading && !(c.margin <= tolerances().warn));
      }
      it.code = hard || !rep.warn ? Failed : Unstable;
    }
  } catch (Error const &e) {
    Condition c;
    c.id = "input";
    c.margin = std::numeric_limits<double>::infinity();
    c.note = e.what();
    it.conditions.push_back(c);
    it.passed = false;
    it.code = Failed;
  }
  it.ms = ms_since(t0);
  return it;
}

Item assert_item(Workspace const &ws, Workspace::Assertion const &a, std::string const &file)
{
  Item it;
  it.name = a.formula;
  it.kind = "assert";
  it.file = file;
  auto t0 = Clock::now();
  auto const &nf = ws.formulas.at(a.formula);
  Condition c;
  c.id = "assert";
  c.formula = to_string(nf.f);
  try {
    bool got = truth(nf.f);
    c.passed = got == a.expect;
    c.margin = c.passed ? 0.0 : 1.0;
    c.note = std::string("expected ") + (a.expect ? "true" : "false") + ", got " + (got ? "true" : "false");
  } catch (Error const &e) {
    c.passed = false;
    c.margin = 1.0;
    c.note = e.what();
  }
  it.passed = c.passed;
  it.code = c.passed ? Ok : Failed;
  it.conditions.push_back(c);
  it.ms = ms_since(t0);
  return it;
}

std::string trim(std::string s)
{
  auto sp = [](unsigned char ch) { return std::isspace(ch) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), sp));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), sp).base(), s.end());
  return s;
}

QuantumSet resolve(ast::Sort const &s, Workspace const &ws)
{
  switch (s.kind) {
  case ast::Sort::Kind::Unit: return QuantumSet::unit();
  case ast::Sort::Kind::Dual: return QuantumSet::dual(resolve(s.args[0], ws));
  case ast::Sort::Kind::Product: return QuantumSet::product(resolve(s.args[0], ws), resolve(s.args[1], ws));
  case ast::Sort::Kind::Name: break;
  }
  auto it = ws.sets.find(s.name);
  if (it == ws.sets.end()) { throw Error(ErrorKind::SortError, "unknown quantum set '" + s.name + "'"); }
  return it->second;
}

// "x:X,y:Y*" against the workspace's quantum sets.
Context parse_context(std::string const &spec, Workspace const &ws)
{
  Context ctx;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto colon = part.find(':');
    if (colon == std::string::npos) { throw Error(ErrorKind::SortError, "context entry '" + trim(part) + "' needs name:sort"); }
    std::string name = trim(part.substr(0, colon)), sort = trim(part.substr(colon + 1));
    std::vector<Diagnostic> ds;
    auto f = parse_formula("forall v in " + sort + " . true", ds);
    if (!f || has_errors(ds) || !f->sort) { throw Error(ErrorKind::SortError, "cannot parse sort '" + sort + "'"); }
    if (name.empty()) { throw Error(ErrorKind::SortError, "empty variable name in context"); }
    for (auto const &v : ctx) {
      if (v.name == name) { throw Error(ErrorKind::SortError, "variable '" + name + "' listed twice in context"); }
    }
    ctx.push_back({name, resolve(*f->sort, ws)});
  }
  return ctx;
}

Item eval_item(Workspace const &ws, std::string const &name, std::string const &context, std::string const &file)
{
  Item it;
  it.name = name;
  it.kind = "formula";
  it.file = file;
  auto t0 = Clock::now();
  auto const &nf = ws.formulas.at(name);
  Context ctx = nf.free;
  if (!context.empty()) {
    ctx = parse_context(context, ws);
    for (auto const &fv : nf.free) {
      auto hit = std::find_if(ctx.begin(), ctx.end(), [&](VarDecl const &v) { return v.name == fv.name; });
      if (hit == ctx.end()) {
        throw Error(ErrorKind::FreeVariableNotInContext, "free variable '" + fv.name + "' of '" + name + "' is not in the context");
      }
      if (!hit->sort.compatible(fv.sort)) {
        throw Error(ErrorKind::SortMismatch, "variable '" + fv.name + "' has sort " + sort_name(fv.sort) +
                                                 ", context gives " + sort_name(hit->sort));
      }
    }
  }
  Relation r = interpret(nf.f, ctx);
  json ctx_j = json::array();
  std::vector<size_t> radix;
  for (auto const &v : ctx) {
    ctx_j.push_back(json{{"var", v.name}, {"sort", sort_name(v.sort)}});
    radix.push_back(v.sort.size());
  }
  json blocks = json::array();
  for (auto const &[key, b] : r.blocks()) {
    auto digits = unflatten(key.first, radix);
    json atoms = json::array();
    for (size_t k = 0; k < ctx.size(); ++k) {
      auto const &label = ctx[k].sort.atom(digits[k]).label;
      atoms.push_back(label.empty() ? std::to_string(digits[k]) : label);
    }
    blocks.push_back(json{{"atoms", atoms}, {"rank", b.rank()}, {"ambient", b.ambient_dim()}});
  }
  it.extra["context"] = ctx_j;
  it.extra["blocks"] = blocks;
  it.value = ctx.empty() ? json(is_top(r)) : json(nullptr);
  it.ms = ms_since(t0);
  return it;
}

json item_json(Item const &it)
{
  json j;
  j["name"] = it.name;
  j["kind"] = it.kind;
  j["file"] = it.file;
  if (it.value) { j["value"] = *it.value; }
  else { j["passed"] = it.passed; }
  j["warn"] = it.warn;
  json conds = json::array(), margins = json::array();
  for (auto const &c : it.conditions) {
    json cj;
    cj["id"] = c.id;
    cj["formula"] = c.formula;
    cj["passed"] = c.passed;
    cj["margin"] = c.margin;
    cj["skipped"] = c.skipped;
    cj["note"] = c.note;
    conds.push_back(std::move(cj));
    margins.push_back(c.margin);
  }
  j["conditions"] = conds;
  j["margins"] = margins;
  for (auto const &[k, v] : it.extra.items()) { j[k] = v; }
  j["timings_ms"] = it.ms;
  return j;
}

std::string fmt_margin(double m)
{
  if (std::isinf(m)) { return "inf"; }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", m);
  return buf;
}

void human(std::vector<Item> const &items, std::string const &command, std::ostream &out)
{
  std::string file = "\x01";
  for (auto const &it : items) {
    if (it.file != file && !it.file.empty()) {
      file = it.file;
      out << file << "\n";
    }
    if (it.extra.contains("error")) {
      out << "  FAIL  " << it.kind << " " << it.name << ": " << it.extra["error"].get<std::string>() << "\n";
      continue;
    }
    if (it.kind == "workspace") {
      out << "  " << (it.passed ? "ok  " : "FAIL") << "  "
          << (it.extra.contains("summary") ? it.extra["summary"].get<std::string>() : command + ": see diagnostics")
          << "\n";
      continue;
    }
    if (it.kind == "formula") {
      std::string ctx;
      for (auto const &v : it.extra["context"]) {
        ctx += (ctx.empty() ? "" : ", ") + v["var"].get<std::string>() + " : " + v["sort"].get<std::string>();
      }
      if (it.value && !it.value->is_null()) {
        out << "  " << it.name << "  " << (it.value->get<bool>() ? "true" : "false") << "\n";
        continue;
      }
      out << "  " << it.name << " (" << ctx << ")\n";
      for (auto const &b : it.extra["blocks"]) {
        std::string at;
        for (auto const &a : b["atoms"]) { at += (at.empty() ? "" : ", ") + a.get<std::string>(); }
        out << "    block [" << at << "]  rank " << b["rank"].get<long>() << " / " << b["ambient"].get<long>() << "\n";
      }
      if (it.extra["blocks"].empty()) { out << "    (zero relation)\n"; }
      continue;
    }
    char const *tag = it.passed ? "PASS" : (it.code == Unstable ? "WARN" : "FAIL");
    out << "  " << tag << "  " << it.kind << " " << it.name << "\n";
    if (it.kind == "suite") {
      out << "        " << it.extra["cases"].get<int>() << " cases, " << it.extra["failures"].get<int>()
          << " failures, max margin " << fmt_margin(it.extra["max_margin"].get<double>()) << "\n";
    }
    for (auto const &c : it.conditions) {
      char const *st = c.skipped ? "skip" : (c.passed ? "pass" : "FAIL");
      out << "        " << st << "  " << std::left << std::setw(24) << c.id << std::right << std::setw(10)
          << fmt_margin(c.margin) << "  " << c.formula;
      if (!c.note.empty()) { out << "  [" << c.note << "]"; }
      out << "\n";
    }
  }
  int pass = 0, fail = 0;
  for (auto const &it : items) { (it.code == Ok ? pass : fail)++; }
  out << pass << " ok, " << fail << " not ok\n";
}

} // namespace

int run(RunConfig const &cfg, std::ostream &out, std::ostream &err)
{
  static std::vector<std::string> const commands{"check", "eval", "verify", "selftest"};
  if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end()) {
    err << "qrel: unknown command '" << cfg.command << "' (expected check, eval, verify or selftest)\n";
    return InputError;
  }
  double const tol = cfg.tol.value_or(Tolerances{}.cmp);
  if (!(tol >= kMinTol && tol <= kMaxTol)) {
    err << "qrel: tolerance " << tol << " outside [" << kMinTol << ", " << kMaxTol << "]\n";
    return InputError;
  }
  Tolerances const saved = tolerances();
  tolerances().cmp = tol;
  tolerances().warn = 100.0 * tol;
  tolerances().rank = tol / 10.0;
  struct Restore
  {
    Tolerances t;
    ~Restore() { tolerances() = t; }
  } restore{saved};

  if (cfg.command != "selftest" && cfg.inputs.empty()) {
    err << "qrel: " << cfg.command << " needs at least one .qrel file\n";
    return InputError;
  }
  if (!cfg.kind.empty()) {
    auto const &ks = verify_kinds();
    if (std::find(ks.begin(), ks.end(), cfg.kind) == ks.end()) {
      err << "qrel: unknown verification kind '" << cfg.kind << "' (known: " << joined(ks, ", ") << ")\n";
      return InputError;
    }
  }

  std::vector<Item> items;
  if (cfg.command == "selftest") {
    SuiteOptions so;
    so.seed = cfg.seed;
    so.tol = tol;
    for (auto const &s : run_property_suites(so)) {
      Item it;
      it.name = std::to_string(s.id) + " " + s.name;
      it.kind = "suite";
      it.passed = s.passed();
      it.code = it.passed ? Ok : Failed;
      for (auto const &d : s.details) {
        Condition c;
        c.id = "suite" + std::to_string(s.id);
        c.formula = d;
        c.margin = s.max_margin;
        it.conditions.push_back(c);
      }
      it.extra["cases"] = s.cases;
      it.extra["failures"] = s.failures;
      it.extra["max_margin"] = s.max_margin;
      it.ms = s.seconds * 1000.0;
      items.push_back(std::move(it));
    }
  }
  for (auto const &file : cfg.command == "selftest" ? std::vector<std::string>{} : cfg.inputs) {
    try {
      if (cfg.command == "check") {
        auto t0 = Clock::now();
        auto e = load(file, items, err);
        if (!e) { continue; }
        auto const &ws = e->ws;
        auto n = [](size_t k, char const *what) {
          return std::to_string(k) + " " + what + (k == 1 ? "" : "s");
        };
        std::string const summary = n(ws.sets.size(), "set") + ", " + n(ws.rels.size(), "relation") + ", " +
                                    n(ws.fns.size(), "function") + ", " + n(ws.formulas.size(), "formula") + ", " +
                                    n(ws.asserts.size(), "assertion") + ", " + n(ws.verifies.size(), "verify directive");
        Item it = workspace_item(file, e->diagnostics, nullptr);
        it.extra["summary"] = summary;
        it.ms = ms_since(t0);
        items.push_back(std::move(it));
      }
      else if (cfg.command == "eval") {
        auto e = load(file, items, err);
        if (!e) { continue; }
        std::vector<std::string> names = e->ws.formula_order;
        if (!cfg.formula.empty()) {
          if (!e->ws.formulas.count(cfg.formula)) {
            Item it;
            it.name = cfg.formula;
            it.kind = "formula";
            it.file = file;
            it.value = json(nullptr);
            it.code = InputError;
            it.extra["error"] = "no formula named '" + cfg.formula + "'";
            err << file << ": error: no formula named '" << cfg.formula << "'\n";
            items.push_back(std::move(it));
            continue;
          }
          names = {cfg.formula};
        }
        for (auto const &n : names) {
          try {
            items.push_back(eval_item(e->ws, n, cfg.context, file));
          } catch (Error const &x) {
            Item it;
            it.name = n;
            it.kind = "formula";
            it.file = file;
            it.value = json(nullptr);
            it.code = InputError;
            it.extra["error"] = x.what();
            err << file << ": error: " << n << ": " << x.what() << "\n";
            items.push_back(std::move(it));
          }
        }
      }
      else { // verify
        std::optional<ast::Verify> extra;
        if (!cfg.kind.empty()) { extra = ast::Verify{cfg.kind, cfg.names, {}}; }
        auto e = load(file, items, err, extra);
        if (!e) { continue; }
        auto const &ws = e->ws;
        if (extra) {
          items.push_back(verify_item(ws, ws.verifies.back(), file));
          continue;
        }
        for (auto const &d : ws.verifies) { items.push_back(verify_item(ws, d, file)); }
        for (auto const &a : ws.asserts) { items.push_back(assert_item(ws, a, file)); }
      }
    } catch (std::exception const &x) {
      Item it;
      it.name = it.file = file;
      it.kind = "workspace";
      it.passed = false;
      it.code = InputError;
      it.extra["error"] = x.what();
      err << file << ": error: " << x.what() << "\n";
      items.push_back(std::move(it));
    }
  }

  int code = Ok;
  for (auto const &it : items) { code = merge_exit(code, it.code); }
  if (cfg.output == RunConfig::Output::Json) {
    json j;
    j["version"] = kVersion;
    j["command"] = cfg.command;
    j["tol"] = tol;
    j["seed"] = cfg.seed;
    json arr = json::array();
    for (auto const &it : items) { arr.push_back(item_json(it)); }
    j["items"] = arr;
    j["exit_code"] = code;
    out << j.dump(2) << "\n";
  }
  else {
    human(items, cfg.command, out);
  }
  return code;
}

int cli_main(int argc, char const *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Quantum relations workbench: check, evaluate and verify .qrel workspaces", "qrel"};
  RunConfig cfg;
  std::vector<std::string> pos;
  std::string output = "human";
  double tol = 0.0;
  app.add_option("command", cfg.command, "check | eval | verify | selftest")->required();
  app.add_option("args", pos, "input files; `verify` also accepts KIND NAMES... before the files");
  app.add_option("--formula", cfg.formula, "formula to evaluate (default: all)");
  app.add_option("--context", cfg.context, "evaluation context, e.g. \"x:X,y:Y*\"");
  app.add_option("--kind", cfg.kind, "verification kind");
  app.add_option("--names", cfg.names, "comma-separated names for --kind (repeatable)")
      ->delimiter(',')
      ->allow_extra_args(false);
  auto *tol_opt = app.add_option("--tol", tol, "comparison tolerance in [1e-12, 1e-4] (env QREL_TOL)");
  app.add_option("--seed", cfg.seed, "seed for randomized checks");
  app.add_option("--output", output, "human | json")->check(CLI::IsMember({"human", "json"}));
  app.set_version_flag("--version", std::string("qrel ") + kVersion);
  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<CLI::CallForVersion const *>(&e) ? std::string("qrel ") + kVersion + "\n" : app.help());
      return Ok;
    }
    err << "qrel: " << e.what() << "\n";
    return InputError;
  }
  cfg.output = output == "json" ? RunConfig::Output::Json : RunConfig::Output::Human;
  if (tol_opt->count() > 0) { cfg.tol = tol; }
  else if (char const *env = std::getenv("QREL_TOL"); env && *env) {
    char *end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0') {
      err << "qrel: QREL_TOL='" << env << "' is not a number\n";
      return InputError;
    }
    cfg.tol = v;
  }

  size_t k = 0;
  if (cfg.command == "verify" && cfg.kind.empty() && !pos.empty()) {
    auto const &ks = verify_kinds();
    if (std::find(ks.begin(), ks.end(), pos[0]) != ks.end()) {
      cfg.kind = pos[k++];
      auto is_file = [](std::string const &s) {
        return (s.size() > 5 && s.compare(s.size() - 5, 5, ".qrel") == 0) || std::filesystem::is_regular_file(s);
      };
      while (k < pos.size() && !is_file(pos[k])) { cfg.names.push_back(pos[k++]); }
    }
  }
  cfg.inputs.assign(pos.begin() + static_cast<long>(k), pos.end());
  try {
    return run(cfg, out, err);
  } catch (std::exception const &e) {
    err << "qrel: internal error: " << e.what() << "\n";
    return InputError;
  }
}

} // namespace qrel
