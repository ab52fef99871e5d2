// Command line front end: delin <command> FILE [options].
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "delin/errors.hpp"
#include "delin/mapde.hpp"

using namespace delin;
using nlohmann::json;

namespace {

enum Exit { kComputed = 0, kFalse = 1, kUndetermined = 2, kError = 3 };

struct Args {
  std::string file, target, rankingFile, budget, cases = "1";
  bool json = false, fallbackS = false, normalize = false, noIntegrate = false;
  int mindim = -1;
};

CompleteOptions options(const SystemFile& f, const Args& a) {
  CompleteOptions o = optionsFor(f);
  if (!a.budget.empty()) {
    auto colon = a.budget.find(':');
    try {
      o.extraOrder = std::stoi(a.budget.substr(0, colon));
      if (colon != std::string::npos) o.maxCases = std::stoi(a.budget.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidInput("--budget must look like N or N:cases");
    }
  }
  if (a.mindim >= 0) o.mindim = HilbertFn({a.mindim}, 0);
  return o;
}

Ranking ranking(const SystemFile& f, const Args& a) {
  if (a.rankingFile.empty()) return rankingFor(f);
  std::ifstream in(a.rankingFile);
  if (!in) throw InvalidInput("cannot open " + a.rankingFile);
  try {
    return rankingFromJson(json::parse(in));
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("ranking file: ") + e.what());
  }
}

std::vector<int> caseList(const std::string& s) {
  std::vector<int> r;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      r.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw InvalidInput("--case expects numbers or 'all'");
    }
  }
  return r;
}

// The input completed; --case picks one case when it splits.
RifCase inputCase(const SystemFile& f, const Args& a) {
  CompleteOptions o = options(f, a);
  o.mindim.reset();
  Completion c = completeCases(f.dps, ranking(f, a), o);
  if (c.cases.empty()) throw InvalidInput("the system is inconsistent");
  int k = a.cases == "all" ? 1 : caseList(a.cases).at(0);
  if (k < 1 || std::size_t(k) > c.cases.size())
    throw InvalidInput("--case " + std::to_string(k) + " out of range (" + std::to_string(c.cases.size()) + " cases)");
  if (c.cases.size() > 1)
    std::cerr << "input splits into " << c.cases.size() << " cases; using case " << k << "\n";
  return c.cases[std::size_t(k - 1)];
}

void printCase(const RifCase& c) {
  if (!c.path.empty()) std::cout << "case " << c.path << "\n";
  for (const auto& s : c.solved) std::cout << "  " << c.vs.varName(s.leader) << " = " << toString(s.rhs, c.vs) << "\n";
  for (const auto& e : c.constraints) std::cout << "  0 = " << toString(e, c.vs) << "\n";
  for (const auto& p : c.pivots) std::cout << "  " << toString(p, c.vs) << " <> 0\n";
}

int cmdRif(const SystemFile& f, const Args& a, json& out) {
  Completion c = completeCases(f.dps, ranking(f, a), options(f, a));
  out["cases"] = json::array();
  for (const auto& k : c.cases) out["cases"].push_back(toJson(k));
  out["pruned"] = c.pruned;
  out["inconsistent"] = c.inconsistent;
  if (!a.json) {
    for (const auto& k : c.cases) printCase(k);
    if (c.cases.empty()) std::cout << "no consistent case\n";
  }
  for (const auto& l : c.log) std::cerr << l << "\n";
  return kComputed;
}

int cmdInitialData(const SystemFile& f, const Args& a, json& out, bool hilbert) {
  Completion c = completeCases(f.dps, ranking(f, a), options(f, a));
  out["cases"] = json::array();
  for (const auto& k : c.cases) {
    InitialData id = initialData(k);
    json j{{"path", k.path}};
    if (hilbert)
      j["hilbert"] = toJson(hilbertFn(id));
    else
      j["initialData"] = toJson(id);
    out["cases"].push_back(j);
    if (!a.json) std::cout << (hilbert ? hilbertFn(id).toString() : id.toString()) << "\n";
  }
  return kComputed;
}

int cmdDetSys(const SystemFile& f, const Args& a, json& out) {
  RifCase R = inputCase(f, a);
  DetSystem S = detSys(R, options(f, a));
  InitialData id = initialData(S.sys);
  out["ansatz"] = S.ansatz.all();
  out["system"] = toJson(S.sys);
  out["initialData"] = toJson(id);
  out["hilbert"] = toJson(hilbertFn(id));
  if (!a.json) {
    printCase(S.sys);
    std::cout << "ID = " << id.toString() << "\nHF = " << hilbertFn(id).toString() << "\n";
  }
  return kComputed;
}

int cmdLgm(const SystemFile& f, const Args& a, json& out) {
  RifCase R = inputCase(f, a);
  DetSystem S = detSys(R, options(f, a));
  LGMResult r = lgmLinTest(R, S);
  out["linearizable"] = r.linearizable;
  out["order"] = r.order;
  out["dimL"] = r.dimL ? json(*r.dimL) : json(nullptr);
  out["dimDerived"] = r.dimDerived ? json(*r.dimDerived) : json(nullptr);
  out["derivedAbelian"] = r.derivedAbelian ? json(*r.derivedAbelian) : json(nullptr);
  if (!a.json) std::cout << (r.linearizable ? "linearizable" : "not linearizable") << "\n";
  return r.linearizable ? kComputed : kFalse;
}

int cmdPreEquiv(const SystemFile& f, const Args& a, json& out) {
  RifCase R = inputCase(f, a);
  CompleteOptions o = options(f, a);
  DetSystem S = detSys(R, o);
  DetSystem Sp = S;
  if (!a.fallbackS) {
    try {
      DerivedOptions d;
      d.complete = o;
      Sp = derivedDetSys(S, d);
    } catch (const DerivedFallback& e) {
      std::cerr << "S' replaced by S: " << e.what() << "\n";
    }
  }
  PreEquivResult r = preEquivTest(R, initialData(R), initialData(S.sys), initialData(Sp.sys));
  out["verdict"] = r.linearizable ? "false" : "null";
  out["failed"] = r.failed;
  out["dimInfo"] = toJson(r.dimInfo);
  if (!a.json) {
    std::cout << (r.linearizable ? "false" : "null") << "\n";
    for (const auto& t : r.failed) std::cout << "  " << t << "\n";
  }
  return r.linearizable ? kFalse : kComputed;
}

int cmdMapDE(const SystemFile& f, const Args& a, json& out) {
  RifCase R = inputCase(f, Args{a.file, "", a.rankingFile, a.budget, "1"});
  MapDEOptions o;
  o.complete = options(f, a);
  o.complete.mindim.reset();
  if (a.cases == "all")
    o.allCases = true;
  else
    o.caseSelect = caseList(a.cases);
  o.useFallbackS = a.fallbackS;
  o.normalizeTarget = a.normalize;
  o.integrate = !a.noIntegrate;
  MapDEReport rep = runMapDE(R, o);
  out = toJson(rep, R.vs);
  for (const auto& d : rep.diagnostics) std::cerr << d << "\n";
  if (!a.json) {
    std::cout << "verdict: " << toString(rep.verdict) << "\n";
    for (std::size_t i = 0; i < rep.cases.size(); ++i) printCase(rep.cases[i]);
    for (const auto& t : rep.targets)
      for (const auto& s : t.strings()) std::cout << "target: " << s << "\n";
    if (rep.map)
      for (const auto& m : *rep.map) std::cout << "map: " << m.target << " = " << toString(m.expr, R.vs) << "\n";
    if (rep.explicitTarget)
      for (const auto& s : rep.explicitTarget->strings()) std::cout << "explicit target: " << s << "\n";
  }
  switch (rep.verdict) {
    case Verdict::True:
      return kComputed;
    case Verdict::False:
      return kFalse;
    case Verdict::Undetermined:
      return kUndetermined;
  }
  return kError;
}

int cmdVerifyMap(const SystemFile& f, const Args& a, json& out) {
  if (f.map.empty()) throw InvalidInput(a.file + " has no map statement");
  RifCase R = inputCase(f, a);
  DPS target = readSystemFile(a.target).dps;
  bool ok = verifyMap(R, target, f.map);
  out["verified"] = ok;
  if (!a.json) std::cout << (ok ? "verified" : "not verified") << "\n";
  return ok ? kComputed : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential elimination and linearization of differential equations"};
  app.require_subcommand(1);
  Args a;
  auto common = [&](CLI::App* c) {
    c->add_option("file", a.file, "system file")->required();
    c->add_flag("--json", a.json, "JSON report on stdout");
    c->add_option("--ranking", a.rankingFile, "ranking matrix as JSON");
    c->add_option("--budget", a.budget, "prolongation order budget, N or N:cases");
    c->add_option("--mindim", a.mindim, "prune cases below this finite dimension");
    c->add_option("--case", a.cases, "case number(s), comma separated, or 'all'");
    c->add_flag("--fallback-s", a.fallbackS, "use S in place of S'");
  };
  std::map<std::string, CLI::App*> cmds;
  for (const char* name : {"detsys", "rif", "initialdata", "hilbert", "lgmtest", "preequiv", "mapde", "verifymap"}) {
    cmds[name] = app.add_subcommand(name);
    common(cmds[name]);
  }
  cmds["mapde"]->add_flag("--normalize-target", a.normalize, "Laguerre-Forsyth form for ODE targets");
  cmds["mapde"]->add_flag("--no-integrate", a.noIntegrate, "skip the explicit map search");
  cmds["verifymap"]->add_option("target", a.target, "target system file")->required();
  CLI11_PARSE(app, argc, argv);

  std::string name = app.get_subcommands().front()->get_name();
  json out;
  int code = kError;
  try {
    SystemFile f = readSystemFile(a.file);
    if (name == "rif") code = cmdRif(f, a, out);
    else if (name == "initialdata") code = cmdInitialData(f, a, out, false);
    else if (name == "hilbert") code = cmdInitialData(f, a, out, true);
    else if (name == "detsys") code = cmdDetSys(f, a, out);
    else if (name == "lgmtest") code = cmdLgm(f, a, out);
    else if (name == "preequiv") code = cmdPreEquiv(f, a, out);
    else if (name == "mapde") code = cmdMapDE(f, a, out);
    else if (name == "verifymap") code = cmdVerifyMap(f, a, out);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    out = {{"error", {{"kind", e.kind()}, {"message", e.what()}}}};
    code = kError;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    out = {{"error", {{"kind", "Internal"}, {"message", e.what()}}}};
    code = kError;
  }
  if (a.json) std::cout << json{{"command", name}, {"exit", code}, {"result", out}}.dump(2) << "\n";
  return code;
}
