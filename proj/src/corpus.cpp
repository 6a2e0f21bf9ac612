#include <fstream>
#include <sstream>

#include "syncalg/lawbench.hpp"

namespace sra {

const char* lawKindName(LawKind k) {
  switch (k) {
    case LawKind::Equality: return "equality";
    case LawKind::Refinement: return "refinement";
    case LawKind::Conditional: return "conditional";
    case LawKind::Conjecture: return "conjecture";
    case LawKind::ExpectedFail: return "expected-fail";
  }
  return "?";
}

const char* backendName(Backend b) {
  switch (b) {
    case Backend::Bounded: return "bounded";
    case Backend::Automaton: return "automaton";
    case Backend::Both: return "both";
  }
  return "?";
}

const char* profileName(VarProfile p) {
  switch (p) {
    case VarProfile::Set: return "set";
    case VarProfile::Rel: return "rel";
    case VarProfile::Nat: return "nat";
    case VarProfile::Cmd: return "cmd";
    case VarProfile::Guarded: return "guarded";
    case VarProfile::Atomic: return "atomic";
    case VarProfile::Pseudo: return "pseudo";
    case VarProfile::Pafp: return "pafp";
    case VarProfile::Weak: return "weak";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

Cmp parseCmp(const std::string& s, int line) {
  if (s == "==") return Cmp::Equal;
  if (s == ">=") return Cmp::Refines;
  throw CorpusError("comparison must be == or >=, got '" + s + "'", line);
}

VarProfile parseProfile(const std::string& s, int line) {
  static const std::pair<const char*, VarProfile> table[] = {
      {"set", VarProfile::Set},         {"rel", VarProfile::Rel},       {"nat", VarProfile::Nat},
      {"cmd", VarProfile::Cmd},         {"guarded", VarProfile::Guarded}, {"atomic", VarProfile::Atomic},
      {"pseudo", VarProfile::Pseudo},   {"pafp", VarProfile::Pafp},
      {"weak", VarProfile::Weak}};
  for (const auto& [name, p] : table)
    if (s == name) return p;
  throw CorpusError("unknown variable profile '" + s + "'", line);
}

struct Pending {
  Law law;
  bool hasKind = false, hasCmp = false;
};

void finish(Pending& p, std::vector<Law>& out) {
  Law& law = p.law;
  if (law.lhs.empty() || law.rhs.empty()) throw CorpusError("law " + law.id + " needs lhs and rhs", law.line);
  if (!p.hasKind) throw CorpusError("law " + law.id + " has no kind", law.line);
  if (!p.hasCmp) law.cmp = law.kind == LawKind::Refinement ? Cmp::Refines : Cmp::Equal;
  if (law.kind == LawKind::Conditional && law.premises.empty())
    throw CorpusError("conditional law " + law.id + " has no premise", law.line);
  for (const auto& l : out)
    if (l.id == law.id) throw CorpusError("duplicate law id " + law.id, law.line);
  out.push_back(std::move(law));
}

}  // namespace

std::vector<Law> parseCorpus(std::string_view text) {
  std::vector<Law> out;
  std::optional<Pending> cur;
  std::istringstream in{std::string(text)};
  int lineNo = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineNo;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("law ", 0) == 0) {
      if (cur) finish(*cur, out);
      cur.emplace();
      cur->law.id = trim(line.substr(4));
      cur->law.line = lineNo;
      if (cur->law.id.empty() || cur->law.id.find(' ') != std::string::npos)
        throw CorpusError("malformed law header", lineNo);
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw CorpusError("expected 'key: value'", lineNo);
    if (!cur) throw CorpusError("field outside a law stanza", lineNo);
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    Law& law = cur->law;
    if (key == "kind") {
      static const std::pair<const char*, LawKind> kinds[] = {{"equality", LawKind::Equality},
                                                              {"refinement", LawKind::Refinement},
                                                              {"conditional", LawKind::Conditional},
                                                              {"conjecture", LawKind::Conjecture},
                                                              {"expected-fail", LawKind::ExpectedFail}};
      bool found = false;
      for (const auto& [name, k] : kinds)
        if (value == name) {
          law.kind = k;
          found = true;
        }
      if (!found) throw CorpusError("unknown law kind '" + value + "'", lineNo);
      cur->hasKind = true;
    } else if (key == "vars") {
      std::istringstream vs(value);
      for (std::string item; std::getline(vs, item, ',');) {
        const auto c = item.find(':');
        if (c == std::string::npos) throw CorpusError("variable needs 'name: profile'", lineNo);
        std::string name = trim(item.substr(0, c));
        if (name.empty()) throw CorpusError("empty variable name", lineNo);
        law.vars.push_back({name, parseProfile(trim(item.substr(c + 1)), lineNo)});
      }
    } else if (key == "premise") {
      auto pos = value.find("==");
      if (pos == std::string::npos) pos = value.find(">=");
      if (pos == std::string::npos) throw CorpusError("premise needs == or >=", lineNo);
      law.premises.push_back({trim(value.substr(0, pos)), parseCmp(value.substr(pos, 2), lineNo), trim(value.substr(pos + 2))});
    } else if (key == "cmp") {
      law.cmp = parseCmp(value, lineNo);
      cur->hasCmp = true;
    } else if (key == "ops") {
      law.ops.clear();
      for (const auto& w : words(value)) {
        if (w == "par")
          law.ops.push_back(SyncOp::Par);
        else if (w == "cap")
          law.ops.push_back(SyncOp::Conj);
        else
          throw CorpusError("unknown operator '" + w + "'", lineNo);
      }
      if (law.ops.empty()) throw CorpusError("ops is empty", lineNo);
    } else if (key == "backend") {
      if (value == "bounded")
        law.backend = Backend::Bounded;
      else if (value == "automaton")
        law.backend = Backend::Automaton;
      else if (value == "both")
        law.backend = Backend::Both;
      else
        throw CorpusError("unknown backend '" + value + "'", lineNo);
    } else if (key == "sizes") {
      for (const auto& w : words(value)) {
        std::size_t n = 0;
        try {
          n = std::stoul(w);
        } catch (const std::exception&) {
          throw CorpusError("bad size '" + w + "'", lineNo);
        }
        if (n < 1 || n > StateSpace::kMaxStates) throw CorpusError("size out of range", lineNo);
        law.sizes.push_back(n);
      }
    } else if (key == "lhs") {
      law.lhs = value;
    } else if (key == "rhs") {
      law.rhs = value;
    } else if (key == "ref") {
      law.ref = value;
    } else {
      throw CorpusError("unknown field '" + key + "'", lineNo);
    }
  }
  if (cur) finish(*cur, out);
  return out;
}

std::vector<Law> loadCorpus(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open corpus " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parseCorpus(ss.str());
}

}  // namespace sra
