#include <chrono>
#include <cstdio>
#include <map>

#include "syncalg/dsl.hpp"
#include "syncalg/expander.hpp"
#include "syncalg/lawbench.hpp"

namespace sra {

const char* lawVerdictName(LawVerdict v) {
  switch (v) {
    case LawVerdict::Pass: return "pass";
    case LawVerdict::Fail: return "fail";
    case LawVerdict::ExpectedFailConfirmed: return "expected-fail-confirmed";
    case LawVerdict::ExpectedFailUnconfirmed: return "expected-fail-unconfirmed";
    case LawVerdict::ConjectureHolds: return "conjecture-no-counterexample";
    case LawVerdict::ConjectureRefuted: return "conjecture-counterexample";
    case LawVerdict::Inconclusive: return "inconclusive";
    case LawVerdict::Error: return "error";
  }
  return "?";
}

bool isFailure(const LawResult& r) {
  return r.verdict == LawVerdict::Fail || r.verdict == LawVerdict::ExpectedFailUnconfirmed ||
         r.verdict == LawVerdict::Error;
}

bool Report::ok() const {
  for (const auto& r : results)
    if (isFailure(r)) return false;
  return true;
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ull;
  return h;
}

std::size_t exhaustiveDomain(VarProfile p, std::size_t n) {
  switch (p) {
    case VarProfile::Set: return n <= 2 ? std::size_t{1} << n : 0;
    case VarProfile::Rel: return n <= 2 ? std::size_t{1} << (n * n) : 0;
    case VarProfile::Nat: return 4;
    default: return 0;
  }
}

// bit j of the index is the pair (j / n, j % n)
StateRel relFromIndex(const SpacePtr& space, std::size_t index) {
  const std::size_t n = space->size();
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < n * n; ++j)
    if ((index >> j) & 1) bits |= std::uint64_t{1} << (8 * (j / n) + j % n);
  return {space, bits};
}

Command pow(const Command& c, unsigned k) { return Command::pow(c, k); }

std::map<std::string, Hook, std::less<>> hooksFor(SyncOp op) {
  std::map<std::string, Hook, std::less<>> hooks;
  auto cmdArg = [](const std::vector<HookArg>& args, std::size_t i, const char* hook) {
    if (i >= args.size() || !std::holds_alternative<Command>(args[i]))
      throw UsageError(std::string(hook) + ": argument " + std::to_string(i + 1) + " must be a command");
    return std::get<Command>(args[i]);
  };
  auto pseudoArg = [&](const std::vector<HookArg>& args, std::size_t i, const char* hook) {
    auto x = asPseudoAtomic(normalize(cmdArg(args, i, hook)));
    if (!x) throw UsageError(std::string(hook) + ": argument " + std::to_string(i + 1) + " is not pseudo-atomic");
    return *x;
  };
  hooks["expanded"] = [=](const std::vector<HookArg>& a) { return reconstruct(expand(cmdArg(a, 0, "expanded"))); };
  hooks["nilsync"] = [=](const std::vector<HookArg>& a) { return nilSync(cmdArg(a, 0, "nilsync")); };
  hooks["xsync"] = [=](const std::vector<HookArg>& a) {
    return Command::pseudo(syncPseudo(op, pseudoArg(a, 0, "xsync"), pseudoArg(a, 1, "xsync")));
  };
  // {pN} ; |_(a, c') (a1 sync a) ; (a1^k sync c')
  hooks["expandedsucc"] = [=](const std::vector<HookArg>& a) {
    auto x = pseudoArg(a, 0, "expandedsucc");
    if (!x.isAtomic()) throw UsageError("expandedsucc: first argument must be atomic");
    if (a.size() < 2 || !std::holds_alternative<unsigned>(a[1]))
      throw UsageError("expandedsucc: second argument must be a natural number");
    const unsigned k = std::get<unsigned>(a[1]);
    const Command c = cmdArg(a, 2, "expandedsucc");
    const auto e = expand(c);
    const Command a1 = Command::atom(x.normal);
    std::vector<Command> alts;
    for (const auto& b : e.branches)
      alts.push_back(Command::seq(Command::atom(syncAtomic(op, x.normal, b.step)), Command::sync(op, pow(a1, k), b.cont)));
    Command body = alts.empty() ? Command::magic(c.space()) : Command::choice(std::move(alts));
    return Command::seq(assertCmd(e.pN), body);
  };
  return hooks;
}

enum class Status { Holds, Fails, Capped };

struct Comparison {
  Status status = Status::Holds;
  Verdict verdict;
  const char* backend = "";
};

Comparison compare(const Command& l, const Command& r, Cmp cmp, Backend backend, const CheckConfig& cfg) {
  Comparison out;
  if (backend != Backend::Automaton) {
    BoundedEngine engine;
    Verdict v = cmp == Cmp::Equal ? engine.equal(l, r, cfg.depth) : engine.refines(l, r, cfg.depth);
    if (!v.holds) return {Status::Fails, v, "bounded"};
  }
  if (backend != Backend::Bounded) {
    try {
      Verdict v = cmp == Cmp::Equal ? fullEqual(l, r, cfg.caps) : fullRefines(l, r, cfg.caps);
      if (!v.holds) return {Status::Fails, v, "automaton"};
    } catch (const CapExceeded&) {
      return {Status::Capped, {}, "automaton"};
    }
  }
  return out;
}

std::string describe(const Binding& b) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Command>)
          return print(v);
        else if constexpr (std::is_same_v<T, StateSet>)
          return formatSet(v);
        else if constexpr (std::is_same_v<T, StateRel>)
          return formatRel(v);
        else
          return std::to_string(v);
      },
      b);
}

}  // namespace

LawResult checkLaw(const Law& law, const CheckConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  LawResult res;
  res.lawId = law.id;
  res.kind = law.kind;
  res.backend = cfg.backend.value_or(law.backend);
  bool counterexample = false;
  try {
    const auto& sizes = law.sizes.empty() ? cfg.sizes : law.sizes;
    for (std::size_t n : sizes) {
      if (counterexample) break;
      const SpacePtr space = StateSpace::numbered(n);
      std::vector<std::size_t> domain;
      std::size_t product = 1;
      bool sampled = false;
      for (const auto& v : law.vars) domain.push_back(exhaustiveDomain(v.profile, n));
      for (auto d : domain) product *= d ? d : 1;
      if (product > cfg.exhaustiveLimit) {
        product = 1;
        for (std::size_t i = 0; i < domain.size(); ++i) {
          if (law.vars[i].profile != VarProfile::Nat) domain[i] = 0;
          product *= domain[i] ? domain[i] : 1;
        }
      }
      for (auto d : domain) sampled |= d == 0;
      const std::size_t count = sampled ? std::max<std::size_t>(product, cfg.samples) : product;

      for (SyncOp op : law.ops) {
        if (counterexample) break;
        ParseContext ctx;
        ctx.space = space;
        ctx.op = op;
        ctx.hooks = hooksFor(op);
        for (std::size_t i = 0; i < count && !counterexample; ++i) {
          const std::uint64_t seed = splitmix(splitmix(cfg.seed ^ fnv1a(law.id)) ^ (n << 32) ^ i);
          Generator gen(seed, space, cfg.budget);
          ctx.vars.clear();
          std::size_t digits = i % product;
          for (std::size_t k = 0; k < law.vars.size(); ++k) {
            const auto& v = law.vars[k];
            std::size_t value = 0;
            if (domain[k]) {
              value = digits % domain[k];
              digits /= domain[k];
            }
            switch (v.profile) {
              case VarProfile::Set:
                ctx.vars[v.name] = domain[k] ? StateSet(space, value) : gen.set();
                break;
              case VarProfile::Rel:
                ctx.vars[v.name] = domain[k] ? relFromIndex(space, value) : gen.rel();
                break;
              case VarProfile::Nat:
                ctx.vars[v.name] = static_cast<unsigned>(value);
                break;
              case VarProfile::Pafp: {
                auto s = gen.pafp();
                ctx.vars[v.name] = s.d;
                ctx.vars[v.name + "x"] = s.x;
                break;
              }
              default:
                ctx.vars[v.name] = gen.generate(v.profile);
            }
          }

          bool skip = false, capped = false;
          for (const auto& p : law.premises) {
            auto c = compare(parse(p.lhs, ctx), parse(p.rhs, ctx), p.cmp, res.backend, cfg);
            if (c.status == Status::Fails) skip = true;
            if (c.status == Status::Capped) capped = true;
            if (skip || capped) break;
          }
          if (skip) {
            ++res.skipped;
            continue;
          }
          if (capped) {
            ++res.inconclusive;
            continue;
          }
          const Command lhs = parse(law.lhs, ctx), rhs = parse(law.rhs, ctx);
          auto c = compare(lhs, rhs, law.cmp, res.backend, cfg);
          if (c.status == Status::Capped) {
            ++res.inconclusive;
            continue;
          }
          ++res.valuations;
          if (c.status == Status::Fails) {
            counterexample = true;
            std::string w = "size=" + std::to_string(n) + " op=" + syncOpName(op) + " valuation=" + std::to_string(i);
            for (const auto& [name, b] : ctx.vars) w += " $" + name + "=" + describe(b);
            w += " backend=" + std::string(c.backend) + " " + formatVerdict(c.verdict, *space);
            res.witness = w;
          }
        }
      }
    }
    switch (law.kind) {
      case LawKind::ExpectedFail:
        res.verdict = counterexample ? LawVerdict::ExpectedFailConfirmed : LawVerdict::ExpectedFailUnconfirmed;
        break;
      case LawKind::Conjecture:
        res.verdict = counterexample ? LawVerdict::ConjectureRefuted : LawVerdict::ConjectureHolds;
        break;
      default:
        if (counterexample)
          res.verdict = LawVerdict::Fail;
        else if (res.inconclusive > 0 || res.valuations == 0)
          res.verdict = LawVerdict::Inconclusive;
        else
          res.verdict = LawVerdict::Pass;
    }
  } catch (const std::exception& e) {
    res.verdict = LawVerdict::Error;
    res.error = e.what();
  }
  res.elapsedMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

Report checkAll(const std::vector<Law>& laws, const CheckConfig& cfg) {
  Report r;
  for (const auto& law : laws) r.results.push_back(checkLaw(law, cfg));
  return r;
}

namespace {

std::string quoted(std::string s) {
  for (auto& ch : s)
    if (ch == '"') ch = '\'';
  return "\"" + s + "\"";
}

}  // namespace

std::string formatResult(const LawResult& r, bool timing) {
  std::string out = "law=" + r.lawId + " kind=" + lawKindName(r.kind) + " verdict=" + lawVerdictName(r.verdict) +
                    " backend=" + backendName(r.backend) + " valuations=" + std::to_string(r.valuations) +
                    " skipped=" + std::to_string(r.skipped) + " inconclusive=" + std::to_string(r.inconclusive);
  if (timing) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", r.elapsedMs);
    out += std::string(" time_ms=") + buf;
  }
  if (!r.witness.empty()) out += " witness=" + quoted(r.witness);
  if (!r.error.empty()) out += " error=" + quoted(r.error);
  return out;
}

std::string formatReport(const Report& r, bool timing) {
  std::string out;
  std::map<std::string, std::size_t> counts;
  double total = 0;
  for (const auto& res : r.results) {
    out += formatResult(res, timing) + "\n";
    ++counts[lawVerdictName(res.verdict)];
    total += res.elapsedMs;
  }
  out += "summary\n";
  char buf[96];
  for (const auto& [name, n] : counts) {
    std::snprintf(buf, sizeof buf, "  %-30s %5zu\n", name.c_str(), n);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "  %-30s %5zu\n", "total", r.results.size());
  out += buf;
  if (timing) {
    std::snprintf(buf, sizeof buf, "  %-30s %9.1f\n", "time_ms", total);
    out += buf;
  }
  out += std::string("status: ") + (r.ok() ? "ok" : "FAILED") + "\n";
  return out;
}

}  // namespace sra
