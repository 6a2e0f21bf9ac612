#include <CLI11.hpp>
#include <iostream>

#include "syncalg/dsl.hpp"
#include "syncalg/expander.hpp"
#include "syncalg/lawbench.hpp"
#include "syncalg/semantics.hpp"

#ifndef SYNCALG_DEFAULT_CORPUS
#define SYNCALG_DEFAULT_CORPUS "corpus/laws.txt"
#endif

using namespace sra;

namespace {

SyncOp opFrom(const std::string& s) { return s == "cap" ? SyncOp::Conj : SyncOp::Par; }

Backend backendFrom(const std::string& s) {
  if (s == "automaton") return Backend::Automaton;
  if (s == "both") return Backend::Both;
  return Backend::Bounded;
}

struct SpaceFlags {
  std::size_t size = 2;
  std::vector<std::string> names;

  SpacePtr make() const { return names.empty() ? StateSpace::numbered(size) : StateSpace::make(names); }
  void attach(CLI::App* app) {
    app->add_option("--space-size", size, "number of states s0..s{n-1}")->check(CLI::Range(1, 8));
    app->add_option("--states", names, "explicit state names")->delimiter(',');
  }
};

struct RunFlags {
  CheckConfig cfg;
  std::string corpus = SYNCALG_DEFAULT_CORPUS;
  std::string backend;
  std::size_t size = 0;

  void attach(CLI::App* app) {
    app->add_option("--corpus", corpus, "law corpus file");
    app->add_option("--seed", cfg.seed, "generator seed");
    app->add_option("--samples", cfg.samples, "random valuations per law, space size and operator");
    app->add_option("--space-size", size, "check only this state-space size")->check(CLI::Range(1, 8));
    app->add_option("--depth", cfg.depth, "trace depth for the bounded backend");
    app->add_option("--budget", cfg.budget, "size budget of generated commands");
    app->add_option("--max-configs", cfg.caps.maxConfigs, "residual automaton cap");
    app->add_option("--backend", backend, "override every law's backend")
        ->check(CLI::IsMember({"bounded", "automaton", "both"}));
    app->add_flag("--timing", cfg.timing, "include elapsed times in the report");
  }
  CheckConfig config() const {
    CheckConfig c = cfg;
    if (size) c.sizes = {size};
    if (!backend.empty()) c.backend = backendFrom(backend);
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchronous refinement algebra workbench"};
  app.require_subcommand(1);

  // expand
  auto* ex = app.add_subcommand("expand", "print the expanded form of a command");
  std::string exExpr, exOp = "par";
  SpaceFlags exSpace;
  ex->add_option("expr", exExpr)->required();
  ex->add_option("--op", exOp, "what `sync` and `iota` mean")->check(CLI::IsMember({"par", "cap"}));
  exSpace.attach(ex);

  // traces
  auto* tr = app.add_subcommand("traces", "enumerate depth-bounded behaviours");
  std::string trExpr, trOp = "par", trStart = "s0";
  unsigned trDepth = 3;
  SpaceFlags trSpace;
  tr->add_option("expr", trExpr)->required();
  tr->add_option("--start", trStart, "start state");
  tr->add_option("--depth", trDepth, "trace depth");
  tr->add_option("--op", trOp)->check(CLI::IsMember({"par", "cap"}));
  trSpace.attach(tr);

  // refine
  auto* rf = app.add_subcommand("refine", "check e1 >= e2 or e1 == e2");
  std::string rfLhs, rfRel, rfRhs, rfOp = "par", rfBackend = "both";
  unsigned rfDepth = 5;
  std::size_t rfCap = 10000;
  SpaceFlags rfSpace;
  rf->add_option("lhs", rfLhs)->required();
  rf->add_option("relation", rfRel, ">= or ==")->required()->check(CLI::IsMember({">=", "=="}));
  rf->add_option("rhs", rfRhs)->required();
  rf->add_option("--op", rfOp)->check(CLI::IsMember({"par", "cap"}));
  rf->add_option("--backend", rfBackend)->check(CLI::IsMember({"bounded", "automaton", "both"}));
  rf->add_option("--depth", rfDepth);
  rf->add_option("--max-configs", rfCap);
  rfSpace.attach(rf);

  // check-law
  auto* cl = app.add_subcommand("check-law", "check one law of the corpus");
  std::string clId;
  RunFlags clFlags;
  cl->add_option("id", clId)->required();
  clFlags.attach(cl);

  // check-all
  auto* ca = app.add_subcommand("check-all", "check every law of the corpus");
  RunFlags caFlags;
  caFlags.attach(ca);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ex) {
      std::cout << formatExpanded(expand(parse(exExpr, exSpace.make(), opFrom(exOp))));
      return 0;
    }
    if (*tr) {
      auto space = trSpace.make();
      auto start = space->find(trStart);
      if (!start) throw UsageError("unknown start state " + trStart);
      std::cout << formatTraceSet(boundedTraces(parse(trExpr, space, opFrom(trOp)), *start, trDepth));
      return 0;
    }
    if (*rf) {
      auto space = rfSpace.make();
      const Command l = parse(rfLhs, space, opFrom(rfOp)), r = parse(rfRhs, space, opFrom(rfOp));
      const bool eq = rfRel == "==";
      bool ok = true;
      if (rfBackend != "automaton") {
        Verdict v = eq ? equalAtDepth(l, r, rfDepth) : refinesAtDepth(l, r, rfDepth);
        std::cout << "bounded(depth=" << rfDepth << "): " << formatVerdict(v, *space) << "\n";
        ok &= v.holds;
      }
      if (rfBackend != "bounded") {
        AutomatonOptions opts;
        opts.maxConfigs = rfCap;
        Verdict v = eq ? fullEqual(l, r, opts) : fullRefines(l, r, opts);
        std::cout << "automaton: " << formatVerdict(v, *space) << "\n";
        ok &= v.holds;
      }
      return ok ? 0 : 1;
    }
    if (*cl) {
      auto laws = loadCorpus(clFlags.corpus);
      for (const auto& law : laws)
        if (law.id == clId) {
          const auto cfg = clFlags.config();
          auto res = checkLaw(law, cfg);
          std::cout << formatResult(res, cfg.timing) << "\n";
          return isFailure(res) ? 1 : 0;
        }
      throw UsageError("no law named " + clId);
    }
    if (*ca) {
      const auto cfg = caFlags.config();
      auto report = checkAll(loadCorpus(caFlags.corpus), cfg);
      std::cout << formatReport(report, cfg.timing);
      return report.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
