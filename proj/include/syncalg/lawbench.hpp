#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "syncalg/command.hpp"
#include "syncalg/semantics.hpp"

namespace sra {

// ---- corpus

enum class LawKind { Equality, Refinement, Conditional, Conjecture, ExpectedFail };
enum class Cmp { Equal, Refines };
enum class Backend { Bounded, Automaton, Both };

// How a metavariable is drawn. Pafp binds `$name` to a pseudo-atomic fixed
// point d and `$namex` to its pseudo-atomic x (d = nil | x ; d). Weak draws
// candidates for d >= d;d (iterations, tests, assertions, fixed points) mixed
// with general commands.
enum class VarProfile { Set, Rel, Nat, Cmd, Guarded, Atomic, Pseudo, Pafp, Weak };

const char* lawKindName(LawKind k);
const char* backendName(Backend b);
const char* profileName(VarProfile p);

struct VarDecl {
  std::string name;
  VarProfile profile;
};

struct Premise {
  std::string lhs;
  Cmp cmp = Cmp::Equal;
  std::string rhs;
};

struct Law {
  std::string id;
  LawKind kind = LawKind::Equality;
  std::vector<VarDecl> vars;
  std::vector<Premise> premises;
  Cmp cmp = Cmp::Equal;
  std::vector<SyncOp> ops{SyncOp::Par, SyncOp::Conj};
  Backend backend = Backend::Bounded;
  // empty: use the run's default sizes
  std::vector<std::size_t> sizes;
  std::string lhs;
  std::string rhs;
  std::string ref;
  int line = 0;
};

class CorpusError : public std::runtime_error {
 public:
  CorpusError(const std::string& what, int line)
      : std::runtime_error("corpus line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Stanzas separated by `law <id>` headers; `#` starts a comment line.
std::vector<Law> parseCorpus(std::string_view text);
std::vector<Law> loadCorpus(const std::string& path);

// ---- generation

struct PafpSample {
  Command d;
  Command x;
  std::string form;  // fin, om, guar, rely, term, fair, idle, evolve
};

// Deterministic random terms: same (seed, space, budget) gives the same
// sequence of terms.
class Generator {
 public:
  Generator(std::uint64_t seed, SpacePtr space, unsigned budget = 7);

  Command generate(VarProfile profile);
  Command general(unsigned budget);
  // never terminates without a step
  Command guarded(unsigned budget);
  AtomicCmd atomic();
  PseudoAtomic pseudo();
  PafpSample pafp();
  Command weak();
  StateSet set();
  StateRel rel();
  unsigned budget() const { return budget_; }

 private:
  unsigned below(unsigned n) { return static_cast<unsigned>(rng_() % n); }
  Command iteration(unsigned budget);

  std::mt19937_64 rng_;
  SpacePtr space_;
  unsigned budget_;
};

// ---- checking

struct CheckConfig {
  std::uint64_t seed = 1;
  unsigned samples = 200;
  unsigned depth = 5;
  unsigned budget = 7;
  std::vector<std::size_t> sizes{2, 3};
  std::optional<Backend> backend;  // overrides every law's backend
  AutomatonOptions caps;
  // set/relation sweeps larger than this are sampled instead
  std::size_t exhaustiveLimit = 4096;
  bool timing = false;
};

enum class LawVerdict {
  Pass,
  Fail,
  ExpectedFailConfirmed,
  ExpectedFailUnconfirmed,
  ConjectureHolds,
  ConjectureRefuted,
  Inconclusive,
  Error
};

const char* lawVerdictName(LawVerdict v);

struct LawResult {
  std::string lawId;
  LawKind kind = LawKind::Equality;
  LawVerdict verdict = LawVerdict::Pass;
  Backend backend = Backend::Bounded;
  std::size_t valuations = 0;    // compared
  std::size_t skipped = 0;       // premise did not hold
  std::size_t inconclusive = 0;  // cap exceeded
  std::string witness;
  std::string error;
  double elapsedMs = 0;
};

// Whether the result makes check-all exit nonzero.
bool isFailure(const LawResult& r);

LawResult checkLaw(const Law& law, const CheckConfig& cfg);

struct Report {
  std::vector<LawResult> results;
  bool ok() const;
};

Report checkAll(const std::vector<Law>& laws, const CheckConfig& cfg);

// law=<id> kind=<k> verdict=<v> backend=<b> valuations=N skipped=N inconclusive=N [time_ms=T] [witness="..."]
std::string formatResult(const LawResult& r, bool timing);
// one line per law, then a summary table
std::string formatReport(const Report& r, bool timing);

}  // namespace sra
