#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "syncalg/command.hpp"
#include "syncalg/expander.hpp"

namespace sra {

enum class StepKind : std::uint8_t { Pi, Eps };

struct LabeledStep {
  StepKind kind;
  StateId from;
  StateId to;
  friend bool operator==(const LabeledStep&, const LabeledStep&) = default;
};

// Incomplete: a reached prefix (every command may stop observing early).
// Diverges: a prefix of an infinite behaviour.
enum class Outcome : std::uint8_t { Terminated, Aborted, Cut, Incomplete, Diverges };

const char* outcomeName(Outcome o);

struct Behavior {
  StateId start = 0;
  std::vector<LabeledStep> steps;
  Outcome outcome = Outcome::Incomplete;
  friend bool operator==(const Behavior&, const Behavior&) = default;
};

// s0 <(pi,s0,s1) (eps,s1,s1)> terminated
std::string formatBehavior(const Behavior& b, const StateSpace& space);

struct TraceSet {
  SpacePtr space;
  unsigned fuel = 0;
  // terminated, aborted and cut behaviours in lexicographic order
  std::vector<Behavior> behaviors;
};

std::string formatTraceSet(const TraceSet& t);

struct Verdict {
  bool holds = true;
  // a behaviour of the refining command the refined one does not allow
  std::optional<Behavior> witness;
  // equality checks: the failing direction was rhs >= lhs
  bool reversed = false;
};

std::string formatVerdict(const Verdict& v, const StateSpace& space);

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- depth-bounded traces

struct TrieNode;
using TriePtr = std::shared_ptr<const TrieNode>;

// Step labels: kind * |space| + target state.
struct TrieNode {
  bool term = false;
  bool abort = false;
  std::vector<std::pair<std::uint16_t, TriePtr>> kids;  // sorted by label
};

// Memoizing bounded-trace engine. Sequential operators are interpreted
// directly; synchronisations step through their expansion.
class BoundedEngine {
 public:
  TriePtr traces(const Command& c, StateId start, unsigned fuel);
  Verdict refines(const Command& c1, const Command& c2, unsigned fuel);
  Verdict equal(const Command& c1, const Command& c2, unsigned fuel);

 private:
  struct Key {
    const Node* node;
    StateId state;
    unsigned fuel;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  TriePtr compute(const Command& c, StateId s, unsigned fuel);
  TriePtr graft(const TriePtr& t, StateId s, unsigned fuel, const Command& next, bool skipRoot, bool rootAborts);

  Expander expander_;
  std::unordered_map<Key, std::pair<Command, TriePtr>, KeyHash> memo_;
};

TraceSet boundedTraces(const Command& c, StateId start, unsigned fuel);
Verdict refinesAtDepth(const Command& c1, const Command& c2, unsigned fuel);
Verdict equalAtDepth(const Command& c1, const Command& c2, unsigned fuel);

// ---- residual automaton

struct AutomatonOptions {
  std::size_t maxConfigs = 10000;
  // pairs visited by the refinement search
  std::size_t maxPairs = 500000;
};

struct ResidualAutomaton {
  struct Edge {
    std::uint16_t label;
    std::uint32_t target;
    std::uint32_t tags;  // index into tagSets
  };
  struct Config {
    Command cmd;
    StateId state;
    bool term = false;
    bool abort = false;
    // an infinite behaviour starts here
    bool div = false;
    std::vector<Edge> edges;  // sorted by label
  };

  SpacePtr space;
  std::vector<Config> configs;
  std::vector<std::vector<IterTag>> tagSets;
  // configs[starts[s]] is the command at start state s
  std::vector<std::uint32_t> starts;

  bool coinductive(const Edge& e) const;
};

// Throws CapExceeded past maxConfigs and UsageError on unguarded om/inf bodies.
ResidualAutomaton buildAutomaton(const Command& c, const AutomatonOptions& opts = {});

Verdict fullRefines(const Command& c1, const Command& c2, const AutomatonOptions& opts = {});
Verdict fullEqual(const Command& c1, const Command& c2, const AutomatonOptions& opts = {});

}  // namespace sra
