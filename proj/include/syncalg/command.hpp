#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syncalg/relspace.hpp"

namespace sra {

// An atomic command: one program (pi) or environment (eps) transition, then
// termination. The atomic with no enabled transitions is magic.
struct AtomicCmd {
  StateRel prog;
  StateRel env;

  static AtomicCmd magic(const SpacePtr& space) { return {StateRel::empty(space), StateRel::empty(space)}; }
  static AtomicCmd pi(const StateRel& r) { return {r, StateRel::empty(r.space())}; }
  static AtomicCmd eps(const StateRel& r) { return {StateRel::empty(r.space()), r}; }
  static AtomicCmd step(const StateRel& r) { return {r, r}; }

  const SpacePtr& space() const { return prog.space(); }
  bool isMagic() const { return prog.isEmpty() && env.isEmpty(); }
  AtomicCmd operator|(const AtomicCmd& o) const { return {prog | o.prog, env | o.env}; }
  AtomicCmd restrictTo(const StateSet& p) const { return {prog.domainRestrict(p), env.domainRestrict(p)}; }

  friend bool operator==(const AtomicCmd& a, const AtomicCmd& b) { return a.prog == b.prog && a.env == b.env; }
};

// a v b ; abort
struct PseudoAtomic {
  AtomicCmd normal;
  AtomicCmd abortPart;

  bool isAtomic() const { return abortPart.isMagic(); }
  friend bool operator==(const PseudoAtomic& a, const PseudoAtomic& b) = default;
};

enum class SyncOp : std::uint8_t { Par, Conj };

const char* syncOpName(SyncOp op);

enum class Kind : std::uint8_t { Abort, Test, Atom, Choice, Seq, Par, Conj, Pow, Fin, Om, Inf };

struct Node;

// Immutable, hash-consed command term. Two commands built from the same
// constructors over the same space share one node, so equality is pointer
// equality.
class Command {
 public:
  Command() = default;

  static Command abort(const SpacePtr& space);
  static Command test(const StateSet& p);
  static Command nil(const SpacePtr& space) { return test(StateSet::all(space)); }
  static Command magic(const SpacePtr& space) { return test(StateSet::empty(space)); }
  static Command atom(const AtomicCmd& a);
  static Command choice(std::vector<Command> alternatives);
  static Command choice(Command a, Command b) { return choice(std::vector<Command>{std::move(a), std::move(b)}); }
  static Command seq(Command a, Command b);
  static Command par(Command a, Command b);
  static Command conj(Command a, Command b);
  static Command sync(SyncOp op, Command a, Command b) {
    return op == SyncOp::Par ? par(std::move(a), std::move(b)) : conj(std::move(a), std::move(b));
  }
  static Command pow(Command body, unsigned exponent);
  static Command fin(Command body);
  static Command om(Command body);
  static Command inf(Command body);
  static Command pseudo(const PseudoAtomic& x);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  const SpacePtr& space() const;
  // payload accessors; only meaningful for the matching kind
  const StateSet& testSet() const;
  const AtomicCmd& atomic() const;
  std::span<const Command> kids() const;
  const Command& kid(std::size_t i) const { return kids()[i]; }
  unsigned exponent() const;

  bool isTest() const { return kind() == Kind::Test; }
  bool isNil() const;
  bool isMagic() const;
  bool isIteration() const { return kind() == Kind::Fin || kind() == Kind::Om || kind() == Kind::Inf; }

  // deterministic structural hash (independent of allocation order)
  std::uint64_t hash() const;
  const Node* id() const { return node_.get(); }

  friend bool operator==(const Command& a, const Command& b) { return a.node_ == b.node_; }

 private:
  explicit Command(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  friend class Interner;

  std::shared_ptr<const Node> node_;
};

struct CommandHash {
  std::size_t operator()(const Command& c) const { return static_cast<std::size_t>(c.hash()); }
};

// Total order on terms that depends only on structure.
int compareStructural(const Command& a, const Command& b);

// Number of live interned nodes; used by tests to check reclamation.
std::size_t internedNodeCount();

// ---- normalization

struct NormalizeOptions {
  unsigned maxExponent = 32;
};

// Structural rewrites to a canonical form: flatten/sort/dedup choice, drop
// magic alternatives, merge atomics and tests, abort/magic left-annihilate,
// nil is a unit of sequencing, fixed iterations are unfolded.
Command normalize(const Command& c, const NormalizeOptions& opts = {});

// Smart constructors over operands that are already normal; the result is normal.
Command seqNormal(const Command& a, const Command& b);
Command syncNormal(SyncOp op, const Command& a, const Command& b);

// Recognizes a v b ; abort. Expects a normalized command.
std::optional<PseudoAtomic> asPseudoAtomic(const Command& c);

// ---- derived commands

struct DerivedForm {
  enum class Tag { Assert, Guar, Rely, Term, Fair, Idle, Evolve, Inv, Iota };
  Tag tag;
  std::optional<StateSet> set;
  std::optional<StateRel> rel;
  SyncOp op = SyncOp::Par;
};

Command elaborate(const DerivedForm& d, const SpacePtr& space);

Command assertCmd(const StateSet& p);
Command guarCmd(const StateRel& g);
Command relyCmd(const StateRel& r);
Command relyAltCmd(const StateRel& r);
Command termCmd(const SpacePtr& space);
Command fairCmd(const SpacePtr& space);
Command idleCmd(const SpacePtr& space);
Command evolveCmd(const StateRel& r);
Command evolveAltCmd(const StateRel& r);
Command invCmd(const StateSet& p);
AtomicCmd iotaAtomic(SyncOp op, const SpacePtr& space);
Command iotaCmd(SyncOp op, const SpacePtr& space);

}  // namespace sra
