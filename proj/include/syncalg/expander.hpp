#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "syncalg/command.hpp"

namespace sra {

AtomicCmd syncAtomic(SyncOp op, const AtomicCmd& a1, const AtomicCmd& a2);
PseudoAtomic syncPseudo(SyncOp op, const PseudoAtomic& x1, const PseudoAtomic& x2);

// Records that a step unfolded the iteration node `iter`. `path` locates the
// node below enclosing synchronisations ('L'/'R' per operand).
struct IterTag {
  Command iter;
  std::string path;

  bool coinductive() const { return iter.kind() == Kind::Om || iter.kind() == Kind::Inf; }
  friend bool operator==(const IterTag& a, const IterTag& b) { return a.iter == b.iter && a.path == b.path; }
};

bool operator<(const IterTag& a, const IterTag& b);

struct Branch {
  AtomicCmd step;
  Command cont;
  // sorted, unique
  std::vector<IterTag> tags;
};

struct ExpandedForm {
  StateSet pN;
  StateSet pT;
  std::vector<Branch> branches;
};

struct ExpandOptions {
  // reject om/inf bodies that may terminate without a step
  bool requireGuarded = false;
};

// Memoizing expansion over normalized commands. Continuations are normal.
class Expander {
 public:
  explicit Expander(ExpandOptions opts = {}) : opts_(opts) {}

  const ExpandedForm& expand(const Command& c);
  std::size_t memoSize() const { return memo_.size(); }

 private:
  ExpandedForm compute(const Command& c);

  ExpandOptions opts_;
  std::unordered_map<Command, ExpandedForm, CommandHash> memo_;
};

// Normalizes, then expands.
ExpandedForm expand(const Command& c, ExpandOptions opts = {});

// {pN} ; (test pT | a1 ; c1 | ...)
Command reconstruct(const ExpandedForm& e);

// c synchronised with nil: {pN} ; test pT
Command nilSync(const Command& c);

// Lines "pN: ..", "pT: ..", then one "branch: <atomic> ; <cont>" per branch.
std::string formatExpanded(const ExpandedForm& e);

}  // namespace sra
