#include <algorithm>
#include <unordered_map>

#include "syncalg/command.hpp"

namespace sra {
namespace {

class Normalizer {
 public:
  explicit Normalizer(const NormalizeOptions& opts) : opts_(opts) {}

  Command run(const Command& c) {
    if (auto it = memo_.find(c.id()); it != memo_.end()) return it->second.second;
    Command out = step(c);
    memo_.emplace(c.id(), std::make_pair(c, out));
    return out;
  }

 public:
  // exposed for the smart constructors below
  static Command seqOf(const Command& a, const Command& b) { return makeSeq(a.space(), {a, b}); }
  static Command syncOf(SyncOp op, const Command& a, const Command& b) { return makeSync(op, a, b); }

 private:
  Command step(const Command& c) {
    const auto& space = c.space();
    switch (c.kind()) {
      case Kind::Abort:
      case Kind::Test:
        return c;
      case Kind::Atom:
        return c.atomic().isMagic() ? Command::magic(space) : c;
      case Kind::Choice: {
        std::vector<Command> alts;
        for (const auto& k : c.kids()) alts.push_back(run(k));
        return makeChoice(space, std::move(alts));
      }
      case Kind::Seq:
        return makeSeq(space, {run(c.kid(0)), run(c.kid(1))});
      case Kind::Par:
      case Kind::Conj: {
        return makeSync(c.kind() == Kind::Par ? SyncOp::Par : SyncOp::Conj, run(c.kid(0)), run(c.kid(1)));
      }
      case Kind::Pow: {
        if (c.exponent() > opts_.maxExponent)
          throw UsageError("iteration exponent " + std::to_string(c.exponent()) + " exceeds the configured bound " +
                           std::to_string(opts_.maxExponent));
        Command body = run(c.kid(0));
        std::vector<Command> parts(c.exponent(), body);
        return makeSeq(space, std::move(parts));
      }
      case Kind::Fin:
        return Command::fin(run(c.kid(0)));
      case Kind::Om:
        return Command::om(run(c.kid(0)));
      case Kind::Inf:
        return Command::inf(run(c.kid(0)));
    }
    return c;
  }

  static Command makeSync(SyncOp op, const Command& a, const Command& b) {
    const auto& space = a.space();
    if (a.kind() == Kind::Abort || b.kind() == Kind::Abort) return Command::abort(space);
    if (a.isTest() && b.isTest()) return Command::test(a.testSet() & b.testSet());
    return Command::sync(op, a, b);
  }

  // Operands are already normal.
  static Command makeSeq(const SpacePtr& space, std::vector<Command> parts) {
    std::vector<Command> flat;
    auto push = [&](auto&& self, const Command& c) -> void {
      if (c.kind() == Kind::Seq) {
        for (const auto& k : c.kids()) self(self, k);
      } else {
        flat.push_back(c);
      }
    };
    for (const auto& p : parts) push(push, p);

    std::vector<Command> out;
    for (const auto& c : flat) {
      if (c.isNil()) continue;
      if (c.isTest() && !out.empty() && out.back().isTest()) {
        out.back() = Command::test(out.back().testSet() & c.testSet());
      } else {
        out.push_back(c);
      }
      const auto& last = out.back();
      if (last.isMagic() || last.kind() == Kind::Abort) break;
      if (last.isNil()) out.pop_back();
    }
    if (out.empty()) return Command::nil(space);
    Command acc = out.back();
    for (auto i = out.size() - 1; i-- > 0;) acc = Command::seq(out[i], acc);
    return acc;
  }

  static Command makeChoice(const SpacePtr& space, std::vector<Command> alts) {
    std::vector<Command> flat;
    for (const auto& a : alts) {
      if (a.kind() == Kind::Choice) {
        for (const auto& k : a.kids()) flat.push_back(k);
      } else {
        flat.push_back(a);
      }
    }

    std::optional<StateSet> tests;
    std::optional<AtomicCmd> atoms;
    // head atomic grouped by continuation: a1;c v a2;c = (a1 v a2);c
    std::vector<std::pair<Command, AtomicCmd>> guarded;
    std::vector<Command> rest;
    for (const auto& a : flat) {
      if (a.kind() == Kind::Abort) return a;
      if (a.isMagic()) continue;
      if (a.isTest()) {
        tests = tests ? (*tests | a.testSet()) : a.testSet();
      } else if (a.kind() == Kind::Atom) {
        atoms = atoms ? (*atoms | a.atomic()) : a.atomic();
      } else if (a.kind() == Kind::Seq && a.kid(0).kind() == Kind::Atom) {
        const Command& cont = a.kid(1);
        auto it = std::find_if(guarded.begin(), guarded.end(), [&](const auto& g) { return g.first == cont; });
        if (it == guarded.end())
          guarded.emplace_back(cont, a.kid(0).atomic());
        else
          it->second = it->second | a.kid(0).atomic();
      } else {
        rest.push_back(a);
      }
    }
    if (tests && !tests->isEmpty()) rest.push_back(Command::test(*tests));
    if (atoms) rest.push_back(Command::atom(*atoms));
    for (const auto& [cont, head] : guarded) rest.push_back(Command::seq(Command::atom(head), cont));

    std::sort(rest.begin(), rest.end(), [](const Command& a, const Command& b) { return compareStructural(a, b) < 0; });
    rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
    if (rest.empty()) return Command::magic(space);
    if (rest.size() == 1) return rest.front();
    return Command::choice(std::move(rest));
  }

  NormalizeOptions opts_;
  std::unordered_map<const Node*, std::pair<Command, Command>> memo_;
};

void mergeInto(PseudoAtomic& acc, const PseudoAtomic& x) {
  acc.normal = acc.normal | x.normal;
  acc.abortPart = acc.abortPart | x.abortPart;
}

}  // namespace

Command normalize(const Command& c, const NormalizeOptions& opts) {
  Normalizer n(opts);
  return n.run(c);
}

Command seqNormal(const Command& a, const Command& b) { return Normalizer::seqOf(a, b); }
Command syncNormal(SyncOp op, const Command& a, const Command& b) { return Normalizer::syncOf(op, a, b); }

std::optional<PseudoAtomic> asPseudoAtomic(const Command& c) {
  const auto& space = c.space();
  auto magic = AtomicCmd::magic(space);
  switch (c.kind()) {
    case Kind::Test:
      if (c.isMagic()) return PseudoAtomic{magic, magic};
      return std::nullopt;
    case Kind::Atom:
      return PseudoAtomic{c.atomic(), magic};
    case Kind::Seq:
      if (c.kid(0).kind() == Kind::Atom && c.kid(1).kind() == Kind::Abort) return PseudoAtomic{magic, c.kid(0).atomic()};
      return std::nullopt;
    case Kind::Choice: {
      PseudoAtomic acc{magic, magic};
      for (const auto& k : c.kids()) {
        auto x = asPseudoAtomic(k);
        if (!x) return std::nullopt;
        mergeInto(acc, *x);
      }
      return acc;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace sra
