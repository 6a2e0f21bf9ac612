#include <algorithm>

#include "syncalg/lawbench.hpp"

namespace sra {

Generator::Generator(std::uint64_t seed, SpacePtr space, unsigned budget)
    : rng_(seed), space_(std::move(space)), budget_(budget) {}

StateSet Generator::set() { return {space_, rng_() & space_->allStatesMask()}; }

StateRel Generator::rel() {
  switch (below(10)) {
    case 0: return StateRel::universal(space_);
    case 1: return StateRel::identity(space_);
    default: return {space_, rng_() & space_->allPairsMask()};
  }
}

AtomicCmd Generator::atomic() {
  const auto univ = StateRel::universal(space_);
  switch (below(10)) {
    case 0: return AtomicCmd::pi(univ);
    case 1: return AtomicCmd::eps(univ);
    case 2: return AtomicCmd::step(univ);
    case 3: return AtomicCmd::pi(rel());
    case 4: return AtomicCmd::eps(rel());
    default: return {rel(), rel()};
  }
}

PseudoAtomic Generator::pseudo() {
  AtomicCmd a = atomic();
  AtomicCmd b = below(2) == 0 ? AtomicCmd::magic(space_) : AtomicCmd::eps(rel());
  return {a, b};
}

PafpSample Generator::pafp() {
  const auto univ = StateRel::universal(space_);
  switch (below(8)) {
    case 0: {
      auto x = Command::pseudo(pseudo());
      return {Command::fin(x), x, "fin"};
    }
    case 1: {
      auto x = Command::pseudo(pseudo());
      return {Command::om(x), x, "om"};
    }
    case 2: {
      auto g = rel();
      return {guarCmd(g), Command::atom({g, univ}), "guar"};
    }
    case 3: {
      auto r = rel();
      return {relyCmd(r), Command::pseudo({AtomicCmd::step(univ), AtomicCmd::eps(r.complement())}), "rely"};
    }
    case 4:
      return {termCmd(space_), Command::atom(AtomicCmd::step(univ)), "term"};
    case 5:
      return {fairCmd(space_), Command::atom(AtomicCmd::step(univ)), "fair"};
    case 6:
      return {idleCmd(space_), Command::atom({StateRel::identity(space_), univ}), "idle"};
    default: {
      auto r = rel();
      return {evolveCmd(r), Command::pseudo({{r, r}, AtomicCmd::eps(r.complement())}), "evolve"};
    }
  }
}

Command Generator::weak() {
  const unsigned b = std::max(1u, budget_ / 2);
  switch (below(8)) {
    case 0: return Command::om(guarded(b));
    case 1: return Command::fin(general(b));
    case 2: return Command::inf(guarded(b));
    case 3: return Command::test(set());
    case 4: return assertCmd(set());
    case 5: case 6: return pafp().d;
    default: return general(budget_);
  }
}

Command Generator::general(unsigned budget) {
  const unsigned roll = budget <= 1 ? below(40) : below(100);
  if (roll < 40) {
    // leaf: test 15, atomic 20, abort 5
    if (roll < 15) return Command::test(set());
    if (roll < 35) return Command::atom(atomic());
    return Command::abort(space_);
  }
  const unsigned left = (budget - 1) / 2 + (budget - 1) % 2, right = std::max(1u, (budget - 1) / 2);
  if (roll < 55) return Command::choice(general(left), general(right));
  if (roll < 75) return Command::seq(general(left), general(right));
  if (roll < 85) return Command::sync(below(2) == 0 ? SyncOp::Par : SyncOp::Conj, general(left), general(right));
  return iteration(budget - 1);
}

Command Generator::iteration(unsigned budget) {
  switch (below(15)) {
    case 0: case 1: case 2: case 3:
      return Command::fin(general(budget));
    case 4: case 5: case 6: case 7: case 8:
      return Command::om(guarded(budget));
    case 9: case 10:
      return Command::inf(guarded(budget));
    default:
      return Command::pow(general(budget), below(4));
  }
}

Command Generator::guarded(unsigned budget) {
  if (budget >= 4 && below(4) == 0) {
    const unsigned half = (budget - 1) / 2;
    return Command::choice(guarded(budget - 1 - half), guarded(std::max(1u, half)));
  }
  Command head = below(3) == 0 ? Command::pseudo(pseudo()) : Command::atom(atomic());
  if (budget <= 1) return head;
  return Command::seq(head, general(budget - 1));
}

Command Generator::generate(VarProfile profile) {
  switch (profile) {
    case VarProfile::Cmd: return general(budget_);
    case VarProfile::Guarded: return guarded(budget_);
    case VarProfile::Atomic: return Command::atom(atomic());
    case VarProfile::Pseudo: return Command::pseudo(pseudo());
    case VarProfile::Pafp: return pafp().d;
    case VarProfile::Weak: return weak();
    default: throw UsageError(std::string("profile ") + profileName(profile) + " does not produce a command");
  }
}

}  // namespace sra
