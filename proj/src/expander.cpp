#include "syncalg/expander.hpp"

#include <algorithm>

#include "syncalg/dsl.hpp"

namespace sra {

AtomicCmd syncAtomic(SyncOp op, const AtomicCmd& a1, const AtomicCmd& a2) {
  if (op == SyncOp::Par) return {(a1.prog & a2.env) | (a1.env & a2.prog), a1.env & a2.env};
  return {a1.prog & a2.prog, a1.env & a2.env};
}

PseudoAtomic syncPseudo(SyncOp op, const PseudoAtomic& x1, const PseudoAtomic& x2) {
  return {syncAtomic(op, x1.normal, x2.normal), syncAtomic(op, x1.normal, x2.abortPart) |
                                                    syncAtomic(op, x1.abortPart, x2.normal) |
                                                    syncAtomic(op, x1.abortPart, x2.abortPart)};
}

bool operator<(const IterTag& a, const IterTag& b) {
  if (a.iter != b.iter) return compareStructural(a.iter, b.iter) < 0;
  return a.path < b.path;
}

namespace {

std::vector<IterTag> mergeTags(const std::vector<IterTag>& a, const std::vector<IterTag>& b) {
  std::vector<IterTag> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<IterTag> withPrefix(const std::vector<IterTag>& tags, char side) {
  std::vector<IterTag> out;
  out.reserve(tags.size());
  for (const auto& t : tags) out.push_back({t.iter, side + t.path});
  std::sort(out.begin(), out.end());
  return out;
}

int compareTags(const std::vector<IterTag>& a, const std::vector<IterTag>& b) {
  if (std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) return -1;
  if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())) return 1;
  return 0;
}

// Sorts, merges branches that share continuation and tags, drops magic steps.
void canonicalize(std::vector<Branch>& bs) {
  std::erase_if(bs, [](const Branch& b) { return b.step.isMagic(); });
  std::sort(bs.begin(), bs.end(), [](const Branch& x, const Branch& y) {
    if (x.cont != y.cont) return compareStructural(x.cont, y.cont) < 0;
    return compareTags(x.tags, y.tags) < 0;
  });
  std::vector<Branch> out;
  for (auto& b : bs) {
    if (!out.empty() && out.back().cont == b.cont && out.back().tags == b.tags)
      out.back().step = out.back().step | b.step;
    else
      out.push_back(std::move(b));
  }
  bs = std::move(out);
}

}  // namespace

const ExpandedForm& Expander::expand(const Command& c) {
  if (auto it = memo_.find(c); it != memo_.end()) return it->second;
  ExpandedForm e = compute(c);
  return memo_.emplace(c, std::move(e)).first->second;
}

ExpandedForm Expander::compute(const Command& c) {
  const auto& space = c.space();
  const StateSet all = StateSet::all(space), none = StateSet::empty(space);
  switch (c.kind()) {
    case Kind::Abort:
      return {none, none, {}};
    case Kind::Test:
      return {all, c.testSet(), {}};
    case Kind::Atom:
      return {all, none, {Branch{c.atomic(), Command::nil(space), {}}}};
    case Kind::Choice: {
      ExpandedForm out{all, none, {}};
      for (const auto& k : c.kids()) {
        const auto& e = expand(k);
        out.pN = out.pN & e.pN;
        out.pT = out.pT | e.pT;
        out.branches.insert(out.branches.end(), e.branches.begin(), e.branches.end());
      }
      canonicalize(out.branches);
      return out;
    }
    case Kind::Seq: {
      const Command& second = c.kid(1);
      const ExpandedForm& e1 = expand(c.kid(0));
      const ExpandedForm& e2 = expand(second);
      ExpandedForm out{e1.pN & (e1.pT.complement() | e2.pN), e1.pT & e2.pT, {}};
      for (const auto& b : e1.branches) out.branches.push_back({b.step, seqNormal(b.cont, second), b.tags});
      for (const auto& b : e2.branches) out.branches.push_back({b.step.restrictTo(e1.pT), b.cont, b.tags});
      canonicalize(out.branches);
      return out;
    }
    case Kind::Par:
    case Kind::Conj: {
      const SyncOp op = c.kind() == Kind::Par ? SyncOp::Par : SyncOp::Conj;
      const ExpandedForm& e1 = expand(c.kid(0));
      const ExpandedForm& e2 = expand(c.kid(1));
      ExpandedForm out{e1.pN & e2.pN, e1.pT & e2.pT, {}};
      for (const auto& b1 : e1.branches) {
        auto left = withPrefix(b1.tags, 'L');
        for (const auto& b2 : e2.branches) {
          AtomicCmd s = syncAtomic(op, b1.step, b2.step);
          if (s.isMagic()) continue;
          out.branches.push_back(
              {s, syncNormal(op, b1.cont, b2.cont), mergeTags(left, withPrefix(b2.tags, 'R'))});
        }
      }
      canonicalize(out.branches);
      return out;
    }
    case Kind::Pow:
      return expand(normalize(c));
    case Kind::Fin:
    case Kind::Om:
    case Kind::Inf: {
      const ExpandedForm& body = expand(c.kid(0));
      if (c.kind() != Kind::Fin && opts_.requireGuarded && !body.pT.isEmpty())
        throw UsageError("unguarded iteration: body of " + print(c) + " may terminate without a step");
      ExpandedForm out;
      if (c.kind() == Kind::Fin)
        out.pN = body.pN;
      else
        out.pN = body.pN & body.pT.complement();
      out.pT = c.kind() == Kind::Inf ? none : all;
      const std::vector<IterTag> self{IterTag{c, ""}};
      for (const auto& b : body.branches) out.branches.push_back({b.step, seqNormal(b.cont, c), mergeTags(b.tags, self)});
      canonicalize(out.branches);
      return out;
    }
  }
  throw UsageError("expand: unknown command kind");
}

ExpandedForm expand(const Command& c, ExpandOptions opts) {
  Expander ex(opts);
  return ex.expand(normalize(c));
}

Command reconstruct(const ExpandedForm& e) {
  std::vector<Command> alts{Command::test(e.pT)};
  for (const auto& b : e.branches) alts.push_back(Command::seq(Command::atom(b.step), b.cont));
  return Command::seq(assertCmd(e.pN), Command::choice(std::move(alts)));
}

Command nilSync(const Command& c) {
  auto e = expand(c);
  return normalize(Command::seq(assertCmd(e.pN), Command::test(e.pT)));
}

std::string formatExpanded(const ExpandedForm& e) {
  std::string out = "pN: " + formatSet(e.pN) + "\npT: " + formatSet(e.pT) + "\n";
  for (const auto& b : e.branches) {
    std::string step = print(Command::atom(b.step));
    if (step.find(" | ") != std::string::npos) step = "(" + step + ")";
    std::string cont = print(b.cont);
    const Kind k = b.cont.kind();
    if (k == Kind::Choice || k == Kind::Par || k == Kind::Conj || (k == Kind::Atom && cont.find(" | ") != std::string::npos))
      cont = "(" + cont + ")";
    out += "branch: " + step + " ; " + cont + "\n";
  }
  return out;
}

}  // namespace sra
