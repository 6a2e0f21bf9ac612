#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

#include "syncalg/semantics.hpp"

namespace sra {

const char* outcomeName(Outcome o) {
  switch (o) {
    case Outcome::Terminated: return "terminated";
    case Outcome::Aborted: return "aborted";
    case Outcome::Cut: return "cut";
    case Outcome::Incomplete: return "incomplete";
    case Outcome::Diverges: return "diverges";
  }
  return "?";
}

std::string formatBehavior(const Behavior& b, const StateSpace& space) {
  std::string out = space.name(b.start) + " <";
  bool first = true;
  for (const auto& st : b.steps) {
    if (!first) out += ' ';
    first = false;
    out += '(';
    out += st.kind == StepKind::Pi ? "pi" : "eps";
    out += ',' + space.name(st.from) + ',' + space.name(st.to) + ')';
  }
  out += "> ";
  out += outcomeName(b.outcome);
  return out;
}

std::string formatTraceSet(const TraceSet& t) {
  std::string out;
  for (const auto& b : t.behaviors) out += formatBehavior(b, *t.space) + "\n";
  return out;
}

std::string formatVerdict(const Verdict& v, const StateSpace& space) {
  if (v.holds) return "holds";
  std::string out = v.reversed ? "fails (rhs >= lhs)" : "fails";
  if (v.witness) out += " witness " + formatBehavior(*v.witness, space);
  return out;
}

namespace {

const TriePtr& leaf(bool term, bool abort) {
  static const TriePtr leaves[3] = {std::make_shared<TrieNode>(TrieNode{false, false, {}}),
                                    std::make_shared<TrieNode>(TrieNode{true, false, {}}),
                                    std::make_shared<TrieNode>(TrieNode{false, true, {}})};
  return abort ? leaves[2] : leaves[term ? 1 : 0];
}

TriePtr merge(const TriePtr& a, const TriePtr& b) {
  if (a == b || a->abort) return a;
  if (b->abort) return b;
  if (b->kids.empty() && !b->term) return a;
  if (a->kids.empty() && !a->term) return b;
  auto n = std::make_shared<TrieNode>();
  n->term = a->term || b->term;
  auto i = a->kids.begin(), j = b->kids.begin();
  while (i != a->kids.end() || j != b->kids.end()) {
    if (j == b->kids.end() || (i != a->kids.end() && i->first < j->first)) {
      n->kids.push_back(*i++);
    } else if (i == a->kids.end() || j->first < i->first) {
      n->kids.push_back(*j++);
    } else {
      n->kids.emplace_back(i->first, merge(i->second, j->second));
      ++i;
      ++j;
    }
  }
  return n;
}

StateId targetOf(std::uint16_t label, std::size_t n) { return static_cast<StateId>(label % n); }

std::uint16_t labelOf(StepKind k, StateId to, std::size_t n) {
  return static_cast<std::uint16_t>(static_cast<std::size_t>(k) * n + to);
}

// Adds the kids reachable through one atomic step.
void addSteps(std::vector<std::pair<std::uint16_t, TriePtr>>& kids, const AtomicCmd& a, StateId s, std::size_t n,
              const std::function<TriePtr(StateId)>& next) {
  for (StateId t : a.prog.imageOf(s).members()) kids.emplace_back(labelOf(StepKind::Pi, t, n), next(t));
  for (StateId t : a.env.imageOf(s).members()) kids.emplace_back(labelOf(StepKind::Eps, t, n), next(t));
}

// Sorts kids by label, merging duplicates.
void settle(std::vector<std::pair<std::uint16_t, TriePtr>>& kids) {
  std::stable_sort(kids.begin(), kids.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::pair<std::uint16_t, TriePtr>> out;
  for (auto& k : kids) {
    if (!out.empty() && out.back().first == k.first)
      out.back().second = merge(out.back().second, k.second);
    else
      out.push_back(std::move(k));
  }
  kids = std::move(out);
}

}  // namespace

std::size_t BoundedEngine::KeyHash::operator()(const Key& k) const {
  auto h = reinterpret_cast<std::uintptr_t>(k.node);
  return static_cast<std::size_t>(h * 0x9E3779B97F4A7C15ull ^ (std::uint64_t{k.state} << 32) ^ k.fuel);
}

TriePtr BoundedEngine::traces(const Command& c, StateId start, unsigned fuel) {
  Key key{c.id(), start, fuel};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second.second;
  TriePtr t = compute(c, start, fuel);
  memo_.emplace(key, std::make_pair(c, t));
  return t;
}

TriePtr BoundedEngine::graft(const TriePtr& root, StateId s0, unsigned fuel0, const Command& next, bool skipRoot,
                             bool rootAborts) {
  const std::size_t n = next.space()->size();
  std::map<std::tuple<const TrieNode*, StateId, unsigned>, TriePtr> done;
  auto go = [&](auto&& self, const TriePtr& t, StateId s, unsigned fuel, bool isRoot) -> TriePtr {
    if (t->abort) return t;
    if (isRoot && rootAborts && t->term) return leaf(false, true);
    if (!isRoot) {
      if (auto it = done.find({t.get(), s, fuel}); it != done.end()) return it->second;
    }
    auto out = std::make_shared<TrieNode>();
    out->kids.reserve(t->kids.size());
    for (const auto& [label, kid] : t->kids)
      out->kids.emplace_back(label, self(self, kid, targetOf(label, n), fuel - 1, false));
    TriePtr res = out;
    if (t->term && !isRoot) res = merge(res, traces(next, s, fuel));
    if (t->term && isRoot && !skipRoot) res = merge(res, traces(next, s, fuel));
    if (!isRoot) done.emplace(std::make_tuple(t.get(), s, fuel), res);
    return res;
  };
  return go(go, root, s0, fuel0, true);
}

TriePtr BoundedEngine::compute(const Command& c, StateId s, unsigned fuel) {
  const std::size_t n = c.space()->size();
  switch (c.kind()) {
    case Kind::Abort:
      return leaf(false, true);
    case Kind::Test:
      return leaf(c.testSet().contains(s), false);
    case Kind::Atom: {
      if (fuel == 0) return leaf(false, false);
      auto out = std::make_shared<TrieNode>();
      addSteps(out->kids, c.atomic(), s, n, [](StateId) { return leaf(true, false); });
      return out;
    }
    case Kind::Choice: {
      TriePtr acc = leaf(false, false);
      for (const auto& k : c.kids()) acc = merge(acc, traces(k, s, fuel));
      return acc;
    }
    case Kind::Seq:
      return graft(traces(c.kid(0), s, fuel), s, fuel, c.kid(1), false, false);
    case Kind::Par:
    case Kind::Conj: {
      const auto& e = expander_.expand(c);
      if (!e.pN.contains(s)) return leaf(false, true);
      auto out = std::make_shared<TrieNode>();
      out->term = e.pT.contains(s);
      if (fuel > 0) {
        for (const auto& b : e.branches)
          addSteps(out->kids, b.step, s, n, [&](StateId t) { return traces(b.cont, t, fuel - 1); });
        settle(out->kids);
      }
      return out;
    }
    case Kind::Pow:
      return traces(normalize(c), s, fuel);
    case Kind::Fin:
    case Kind::Om:
    case Kind::Inf: {
      TriePtr body = traces(c.kid(0), s, fuel);
      if (body->abort) return body;
      const bool gfp = c.kind() != Kind::Fin;
      TriePtr t = graft(body, s, fuel, c, true, gfp);
      if (t->abort || c.kind() == Kind::Inf) return t;
      if (t->term) return t;
      auto out = std::make_shared<TrieNode>(*t);
      out->term = true;
      return out;
    }
  }
  throw UsageError("bounded traces: unknown command kind");
}

namespace {

Behavior pathBehavior(const std::vector<std::uint16_t>& labels, StateId start, std::size_t n, Outcome o) {
  Behavior b{start, {}, o};
  StateId cur = start;
  for (auto l : labels) {
    StateId to = targetOf(l, n);
    b.steps.push_back({static_cast<StepKind>(l / n), cur, to});
    cur = to;
  }
  return b;
}

}  // namespace

Verdict BoundedEngine::refines(const Command& c1in, const Command& c2in, unsigned fuel) {
  if (c1in.space() != c2in.space()) throw UsageError("refinement between commands over different state spaces");
  const Command c1 = normalize(c1in), c2 = normalize(c2in);
  const std::size_t n = c1.space()->size();
  struct Item {
    StateId start;
    const TrieNode* n1;
    const TrieNode* n2;
    std::int64_t parent;
    std::uint16_t label;
    unsigned depth;
  };
  // tries must outlive the search
  std::vector<TriePtr> roots;
  std::vector<Item> items;
  for (StateId s = 0; s < n; ++s) {
    roots.push_back(traces(c1, s, fuel));
    roots.push_back(traces(c2, s, fuel));
    items.push_back({s, roots[roots.size() - 2].get(), roots.back().get(), -1, 0, 0});
  }
  auto witness = [&](std::size_t idx, Outcome o) {
    std::vector<std::uint16_t> labels;
    for (auto i = static_cast<std::int64_t>(idx); items[i].parent >= 0; i = items[i].parent) labels.push_back(items[i].label);
    std::reverse(labels.begin(), labels.end());
    return Verdict{false, pathBehavior(labels, items[idx].start, n, o), false};
  };
  for (std::size_t head = 0; head < items.size(); ++head) {
    const Item it = items[head];
    if (it.n1 && it.n1->abort) continue;
    if (!it.n1) return witness(head, it.depth == fuel ? Outcome::Cut : Outcome::Incomplete);
    if (it.n2->abort) return witness(head, Outcome::Aborted);
    if (it.n2->term && !it.n1->term) return witness(head, Outcome::Terminated);
    if (it.n1 == it.n2) continue;
    auto k1 = it.n1->kids.begin();
    for (const auto& [label, k2] : it.n2->kids) {
      while (k1 != it.n1->kids.end() && k1->first < label) ++k1;
      const TrieNode* m1 = (k1 != it.n1->kids.end() && k1->first == label) ? k1->second.get() : nullptr;
      items.push_back({it.start, m1, k2.get(), static_cast<std::int64_t>(head), label, it.depth + 1});
    }
  }
  return {};
}

Verdict BoundedEngine::equal(const Command& c1, const Command& c2, unsigned fuel) {
  Verdict v = refines(c1, c2, fuel);
  if (!v.holds) return v;
  v = refines(c2, c1, fuel);
  v.reversed = !v.holds;
  return v;
}

TraceSet boundedTraces(const Command& c, StateId start, unsigned fuel) {
  BoundedEngine engine;
  const Command nc = normalize(c);
  const std::size_t n = c.space()->size();
  if (start >= n) throw UsageError("start state out of range");
  TraceSet out{c.space(), fuel, {}};
  std::vector<std::uint16_t> path;
  auto walk = [&](auto&& self, const TrieNode& t) -> void {
    if (t.abort) {
      out.behaviors.push_back(pathBehavior(path, start, n, Outcome::Aborted));
      return;
    }
    if (t.term) out.behaviors.push_back(pathBehavior(path, start, n, Outcome::Terminated));
    if (path.size() == fuel && !t.term) out.behaviors.push_back(pathBehavior(path, start, n, Outcome::Cut));
    if (path.size() < fuel && !t.term && t.kids.empty())
      out.behaviors.push_back(pathBehavior(path, start, n, Outcome::Incomplete));
    for (const auto& [label, kid] : t.kids) {
      path.push_back(label);
      self(self, *kid);
      path.pop_back();
    }
  };
  TriePtr root = engine.traces(nc, start, fuel);
  walk(walk, *root);
  return out;
}

Verdict refinesAtDepth(const Command& c1, const Command& c2, unsigned fuel) {
  BoundedEngine e;
  return e.refines(c1, c2, fuel);
}

Verdict equalAtDepth(const Command& c1, const Command& c2, unsigned fuel) {
  BoundedEngine e;
  return e.equal(c1, c2, fuel);
}

}  // namespace sra
