#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "syncalg/semantics.hpp"

namespace sra {

bool ResidualAutomaton::coinductive(const Edge& e) const {
  const auto& ts = tagSets[e.tags];
  return std::any_of(ts.begin(), ts.end(), [](const IterTag& t) { return t.coinductive(); });
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<const Node*, StateId>& p) const {
    return std::hash<const Node*>()(p.first) * 31 + p.second;
  }
};

struct FlatEdge {
  std::uint32_t from, to, tags;
};

// Finds the configs from which some infinite path unfolds om/inf iterations
// infinitely often while every fin iteration inside them is unfolded finitely
// often.
class DivergenceSolver {
 public:
  explicit DivergenceSolver(const ResidualAutomaton& a) : a_(a), accepting_(a.configs.size(), false) {
    for (std::uint32_t i = 0; i < a.configs.size(); ++i)
      for (const auto& e : a.configs[i].edges) edges_.push_back({i, e.target, e.tags});
  }

  std::vector<bool> run() {
    std::vector<std::uint32_t> nodes(a_.configs.size()), es(edges_.size());
    for (std::uint32_t i = 0; i < nodes.size(); ++i) nodes[i] = i;
    for (std::uint32_t i = 0; i < es.size(); ++i) es[i] = i;
    solve(nodes, es);
    return accepting_;
  }

 private:
  // the fin tag f is harmless below a coinductive tag o that encloses it
  bool dominated(const IterTag& f, const IterTag& o) {
    if (o.path.size() > f.path.size() || f.path.compare(0, o.path.size(), o.path) != 0) return false;
    auto it = below_.find(o.iter.id());
    if (it == below_.end()) {
      std::unordered_set<const Node*> seen;
      std::vector<Command> stack{o.iter.kid(0)};
      while (!stack.empty()) {
        Command c = stack.back();
        stack.pop_back();
        if (!seen.insert(c.id()).second) continue;
        for (const auto& k : c.kids()) stack.push_back(k);
      }
      it = below_.emplace(o.iter.id(), std::move(seen)).first;
    }
    return it->second.count(f.iter.id()) > 0;
  }

  // Tarjan over the subgraph; returns components with at least one edge.
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> components(
      const std::vector<std::uint32_t>& nodes, const std::vector<std::uint32_t>& es) {
    std::unordered_map<std::uint32_t, std::uint32_t> local;
    for (std::uint32_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;
    std::vector<std::vector<std::uint32_t>> adj(nodes.size());
    for (auto e : es) adj[local[edges_[e].from]].push_back(local[edges_[e].to]);

    const std::uint32_t none = UINT32_MAX;
    std::vector<std::uint32_t> index(nodes.size(), none), low(nodes.size()), comp(nodes.size(), none);
    std::vector<bool> onStack(nodes.size(), false);
    std::vector<std::uint32_t> stack;
    std::uint32_t counter = 0, ncomp = 0;
    for (std::uint32_t root = 0; root < nodes.size(); ++root) {
      if (index[root] != none) continue;
      std::vector<std::pair<std::uint32_t, std::size_t>> call{{root, 0}};
      index[root] = low[root] = counter++;
      stack.push_back(root);
      onStack[root] = true;
      while (!call.empty()) {
        auto& [v, pos] = call.back();
        if (pos < adj[v].size()) {
          std::uint32_t w = adj[v][pos++];
          if (index[w] == none) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            onStack[w] = true;
            call.emplace_back(w, 0);
          } else if (onStack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
          continue;
        }
        if (low[v] == index[v]) {
          std::uint32_t w;
          do {
            w = stack.back();
            stack.pop_back();
            onStack[w] = false;
            comp[w] = ncomp;
          } while (w != v);
          ++ncomp;
        }
        std::uint32_t done = v;
        call.pop_back();
        if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
    }
    std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> out(ncomp);
    for (std::uint32_t i = 0; i < nodes.size(); ++i) out[comp[i]].first.push_back(nodes[i]);
    for (auto e : es) {
      auto cf = comp[local[edges_[e].from]];
      if (cf == comp[local[edges_[e].to]]) out[cf].second.push_back(e);
    }
    std::erase_if(out, [](const auto& c) { return c.second.empty(); });
    return out;
  }

  void solve(const std::vector<std::uint32_t>& nodes, const std::vector<std::uint32_t>& es) {
    for (auto& [members, internal] : components(nodes, es)) {
      std::vector<IterTag> all;
      for (auto e : internal) {
        const auto& ts = a_.tagSets[edges_[e].tags];
        all.insert(all.end(), ts.begin(), ts.end());
      }
      std::sort(all.begin(), all.end());
      all.erase(std::unique(all.begin(), all.end()), all.end());
      std::vector<IterTag> co, bad;
      for (const auto& t : all)
        if (t.coinductive()) co.push_back(t);
      for (const auto& t : all) {
        if (t.coinductive()) continue;
        if (std::none_of(co.begin(), co.end(), [&](const IterTag& o) { return dominated(t, o); })) bad.push_back(t);
      }
      if (bad.empty()) {
        if (!co.empty())
          for (auto m : members) accepting_[m] = true;
        continue;
      }
      std::vector<std::uint32_t> kept;
      for (auto e : internal) {
        const auto& ts = a_.tagSets[edges_[e].tags];
        bool hit = std::any_of(ts.begin(), ts.end(),
                               [&](const IterTag& t) { return std::binary_search(bad.begin(), bad.end(), t); });
        if (!hit) kept.push_back(e);
      }
      if (!kept.empty()) solve(members, kept);
    }
  }

  const ResidualAutomaton& a_;
  std::vector<FlatEdge> edges_;
  std::vector<bool> accepting_;
  std::unordered_map<const Node*, std::unordered_set<const Node*>> below_;
};

// configs that can reach a marked one
std::vector<bool> backwardClosure(const ResidualAutomaton& a, std::vector<bool> marked) {
  std::vector<std::vector<std::uint32_t>> preds(a.configs.size());
  for (std::uint32_t i = 0; i < a.configs.size(); ++i)
    for (const auto& e : a.configs[i].edges) preds[e.target].push_back(i);
  std::vector<std::uint32_t> work;
  for (std::uint32_t i = 0; i < marked.size(); ++i)
    if (marked[i]) work.push_back(i);
  while (!work.empty()) {
    auto v = work.back();
    work.pop_back();
    for (auto p : preds[v])
      if (!marked[p]) {
        marked[p] = true;
        work.push_back(p);
      }
  }
  return marked;
}

}  // namespace

ResidualAutomaton buildAutomaton(const Command& c, const AutomatonOptions& opts) {
  ResidualAutomaton a;
  a.space = c.space();
  const std::size_t n = a.space->size();
  Expander ex(ExpandOptions{true});
  std::unordered_map<std::pair<const Node*, StateId>, std::uint32_t, PairHash> index;
  std::map<std::vector<IterTag>, std::uint32_t> tagIndex;
  auto intern = [&](const Command& cmd, StateId s) {
    auto [it, fresh] = index.try_emplace({cmd.id(), s}, static_cast<std::uint32_t>(a.configs.size()));
    if (fresh) {
      if (a.configs.size() >= opts.maxConfigs)
        throw CapExceeded("state explosion: more than " + std::to_string(opts.maxConfigs) + " residual configurations");
      a.configs.push_back({cmd, s, false, false, false, {}});
    }
    return it->second;
  };
  auto tagId = [&](const std::vector<IterTag>& tags) {
    auto [it, fresh] = tagIndex.try_emplace(tags, static_cast<std::uint32_t>(a.tagSets.size()));
    if (fresh) a.tagSets.push_back(tags);
    return it->second;
  };

  const Command nc = normalize(c);
  for (StateId s = 0; s < n; ++s) a.starts.push_back(intern(nc, s));
  for (std::uint32_t i = 0; i < a.configs.size(); ++i) {
    const Command cmd = a.configs[i].cmd;
    const StateId s = a.configs[i].state;
    const ExpandedForm& e = ex.expand(cmd);
    std::vector<ResidualAutomaton::Edge> edges;
    const bool aborts = !e.pN.contains(s);
    if (!aborts) {
      for (const auto& b : e.branches) {
        auto t = tagId(b.tags);
        for (StateId to : b.step.prog.imageOf(s).members())
          edges.push_back({static_cast<std::uint16_t>(to), intern(b.cont, to), t});
        for (StateId to : b.step.env.imageOf(s).members())
          edges.push_back({static_cast<std::uint16_t>(n + to), intern(b.cont, to), t});
      }
    }
    std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) {
      return std::tie(x.label, x.target, x.tags) < std::tie(y.label, y.target, y.tags);
    });
    auto& cfg = a.configs[i];
    cfg.abort = aborts;
    cfg.term = !aborts && e.pT.contains(s);
    cfg.edges = std::move(edges);
  }

  auto accepting = DivergenceSolver(a).run();
  auto div = backwardClosure(a, std::move(accepting));
  for (std::size_t i = 0; i < a.configs.size(); ++i) a.configs[i].div = div[i];
  return a;
}

namespace {

using ConfigSet = std::vector<std::uint32_t>;

struct SetHash {
  std::size_t operator()(const ConfigSet& s) const {
    std::size_t h = s.size();
    for (auto x : s) h = h * 1000003u ^ x;
    return h;
  }
};

class SetTable {
 public:
  std::uint32_t intern(ConfigSet s) {
    auto [it, fresh] = ids_.try_emplace(std::move(s), static_cast<std::uint32_t>(sets_.size()));
    if (fresh) sets_.push_back(it->first);
    return it->second;
  }
  const ConfigSet& at(std::uint32_t id) const { return sets_[id]; }

 private:
  std::unordered_map<ConfigSet, std::uint32_t, SetHash> ids_;
  std::vector<ConfigSet> sets_;
};

ConfigSet successors(const ResidualAutomaton& a, const ConfigSet& s, std::uint16_t label) {
  ConfigSet out;
  for (auto c : s)
    for (const auto& e : a.configs[c].edges)
      if (e.label == label) out.push_back(e.target);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Verdict refineAutomata(const ResidualAutomaton& a1, const ResidualAutomaton& a2, const AutomatonOptions& opts) {
  const std::size_t n = a1.space->size();
  // abort admits every infinite continuation
  auto closedDiv = [](const ResidualAutomaton& a) {
    std::vector<bool> m(a.configs.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = a.configs[i].div || a.configs[i].abort;
    return backwardClosure(a, std::move(m));
  };
  const auto div1 = closedDiv(a1), div2 = closedDiv(a2);
  auto any = [](const ResidualAutomaton& a, const ConfigSet& s, auto pred) {
    return std::any_of(s.begin(), s.end(), [&](std::uint32_t c) { return pred(a.configs[c], c); });
  };

  SetTable t1, t2;
  struct Item {
    StateId start;
    std::uint32_t s1, s2;
    std::int64_t parent;
    std::uint16_t label;
  };
  std::vector<Item> items;
  std::unordered_set<std::uint64_t> seen;
  auto push = [&](Item it) {
    if (!seen.insert((std::uint64_t{it.s1} << 32) | it.s2).second) return;
    if (seen.size() > opts.maxPairs)
      throw CapExceeded("state explosion: more than " + std::to_string(opts.maxPairs) + " product states");
    items.push_back(it);
  };
  for (StateId s = 0; s < n; ++s) push({s, t1.intern({a1.starts[s]}), t2.intern({a2.starts[s]}), -1, 0});

  auto witness = [&](std::size_t idx, Outcome o) {
    std::vector<std::uint16_t> labels;
    for (auto i = static_cast<std::int64_t>(idx); items[i].parent >= 0; i = items[i].parent) labels.push_back(items[i].label);
    std::reverse(labels.begin(), labels.end());
    Behavior b{items[idx].start, {}, o};
    StateId cur = b.start;
    for (auto l : labels) {
      StateId to = static_cast<StateId>(l % n);
      b.steps.push_back({static_cast<StepKind>(l / n), cur, to});
      cur = to;
    }
    return Verdict{false, b, false};
  };

  for (std::size_t head = 0; head < items.size(); ++head) {
    const Item it = items[head];
    const ConfigSet s1 = t1.at(it.s1), s2 = t2.at(it.s2);
    if (any(a1, s1, [](const auto& c, auto) { return c.abort; })) continue;
    if (s1.empty()) return witness(head, Outcome::Incomplete);
    if (any(a2, s2, [](const auto& c, auto) { return c.abort; })) return witness(head, Outcome::Aborted);
    if (any(a2, s2, [](const auto& c, auto) { return c.term; }) && !any(a1, s1, [](const auto& c, auto) { return c.term; }))
      return witness(head, Outcome::Terminated);
    if (any(a2, s2, [&](const auto&, auto i) { return div2[i]; }) && !any(a1, s1, [&](const auto&, auto i) { return div1[i]; }))
      return witness(head, Outcome::Diverges);
    std::vector<std::uint16_t> labels;
    for (auto c : s2)
      for (const auto& e : a2.configs[c].edges) labels.push_back(e.label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (auto l : labels)
      push({it.start, t1.intern(successors(a1, s1, l)), t2.intern(successors(a2, s2, l)),
            static_cast<std::int64_t>(head), l});
  }
  return {};
}

}  // namespace

Verdict fullRefines(const Command& c1, const Command& c2, const AutomatonOptions& opts) {
  if (c1.space() != c2.space()) throw UsageError("refinement between commands over different state spaces");
  return refineAutomata(buildAutomaton(c1, opts), buildAutomaton(c2, opts), opts);
}

Verdict fullEqual(const Command& c1, const Command& c2, const AutomatonOptions& opts) {
  if (c1.space() != c2.space()) throw UsageError("refinement between commands over different state spaces");
  auto a1 = buildAutomaton(c1, opts), a2 = buildAutomaton(c2, opts);
  Verdict v = refineAutomata(a1, a2, opts);
  if (!v.holds) return v;
  v = refineAutomata(a2, a1, opts);
  v.reversed = !v.holds;
  return v;
}

}  // namespace sra
