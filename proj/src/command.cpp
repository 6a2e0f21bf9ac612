#include "syncalg/command.hpp"

#include <mutex>
#include <unordered_map>

namespace sra {

struct Node {
  Kind kind;
  SpacePtr space;
  StateSet set;
  AtomicCmd atom;
  std::vector<Command> kids;
  unsigned exponent = 0;
  std::uint64_t hash = 0;
};

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  v *= 0x9E3779B97F4A7C15ull;
  v ^= v >> 29;
  h ^= v + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
  return h * 0xBF58476D1CE4E5B9ull;
}

struct Key {
  Kind kind;
  const StateSpace* space;
  std::uint64_t a;
  std::uint64_t b;
  unsigned exponent;
  std::vector<const Node*> kids;
  std::uint64_t hash;

  bool operator==(const Key& o) const {
    return kind == o.kind && space == o.space && a == o.a && b == o.b && exponent == o.exponent && kids == o.kids;
  }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const { return static_cast<std::size_t>(k.hash); }
};

}  // namespace

class Interner {
 public:
  static Interner& instance() {
    static Interner* in = new Interner();
    return *in;
  }

  Command make(Node proto) {
    Key key{proto.kind, proto.space.get(), 0, 0, proto.exponent, {}, 0};
    std::uint64_t h = mix(0x5A17, static_cast<std::uint64_t>(proto.kind));
    if (proto.kind == Kind::Test) {
      key.a = proto.set.bits();
      h = mix(h, key.a);
    } else if (proto.kind == Kind::Atom) {
      key.a = proto.atom.prog.bits();
      key.b = proto.atom.env.bits();
      h = mix(mix(h, key.a), key.b);
    }
    h = mix(h, proto.exponent);
    h = mix(h, proto.space->size());
    for (const auto& k : proto.kids) {
      key.kids.push_back(k.id());
      h = mix(h, k.hash());
    }
    key.hash = h;
    proto.hash = h;

    std::lock_guard lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) {
      if (auto alive = it->second.lock()) return Command(std::move(alive));
      table_.erase(it);
    }
    if (table_.size() >= sweepAt_) sweep();
    auto node = std::make_shared<const Node>(std::move(proto));
    table_.emplace(std::move(key), node);
    return Command(std::move(node));
  }

  std::size_t liveCount() {
    std::lock_guard lock(mu_);
    sweep();
    return table_.size();
  }

 private:
  void sweep() {
    for (auto it = table_.begin(); it != table_.end();) {
      if (it->second.expired())
        it = table_.erase(it);
      else
        ++it;
    }
    sweepAt_ = std::max<std::size_t>(4096, table_.size() * 2);
  }

  std::mutex mu_;
  std::unordered_map<Key, std::weak_ptr<const Node>, KeyHash> table_;
  std::size_t sweepAt_ = 4096;
};

namespace {

Command build(Kind kind, SpacePtr space, std::vector<Command> kids, unsigned exponent = 0) {
  for (const auto& k : kids) {
    if (!k.valid()) throw UsageError("empty command operand");
    if (k.space().get() != space.get() && k.space()->names() != space->names())
      throw UsageError("command operands range over different state spaces");
  }
  Node n{kind, std::move(space), {}, {}, std::move(kids), exponent, 0};
  return Interner::instance().make(std::move(n));
}

}  // namespace

const char* syncOpName(SyncOp op) { return op == SyncOp::Par ? "par" : "cap"; }

Command Command::abort(const SpacePtr& space) { return build(Kind::Abort, space, {}); }

Command Command::test(const StateSet& p) {
  Node n{Kind::Test, p.space(), p, {}, {}, 0, 0};
  return Interner::instance().make(std::move(n));
}

Command Command::atom(const AtomicCmd& a) {
  Node n{Kind::Atom, a.space(), {}, a, {}, 0, 0};
  return Interner::instance().make(std::move(n));
}

Command Command::choice(std::vector<Command> alternatives) {
  if (alternatives.empty()) throw UsageError("choice needs at least one alternative; use magic");
  auto space = alternatives.front().space();
  return build(Kind::Choice, std::move(space), std::move(alternatives));
}

Command Command::seq(Command a, Command b) {
  auto space = a.space();
  return build(Kind::Seq, std::move(space), {std::move(a), std::move(b)});
}

Command Command::par(Command a, Command b) {
  auto space = a.space();
  return build(Kind::Par, std::move(space), {std::move(a), std::move(b)});
}

Command Command::conj(Command a, Command b) {
  auto space = a.space();
  return build(Kind::Conj, std::move(space), {std::move(a), std::move(b)});
}

Command Command::pow(Command body, unsigned exponent) {
  auto space = body.space();
  return build(Kind::Pow, std::move(space), {std::move(body)}, exponent);
}

Command Command::fin(Command body) {
  auto space = body.space();
  return build(Kind::Fin, std::move(space), {std::move(body)});
}

Command Command::om(Command body) {
  auto space = body.space();
  return build(Kind::Om, std::move(space), {std::move(body)});
}

Command Command::inf(Command body) {
  auto space = body.space();
  return build(Kind::Inf, std::move(space), {std::move(body)});
}

Command Command::pseudo(const PseudoAtomic& x) {
  const auto& space = x.normal.space();
  if (x.abortPart.isMagic()) return atom(x.normal);
  return choice(atom(x.normal), seq(atom(x.abortPart), abort(space)));
}

Kind Command::kind() const { return node_->kind; }
const SpacePtr& Command::space() const { return node_->space; }
const StateSet& Command::testSet() const { return node_->set; }
const AtomicCmd& Command::atomic() const { return node_->atom; }
std::span<const Command> Command::kids() const { return node_->kids; }
unsigned Command::exponent() const { return node_->exponent; }
std::uint64_t Command::hash() const { return node_->hash; }
bool Command::isNil() const { return kind() == Kind::Test && testSet().isAll(); }
bool Command::isMagic() const { return kind() == Kind::Test && testSet().isEmpty(); }

int compareStructural(const Command& a, const Command& b) {
  if (a == b) return 0;
  if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  auto cmp = [](std::uint64_t x, std::uint64_t y) { return x == y ? 0 : (x < y ? -1 : 1); };
  if (a.kind() == Kind::Test)
    if (int c = cmp(a.testSet().bits(), b.testSet().bits())) return c;
  if (a.kind() == Kind::Atom) {
    if (int c = cmp(a.atomic().prog.bits(), b.atomic().prog.bits())) return c;
    if (int c = cmp(a.atomic().env.bits(), b.atomic().env.bits())) return c;
  }
  if (int c = cmp(a.exponent(), b.exponent())) return c;
  if (int c = cmp(a.space()->size(), b.space()->size())) return c;
  auto ka = a.kids(), kb = b.kids();
  if (int c = cmp(ka.size(), kb.size())) return c;
  for (std::size_t i = 0; i < ka.size(); ++i)
    if (int c = compareStructural(ka[i], kb[i])) return c;
  return 0;
}

std::size_t internedNodeCount() { return Interner::instance().liveCount(); }

// ---- derived commands

Command assertCmd(const StateSet& p) {
  const auto& space = p.space();
  return Command::choice(Command::nil(space), Command::seq(Command::test(p.complement()), Command::abort(space)));
}

Command guarCmd(const StateRel& g) {
  return Command::om(Command::atom({g, StateRel::universal(g.space())}));
}

Command relyCmd(const StateRel& r) {
  const auto& space = r.space();
  return Command::om(Command::pseudo({AtomicCmd::step(StateRel::universal(space)), AtomicCmd::eps(r.complement())}));
}

Command relyAltCmd(const StateRel& r) {
  const auto& space = r.space();
  return Command::om(Command::choice(
      {Command::atom(AtomicCmd::pi(StateRel::universal(space))), Command::atom(AtomicCmd::eps(r)),
       Command::seq(Command::atom(AtomicCmd::eps(r.complement())), Command::abort(space))}));
}

Command termCmd(const SpacePtr& space) {
  auto univ = StateRel::universal(space);
  return Command::seq(Command::fin(Command::atom(AtomicCmd::step(univ))), Command::om(Command::atom(AtomicCmd::eps(univ))));
}

Command fairCmd(const SpacePtr& space) {
  auto univ = StateRel::universal(space);
  auto envs = Command::fin(Command::atom(AtomicCmd::eps(univ)));
  return Command::seq(envs, Command::om(Command::seq(Command::atom(AtomicCmd::pi(univ)), envs)));
}

Command idleCmd(const SpacePtr& space) {
  return Command::conj(guarCmd(StateRel::identity(space)), termCmd(space));
}

Command evolveCmd(const StateRel& r) { return Command::conj(guarCmd(r), relyCmd(r)); }

Command evolveAltCmd(const StateRel& r) {
  return Command::om(Command::pseudo({{r, r}, AtomicCmd::eps(r.complement())}));
}

Command invCmd(const StateSet& p) { return Command::seq(assertCmd(p), evolveCmd(postr(p))); }

AtomicCmd iotaAtomic(SyncOp op, const SpacePtr& space) {
  auto univ = StateRel::universal(space);
  return op == SyncOp::Par ? AtomicCmd::eps(univ) : AtomicCmd::step(univ);
}

Command iotaCmd(SyncOp op, const SpacePtr& space) { return Command::atom(iotaAtomic(op, space)); }

Command elaborate(const DerivedForm& d, const SpacePtr& space) {
  auto needSet = [&]() -> const StateSet& {
    if (!d.set) throw UsageError("derived form needs a state set argument");
    return *d.set;
  };
  auto needRel = [&]() -> const StateRel& {
    if (!d.rel) throw UsageError("derived form needs a relation argument");
    return *d.rel;
  };
  switch (d.tag) {
    case DerivedForm::Tag::Assert: return assertCmd(needSet());
    case DerivedForm::Tag::Guar: return guarCmd(needRel());
    case DerivedForm::Tag::Rely: return relyCmd(needRel());
    case DerivedForm::Tag::Term: return termCmd(space);
    case DerivedForm::Tag::Fair: return fairCmd(space);
    case DerivedForm::Tag::Idle: return idleCmd(space);
    case DerivedForm::Tag::Evolve: return evolveCmd(needRel());
    case DerivedForm::Tag::Inv: return invCmd(needSet());
    case DerivedForm::Tag::Iota: return iotaCmd(d.op, space);
  }
  throw UsageError("unknown derived form");
}

}  // namespace sra
