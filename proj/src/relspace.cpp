#include "syncalg/relspace.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace sra {
namespace {

// Relations use a fixed row stride of 8 bits: pair (i, j) lives at bit 8*i + j.
constexpr unsigned kStride = 8;

void requireSameSpace(const SpacePtr& a, const SpacePtr& b) {
  if (a.get() != b.get() && (!a || !b || a->names() != b->names()))
    throw UsageError("operands range over different state spaces");
}

}  // namespace

StateSpace::StateSpace(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw UsageError("a state space needs at least one state");
  if (names_.size() > kMaxStates)
    throw UsageError("state spaces are limited to " + std::to_string(kMaxStates) + " states");
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) throw UsageError("duplicate state name");
}

SpacePtr StateSpace::numbered(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
  return make(std::move(names));
}

// One instance per name list, so commands over equal spaces intern together.
SpacePtr StateSpace::make(std::vector<std::string> names) {
  static std::mutex lock;
  static std::map<std::vector<std::string>, SpacePtr> cache;
  std::lock_guard guard(lock);
  auto it = cache.find(names);
  if (it != cache.end()) return it->second;
  auto space = std::make_shared<const StateSpace>(names);
  cache.emplace(std::move(names), space);
  return space;
}

std::optional<StateId> StateSpace::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<StateId>(it - names_.begin());
}

std::uint64_t StateSpace::allStatesMask() const { return (std::uint64_t{1} << size()) - 1; }

std::uint64_t StateSpace::allPairsMask() const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < size(); ++i) m |= allStatesMask() << (kStride * i);
  return m;
}

// ---- StateSet

StateSet::StateSet(SpacePtr space, std::uint64_t bits) : space_(std::move(space)), bits_(bits) {
  if (!space_) throw UsageError("state set without a state space");
  if (bits_ & ~space_->allStatesMask()) throw UsageError("state set member outside its space");
}

StateSet StateSet::of(SpacePtr space, std::initializer_list<StateId> members) {
  std::uint64_t bits = 0;
  for (StateId s : members) bits |= std::uint64_t{1} << s;
  return {std::move(space), bits};
}

std::vector<StateId> StateSet::members() const {
  std::vector<StateId> out;
  for (std::size_t s = 0; s < space_->size(); ++s)
    if (contains(static_cast<StateId>(s))) out.push_back(static_cast<StateId>(s));
  return out;
}

StateSet StateSet::complement() const { return {space_, ~bits_ & space_->allStatesMask()}; }

StateSet StateSet::operator&(const StateSet& o) const {
  requireSameSpace(space_, o.space_);
  return {space_, bits_ & o.bits_};
}

StateSet StateSet::operator|(const StateSet& o) const {
  requireSameSpace(space_, o.space_);
  return {space_, bits_ | o.bits_};
}

bool StateSet::subsetOf(const StateSet& o) const {
  requireSameSpace(space_, o.space_);
  return (bits_ & ~o.bits_) == 0;
}

// ---- StateRel

StateRel::StateRel(SpacePtr space, std::uint64_t bits) : space_(std::move(space)), bits_(bits) {
  if (!space_) throw UsageError("relation without a state space");
  if (bits_ & ~space_->allPairsMask()) throw UsageError("relation pair outside its space");
}

StateRel StateRel::identity(const SpacePtr& space) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < space->size(); ++i) bits |= std::uint64_t{1} << (kStride * i + i);
  return {space, bits};
}

StateRel StateRel::universal(const SpacePtr& space) { return {space, space->allPairsMask()}; }

StateRel StateRel::of(SpacePtr space, std::initializer_list<std::pair<StateId, StateId>> pairs) {
  std::uint64_t bits = 0;
  for (auto [a, b] : pairs) bits |= std::uint64_t{1} << (kStride * a + b);
  return {std::move(space), bits};
}

bool StateRel::contains(StateId from, StateId to) const { return (bits_ >> (kStride * from + to)) & 1u; }

std::vector<std::pair<StateId, StateId>> StateRel::pairs() const {
  std::vector<std::pair<StateId, StateId>> out;
  const auto n = space_->size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (contains(static_cast<StateId>(i), static_cast<StateId>(j)))
        out.emplace_back(static_cast<StateId>(i), static_cast<StateId>(j));
  return out;
}

std::uint64_t StateRel::imageMask(StateId from) const { return (bits_ >> (kStride * from)) & 0xFFu; }

StateRel StateRel::complement() const { return {space_, ~bits_ & space_->allPairsMask()}; }

StateRel StateRel::operator&(const StateRel& o) const {
  requireSameSpace(space_, o.space_);
  return {space_, bits_ & o.bits_};
}

StateRel StateRel::operator|(const StateRel& o) const {
  requireSameSpace(space_, o.space_);
  return {space_, bits_ | o.bits_};
}

StateRel StateRel::compose(const StateRel& o) const {
  requireSameSpace(space_, o.space_);
  std::uint64_t bits = 0;
  const auto n = space_->size();
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t row = 0;
    const auto mid = imageMask(static_cast<StateId>(i));
    for (std::size_t j = 0; j < n; ++j)
      if ((mid >> j) & 1u) row |= o.imageMask(static_cast<StateId>(j));
    bits |= row << (kStride * i);
  }
  return {space_, bits};
}

StateRel StateRel::domainRestrict(const StateSet& p) const {
  requireSameSpace(space_, p.space());
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < space_->size(); ++i)
    if (p.contains(static_cast<StateId>(i))) bits |= bits_ & (std::uint64_t{0xFF} << (kStride * i));
  return {space_, bits};
}

bool StateRel::subsetOf(const StateRel& o) const {
  requireSameSpace(space_, o.space_);
  return (bits_ & ~o.bits_) == 0;
}

// ---- free functions

StateSet complementSet(const StateSet& p) { return p.complement(); }
StateRel idRel(const SpacePtr& space) { return StateRel::identity(space); }
StateRel univRel(const SpacePtr& space) { return StateRel::universal(space); }

StateRel prer(const StateSet& p) { return StateRel::universal(p.space()).domainRestrict(p); }

StateRel postr(const StateSet& p) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < p.space()->size(); ++i) bits |= p.bits() << (kStride * i);
  return {p.space(), bits};
}

std::string formatSet(const StateSet& p) {
  std::string out = "{";
  bool first = true;
  for (StateId s : p.members()) {
    if (!first) out += ",";
    out += p.space()->name(s);
    first = false;
  }
  return out + "}";
}

std::string formatRel(const StateRel& r) {
  if (r.isEmpty()) return "{}";
  if (r == StateRel::identity(r.space())) return "id";
  if (r == StateRel::universal(r.space())) return "univ";
  std::string out = "{";
  bool first = true;
  for (auto [a, b] : r.pairs()) {
    if (!first) out += ",";
    out += "(" + r.space()->name(a) + "," + r.space()->name(b) + ")";
    first = false;
  }
  return out + "}";
}

}  // namespace sra
