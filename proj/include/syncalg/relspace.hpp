#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sra {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using StateId = std::uint8_t;

// Finite ordered set of named program states. At most 8 states so that a
// relation fits in one 64-bit word.
class StateSpace {
 public:
  static constexpr std::size_t kMaxStates = 8;

  explicit StateSpace(std::vector<std::string> names);

  // s0, s1, ..., s{n-1}
  static std::shared_ptr<const StateSpace> numbered(std::size_t n);
  static std::shared_ptr<const StateSpace> make(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(StateId s) const { return names_.at(s); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<StateId> find(std::string_view name) const;

  std::uint64_t allStatesMask() const;
  std::uint64_t allPairsMask() const;

 private:
  std::vector<std::string> names_;
};

using SpacePtr = std::shared_ptr<const StateSpace>;

class StateSet {
 public:
  StateSet() = default;
  StateSet(SpacePtr space, std::uint64_t bits);

  static StateSet empty(SpacePtr space) { return {std::move(space), 0}; }
  static StateSet all(const SpacePtr& space) { return {space, space->allStatesMask()}; }
  static StateSet of(SpacePtr space, std::initializer_list<StateId> members);

  const SpacePtr& space() const { return space_; }
  std::uint64_t bits() const { return bits_; }
  bool contains(StateId s) const { return (bits_ >> s) & 1u; }
  bool isEmpty() const { return bits_ == 0; }
  bool isAll() const { return bits_ == space_->allStatesMask(); }
  std::vector<StateId> members() const;

  StateSet complement() const;
  StateSet operator&(const StateSet& o) const;
  StateSet operator|(const StateSet& o) const;
  bool subsetOf(const StateSet& o) const;

  friend bool operator==(const StateSet& a, const StateSet& b) { return a.bits_ == b.bits_; }

 private:
  SpacePtr space_;
  std::uint64_t bits_ = 0;
};

class StateRel {
 public:
  StateRel() = default;
  StateRel(SpacePtr space, std::uint64_t bits);

  static StateRel empty(SpacePtr space) { return {std::move(space), 0}; }
  static StateRel identity(const SpacePtr& space);
  static StateRel universal(const SpacePtr& space);
  static StateRel of(SpacePtr space, std::initializer_list<std::pair<StateId, StateId>> pairs);

  const SpacePtr& space() const { return space_; }
  std::uint64_t bits() const { return bits_; }
  bool contains(StateId from, StateId to) const;
  bool isEmpty() const { return bits_ == 0; }
  std::vector<std::pair<StateId, StateId>> pairs() const;
  // successors of `from`, as a state mask
  std::uint64_t imageMask(StateId from) const;
  StateSet imageOf(StateId from) const { return {space_, imageMask(from)}; }

  StateRel complement() const;
  StateRel operator&(const StateRel& o) const;
  StateRel operator|(const StateRel& o) const;
  StateRel compose(const StateRel& o) const;
  // keeps the pairs whose first component lies in p
  StateRel domainRestrict(const StateSet& p) const;
  bool subsetOf(const StateRel& o) const;

  friend bool operator==(const StateRel& a, const StateRel& b) { return a.bits_ == b.bits_; }

 private:
  SpacePtr space_;
  std::uint64_t bits_ = 0;
};

StateSet complementSet(const StateSet& p);
StateRel idRel(const SpacePtr& space);
StateRel univRel(const SpacePtr& space);
StateRel prer(const StateSet& p);
StateRel postr(const StateSet& p);

std::string formatSet(const StateSet& p);
std::string formatRel(const StateRel& r);

}  // namespace sra
