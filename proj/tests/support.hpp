#pragma once

#include <ostream>

#include "syncalg/dsl.hpp"

namespace sra {

// i-th relation in an exhaustive sweep: bit j of i is the pair (j / n, j % n)
inline StateRel relAt(const SpacePtr& s, std::uint64_t i) {
  const std::size_t n = s->size();
  StateRel r = StateRel::empty(s);
  for (std::size_t j = 0; j < n * n; ++j)
    if ((i >> j) & 1u) r = r | StateRel::of(s, {{static_cast<StateId>(j / n), static_cast<StateId>(j % n)}});
  return r;
}

inline std::uint64_t relCount(const SpacePtr& s) { return std::uint64_t{1} << (s->size() * s->size()); }

// readable gtest failure messages
inline void PrintTo(const Command& c, std::ostream* os) { *os << print(c); }
inline void PrintTo(const StateSet& p, std::ostream* os) { *os << formatSet(p); }
inline void PrintTo(const StateRel& r, std::ostream* os) { *os << formatRel(r); }
inline void PrintTo(const AtomicCmd& a, std::ostream* os) { *os << print(Command::atom(a)); }

}  // namespace sra
