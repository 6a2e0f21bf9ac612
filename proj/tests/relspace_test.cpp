#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "support.hpp"
#include "syncalg/relspace.hpp"

using namespace sra;

namespace {

SpacePtr two() { return StateSpace::numbered(2); }

}  // namespace

TEST(StateSet, Complement) {
  auto s = two();
  EXPECT_EQ(complementSet(StateSet::of(s, {0})), StateSet::of(s, {1}));
  EXPECT_EQ(complementSet(StateSet::empty(s)), StateSet::all(s));
  auto s3 = StateSpace::numbered(3);
  EXPECT_EQ(complementSet(StateSet::of(s3, {0, 2})), StateSet::of(s3, {1}));
}

TEST(StateSet, Format) {
  auto s = two();
  EXPECT_EQ(formatSet(StateSet::of(s, {0, 1})), "{s0,s1}");
  EXPECT_EQ(formatSet(StateSet::empty(s)), "{}");
}

TEST(StateRel, DomainRestrictAndImage) {
  auto s = two();
  auto r = StateRel::of(s, {{0, 1}, {1, 0}});
  EXPECT_EQ(r.domainRestrict(StateSet::of(s, {0})), StateRel::of(s, {{0, 1}}));
  EXPECT_EQ(r.imageOf(1), StateSet::of(s, {0}));
}

TEST(StateRel, IdentityLaws) {
  auto s = two();
  auto r = StateRel::of(s, {{0, 1}});
  EXPECT_EQ(univRel(s) & r, r);
  EXPECT_EQ(StateRel::empty(s).complement(), univRel(s));
  EXPECT_EQ(univRel(s).pairs().size(), 4u);
  EXPECT_EQ(idRel(s), StateRel::of(s, {{0, 0}, {1, 1}}));
  auto one = StateSpace::numbered(1);
  EXPECT_EQ(idRel(one), univRel(one));
}

TEST(StateRel, PreAndPost) {
  auto s = two();
  auto p = StateSet::of(s, {0});
  EXPECT_EQ(prer(p), StateRel::of(s, {{0, 0}, {0, 1}}));
  EXPECT_EQ(postr(p), StateRel::of(s, {{0, 0}, {1, 0}}));
  EXPECT_EQ(postr(StateSet::all(s)), univRel(s));
}

TEST(StateRel, Compose) {
  auto s = StateSpace::numbered(3);
  auto a = StateRel::of(s, {{0, 1}});
  auto b = StateRel::of(s, {{1, 2}, {0, 0}});
  EXPECT_EQ(a.compose(b), StateRel::of(s, {{0, 2}}));
}

TEST(StateRel, SpaceMismatchIsUsageError) {
  auto a = StateRel::universal(StateSpace::numbered(2));
  auto b = StateRel::universal(StateSpace::numbered(3));
  EXPECT_THROW((void)(a & b), UsageError);
}

TEST(StateSpace, NamesAndLookup) {
  auto s = StateSpace::make({"a", "b"});
  EXPECT_EQ(s->find("b"), std::optional<StateId>(1));
  EXPECT_FALSE(s->find("c").has_value());
  EXPECT_THROW(StateSpace::numbered(StateSpace::kMaxStates + 1), UsageError);
}

TEST(StateRelProperty, InvolutionAndDeMorgan) {
  std::mt19937_64 rng(7);
  for (std::size_t n = 1; n <= 3; ++n) {
    auto s = StateSpace::numbered(n);
    for (int i = 0; i < 200; ++i) {
      StateRel a = relAt(s, rng() % relCount(s)), b = relAt(s, rng() % relCount(s));
      StateSet p(s, rng() & s->allStatesMask()), q(s, rng() & s->allStatesMask());
      EXPECT_EQ(a.complement().complement(), a);
      EXPECT_EQ((a & b).complement(), a.complement() | b.complement());
      EXPECT_EQ((p | q).complement(), p.complement() & q.complement());
      EXPECT_TRUE((prer(p) & postr(p)).subsetOf(prer(p)));
      EXPECT_TRUE(a.domainRestrict(p).subsetOf(a));
    }
  }
}
