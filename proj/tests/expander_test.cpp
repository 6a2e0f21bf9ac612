#include <gtest/gtest.h>

#include "support.hpp"
#include "syncalg/dsl.hpp"
#include "syncalg/expander.hpp"
#include "syncalg/lawbench.hpp"
#include "syncalg/semantics.hpp"

using namespace sra;

namespace {

SpacePtr two() { return StateSpace::numbered(2); }
Command P(const std::string& text, SyncOp op = SyncOp::Par) { return normalize(parse(text, two(), op)); }

std::vector<AtomicCmd> allAtomics(const SpacePtr& s) {
  std::vector<AtomicCmd> out;
  for (std::uint64_t p = 0; p < relCount(s); ++p)
    for (std::uint64_t e = 0; e < relCount(s); ++e) out.push_back({relAt(s, p), relAt(s, e)});
  return out;
}

}  // namespace

TEST(SyncAtomic, Examples) {
  auto s = two();
  auto r = StateRel::of(s, {{0, 1}});
  EXPECT_EQ(syncAtomic(SyncOp::Par, AtomicCmd::pi(r), AtomicCmd::eps(r)), AtomicCmd::pi(r));
  EXPECT_TRUE(syncAtomic(SyncOp::Conj, AtomicCmd::pi(r), AtomicCmd::eps(r)).isMagic());
}

TEST(SyncAtomic, IdentityCommutativityAssociativity) {
  auto s = two();
  auto all = allAtomics(s);
  for (SyncOp op : {SyncOp::Par, SyncOp::Conj}) {
    const auto iota = iotaAtomic(op, s);
    for (const auto& a : all) {
      EXPECT_EQ(syncAtomic(op, iota, a), a);
      EXPECT_EQ(syncAtomic(op, a, iota), a);
    }
    for (std::size_t i = 0; i < all.size(); i += 7)
      for (std::size_t j = 0; j < all.size(); j += 5) {
        EXPECT_EQ(syncAtomic(op, all[i], all[j]), syncAtomic(op, all[j], all[i]));
        const auto& c = all[(i * 31 + j) % all.size()];
        EXPECT_EQ(syncAtomic(op, syncAtomic(op, all[i], all[j]), c), syncAtomic(op, all[i], syncAtomic(op, all[j], c)));
      }
  }
}

TEST(SyncPseudo, AtomicOperandsStayAtomic) {
  auto s = two();
  Generator gen(3, s);
  for (int i = 0; i < 100; ++i) {
    PseudoAtomic x1{gen.atomic(), AtomicCmd::magic(s)}, x2{gen.atomic(), AtomicCmd::magic(s)};
    for (SyncOp op : {SyncOp::Par, SyncOp::Conj}) EXPECT_TRUE(syncPseudo(op, x1, x2).isAtomic());
  }
}

TEST(SyncPseudo, IotaIsIdentity) {
  auto s = two();
  Generator gen(4, s);
  for (int i = 0; i < 100; ++i) {
    auto x = gen.pseudo();
    for (SyncOp op : {SyncOp::Par, SyncOp::Conj}) {
      PseudoAtomic iota{iotaAtomic(op, s), AtomicCmd::magic(s)};
      EXPECT_EQ(syncPseudo(op, iota, x), x);
    }
  }
}

TEST(SyncPseudo, ConjOfRelyBodiesIsEvolveStyle) {
  // rely bodies r1, r2 conjoined give step univ | eps ~(r1 & r2) ; abort
  auto s = two();
  const auto univ = univRel(s);
  for (std::uint64_t i = 0; i < relCount(s); ++i)
    for (std::uint64_t j = 0; j < relCount(s); ++j) {
      StateRel r1 = relAt(s, i), r2 = relAt(s, j);
      PseudoAtomic x1{AtomicCmd::step(univ), AtomicCmd::eps(r1.complement())};
      PseudoAtomic x2{AtomicCmd::step(univ), AtomicCmd::eps(r2.complement())};
      auto x = syncPseudo(SyncOp::Conj, x1, x2);
      EXPECT_EQ(x.normal, AtomicCmd::step(univ));
      EXPECT_EQ(x.abortPart, AtomicCmd::eps((r1 & r2).complement()));
      // agrees with expanding the command-level synchronisation
      auto direct = normalize(Command::conj(Command::pseudo(x1), Command::pseudo(x2)));
      EXPECT_TRUE(equalAtDepth(direct, Command::pseudo(x), 3).holds);
    }
}

TEST(SyncPseudo, ResultIsPseudoAtomicStructurally) {
  auto s = two();
  Generator gen(5, s);
  for (int i = 0; i < 100; ++i) {
    auto x1 = gen.pseudo(), x2 = gen.pseudo();
    for (SyncOp op : {SyncOp::Par, SyncOp::Conj}) {
      auto e = expand(Command::sync(op, Command::pseudo(x1), Command::pseudo(x2)));
      EXPECT_TRUE(e.pN.isAll());
      EXPECT_TRUE(e.pT.isEmpty());
      for (const auto& b : e.branches) EXPECT_TRUE(b.cont.isNil() || b.cont.kind() == Kind::Abort);
      auto rebuilt = asPseudoAtomic(normalize(reconstruct(e)));
      ASSERT_TRUE(rebuilt.has_value());
      EXPECT_EQ(*rebuilt, syncPseudo(op, x1, x2));
    }
  }
}

TEST(Expand, Examples) {
  auto s = two();
  auto e = expand(P("test {s0}"));
  EXPECT_TRUE(e.pN.isAll());
  EXPECT_EQ(e.pT, StateSet::of(s, {0}));
  EXPECT_TRUE(e.branches.empty());

  e = expand(P("assert {s0}"));
  EXPECT_EQ(e.pN, StateSet::of(s, {0}));
  EXPECT_TRUE(e.pT.isAll());
  EXPECT_TRUE(e.branches.empty());

  e = expand(P("pi univ ; test {s1}"));
  EXPECT_TRUE(e.pN.isAll());
  EXPECT_TRUE(e.pT.isEmpty());
  ASSERT_EQ(e.branches.size(), 1u);
  EXPECT_EQ(e.branches[0].step, AtomicCmd::pi(univRel(s)));
  EXPECT_EQ(e.branches[0].cont, P("test {s1}"));

  e = expand(P("abort"));
  EXPECT_TRUE(e.pN.isEmpty());
}

TEST(Expand, SyncOfTestAndAtomIsMagic) {
  auto e = expand(P("test {s0} cap pi univ"));
  EXPECT_TRUE(e.pT.isEmpty());
  EXPECT_TRUE(e.branches.empty());
}

TEST(Expand, IterationTags) {
  auto e = expand(P("om(pi univ)"));
  ASSERT_EQ(e.branches.size(), 1u);
  ASSERT_EQ(e.branches[0].tags.size(), 1u);
  EXPECT_TRUE(e.branches[0].tags[0].coinductive());
  e = expand(P("fin(pi univ)"));
  ASSERT_EQ(e.branches[0].tags.size(), 1u);
  EXPECT_FALSE(e.branches[0].tags[0].coinductive());
  EXPECT_TRUE(e.pT.isAll());
  e = expand(P("inf(pi univ)"));
  EXPECT_TRUE(e.pT.isEmpty());
}

TEST(Expand, UnguardedIterationRejectedOnlyWhenRequired) {
  auto c = P("om(nil | pi univ)");
  EXPECT_NO_THROW(expand(c));
  ExpandOptions strict;
  strict.requireGuarded = true;
  EXPECT_THROW(expand(c, strict), UsageError);
}

TEST(NilSync, Examples) {
  auto s = two();
  auto g = StateRel::of(s, {{0, 1}});
  EXPECT_TRUE(nilSync(guarCmd(g)).isNil());
  EXPECT_TRUE(nilSync(P("pi univ")).isMagic());
  EXPECT_TRUE(nilSync(relyCmd(g)).isNil());
  EXPECT_EQ(nilSync(P("assert {s0}")), P("assert {s0}"));
}

TEST(Expand, ReconstructionOracle) {
  for (std::size_t n : {2u, 3u}) {
    auto s = StateSpace::numbered(n);
    Generator gen(77 + n, s);
    for (int i = 0; i < 150; ++i) {
      auto c = normalize(gen.general(8));
      auto r = reconstruct(expand(c));
      EXPECT_TRUE(equalAtDepth(c, r, 4).holds) << print(c);
    }
  }
}

TEST(Expand, FormatIsStable) {
  EXPECT_EQ(formatExpanded(expand(P("pi univ ; test {s1}"))), "pN: {s0,s1}\npT: {}\nbranch: pi univ ; test {s1}\n");
}
