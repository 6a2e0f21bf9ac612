#include <gtest/gtest.h>

#include "support.hpp"
#include "syncalg/dsl.hpp"
#include "syncalg/lawbench.hpp"
#include "syncalg/semantics.hpp"

using namespace sra;

namespace {

SpacePtr two() { return StateSpace::numbered(2); }
Command P(const std::string& text, SyncOp op = SyncOp::Par) { return normalize(parse(text, two(), op)); }

std::vector<std::string> lines(const TraceSet& t) {
  std::vector<std::string> out;
  for (const auto& b : t.behaviors) out.push_back(formatBehavior(b, *t.space));
  return out;
}

}  // namespace

TEST(BoundedTraces, AtomicStep) {
  auto t = boundedTraces(P("pi univ"), 0, 2);
  EXPECT_EQ(lines(t), (std::vector<std::string>{"s0 <(pi,s0,s0)> terminated", "s0 <(pi,s0,s1)> terminated"}));
}

TEST(BoundedTraces, Abort) {
  auto t = boundedTraces(P("abort"), 0, 3);
  EXPECT_EQ(lines(t), (std::vector<std::string>{"s0 <> aborted"}));
}

TEST(BoundedTraces, RelyEmptyAbortsOnEnvironment) {
  auto s = StateSpace::numbered(1);
  auto t = boundedTraces(parse("rely {}", s, SyncOp::Conj), 0, 1);
  bool found = false;
  for (const auto& b : t.behaviors)
    found |= formatBehavior(b, *s) == "s0 <(eps,s0,s0)> aborted";
  EXPECT_TRUE(found);
}

TEST(BoundedTraces, CutAtDepth) {
  auto t = boundedTraces(P("inf(pi {(s0,s0)})"), 0, 2);
  EXPECT_EQ(lines(t), (std::vector<std::string>{"s0 <(pi,s0,s0) (pi,s0,s0)> cut"}));
}

TEST(RefinesAtDepth, AbortIsTop) {
  Generator gen(11, two());
  for (int i = 0; i < 50; ++i) EXPECT_TRUE(refinesAtDepth(P("abort"), gen.general(7), 5).holds);
}

TEST(RefinesAtDepth, NilRefinesTests) {
  EXPECT_TRUE(refinesAtDepth(P("nil"), P("test {s0}"), 3).holds);
  auto v = refinesAtDepth(P("test {s0}"), P("nil"), 3);
  ASSERT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(formatBehavior(*v.witness, *two()), "s1 <> terminated");
}

TEST(RefinesAtDepth, WitnessIsShortest) {
  auto v = refinesAtDepth(P("pi univ ; pi univ ; pi univ"), P("pi univ ; pi univ ; pi {(s0,s0)} | eps univ"), 5);
  ASSERT_FALSE(v.holds);
  EXPECT_TRUE(v.witness->steps.size() <= 1);
}

TEST(RefinesAtDepth, IncompletePrefixesCount) {
  // pi univ ; magic has a reached one-step prefix magic lacks
  auto v = equalAtDepth(P("pi univ ; magic"), P("magic"), 3);
  ASSERT_FALSE(v.holds);
  EXPECT_EQ(v.witness->outcome, Outcome::Incomplete);
}

TEST(RefinesAtDepth, WeakDistributionExample) {
  auto d = P("om(step univ)");
  Generator gen(21, two());
  for (int i = 0; i < 40; ++i) {
    auto c1 = gen.general(6), c2 = gen.general(6);
    EXPECT_TRUE(refinesAtDepth(Command::conj(d, Command::seq(c1, c2)),
                               Command::seq(Command::conj(d, c1), Command::conj(d, c2)), 5)
                    .holds);
  }
}

TEST(EqualAtDepth, SyncIdentityAndTestDistribution) {
  Generator gen(31, two());
  for (int i = 0; i < 40; ++i) {
    auto c = gen.general(6), c1 = gen.general(5), c2 = gen.general(5);
    auto p = Command::test(gen.set());
    for (SyncOp op : {SyncOp::Par, SyncOp::Conj}) {
      EXPECT_TRUE(equalAtDepth(Command::sync(op, Command::om(iotaCmd(op, two())), c), c, 5).holds);
      EXPECT_TRUE(equalAtDepth(Command::seq(p, Command::sync(op, c1, c2)),
                               Command::sync(op, Command::seq(p, c1), Command::seq(p, c2)), 5)
                      .holds);
      EXPECT_TRUE(equalAtDepth(Command::sync(op, Command::abort(two()), c), Command::abort(two()), 5).holds);
    }
  }
}

TEST(EqualAtDepth, FinAndOmAgreeAtFiniteDepth) {
  for (unsigned k = 0; k <= 6; ++k) EXPECT_TRUE(equalAtDepth(P("fin(pi univ)"), P("om(pi univ)"), k).holds);
}

TEST(Automaton, FinHasNoDivergence) {
  auto a = buildAutomaton(parse("fin(pi univ)", StateSpace::numbered(1)));
  for (const auto& c : a.configs) EXPECT_FALSE(c.div);
}

TEST(Automaton, OmDiverges) {
  auto a = buildAutomaton(parse("om(pi univ)", StateSpace::numbered(1)));
  EXPECT_TRUE(a.configs[a.starts[0]].div);
  bool coind = false;
  for (const auto& c : a.configs)
    for (const auto& e : c.edges) coind |= a.coinductive(e);
  EXPECT_TRUE(coind);
}

TEST(Automaton, InfNeverTerminates) {
  auto a = buildAutomaton(parse("inf(eps univ)", StateSpace::numbered(1)));
  for (const auto& c : a.configs) EXPECT_FALSE(c.term);
  EXPECT_TRUE(a.configs[a.starts[0]].div);
}

TEST(Automaton, RejectsUnguardedIteration) {
  EXPECT_THROW(buildAutomaton(P("om(nil | pi univ)")), UsageError);
}

TEST(Automaton, CapThrows) {
  AutomatonOptions tiny;
  tiny.maxConfigs = 2;
  try {
    buildAutomaton(P("pi univ ; pi univ ; pi univ ; pi univ"), tiny);
    FAIL();
  } catch (const CapExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("state explosion"), std::string::npos);
  }
}

TEST(FullEqual, FinVersusOm) {
  auto v = fullEqual(P("fin(pi univ)"), P("om(pi univ)"));
  ASSERT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->outcome, Outcome::Diverges);
  EXPECT_TRUE(v.witness->steps.empty());
}

TEST(FullEqual, Decomposition) {
  Generator gen(41, two());
  for (int i = 0; i < 40; ++i) {
    auto c = gen.general(6);
    for (SyncOp op : {SyncOp::Par, SyncOp::Conj}) {
      auto iota = iotaCmd(op, two());
      auto rhs = Command::choice(Command::sync(op, Command::fin(iota), c), Command::sync(op, Command::inf(iota), c));
      EXPECT_TRUE(fullEqual(c, rhs).holds) << print(c);
    }
  }
}

TEST(FullEqual, RelyAlt) {
  auto s = two();
  for (std::uint64_t m = 0; m < relCount(s); ++m) {
    StateRel r = relAt(s, m);
    EXPECT_TRUE(fullEqual(relyCmd(r), relyAltCmd(r)).holds);
    EXPECT_TRUE(fullEqual(evolveCmd(r), evolveAltCmd(r)).holds);
  }
}

TEST(FullEqual, InfAnnihilates) {
  Generator gen(51, two());
  for (int i = 0; i < 40; ++i) {
    auto c0 = gen.guarded(5), c1 = gen.general(5), c2 = gen.general(5);
    auto lhs = Command::seq(Command::conj(Command::inf(c0), c1), c2);
    EXPECT_TRUE(fullEqual(lhs, Command::conj(Command::inf(c0), c1)).holds);
  }
}

TEST(BackendAgreement, FullEqualityImpliesBoundedEquality) {
  Generator gen(61, two());
  int agreeing = 0;
  for (int i = 0; i < 200; ++i) {
    auto c1 = gen.general(5);
    auto c2 = i % 2 ? normalize(reconstruct(expand(c1))) : gen.general(5);
    Verdict full;
    try {
      full = fullEqual(c1, c2);
    } catch (const CapExceeded&) {
      continue;
    }
    if (!full.holds) continue;
    ++agreeing;
    for (unsigned k = 0; k <= 6; ++k) EXPECT_TRUE(equalAtDepth(c1, c2, k).holds) << print(c1) << " vs " << print(c2);
  }
  EXPECT_GT(agreeing, 50);
}

TEST(BackendAgreement, BoundedFailureImpliesFullFailure) {
  Generator gen(71, two());
  for (int i = 0; i < 200; ++i) {
    auto c1 = gen.general(5), c2 = gen.general(5);
    if (refinesAtDepth(c1, c2, 4).holds) continue;
    EXPECT_FALSE(fullRefines(c1, c2).holds) << print(c1) << " >= " << print(c2);
  }
}

TEST(Properties, OmegaUnfold) {
  Generator gen(81, two());
  for (int i = 0; i < 60; ++i) {
    auto c = gen.general(6);
    auto om = Command::om(c);
    EXPECT_TRUE(equalAtDepth(om, Command::choice(Command::nil(two()), Command::seq(c, om)), 5).holds) << print(c);
  }
}

TEST(Properties, OmegaInductConditional) {
  Generator gen(91, two());
  int used = 0;
  for (int i = 0; i < 300; ++i) {
    auto c = gen.guarded(4), d = gen.general(4);
    auto x = i % 3 == 0 ? gen.general(4) : Command::choice(Command::seq(Command::fin(c), d), Command::test(gen.set()));
    if (!refinesAtDepth(Command::choice(d, Command::seq(c, x)), x, 5).holds) continue;
    ++used;
    EXPECT_TRUE(refinesAtDepth(Command::seq(Command::om(c), d), x, 5).holds);
  }
  EXPECT_GT(used, 20);
}

TEST(Properties, GaloisTestAssert) {
  auto s = two();
  Generator gen(101, s);
  for (std::uint64_t pm = 0; pm <= s->allStatesMask(); ++pm) {
    StateSet p(s, pm);
    for (int i = 0; i < 40; ++i) {
      auto c = gen.general(5), d = gen.general(5);
      bool left = refinesAtDepth(Command::seq(assertCmd(p), c), d, 4).holds;
      bool right = refinesAtDepth(c, Command::seq(Command::test(p), d), 4).holds;
      EXPECT_EQ(left, right) << formatSet(p) << " " << print(c) << " / " << print(d);
    }
  }
}

TEST(Format, Verdict) {
  auto v = equalAtDepth(P("nil"), P("test {s0}"), 2);
  EXPECT_EQ(formatVerdict(v, *two()), "fails (rhs >= lhs) witness s1 <> terminated");
  EXPECT_EQ(formatVerdict(equalAtDepth(P("nil"), P("nil"), 2), *two()), "holds");
}
