#include <gtest/gtest.h>

#include "support.hpp"
#include "syncalg/dsl.hpp"
#include "syncalg/lawbench.hpp"

using namespace sra;

namespace {

SpacePtr two() { return StateSpace::numbered(2); }

Command P(const std::string& text, SyncOp op = SyncOp::Par) { return normalize(parse(text, two(), op)); }

}  // namespace

TEST(Parse, SeqBindsTighterThanChoice) {
  auto s = two();
  auto c = P("pi {(s0,s1)} ; nil | abort");
  auto pi01 = Command::atom(AtomicCmd::pi(StateRel::of(s, {{0, 1}})));
  EXPECT_EQ(c, normalize(Command::choice(Command::seq(pi01, Command::nil(s)), Command::abort(s))));
}

TEST(Parse, GuarOverOneState) {
  auto s = StateSpace::numbered(1);
  auto c = normalize(parse("guar id", s));
  EXPECT_EQ(c.kind(), Kind::Om);
  EXPECT_EQ(c.kid(0), Command::atom({idRel(s), univRel(s)}));
}

TEST(Parse, NilIsTestOfAllStates) {
  EXPECT_TRUE(P("nil").isNil());
  EXPECT_TRUE(P("magic").isMagic());
  EXPECT_EQ(P("test all"), P("nil"));
}

TEST(Parse, SetAndRelationExpressions) {
  auto s = two();
  ParseContext ctx;
  ctx.space = s;
  EXPECT_EQ(parseSet("~{s0}", ctx), StateSet::of(s, {1}));
  EXPECT_EQ(parseSet("{s0} + {s1} & {s1}", ctx).bits(), StateSet::all(s).bits());
  EXPECT_EQ(parseRel("prer {s0}", ctx), prer(StateSet::of(s, {0})));
  EXPECT_EQ(parseRel("~id", ctx), StateRel::of(s, {{0, 1}, {1, 0}}));
}

TEST(Parse, Errors) {
  EXPECT_THROW(P("pi {(s0,s9)}"), ParseError);
  EXPECT_THROW(P("nil ;"), ParseError);
  EXPECT_THROW(P("nil || nil cap nil"), ParseError);
  EXPECT_THROW(P("$c"), ParseError);
  EXPECT_NO_THROW(P("(nil || nil) cap nil"));
  try {
    P("nil | ) ");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 6u);
  }
}

TEST(Parse, VariablesAndHooks) {
  auto s = two();
  ParseContext ctx;
  ctx.space = s;
  ctx.vars["c"] = Command::abort(s);
  ctx.vars["i"] = 2u;
  ctx.hooks["twice"] = [](const std::vector<HookArg>& args) {
    auto c = std::get<Command>(args.at(0));
    return Command::seq(c, c);
  };
  EXPECT_EQ(normalize(parse("pow(step univ, $i + 1)", ctx)), P("step univ ; step univ ; step univ"));
  EXPECT_EQ(normalize(parse("twice(pi univ)", ctx)), P("pi univ ; pi univ"));
  EXPECT_EQ(normalize(parse("nil | $c", ctx)), Command::abort(s));
}

TEST(Elaborate, DerivedForms) {
  auto s = two();
  auto p0 = StateSet::of(s, {0});
  EXPECT_EQ(normalize(assertCmd(p0)), normalize(Command::choice(Command::nil(s), Command::seq(Command::test(StateSet::of(s, {1})), Command::abort(s)))));
  auto r = StateRel::of(s, {{0, 0}});
  EXPECT_EQ(normalize(relyCmd(r)), normalize(Command::om(Command::choice(Command::atom(AtomicCmd::step(univRel(s))),
                                                              Command::seq(Command::atom(AtomicCmd::eps(r.complement())), Command::abort(s))))));
  EXPECT_EQ(normalize(invCmd(p0)), normalize(Command::seq(assertCmd(p0), evolveCmd(postr(p0)))));
  EXPECT_EQ(elaborate({DerivedForm::Tag::Term, {}, {}, SyncOp::Par}, s), termCmd(s));
  EXPECT_EQ(P("iota", SyncOp::Conj), Command::atom(AtomicCmd::step(univRel(s))));
  EXPECT_EQ(P("iota", SyncOp::Par), Command::atom(AtomicCmd::eps(univRel(s))));
}

TEST(Normalize, Examples) {
  auto s = two();
  auto a = Command::atom(AtomicCmd::pi(univRel(s)));
  EXPECT_EQ(normalize(Command::choice(Command::magic(s), a)), a);
  EXPECT_EQ(normalize(Command::seq(Command::abort(s), Command::test(StateSet::of(s, {0})))), Command::abort(s));
  EXPECT_EQ(normalize(Command::pow(a, 0)), Command::nil(s));
  EXPECT_EQ(normalize(Command::atom(AtomicCmd::magic(s))), Command::magic(s));
  EXPECT_EQ(normalize(Command::seq(Command::test(StateSet::of(s, {0})), Command::test(StateSet::of(s, {1})))), Command::magic(s));
  EXPECT_EQ(normalize(Command::seq(a, Command::nil(s))), a);
  EXPECT_EQ(normalize(Command::choice(a, a)), a);
}

TEST(Normalize, ChoiceIsOrderInsensitive) {
  EXPECT_EQ(P("pi univ | eps id | abort"), P("abort | eps id | pi univ"));
  EXPECT_EQ(P("(pi univ | eps id) | test {s0}"), P("pi univ | (eps id | test {s0})"));
}

TEST(Normalize, IdempotentOnGenerated) {
  for (std::size_t n : {2u, 3u}) {
    Generator gen(42 + n, StateSpace::numbered(n));
    for (int i = 0; i < 300; ++i) {
      auto c = gen.general(9);
      auto once = normalize(c);
      EXPECT_EQ(normalize(once), once) << print(c);
    }
  }
}

TEST(PseudoAtomic, Recognition) {
  auto s = two();
  AtomicCmd a = AtomicCmd::pi(univRel(s)), b = AtomicCmd::eps(idRel(s));
  auto pa = asPseudoAtomic(Command::atom(a));
  ASSERT_TRUE(pa);
  EXPECT_EQ(pa->normal, a);
  EXPECT_TRUE(pa->isAtomic());
  auto pb = asPseudoAtomic(P("pi univ | eps id ; abort"));
  ASSERT_TRUE(pb);
  EXPECT_EQ(pb->normal, a);
  EXPECT_EQ(pb->abortPart, b);
  EXPECT_FALSE(asPseudoAtomic(Command::nil(s)));
  EXPECT_FALSE(asPseudoAtomic(P("pi univ ; pi univ")));
}

TEST(Print, Examples) {
  EXPECT_EQ(print(P("om(step univ)")), "om(step univ)");
  EXPECT_EQ(print(Command::nil(two())), "nil");
  EXPECT_EQ(print(P("pi {(s0,s1)} | eps id ; abort")), "pi {(s0,s1)} | eps id ; abort");
}

TEST(Print, RoundTripOnGenerated) {
  for (std::size_t n : {1u, 2u, 3u}) {
    auto s = StateSpace::numbered(n);
    Generator gen(1000 + n, s);
    for (int i = 0; i < 300; ++i) {
      auto c = gen.general(9);
      for (SyncOp op : {SyncOp::Par, SyncOp::Conj}) {
        EXPECT_EQ(normalize(parse(print(c), s, op)), normalize(c)) << print(c);
      }
    }
  }
}

TEST(Interning, StructuralEqualityIsPointerEquality) {
  auto s = two();
  auto a = Command::seq(Command::atom(AtomicCmd::pi(univRel(s))), Command::abort(s));
  auto b = Command::seq(Command::atom(AtomicCmd::pi(univRel(s))), Command::abort(s));
  EXPECT_EQ(a.id(), b.id());
  EXPECT_EQ(compareStructural(a, b), 0);
}
