#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lr;

namespace {

TEST(Surface, TypePrecedence) {
  EXPECT_EQ(oracle::dbType(parseType("Bool -> Int -> Bool")),
            oracle::dbType(ty::arrow(ty::boolean(), ty::arrow(ty::integer(), ty::boolean()))));
  EXPECT_EQ(oracle::dbType(parseType("Int * Bool + Int")),
            oracle::dbType(ty::sum(ty::prod(ty::integer(), ty::boolean()), ty::integer())));
  EXPECT_EQ(oracle::dbType(parseType("Ref Int -> Int")),
            oracle::dbType(ty::arrow(ty::ref(ty::integer()), ty::integer())));
  EXPECT_EQ(oracle::dbType(parseType("all a. a -> a")),
            oracle::dbType(ty::forall("a", ty::arrow(ty::var("a"), ty::var("a")))));
}

TEST(Surface, TermPrecedence) {
  EXPECT_EQ(oracle::dbTerm(parseTerm("f x y")),
            oracle::dbTerm(tm::app(tm::app(tm::var("f"), tm::var("x")), tm::var("y"))));
  EXPECT_EQ(oracle::dbTerm(parseTerm("r := x = y")),
            oracle::dbTerm(tm::assign(tm::var("r"), tm::inteq(tm::var("x"), tm::var("y")))));
  EXPECT_EQ(oracle::dbTerm(parseTerm("(unfold x) x")),
            oracle::dbTerm(tm::app(tm::unfold(tm::var("x")), tm::var("x"))));
  EXPECT_EQ(oracle::dbTerm(parseTerm("!x 0")), oracle::dbTerm(tm::app(tm::deref(tm::var("x")), tm::integer(0))));
  EXPECT_EQ(oracle::dbTerm(parseTerm("f [Bool] x")),
            oracle::dbTerm(tm::app(tm::tyapp(tm::var("f"), ty::boolean()), tm::var("x"))));
}

TEST(Surface, PrinterParenthesizesPrefixHeads) {
  EXPECT_EQ(printTerm(tm::app(tm::unfold(tm::var("x")), tm::var("x"))), "(unfold x) x");
  EXPECT_EQ(printTerm(tm::app(tm::deref(tm::var("r")), tm::integer(0))), "(!r) 0");
  EXPECT_EQ(printTerm(tm::hole()), "[.]");
  EXPECT_EQ(printType(parseType("(Bool -> Bool) -> Bool")), "(Bool -> Bool) -> Bool");
}

TEST(Surface, RoundTripGeneratedTerms) {
  int n = 0;
  for (std::uint64_t s = 0; s < 300; ++s) {
    std::pair<TermPtr, TypePtr> p;
    try {
      p = genClosedProgram(LangLevel::all(), 3 + int(s % 12), s);
    } catch (const GenerationFailed&) {
      continue;
    }
    auto text = printTerm(p.first);
    auto back = parseTerm(text);
    EXPECT_EQ(oracle::dbTerm(back), oracle::dbTerm(p.first)) << text;
    auto ttext = printType(p.second);
    EXPECT_EQ(oracle::dbType(parseType(ttext)), oracle::dbType(p.second)) << ttext;
    ++n;
  }
  EXPECT_GT(n, 250);
}

TEST(Surface, CommentsAndNegativeIntegers) {
  auto e = parseTerm("-- a comment\n(\\x: Int. x = -3) -3 -- trailing");
  EXPECT_EQ(oracle::dbTerm(e), oracle::dbTerm(tm::app(tm::lam("x", ty::integer(), tm::inteq(tm::var("x"),
                                                                                           tm::integer(-3))),
                                                        tm::integer(-3))));
}

TEST(Surface, ParseErrorsCarrySpans) {
  try {
    parseTerm("\\x: Bool.");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 1);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parseTerm("#l0"), ParseError);
  EXPECT_THROW(parseTerm("99999999999999999999"), ParseError);
  EXPECT_THROW(parseType("Bool ->"), ParseError);
  EXPECT_THROW(parseTerm("if true then 1"), ParseError);
}

TEST(Surface, RuntimeTermsAcceptLocations) {
  auto e = parseRuntimeTerm("!#l2");
  ASSERT_EQ(e->kind, TermKind::Deref);
  EXPECT_EQ(e->a->kind, TermKind::Loc);
  EXPECT_EQ(e->a->loc, 2u);
}

TEST(Surface, Worlds) {
  auto w = parseWorld("W { #l0 : Bool; #l1 : Int -> Int }");
  ASSERT_EQ(w.size(), 2u);
  EXPECT_TRUE(alphaEq(w.at(0), ty::boolean()));
  EXPECT_TRUE(alphaEq(w.at(1), parseType("Int -> Int")));
  EXPECT_EQ(parseWorld("W { }").size(), 0u);
  EXPECT_THROW(parseWorld("W { #l0 : Bool; #l0 : Int }"), ParseError);
  EXPECT_EQ(printWorld(w), "W { #l0 : Bool; #l1 : Int -> Int }");
}

TEST(Surface, RelationLiterals) {
  auto r = parseRelLiteral("{(1, true)}");
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].first->number, 1);
  EXPECT_EQ(r.pairs[0].second->kind, TermKind::True);
  auto r2 = parseRelLiteral("{(0, false); (1, true)}");
  EXPECT_EQ(r2.pairs.size(), 2u);
}

TEST(Surface, ProgramLevelPragma) {
  auto p = parseProgram("-- level: stlc\n\\x: Bool. x");
  EXPECT_TRUE(p.explicitLevel);
  EXPECT_EQ(p.level, LangLevel::stlc());
  EXPECT_THROW(parseProgram("-- level: stlc\n/\\a. \\x: a. x"), ParseError);
  auto q = parseProgram("/\\a. \\x: a. x");
  EXPECT_FALSE(q.explicitLevel);
  EXPECT_EQ(LangLevel::parse("mu+ref"), LangLevel({Feature::Base, Feature::Mu, Feature::Ref}));
}

} // namespace
