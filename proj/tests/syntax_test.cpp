#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lr;

namespace {

// Renames every binder to a fresh name, consistently with its occurrences.
struct Renamer {
  int next = 0;
  std::map<Name, Name> vars, tvars;

  Name fresh(const char* p) { return std::string(p) + "_r" + std::to_string(next++); }

  TypePtr type(const TypePtr& t) {
    if (!t) return t;
    switch (t->kind) {
    case TypeKind::Var: {
      auto it = tvars.find(t->name);
      return it == tvars.end() ? t : ty::var(it->second);
    }
    case TypeKind::Forall: case TypeKind::Exists: case TypeKind::Mu: {
      auto saved = tvars;
      auto n = fresh("t");
      tvars[t->name] = n;
      auto body = type(t->left);
      tvars = saved;
      return ty::make(t->kind, n, body, nullptr);
    }
    default:
      return ty::make(t->kind, t->name, type(t->left), type(t->right));
    }
  }

  TermPtr term(const TermPtr& e) {
    if (!e) return e;
    Term n = *e;
    n.type = type(e->type);
    n.type2 = type(e->type2);
    auto bindVar = [&](const Name& x, const TermPtr& body, Name& slot) {
      auto saved = vars;
      slot = fresh("x");
      vars[x] = slot;
      auto out = term(body);
      vars = saved;
      return out;
    };
    switch (e->kind) {
    case TermKind::Var: {
      auto it = vars.find(e->name);
      return it == vars.end() ? e : tm::var(it->second);
    }
    case TermKind::Lam: n.a = bindVar(e->name, e->a, n.name); break;
    case TermKind::Case:
      n.a = term(e->a);
      n.b = bindVar(e->name, e->b, n.name);
      n.c = bindVar(e->name2, e->c, n.name2);
      break;
    case TermKind::TyLam: {
      auto saved = tvars;
      n.name = fresh("t");
      tvars[e->name] = n.name;
      n.a = term(e->a);
      tvars = saved;
      break;
    }
    case TermKind::Unpack: {
      n.a = term(e->a);
      auto sv = tvars;
      n.name = fresh("t");
      tvars[e->name] = n.name;
      n.b = bindVar(e->name2, e->b, n.name2);
      tvars = sv;
      break;
    }
    default:
      n.a = term(e->a);
      n.b = term(e->b);
      n.c = term(e->c);
    }
    return tm::make(std::move(n));
  }
};

std::vector<TermPtr> sampleTerms(int count) {
  std::vector<TermPtr> out;
  for (int s = 0; s < count; ++s) {
    try {
      out.push_back(genClosedProgram(LangLevel::all(), 4 + s % 9, std::uint64_t(s)).first);
    } catch (const GenerationFailed&) {
    }
  }
  return out;
}

TEST(Syntax, AlphaEqAcceptsConsistentRenaming) {
  for (auto& e : sampleTerms(200)) {
    Renamer r;
    auto e2 = r.term(e);
    EXPECT_TRUE(alphaEq(e, e2)) << printTerm(e) << " vs " << printTerm(e2);
    EXPECT_EQ(oracle::dbTerm(e), oracle::dbTerm(e2));
    EXPECT_EQ(canonicalKey(e), canonicalKey(e2));
  }
}

TEST(Syntax, AlphaEqMatchesDeBruijnOracle) {
  auto terms = sampleTerms(60);
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = 0; j < terms.size(); ++j)
      EXPECT_EQ(alphaEq(terms[i], terms[j]), oracle::dbTerm(terms[i]) == oracle::dbTerm(terms[j]))
          << printTerm(terms[i]) << " / " << printTerm(terms[j]);
}

TEST(Syntax, SubstTermAvoidsCapture) {
  auto body = parseTerm("\\y: Bool. x");
  auto out = substTerm(body, tm::var("y"), "x");
  ASSERT_EQ(out->kind, TermKind::Lam);
  EXPECT_NE(out->name, "y");
  EXPECT_EQ(freeVars(out), std::set<Name>{"y"});
  EXPECT_EQ(oracle::dbTerm(out), oracle::dbTerm(parseTerm("\\z: Bool. y")));
}

TEST(Syntax, SubstTermStopsAtShadowingBinders) {
  auto e = parseTerm("\\x: Bool. x");
  EXPECT_TRUE(alphaEq(substTerm(e, tm::tru(), "x"), e));
  auto c = parseTerm("case z of inl x => x | inr y => x");
  auto out = substTerm(c, tm::fls(), "x");
  EXPECT_EQ(oracle::dbTerm(out), oracle::dbTerm(parseTerm("case z of inl x => x | inr y => false")));
}

TEST(Syntax, SubstTypeAvoidsCapture) {
  auto t = parseType("all b. a -> b");
  auto out = substType(t, ty::var("b"), "a");
  EXPECT_EQ(oracle::dbType(out), oracle::dbType(parseType("all c. b -> c")));
  EXPECT_EQ(freeTypeVars(out), std::set<Name>{"b"});
}

TEST(Syntax, SubstTypeInsideTermAnnotations) {
  auto e = parseTerm("/\\b. \\x: a -> b. x");
  auto out = substType(e, ty::var("b"), "a");
  EXPECT_EQ(oracle::dbTerm(out), oracle::dbTerm(parseTerm("/\\c. \\x: b -> c. x")));
}

TEST(Syntax, SimultaneousSubstitutionMatchesNaiveOracle) {
  ValueCorpus corpus;
  int checked = 0;
  for (std::uint64_t s = 0; checked < 200 && s < 2000; ++s) {
    Rng rng(s);
    TermCtx gamma;
    std::map<Name, TermPtr> g;
    int n = 1 + int(pick(rng, 3));
    for (int i = 0; i < n; ++i) {
      auto t = genType(LangLevel::stlc(), {}, 1 + int(pick(rng, 3)), rng);
      auto& vs = corpus.values(t);
      if (vs.empty()) continue;
      Name x = "g" + std::to_string(i);
      gamma[x] = t;
      g[x] = vs[pick(rng, vs.size())];
    }
    auto target = genType(LangLevel::stlc(), {}, 2, rng);
    TermPtr e;
    try {
      e = genWellTyped(LangLevel::stlc(), {}, gamma, target, 10, s);
    } catch (const GenerationFailed&) {
      continue;
    }
    auto got = applySubst(e, g);
    auto want = oracle::naiveSubst(e, g);
    EXPECT_TRUE(alphaEq(got, want)) << printTerm(e);
    EXPECT_TRUE(isClosed(got));
    ++checked;
  }
  EXPECT_EQ(checked, 200);
}

TEST(Syntax, UnrollMu) {
  auto t = parseType("mu a. a -> a");
  EXPECT_TRUE(alphaEq(unrollMu(t), parseType("(mu a. a -> a) -> (mu a. a -> a)")));
  auto list = parseType("mu l. Bool + Int * l");
  EXPECT_TRUE(alphaEq(unrollMu(list), parseType("Bool + Int * (mu l. Bool + Int * l)")));
}

TEST(Syntax, ValuesAndSizes) {
  EXPECT_TRUE(isValue(parseTerm("<true, \\x: Bool. x>")));
  EXPECT_TRUE(isValue(parseTerm("fold inl 1 as mu a. Int + a as mu a. Int + a")));
  EXPECT_FALSE(isValue(parseTerm("<true, not true>")));
  EXPECT_FALSE(isValue(parseTerm("ref true")));
  EXPECT_TRUE(isValue(tm::loc(3)));
  EXPECT_EQ(termSize(parseTerm("\\x: Bool. x")), 2u);
  EXPECT_EQ(termSize(parseTerm("if true then 0 else 1")), 4u);
}

TEST(Syntax, FreshNameAvoidsGivenNames) {
  std::set<Name> used{"x", "x1", "x2"};
  auto n = freshName("x", used);
  EXPECT_EQ(used.count(n), 0u);
}

TEST(Syntax, LevelOfIsSmallestAcceptingLevel) {
  EXPECT_EQ(levelOf(parseTerm("\\x: Bool. x")), LangLevel{Feature::Base});
  auto l = levelOf(parseTerm("pack <Int, <1, \\x: Int. x = 0>> as ex a. a * (a -> Bool)"));
  EXPECT_TRUE(l.has(Feature::Existential));
  EXPECT_TRUE(l.has(Feature::Pairs));
  EXPECT_TRUE(l.has(Feature::Int));
  EXPECT_FALSE(l.has(Feature::Ref));
  EXPECT_TRUE(levelCheck(parseTerm("ref 1"), LangLevel::parse("ref+int")));
  EXPECT_FALSE(levelCheck(parseTerm("ref 1"), LangLevel::parse("ref")));
}

} // namespace
