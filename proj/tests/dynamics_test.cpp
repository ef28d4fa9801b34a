#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lr;

namespace {

const char* kLandin = "((\\x: Ref (Int -> Int). (\\y: Int -> Int. !x) (x := (\\n: Int. !x 0))) (ref (\\x: Int. x))) 0";

TermPtr evalSeq(const std::string& src, std::size_t fuel = 1000) {
  auto r = evalStar(parseTerm(src), fuel);
  EXPECT_TRUE(r.isValue()) << src;
  return r.config.expr;
}

TEST(Dynamics, Goldens) {
  EXPECT_EQ(evalSeq("(\\x: Bool. not x) true")->kind, TermKind::False);
  EXPECT_EQ(evalSeq("if 1 = 1 then 7 else 8")->number, 7);
  EXPECT_EQ(evalSeq("snd <true, 3>")->number, 3);
  EXPECT_EQ(evalSeq("case inr 4 as Bool + Int of inl b => 0 | inr n => n")->number, 4);
  EXPECT_EQ(evalSeq("(/\\a. \\x: a. x) [Int] 5")->number, 5);
  EXPECT_EQ(evalSeq("unpack <a, p> = pack <Int, <1, \\x: Int. x = 0>> as ex a. a * (a -> Bool) in (snd p) (fst p)")->kind,
            TermKind::False);
  EXPECT_EQ(evalSeq("unfold (fold 3 as mu a. Int)")->number, 3);
  auto counter = evalStar(parseTerm("(\\r: Ref Int. <r := 1, !r>) (ref 0)"), 100);
  ASSERT_TRUE(counter.isValue());
  EXPECT_EQ(counter.config.expr->b->number, 1);
  EXPECT_EQ(counter.config.heap.size(), 1u);
}

TEST(Dynamics, LandinTrace) {
  auto alloc = Allocator::sequential();
  auto t = trace(Config{Heap{}, parseTerm(kLandin)}, 5, alloc);
  std::vector<std::string> rules;
  for (auto& e : t) rules.push_back(e.rule);
  EXPECT_EQ(rules, (std::vector<std::string>{"ALLOC", "BETA", "ASSIGN", "BETA", "DEREF"}));
  EXPECT_EQ(printInHeap(t[3].config.expr, t[3].config.heap), "(!#l0) 0");
  EXPECT_EQ(printHeap(t[2].config.heap), "{#l0:\\n: Int. (!#l0) 0}");
}

TEST(Dynamics, LandinCycles) {
  for (int s = 0; s < 2; ++s) {
    auto alloc = s == 0 ? Allocator::sequential() : Allocator::randomized(17);
    auto r = evalStar(parseTerm(kLandin), 200, alloc, true);
    EXPECT_EQ(r.kind, EvalResult::Kind::FuelExhausted);
    ASSERT_TRUE(r.cycle.has_value());
    EXPECT_EQ(r.cycle->first, 4u);
    EXPECT_EQ(r.cycle->second, 6u);
    EXPECT_EQ(configKey(r.cycleConfigs->first), configKey(r.cycleConfigs->second));
  }
}

TEST(Dynamics, OmegaCycles) {
  auto alloc = Allocator::sequential();
  auto r = evalStar(parseTerm("(\\x: mu a. a -> a. (unfold x) x) (fold (\\x: mu a. a -> a. (unfold x) x) as mu a. a -> a)"),
                    100, alloc, true);
  EXPECT_EQ(r.kind, EvalResult::Kind::FuelExhausted);
  ASSERT_TRUE(r.cycle.has_value());
  EXPECT_LT(r.cycle->first, r.cycle->second);
}

TEST(Dynamics, StuckReasons) {
  auto alloc = Allocator::sequential();
  auto r = evalStar(Config{Heap{}, parseRuntimeTerm("!#l3")}, 10, alloc);
  EXPECT_EQ(r.kind, EvalResult::Kind::Stuck);
  EXPECT_EQ(r.reason, StuckReason::DerefDangling);
  r = evalStar(Config{Heap{}, parseRuntimeTerm("#l3 := 1")}, 10, alloc);
  EXPECT_EQ(r.reason, StuckReason::AssignDangling);
  r = evalStar(Config{Heap{}, parseTerm("true 1")}, 10, alloc);
  EXPECT_EQ(r.reason, StuckReason::IllFormedRedex);
  r = evalStar(Config{Heap{}, parseTerm("fst (if true then 1 else 2)")}, 10, alloc);
  EXPECT_EQ(r.kind, EvalResult::Kind::Stuck);
  EXPECT_EQ(r.steps, 1u);
}

TEST(Dynamics, AgreesWithBigStepOracle) {
  LangLevel pure(LangLevel::all().bits() & ~(unsigned(Feature::Mu) | unsigned(Feature::Ref)));
  int compared = 0;
  for (std::uint64_t s = 0; s < 400; ++s) {
    std::pair<TermPtr, TypePtr> p;
    try {
      p = genClosedProgram(pure, 5 + int(s % 20), s);
    } catch (const GenerationFailed&) {
      continue;
    }
    auto big = oracle::bigStep(p.first);
    auto small = evalStar(p.first, 100000);
    ASSERT_TRUE(big.has_value()) << printTerm(p.first);
    ASSERT_TRUE(small.isValue()) << printTerm(p.first);
    EXPECT_TRUE(alphaEq(*big, small.config.expr)) << printTerm(p.first);
    ++compared;
  }
  EXPECT_GT(compared, 300);
}

TEST(Dynamics, AllocatorsAgreeUpToRenaming) {
  int compared = 0;
  for (std::uint64_t s = 0; s < 300; ++s) {
    std::pair<TermPtr, TypePtr> p;
    try {
      p = genClosedProgram(LangLevel::parse("ref+int+pairs+sums"), 6 + int(s % 15), s);
    } catch (const GenerationFailed&) {
      continue;
    }
    Config a{Heap{}, p.first}, b{Heap{}, p.first};
    auto seq = Allocator::sequential();
    auto rnd = Allocator::randomized(s * 31 + 7);
    for (int n = 0; n < 200; ++n) {
      EXPECT_EQ(configKey(a), configKey(b));
      auto ka = stepInPlace(a, seq);
      auto kb = stepInPlace(b, rnd);
      ASSERT_EQ(ka, kb);
      if (ka != StepOutcome::Kind::Stepped) break;
    }
    EXPECT_EQ(oracle::runToValue(p.first, 1000, seq), oracle::runToValue(p.first, 1000, rnd));
    ++compared;
  }
  EXPECT_GT(compared, 200);
}

TEST(Dynamics, SequentialAllocatorNumbersInOrder) {
  auto alloc = Allocator::sequential();
  auto r = evalStar(Config{Heap{}, parseTerm("<ref 1, <ref true, ref 2>>")}, 20, alloc);
  ASSERT_TRUE(r.isValue());
  EXPECT_EQ(r.config.heap.order(), (std::vector<Location>{0, 1, 2}));
  EXPECT_EQ(printInHeap(r.config.expr, r.config.heap), "<#l0, <#l1, #l2>>");
}

} // namespace
