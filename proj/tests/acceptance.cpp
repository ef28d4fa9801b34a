// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "oracles.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace lr;

namespace {

const char* kPkg = "ex a. a * (a -> Bool)";
const char* kE1 = "pack <Int, <1, \\x: Int. x = 0>> as ex a. a * (a -> Bool)";
const char* kE2 = "pack <Bool, <true, \\x: Bool. not x>> as ex a. a * (a -> Bool)";
const char* kE3 = "pack <Int, <1, \\x: Int. x = 1>> as ex a. a * (a -> Bool)";
const char* kOmega = "\\x: mu a. a -> a. (unfold x) x";
const char* kLandin = "((\\x: Ref (Int -> Int). (\\y: Int -> Int. !x) (x := (\\n: Int. !x 0))) (ref (\\x: Int. x))) 0";

// Collects the first failure message; later ones only bump the count.
struct Check {
  std::size_t failures = 0;
  std::string first;
  std::size_t cases = 0;

  void expect(bool ok, const std::string& what) {
    ++cases;
    if (ok) return;
    if (!failures) first = what;
    ++failures;
  }
  bool ok() const { return failures == 0; }
};

std::string verdictText(const Verdict& v) {
  return std::string(v.kindName()) + (v.witness().empty() ? "" : " " + v.witness()) +
         (v.reason().empty() ? "" : " (" + v.reason() + ")");
}

std::string typeOrError(const std::string& src) {
  try {
    return printType(typecheck(parseTerm(src)));
  } catch (const TypeError& e) {
    return std::string("error ") + e.rule();
  }
}

Check goldenTypings() {
  Check c;
  auto pkg = parseType(kPkg);
  for (auto src : {kE1, kE2}) {
    auto t = tryTypecheck(parseTerm(src));
    c.expect(t && alphaEq(*t, pkg), std::string("package ") + src + " : " + typeOrError(src));
  }
  c.expect(typeOrError(kOmega) == "(mu a. a -> a) -> (mu a. a -> a)", "omega : " + typeOrError(kOmega));
  c.expect(typeOrError(kLandin) == "Int", "landin : " + typeOrError(kLandin));
  auto leak = std::string("unpack <a, p> = ") + kE1 + " in (snd p) 5";
  c.expect(typeOrError(leak).rfind("error", 0) == 0, "leaking unpack accepted");
  return c;
}

Check goldenDynamics() {
  Check c;
  for (auto src : {"(\\x: Int. x = 0) 1", "(\\x: Bool. not x) true"}) {
    auto r = evalStar(parseTerm(src), 100);
    c.expect(r.isValue() && r.config.expr->kind == TermKind::False, std::string(src) + " did not yield false");
  }
  auto alloc = Allocator::sequential();
  auto t = trace(Config{Heap{}, parseTerm(kLandin)}, 5, alloc);
  std::string rules;
  for (auto& e : t) rules += e.rule + " ";
  c.expect(rules == "ALLOC BETA ASSIGN BETA DEREF ", "landin setup rules: " + rules);
  for (int which = 0; which < 2; ++which) {
    auto a = which ? Allocator::randomized(7) : Allocator::sequential();
    auto r = evalStar(parseTerm(kLandin), 10000, a, true);
    c.expect(r.kind == EvalResult::Kind::FuelExhausted && r.cycle && r.cycle->first == 4 && r.cycle->second == 6,
             "landin not reported as a 2-cycle from step 4");
    c.expect(r.steps == 10000, "landin did not run to fuel");
  }
  return c;
}

Check existentialEquivalence() {
  Check c;
  ValueCorpus corpus(3);
  auto catalog = RelCatalog::standard(corpus, 16);
  RelEnv env{catalog, corpus, 10000, {}, 64};
  env.supplied.push_back(FiniteRel::fromLiteral(parseRelLiteral("{(1,true)}")));
  auto start = std::chrono::steady_clock::now();
  auto v = logEquivCheck({}, {}, parseTerm(kE1), parseTerm(kE2), parseType(kPkg), env);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect(v.isProven(), "equiv e1 e2 with R: " + verdictText(v));
  c.expect(secs <= 10.0, "equiv took " + std::to_string(secs) + "s");

  ContextTyping ct{HoleTyping{{}, {}, parseType(kPkg)}, ty::boolean()};
  auto d12 = distinguish(parseTerm(kE1), parseTerm(kE2), ct, 8, 10000);
  c.expect(!d12.context, "e1/e2 distinguished: " + d12.line());
  auto d13 = distinguish(parseTerm(kE1), parseTerm(kE3), ct, 8, 10000);
  c.expect(d13.context && termSize(d13.context) <= 8 && d13.lhs == "false" && d13.rhs == "true",
           "e1/e3: " + d13.line());
  return c;
}

std::vector<TermPtr> inhabitants(const std::string& type, std::size_t want, LangLevel level) {
  std::vector<TermPtr> out;
  std::set<std::string> seen;
  for (std::uint64_t s = 0; out.size() < want && s < 500; ++s) {
    try {
      auto e = genWellTyped(level, {}, {}, parseType(type), 4 + int(s % 10), 1000 + s);
      if (seen.insert(canonicalKey(e)).second) out.push_back(e);
    } catch (const GenerationFailed&) {
    }
  }
  return out;
}

Check freeTheorems() {
  Check c;
  auto level = LangLevel::parse("systemf+pairs+sums+int");
  ValueCorpus corpus;
  auto catalog = RelCatalog::standard(corpus, 16);
  RelEnv env{catalog, corpus, 10000, {}, 64};
  auto run = [&](FreeTheorem k, const FreeTheoremInput& in, const std::string& what) {
    try {
      auto v = freeTheoremRun(k, in, env);
      c.expect(v.isProven(), what + ": " + verdictText(v));
    } catch (const std::exception& e) {
      c.expect(false, what + ": " + e.what());
    }
  };
  // closed type with at least one corpus value, and a seeded value of it
  auto instance = [&](Rng& rng) {
    for (;;) {
      auto t = genType(level, {}, 1 + int(pick(rng, 3)), rng);
      if (!freeTypeVars(t).empty()) continue;
      auto& vs = corpus.values(t);
      if (!vs.empty()) return std::make_pair(t, vs[pick(rng, vs.size())]);
    }
  };

  auto ids = inhabitants("all a. a -> a", 6, level);
  c.expect(ids.size() >= 6, "too few inhabitants of all a. a -> a");
  ids.insert(ids.begin(), parseTerm("/\\a. \\x: a. x"));
  for (std::uint64_t s = 0; s < 100; ++s) {
    Rng rng(s);
    auto [t, v] = instance(rng);
    for (auto& e : ids) run(FreeTheorem::Identity, {e, t, nullptr, v, nullptr, nullptr}, "identity " + printTerm(e));
  }

  auto consts = inhabitants("all a. a -> Bool", 20, level);
  c.expect(consts.size() >= 5, "too few inhabitants of all a. a -> Bool");
  for (std::uint64_t s = 0; s < 100 && !consts.empty(); ++s) {
    Rng rng(500 + s);
    auto& e = consts[pick(rng, consts.size())];
    auto [t, v1] = instance(rng);
    auto& vs = corpus.values(t);
    auto v2 = vs[pick(rng, vs.size())];
    run(FreeTheorem::Constant, {e, t, nullptr, v1, v2, nullptr}, "constant " + printTerm(e));
    auto [t2, w2] = instance(rng);
    run(FreeTheorem::ConstCrossType, {e, t, t2, v1, w2, nullptr}, "constCrossType " + printTerm(e));
  }

  int conts = 0;
  for (std::uint64_t s = 0; conts < 25 && s < 500; ++s) {
    Rng rng(900 + s);
    auto tau = genType(LangLevel::parse("pairs+sums+int"), {}, 1 + int(pick(rng, 2)), rng);
    auto tauK = coin(rng) ? ty::boolean() : ty::integer();
    auto eType = ty::forall("a", ty::arrow(ty::arrow(tau, ty::var("a")), ty::var("a")));
    TermPtr e;
    try {
      e = genWellTyped(level, {}, {}, eType, 6 + int(s % 8), s);
    } catch (const GenerationFailed&) {
      continue;
    }
    auto& ks = corpus.values(ty::arrow(tau, tauK));
    if (ks.empty()) continue;
    run(FreeTheorem::Continuation, {e, tau, nullptr, ks[pick(rng, ks.size())], nullptr, tauK},
        "continuation " + printTerm(e));
    ++conts;
  }
  c.expect(conts == 25, "only " + std::to_string(conts) + " continuation instances");
  return c;
}

Check strongNormalization() {
  Check c;
  ValueCorpus corpus;
  int made = 0;
  for (std::uint64_t s = 0; made < 1000 && s < 5000; ++s) {
    std::pair<TermPtr, TypePtr> p;
    try {
      p = genClosedProgram(LangLevel::stlc(), 1 + int(s % 30), s);
    } catch (const GenerationFailed&) {
      continue;
    }
    if (termSize(p.first) > 30) continue;
    ++made;
    auto r = evalStar(p.first, 10000);
    c.expect(r.isValue(), "no value within fuel: " + printTerm(p.first));
    auto v = snCheck(p.first, p.second, corpus, 10000);
    c.expect(!v.isDisproven(), "snCheck refuted " + printTerm(p.first) + ": " + verdictText(v));
  }
  c.expect(made == 1000, "generated only " + std::to_string(made) + " terms");
  return c;
}

Check typeSafety() {
  Check c;
  int made = 0;
  for (std::uint64_t s = 0; made < 1000 && s < 5000; ++s) {
    std::pair<TermPtr, TypePtr> p;
    try {
      p = genClosedProgram(LangLevel::all(), 4 + int(s % 27), s);
    } catch (const GenerationFailed&) {
      continue;
    }
    ++made;
    for (int which = 0; which < 2; ++which) {
      auto alloc = which ? Allocator::randomized(s) : Allocator::sequential();
      Config cfg{Heap{}, p.first};
      StoreTyping sigma;
      for (int n = 0; n < 1000; ++n) {
        StuckReason why = StuckReason::None;
        auto k = stepInPlace(cfg, alloc, nullptr, &why);
        if (k == StepOutcome::Kind::Stuck) {
          c.expect(false, "stuck (" + std::string(toString(why)) + "): " + printTerm(p.first));
          break;
        }
        if (k == StepOutcome::Kind::IsValue) break;
        auto next = extendStoreTyping(sigma, cfg.heap);
        auto t = next ? tryTypecheck(*next, {}, {}, cfg.expr) : std::nullopt;
        if (!t || !alphaEq(*t, p.second)) {
          c.expect(false, "preservation failed at step " + std::to_string(n + 1) + ": " + printTerm(p.first));
          break;
        }
        sigma = *next;
      }
      c.expect(true, "");
    }
  }
  c.expect(made == 1000, "generated only " + std::to_string(made) + " terms");
  return c;
}

struct Fact {
  std::size_t k;
  TermPtr v;
  TypePtr t;
  World w;
};

// Membership facts from evaluated programs; every third one pairs a value with
// a foreign type so that refutations are exercised too.
std::vector<Fact> membershipFacts(std::size_t want, std::uint64_t seed) {
  std::vector<Fact> out;
  std::vector<std::pair<TermPtr, World>> values;
  std::vector<TypePtr> types;
  for (std::uint64_t s = seed; out.size() < want && s < seed + want * 10; ++s) {
    std::pair<TermPtr, TypePtr> p;
    try {
      p = genClosedProgram(LangLevel::all(), 3 + int(s % 14), s, 3);
    } catch (const GenerationFailed&) {
      continue;
    }
    auto alloc = Allocator::sequential();
    auto r = evalStar(Config{Heap{}, p.first}, 500, alloc);
    if (!r.isValue()) continue;
    auto sigma = extendStoreTyping({}, r.config.heap);
    if (!sigma) continue;
    TypePtr t = p.second;
    if (out.size() % 3 == 2 && !types.empty()) t = types[s % types.size()];
    types.push_back(p.second);
    out.push_back(Fact{1 + s % 10, r.config.expr, t, *sigma});
  }
  return out;
}

Check stepIndexLaws() {
  Check c;
  ValueCorpus corpus;
  StepChecker sc(corpus, 10000);
  auto down = membershipFacts(500, 0);
  c.expect(down.size() == 500, "only " + std::to_string(down.size()) + " downward-closure facts");
  for (auto& f : down) {
    bool above = !sc.vMemberK(f.k, f.v, f.t, f.w).isDisproven();
    for (std::size_t j = 0; j < f.k && above; ++j) {
      auto lo = sc.vMemberK(j, f.v, f.t, f.w);
      c.expect(!lo.isDisproven(), "downward closure: " + printTerm(f.v) + " : " + printType(f.t) + " k=" +
                                      std::to_string(f.k) + " j=" + std::to_string(j));
    }
  }
  auto mono = membershipFacts(500, 100000);
  c.expect(mono.size() == 500, "only " + std::to_string(mono.size()) + " monotonicity facts");
  std::vector<TypePtr> pool{ty::boolean(), ty::integer(), parseType("Ref Int"), parseType("Int -> Int")};
  for (std::size_t i = 0; i < mono.size(); ++i) {
    auto& f = mono[i];
    Rng rng(i);
    auto w2 = extendWorld(f.w, rng, pool);
    if (coin(rng)) w2 = extendWorld(w2, rng, pool);
    auto here = sc.vMemberK(f.k, f.v, f.t, f.w);
    auto there = sc.vMemberK(f.k, f.v, f.t, w2);
    c.expect(here.isDisproven() || !there.isDisproven(),
             "monotonicity: " + printTerm(f.v) + " : " + printType(f.t) + " in " + printWorld(w2) + " " +
                 verdictText(there));
  }

  std::vector<TypePtr> tys{ty::boolean(), ty::integer()};
  auto randomWorld = [&](Rng& rng) {
    World w;
    for (Location l = 0; l < 3; ++l)
      if (coin(rng)) w[l] = tys[pick(rng, 2)];
    return w;
  };
  auto same = [](const World& a, const World& b) { return worldKey(a) == worldKey(b); };
  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(s);
    World a = randomWorld(rng), b = randomWorld(rng), d = randomWorld(rng);
    if (s % 2) {
      b = extendWorld(a, rng, tys);
      d = extendWorld(b, rng, tys);
    }
    c.expect(futureWorld(a, a) && futureWorld(b, b) && futureWorld(d, d), "futureWorld not reflexive");
    c.expect(!(futureWorld(a, b) && futureWorld(b, a)) || same(a, b), "futureWorld not antisymmetric");
    c.expect(!(futureWorld(d, b) && futureWorld(b, a)) || futureWorld(d, a), "futureWorld not transitive");
  }

  for (std::uint64_t s = 0; s < 200; ++s) {
    Rng rng(s);
    auto gen = [&] {
      std::set<IndexedPredicate<int>::Entry> tops;
      for (int i = int(pick(rng, 4)); i >= 0; --i) tops.emplace(pick(rng, 6), int(pick(rng, 4)));
      return IndexedPredicate<int>::closure(tops);
    };
    auto p = gen(), q = coin(rng) ? p.unite(gen()) : gen();
    c.expect(kEqual(0, p, q), "kEqual(0) not total");
    for (std::size_t k = 0; k < 10; ++k)
      c.expect(!kEqual(k + 1, p, q) || kEqual(k, p, q), "kEqual(k+1) not contained in kEqual(k)");
  }
  return c;
}

Check oracleEquivalences() {
  Check c;
  ValueCorpus corpus;
  auto catalog = RelCatalog::standard(corpus, 16);
  RelEnv env{catalog, corpus, 10000, {}, 64};
  auto level = LangLevel::parse("pairs+sums+int");
  int comp = 0;
  for (std::uint64_t s = 0; comp < 200 && s < 2000; ++s) {
    Rng rng(s);
    auto t = genType(level, {"a"}, 1 + int(pick(rng, 4)), rng);
    if (!freeTypeVars(t).count("a")) continue;
    auto tp = genType(level, {}, 1 + int(pick(rng, 3)), rng);
    auto& vs = corpus.values(substType(t, tp, "a"));
    if (vs.empty()) continue;
    auto v1 = vs[pick(rng, vs.size())];
    auto v2 = coin(rng) ? v1 : vs[pick(rng, vs.size())];
    auto v = compositionalityOracle(t, tp, "a", RelSubst{}, {{v1, v2}}, env);
    c.expect(v.isProven(), "compositionality at " + printType(t) + " [" + printType(tp) + "/a]: " + verdictText(v));
    ++comp;
  }
  c.expect(comp == 200, "only " + std::to_string(comp) + " compositionality instances");

  struct Hole {
    const char* type;
    LangLevel level;
  };
  for (auto h : {Hole{nullptr, LangLevel::stlc()}, Hole{nullptr, LangLevel::parse("systemf+exists+int")},
                 Hole{"Bool", LangLevel::stlc()}, Hole{"Bool -> Bool", LangLevel::stlc()},
                 Hole{kPkg, LangLevel::parse("exists+pairs+int")}}) {
    std::set<std::string> got, want;
    TypePtr ht = h.type ? parseType(h.type) : nullptr;
    auto alphabet = ht ? contextAlphabet(ht, h.level) : std::vector<TypePtr>{ty::boolean(), ty::integer()};
    if (!h.level.has(Feature::Int) && !ht) alphabet = {ty::boolean()};
    oracle::RawGrammar raw{{"x1", "x2", "x3"}, {}, alphabet, {0, 1}, h.level};
    if (h.level.has(Feature::SystemF) || h.level.has(Feature::Existential)) raw.tyvars = {"a1", "a2", "a3"};
    if (ht) {
      ContextTyping ct{HoleTyping{{}, {}, ht}, ty::boolean()};
      for (auto& e : enumerateContexts(ct, 4, h.level)) got.insert(canonicalKey(e));
      for (int n = 1; n <= 4; ++n)
        for (auto& e : raw.terms(n, 1))
          if (contextTypecheck(e, ct)) want.insert(canonicalKey(e));
    } else {
      TermEnumerator::Options o;
      o.level = h.level;
      o.types = alphabet;
      TermEnumerator en(o);
      for (int n = 1; n <= 4; ++n)
        for (auto& [k, es] : en.exact(TermEnumerator::Scope{}, n, 0))
          for (auto& e : es) got.insert(canonicalKey(e.term));
      for (int n = 1; n <= 4; ++n)
        for (auto& e : raw.terms(n, 0))
          if (isClosed(e) && tryTypecheck(e)) want.insert(canonicalKey(e));
    }
    c.expect(got == want, std::string("enumeration differs for hole ") + (h.type ? h.type : "(none)") + ": " +
                              std::to_string(got.size()) + " vs " + std::to_string(want.size()));
  }

  int subs = 0;
  for (std::uint64_t s = 0; subs < 200 && s < 2000; ++s) {
    Rng rng(s);
    TermCtx gamma;
    std::map<Name, TermPtr> g;
    for (int i = 1 + int(pick(rng, 3)); i > 0; --i) {
      auto t = genType(LangLevel::stlc(), {}, 1 + int(pick(rng, 3)), rng);
      auto& vs = corpus.values(t);
      if (vs.empty()) continue;
      Name x = "g" + std::to_string(i);
      gamma[x] = t;
      g[x] = vs[pick(rng, vs.size())];
    }
    TermPtr e;
    try {
      e = genWellTyped(LangLevel::stlc(), {}, gamma, genType(LangLevel::stlc(), {}, 2, rng), 10, s);
    } catch (const GenerationFailed&) {
      continue;
    }
    c.expect(alphaEq(applySubst(e, g), oracle::naiveSubst(e, g)), "substitution differs on " + printTerm(e));
    ++subs;
  }
  c.expect(subs == 200, "only " + std::to_string(subs) + " substitution triples");
  return c;
}

Check allocatorIndependence() {
  Check c;
  auto level = LangLevel::parse("ref+int+pairs+sums");
  int made = 0;
  for (std::uint64_t s = 0; made < 200 && s < 5000; ++s) {
    auto t = s % 2 ? ty::integer() : ty::boolean();
    TermPtr e;
    try {
      e = genWellTyped(level, {}, {}, t, 8 + int(s % 16), s);
    } catch (const GenerationFailed&) {
      continue;
    }
    if (!levelOf(e).has(Feature::Ref)) continue;
    ++made;
    auto seq = Allocator::sequential();
    auto rnd = Allocator::randomized(s * 7919 + 1);
    auto a = oracle::runToValue(e, 10000, seq);
    auto b = oracle::runToValue(e, 10000, rnd);
    c.expect(a.has_value() && a == b, "allocators disagree on " + printTerm(e));
  }
  c.expect(made == 200, "generated only " + std::to_string(made) + " ref programs");
  return c;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Check()> run;
  };
  std::vector<Criterion> all{
      {1, "golden typings", goldenTypings},
      {2, "golden dynamics", goldenDynamics},
      {3, "existential equivalence", existentialEquivalence},
      {4, "free theorems", freeTheorems},
      {5, "strong normalization", strongNormalization},
      {6, "type-safety fuzzing", typeSafety},
      {7, "step-index laws", stepIndexLaws},
      {8, "oracle equivalences", oracleEquivalences},
      {9, "allocator independence", allocatorIndependence},
  };
  int failed = 0;
  for (auto& cr : all) {
    auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (c.ok() ? "PASS" : "FAIL") << " " << cr.id << " " << cr.name << " (" << c.cases << " checks, ";
    line.precision(1);
    line << std::fixed << secs << "s)";
    if (!c.ok()) line << ": " << c.failures << " failures; first: " << c.first;
    std::cout << line.str() << std::endl;
    failed += !c.ok();
  }
  return failed ? 1 : 0;
}
