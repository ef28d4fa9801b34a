#include "lr/lr.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace lr;

namespace {

enum Exit { kOk = 0, kDisproven = 1, kBounded = 2, kUsage = 3 };

struct RunConfig {
  std::vector<std::string> inputs;
  std::size_t fuel = 10000;
  std::size_t k = 25;
  std::size_t corpusDepth = 3;
  std::size_t catalogSize = 16;
  int ctxSize = 8;
  std::uint64_t seed = 0;
  std::string allocator = "seq";
  std::string level;
  std::string output = "human";
  std::string type;
  std::string world;
  std::vector<std::string> rels;
  std::string kind;
  std::string tau = "Bool", tau2 = "Int", tauK = "Bool";
  std::string v1, v2;
  std::string demo;
  int size = 10;
  int count = 1;
  bool resultInt = false;
};

class Runner {
public:
  explicit Runner(RunConfig c) : cfg_(std::move(c)) {}

  int check();
  int eval();
  int trace_t();
  int sn();
  int safe();
  int member();
  int equiv();
  int distinguish();
  int freeThm();
  int demo();
  int gen();

private:
  RunConfig cfg_;

  bool lines() const { return cfg_.output == "lines"; }

  void out(const std::string& human, const std::string& line) const { std::cout << (lines() ? line : human) << "\n"; }

  void echoSeed() const { out("seed: " + std::to_string(cfg_.seed), "SEED " + std::to_string(cfg_.seed)); }

  Bounds bounds() const {
    Bounds b;
    b.fuel = cfg_.fuel;
    return b;
  }

  static int exitFor(const Verdict& v) {
    if (v.isProven()) return kOk;
    if (v.isDisproven()) return kDisproven;
    return kBounded;
  }

  int report(const Verdict& v, const Bounds& b) const {
    std::cout << v.line(b) << "\n";
    if (!v.reason().empty() && !lines()) std::cout << "reason: " << v.reason() << "\n";
    return exitFor(v);
  }

  Program load(std::size_t i, bool allowLocations = false) const {
    if (i >= cfg_.inputs.size()) throw CLI::ValidationError("input", "missing input #" + std::to_string(i + 1));
    const auto& src = cfg_.inputs[i];
    std::string text = src;
    if (std::filesystem::is_regular_file(src)) {
      std::ifstream f(src);
      std::stringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    auto p = parseProgram(text, allowLocations);
    if (!cfg_.level.empty()) {
      p.level = LangLevel::parse(cfg_.level);
      if (!levelCheck(p.term, p.level))
        throw ParseError("program uses constructs outside language level " + p.level.toString(), p.term->span);
    }
    return p;
  }

  Allocator allocator() const {
    if (cfg_.allocator == "rand") return Allocator::randomized(cfg_.seed);
    return Allocator::sequential();
  }

  TypePtr typeOr(const TermPtr& e) const { return cfg_.type.empty() ? typecheck(e) : parseType(cfg_.type); }
};

int Runner::check() {
  auto p = load(0);
  auto t = typecheck(p.term);
  out(printType(t), "TYPE " + printType(t));
  return kOk;
}

int Runner::eval() {
  auto p = load(0);
  auto alloc = allocator();
  auto r = evalStar(Config{Heap{}, p.term}, cfg_.fuel, alloc, true);
  auto expr = printInHeap(r.config.expr, r.config.heap);
  auto heap = printHeap(r.config.heap);
  auto steps = std::to_string(r.steps);
  switch (r.kind) {
  case EvalResult::Kind::Value:
    out(expr, "VALUE " + expr + " STEPS " + steps + " HEAP " + heap);
    return kOk;
  case EvalResult::Kind::Stuck:
    out("stuck (" + std::string(toString(r.reason)) + "): " + expr,
        "STUCK " + std::string(toString(r.reason)) + " EXPR " + expr + " STEPS " + steps + " HEAP " + heap);
    return kDisproven;
  case EvalResult::Kind::FuelExhausted:
    if (r.cycle)
      out("diverges: configuration at step " + std::to_string(r.cycle->second) + " repeats step " +
              std::to_string(r.cycle->first),
          "CYCLE first=" + std::to_string(r.cycle->first) + " second=" + std::to_string(r.cycle->second) +
              " fuel=" + std::to_string(cfg_.fuel));
    else
      out("fuel exhausted after " + steps + " steps", "FUEL-EXHAUSTED steps=" + steps);
    return kBounded;
  }
  return kBounded;
}

int Runner::trace_t() {
  auto p = load(0);
  auto alloc = allocator();
  Config c{Heap{}, p.term};
  std::cout << "STEP 0 RULE - EXPR " << printInHeap(c.expr, c.heap) << " HEAP " << printHeap(c.heap) << "\n";
  auto entries = trace(c, cfg_.fuel, alloc);
  for (std::size_t i = 0; i < entries.size(); ++i) std::cout << traceLine(i + 1, entries[i]) << "\n";
  const Config& last = entries.empty() ? c : entries.back().config;
  if (isValue(last.expr)) return kOk;
  if (entries.size() < cfg_.fuel) {
    std::cout << "STUCK EXPR " << printInHeap(last.expr, last.heap) << "\n";
    return kDisproven;
  }
  return kBounded;
}

int Runner::sn() {
  auto p = load(0);
  ValueCorpus corpus(cfg_.corpusDepth, cfg_.seed);
  echoSeed();
  auto b = bounds();
  b.corpus = cfg_.corpusDepth;
  return report(snCheck(p.term, typeOr(p.term), corpus, cfg_.fuel), b);
}

int Runner::safe() {
  auto p = load(0);
  auto alloc = allocator();
  if (cfg_.allocator == "rand") echoSeed();
  return report(safeCheck(p.term, cfg_.fuel, alloc), bounds());
}

int Runner::member() {
  auto p = load(0, !cfg_.world.empty());
  auto t = typeOr(p.term);
  ValueCorpus corpus(cfg_.corpusDepth, cfg_.seed);
  echoSeed();
  auto b = bounds();
  b.corpus = cfg_.corpusDepth;
  LangLevel lv = levelOf(p.term);
  LangLevel plain(LangLevel::all().bits() & ~(unsigned(Feature::Mu) | unsigned(Feature::Ref)));
  bool indexed = !cfg_.world.empty() || !plain.includes(lv) || !levelCheck(t, plain);
  if (!indexed) {
    auto v = isValue(p.term) ? vMember(p.term, t, corpus, cfg_.fuel) : eMember(p.term, t, corpus, cfg_.fuel);
    return report(v, b);
  }
  b.k = cfg_.k;
  World w = cfg_.world.empty() ? World{} : parseWorld(cfg_.world);
  StepChecker chk(corpus, cfg_.fuel, cfg_.seed);
  if (isValue(p.term)) return report(chk.vMemberK(cfg_.k, p.term, t, w), b);
  auto h = chk.heapFor(cfg_.k, w);
  if (!h) return report(Verdict::upToBounds("NoHeapForWorld"), b);
  return report(chk.eMemberK(cfg_.k, p.term, t, w, *h), b);
}

int Runner::equiv() {
  auto p1 = load(0), p2 = load(1);
  auto t = typeOr(p1.term);
  ValueCorpus corpus(cfg_.corpusDepth, cfg_.seed);
  auto catalog = RelCatalog::standard(corpus, cfg_.catalogSize);
  RelEnv env{catalog, corpus, cfg_.fuel, {}, 64};
  for (auto& r : cfg_.rels) env.supplied.push_back(FiniteRel::fromLiteral(parseRelLiteral(r)));
  echoSeed();
  auto b = bounds();
  b.corpus = cfg_.corpusDepth;
  b.catalog = cfg_.catalogSize;
  return report(logEquivCheck({}, {}, p1.term, p2.term, t, env), b);
}

int Runner::distinguish() {
  auto p1 = load(0), p2 = load(1);
  ContextTyping ct;
  ct.hole.type = typecheck(p1.term);
  auto t2 = typecheck(p2.term);
  if (!alphaEq(ct.hole.type, t2))
    throw TypeError("terms have different types " + printType(ct.hole.type) + " and " + printType(t2), "distinguish",
                    p2.term->span);
  if (cfg_.resultInt) ct.result = ty::integer();
  auto d = lr::distinguish(p1.term, p2.term, ct, cfg_.ctxSize, cfg_.fuel);
  std::cout << d.line() << "\n";
  auto b = bounds();
  b.ctxSize = std::size_t(cfg_.ctxSize);
  return report(d.verdict, b);
}

int Runner::freeThm() {
  auto p = load(0);
  ValueCorpus corpus(cfg_.corpusDepth, cfg_.seed);
  auto catalog = RelCatalog::standard(corpus, cfg_.catalogSize);
  RelEnv env{catalog, corpus, cfg_.fuel, {}, 64};
  auto kind = parseFreeTheorem(cfg_.kind);
  FreeTheoremInput in;
  in.e = p.term;
  in.tau = parseType(cfg_.tau);
  in.tau2 = parseType(cfg_.tau2);
  in.tauK = parseType(cfg_.tauK);
  auto defaultValue = [&](const TypePtr& t) {
    auto& vs = corpus.values(t);
    if (vs.empty()) throw std::invalid_argument("no default value of type " + printType(t));
    return vs.front();
  };
  if (kind == FreeTheorem::Continuation)
    in.v1 = cfg_.v1.empty() ? defaultValue(ty::arrow(in.tau, in.tauK)) : parseTerm(cfg_.v1);
  else
    in.v1 = cfg_.v1.empty() ? defaultValue(in.tau) : parseTerm(cfg_.v1);
  auto secondType = kind == FreeTheorem::ConstCrossType ? in.tau2 : in.tau;
  in.v2 = cfg_.v2.empty() ? defaultValue(secondType) : parseTerm(cfg_.v2);
  echoSeed();
  auto b = bounds();
  b.corpus = cfg_.corpusDepth;
  b.catalog = cfg_.catalogSize;
  return report(freeTheoremRun(kind, in, env), b);
}

int Runner::demo() {
  if (cfg_.demo == "omega") {
    auto omega = parseTerm("\\x: mu a. a -> a. (unfold x) x");
    auto t = typecheck(omega);
    std::cout << "TYPE " << printTerm(omega) << " : " << printType(t) << "\n";
    auto app = tm::app(omega, tm::fold(omega, t->left));
    auto alloc = Allocator::sequential();
    auto r = evalStar(Config{Heap{}, app}, cfg_.fuel, alloc, true);
    if (r.cycle)
      std::cout << "CYCLE first=" << r.cycle->first << " second=" << r.cycle->second
                << " EXPR " << printTerm(r.cycleConfigs->second.expr) << "\n";
    auto b = bounds();
    b.note = r.cycle ? "cycle" : "FuelExhausted";
    return report(r.isValue() ? Verdict::proven() : Verdict::upToBounds(b), b);
  }
  if (cfg_.demo == "landin") {
    auto prog = parseTerm("((\\x: Ref (Int -> Int). (\\y: Int -> Int. !x) (x := (\\n: Int. !x 0))) "
                          "(ref (\\x: Int. x))) 0");
    std::cout << "TYPE " << printType(typecheck(prog)) << "\n";
    auto alloc = allocator();
    Config c{Heap{}, prog};
    std::cout << "STEP 0 RULE - EXPR " << printInHeap(c.expr, c.heap) << " HEAP " << printHeap(c.heap) << "\n";
    auto entries = trace(c, 5, alloc);
    for (std::size_t i = 0; i < entries.size(); ++i) std::cout << traceLine(i + 1, entries[i]) << "\n";
    auto alloc2 = allocator();
    auto r = evalStar(c, cfg_.fuel, alloc2, true);
    auto b = bounds();
    if (r.cycle) {
      auto [first, second] = *r.cycle;
      std::cout << "CYCLE first=" << first << " second=" << second << " period=" << second - first << "\n";
      auto alloc3 = allocator();
      auto loop = trace(c, second, alloc3);
      for (auto i = first; i < second; ++i) {
        const Config& x = i == 0 ? c : loop[i - 1].config;
        std::cout << "  CONFIG " << i << " " << printInHeap(x.expr, x.heap) << " HEAP " << printHeap(x.heap) << "\n";
      }
    }
    b.note = r.isValue() ? "" : r.cycle ? "cycle" : "FuelExhausted";
    if (r.kind == EvalResult::Kind::Stuck) return report(Verdict::disproven(printTerm(r.config.expr), "stuck"), b);
    return report(r.isValue() ? Verdict::proven() : Verdict::upToBounds(b), b);
  }
  if (cfg_.demo == "packages") {
    auto t = parseType("ex a. a * (a -> Bool)");
    auto e1 = parseTerm("pack <Int, <1, \\x: Int. x = 0>> as ex a. a * (a -> Bool)");
    auto e2 = parseTerm("pack <Bool, <true, \\x: Bool. not x>> as ex a. a * (a -> Bool)");
    auto e3 = parseTerm("pack <Int, <1, \\x: Int. x = 1>> as ex a. a * (a -> Bool)");
    std::cout << "TYPE e1 : " << printType(typecheck(e1)) << "\n";
    std::cout << "TYPE e2 : " << printType(typecheck(e2)) << "\n";
    for (auto* src : {"(\\x: Int. x = 0) 1", "(\\x: Bool. not x) true"})
      std::cout << "EVAL " << src << " => " << printTerm(evalStar(parseTerm(src), cfg_.fuel).config.expr) << "\n";
    ContextTyping ct;
    ct.hole.type = t;
    std::cout << lr::distinguish(e1, e3, ct, cfg_.ctxSize, cfg_.fuel).line() << "\n";
    ValueCorpus corpus(cfg_.corpusDepth, cfg_.seed);
    auto catalog = RelCatalog::standard(corpus, cfg_.catalogSize);
    RelEnv env{catalog, corpus, cfg_.fuel, {}, 64};
    for (auto& r : cfg_.rels)
      env.supplied.push_back(FiniteRel::fromLiteral(parseRelLiteral(r), ty::integer(), ty::boolean()));
    auto b = bounds();
    b.corpus = cfg_.corpusDepth;
    b.catalog = cfg_.catalogSize;
    return report(logEquivCheck({}, {}, e1, e2, t, env), b);
  }
  throw CLI::ValidationError("demo", "unknown demo '" + cfg_.demo + "' (omega, landin, packages)");
}

int Runner::gen() {
  LangLevel level = cfg_.level.empty() ? LangLevel::all() : LangLevel::parse(cfg_.level);
  echoSeed();
  for (int i = 0; i < cfg_.count; ++i) {
    std::uint64_t s = cfg_.seed + std::uint64_t(i);
    if (!cfg_.type.empty()) {
      auto t = parseType(cfg_.type);
      auto e = genWellTyped(level, {}, {}, t, cfg_.size, s);
      out(printTerm(e), "TERM " + printTerm(e) + " TYPE " + printType(t) + " SEED " + std::to_string(s));
    } else {
      auto [e, t] = genClosedProgram(level, cfg_.size, s);
      out(printTerm(e) + " : " + printType(t), "TERM " + printTerm(e) + " TYPE " + printType(t) + " SEED " +
                                                   std::to_string(s));
    }
  }
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"lr: checkers for logical relations over a family of typed lambda calculi"};
  app.require_subcommand(1);
  RunConfig cfg;
  if (const char* env = std::getenv("LR_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);

  app.add_option("--fuel", cfg.fuel, "step budget")->capture_default_str();
  app.add_option("--k", cfg.k, "step index")->capture_default_str();
  app.add_option("--corpus-depth", cfg.corpusDepth, "value corpus depth")->capture_default_str();
  app.add_option("--catalog-size", cfg.catalogSize, "relation catalog size")->capture_default_str();
  app.add_option("--ctx-size", cfg.ctxSize, "context size bound")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed (falls back to LR_SEED)");
  app.add_option("--alloc", cfg.allocator, "allocator")->check(CLI::IsMember({"seq", "rand"}))->capture_default_str();
  app.add_option("--level", cfg.level, "language level override, e.g. stlc, mu+ref, full");
  app.add_option("--output", cfg.output, "output mode")->check(CLI::IsMember({"human", "lines"}))->capture_default_str();
  app.add_option("--type", cfg.type, "expected type (default: inferred)");
  app.fallthrough();

  auto addInputs = [&](CLI::App* sub, const char* desc, bool required = true) {
    auto* o = sub->add_option("inputs", cfg.inputs, desc);
    if (required) o->required();
    return sub;
  };
  int (Runner::*action)() = nullptr;
  auto bind = [&](CLI::App* sub, int (Runner::*fn)()) { sub->callback([&action, fn] { action = fn; }); };

  bind(addInputs(app.add_subcommand("check", "typecheck a program"), "program file or term"), &Runner::check);
  bind(addInputs(app.add_subcommand("eval", "evaluate to a value"), "program file or term"), &Runner::eval);
  bind(addInputs(app.add_subcommand("trace", "print every reduction step"), "program file or term"), &Runner::trace_t);
  bind(addInputs(app.add_subcommand("sn", "strong normalization predicate"), "program file or term"), &Runner::sn);
  bind(addInputs(app.add_subcommand("safe", "no stuck state within fuel"), "program file or term"), &Runner::safe);
  auto* member = addInputs(app.add_subcommand("member", "membership in the value/expression interpretation"),
                           "program file or term");
  member->add_option("--world", cfg.world, "world literal, e.g. 'W { #l0 : Bool }'");
  bind(member, &Runner::member);
  auto* equiv = addInputs(app.add_subcommand("equiv", "logical equivalence of two closed terms"), "two programs");
  equiv->add_option("--rel", cfg.rels, "relation literal tried first for existential witnesses");
  bind(equiv, &Runner::equiv);
  auto* dist = addInputs(app.add_subcommand("distinguish", "search for a distinguishing context"), "two programs");
  dist->add_flag("--result-int", cfg.resultInt, "accept Int-typed contexts instead of Bool");
  bind(dist, &Runner::distinguish);
  auto* ft = addInputs(app.add_subcommand("free-thm", "check a free theorem instance"), "polymorphic term");
  ft->add_option("--kind", cfg.kind, "identity | constant | constCrossType | continuation")->required();
  ft->add_option("--tau", cfg.tau, "instantiation type")->capture_default_str();
  ft->add_option("--tau2", cfg.tau2, "second instantiation type")->capture_default_str();
  ft->add_option("--tau-k", cfg.tauK, "continuation result type")->capture_default_str();
  ft->add_option("--v1", cfg.v1, "first argument (continuation: the continuation)");
  ft->add_option("--v2", cfg.v2, "second argument");
  bind(ft, &Runner::freeThm);
  auto* demo = app.add_subcommand("demo", "worked examples");
  demo->add_option("name", cfg.demo, "omega | landin | packages")->required();
  demo->add_option("--rel", cfg.rels, "relation literal for the packages demo");
  bind(demo, &Runner::demo);
  auto* gen = app.add_subcommand("gen", "generate well-typed closed terms");
  gen->add_option("--size", cfg.size, "term size")->capture_default_str();
  gen->add_option("--count", cfg.count, "number of terms")->capture_default_str();
  bind(gen, &Runner::gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    Runner r(cfg);
    return (r.*action)();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
  } catch (const GenerationFailed& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kUsage;
}
