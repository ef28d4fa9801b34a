#ifndef LR_DYNAMICS_HPP
#define LR_DYNAMICS_HPP

// Small-step call-by-value semantics over <heap, term> configurations.

#include "heap.hpp"
#include "surface.hpp"
#include "syntax.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace lr {

struct Config {
  Heap heap;
  TermPtr expr;
};

enum class StuckReason { None, DerefDangling, AssignDangling, IllFormedRedex };

inline const char* toString(StuckReason r) {
  switch (r) {
  case StuckReason::None: return "None";
  case StuckReason::DerefDangling: return "DerefDangling";
  case StuckReason::AssignDangling: return "AssignDangling";
  case StuckReason::IllFormedRedex: return "IllFormedRedex";
  }
  return "?";
}

class Allocator {
public:
  enum class Strategy { Sequential, Randomized };

  static Allocator sequential() { return Allocator(Strategy::Sequential, 0); }
  static Allocator randomized(std::uint64_t seed) { return Allocator(Strategy::Randomized, seed); }

  Strategy strategy() const { return strategy_; }

  Location fresh(const Heap& h) {
    if (strategy_ == Strategy::Sequential) {
      Location l = h.empty() ? 0 : h.cells().rbegin()->first + 1;
      return l;
    }
    std::uniform_int_distribution<Location> dist(0, (Location(1) << 20) - 1);
    for (;;) {
      Location l = dist(rng_);
      if (!h.contains(l)) return l;
    }
  }

private:
  Allocator(Strategy s, std::uint64_t seed) : strategy_(s), rng_(seed) {}
  Strategy strategy_;
  std::mt19937_64 rng_;
};

struct StepOutcome {
  enum class Kind { Stepped, IsValue, Stuck } kind;
  Config next;
  std::string rule;
  StuckReason reason = StuckReason::None;
};

namespace detail {

struct Reducer {
  Heap& heap;
  Allocator& alloc;
  std::string rule;
  StuckReason stuck = StuckReason::None;

  // Returns the reduct, or nullptr when `e` is irreducible (value or stuck).
  TermPtr step(const TermPtr& e) {
    auto fired = [&](const char* r, TermPtr out) {
      rule = r;
      return out;
    };
    auto ill = [&]() -> TermPtr {
      stuck = StuckReason::IllFormedRedex;
      return nullptr;
    };
    // Steps the child at `slot` (0 = a, 1 = b, 2 = c) when it is not a value.
    auto inner = [&](int slot) -> TermPtr {
      const TermPtr& child = slot == 0 ? e->a : slot == 1 ? e->b : e->c;
      auto r = step(child);
      if (!r) return nullptr;
      return tm::rebuild(e, slot == 0 ? r : e->a, slot == 1 ? r : e->b, slot == 2 ? r : e->c, e->type, e->type2);
    };

    switch (e->kind) {
    case TermKind::True: case TermKind::False: case TermKind::Int: case TermKind::Lam:
    case TermKind::TyLam: case TermKind::Loc:
      return nullptr;
    case TermKind::Var: case TermKind::Hole:
      return ill();
    case TermKind::If:
      if (!isValue(e->a)) return inner(0);
      if (e->a->kind == TermKind::True) return fired("IF-TRUE", e->b);
      if (e->a->kind == TermKind::False) return fired("IF-FALSE", e->c);
      return ill();
    case TermKind::App:
      if (!isValue(e->a)) return inner(0);
      if (!isValue(e->b)) return inner(1);
      if (e->a->kind != TermKind::Lam) return ill();
      return fired("BETA", substTerm(e->a->a, e->b, e->a->name));
    case TermKind::Pair:
      if (!isValue(e->a)) return inner(0);
      if (!isValue(e->b)) return inner(1);
      return nullptr;
    case TermKind::Fst: case TermKind::Snd:
      if (!isValue(e->a)) return inner(0);
      if (e->a->kind != TermKind::Pair) return ill();
      return e->kind == TermKind::Fst ? fired("FST", e->a->a) : fired("SND", e->a->b);
    case TermKind::Inl: case TermKind::Inr: case TermKind::Fold: case TermKind::Pack:
      if (!isValue(e->a)) return inner(0);
      return nullptr;
    case TermKind::Case:
      if (!isValue(e->a)) return inner(0);
      if (e->a->kind == TermKind::Inl) return fired("CASE-INL", substTerm(e->b, e->a->a, e->name));
      if (e->a->kind == TermKind::Inr) return fired("CASE-INR", substTerm(e->c, e->a->a, e->name2));
      return ill();
    case TermKind::TyApp:
      if (!isValue(e->a)) return inner(0);
      if (e->a->kind != TermKind::TyLam) return ill();
      return fired("TBETA", substType(e->a->a, e->type, e->a->name));
    case TermKind::Unpack:
      if (!isValue(e->a)) return inner(0);
      if (e->a->kind != TermKind::Pack) return ill();
      return fired("UNPACK", substTerm(substType(e->b, e->a->type, e->name), e->a->a, e->name2));
    case TermKind::Unfold:
      if (!isValue(e->a)) return inner(0);
      if (e->a->kind != TermKind::Fold) return ill();
      return fired("UNFOLD", e->a->a);
    case TermKind::Alloc: {
      if (!isValue(e->a)) return inner(0);
      Location l = alloc.fresh(heap);
      heap.allocate(l, e->a);
      return fired("ALLOC", tm::loc(l));
    }
    case TermKind::Assign:
      if (!isValue(e->a)) return inner(0);
      if (!isValue(e->b)) return inner(1);
      if (e->a->kind != TermKind::Loc) return ill();
      if (!heap.contains(e->a->loc)) {
        stuck = StuckReason::AssignDangling;
        return nullptr;
      }
      heap.write(e->a->loc, e->b);
      return fired("ASSIGN", e->b);
    case TermKind::Deref:
      if (!isValue(e->a)) return inner(0);
      if (e->a->kind != TermKind::Loc) return ill();
      if (!heap.contains(e->a->loc)) {
        stuck = StuckReason::DerefDangling;
        return nullptr;
      }
      return fired("DEREF", heap.at(e->a->loc));
    case TermKind::IntEq:
      if (!isValue(e->a)) return inner(0);
      if (!isValue(e->b)) return inner(1);
      if (e->a->kind != TermKind::Int || e->b->kind != TermKind::Int) return ill();
      return fired("EQ", tm::boolean(e->a->number == e->b->number));
    case TermKind::Not:
      if (!isValue(e->a)) return inner(0);
      if (e->a->kind == TermKind::True) return fired("NOT", tm::fls());
      if (e->a->kind == TermKind::False) return fired("NOT", tm::tru());
      return ill();
    }
    return ill();
  }
};

} // namespace detail

/// One step in place; returns the outcome kind, filling `rule`/`reason`.
inline StepOutcome::Kind stepInPlace(Config& c, Allocator& alloc, std::string* rule = nullptr,
                                     StuckReason* reason = nullptr) {
  detail::Reducer r{c.heap, alloc, {}, StuckReason::None};
  auto next = r.step(c.expr);
  if (next) {
    c.expr = std::move(next);
    if (rule) *rule = std::move(r.rule);
    return StepOutcome::Kind::Stepped;
  }
  if (isValue(c.expr)) return StepOutcome::Kind::IsValue;
  if (reason) *reason = r.stuck == StuckReason::None ? StuckReason::IllFormedRedex : r.stuck;
  return StepOutcome::Kind::Stuck;
}

inline StepOutcome step(const Config& c, Allocator& alloc) {
  StepOutcome out{StepOutcome::Kind::IsValue, c, {}, StuckReason::None};
  out.kind = stepInPlace(out.next, alloc, &out.rule, &out.reason);
  return out;
}

/// Key equal for configurations that agree up to alpha-equivalence and a
/// renaming of locations consistent with allocation order.
inline std::string configKey(const Config& c) {
  std::function<std::string(Location)> name = [&](Location l) {
    long i = c.heap.indexOf(l);
    return i < 0 ? "?" + std::to_string(l) : "#" + std::to_string(i);
  };
  std::string key = canonicalKey(c.expr, &name);
  for (auto l : c.heap.order()) key += '|' + canonicalKey(c.heap.at(l), &name);
  return key;
}

struct EvalResult {
  enum class Kind { Value, Stuck, FuelExhausted } kind;
  Config config;
  std::size_t steps = 0;
  StuckReason reason = StuckReason::None;
  // step indices of a repeated configuration, when cycle detection fired
  std::optional<std::pair<std::size_t, std::size_t>> cycle;
  std::optional<std::pair<Config, Config>> cycleConfigs;

  bool isValue() const { return kind == Kind::Value; }
};

inline EvalResult evalStar(Config c, std::size_t fuel, Allocator& alloc, bool detectCycles = false) {
  EvalResult res{EvalResult::Kind::FuelExhausted, {}, 0, StuckReason::None, std::nullopt, std::nullopt};
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<Config> history;
  if (detectCycles) {
    seen.emplace(configKey(c), 0);
    history.push_back(c);
  }
  std::size_t n = 0;
  for (;;) {
    if (isValue(c.expr)) {
      res.kind = EvalResult::Kind::Value;
      break;
    }
    if (n == fuel) break;
    StuckReason why = StuckReason::None;
    auto k = stepInPlace(c, alloc, nullptr, &why);
    if (k == StepOutcome::Kind::Stuck) {
      res.kind = EvalResult::Kind::Stuck;
      res.reason = why;
      break;
    }
    ++n;
    if (detectCycles && !res.cycle) {
      auto [it, fresh] = seen.emplace(configKey(c), n);
      if (fresh) {
        history.push_back(c);
      } else {
        res.cycle = std::make_pair(it->second, n);
        res.cycleConfigs = std::make_pair(history[it->second], c);
        seen.clear();
        history.clear();
      }
    }
  }
  res.config = std::move(c);
  res.steps = n;
  return res;
}

inline EvalResult evalStar(const TermPtr& e, std::size_t fuel, Allocator& alloc, bool detectCycles = false) {
  return evalStar(Config{Heap{}, e}, fuel, alloc, detectCycles);
}

inline EvalResult evalStar(const TermPtr& e, std::size_t fuel) {
  auto a = Allocator::sequential();
  return evalStar(Config{Heap{}, e}, fuel, a, false);
}

struct TraceEntry {
  Config config;
  std::string rule;
};

/// Configurations reached by each step, with the rule that produced them.
inline std::vector<TraceEntry> trace(Config c, std::size_t fuel, Allocator& alloc) {
  std::vector<TraceEntry> out;
  for (std::size_t n = 0; n < fuel; ++n) {
    std::string rule;
    if (stepInPlace(c, alloc, &rule) != StepOutcome::Kind::Stepped) break;
    out.push_back(TraceEntry{c, rule});
  }
  return out;
}

inline std::string printHeap(const Heap& h) {
  std::function<std::string(Location)> name = [&](Location l) {
    long i = h.indexOf(l);
    return i < 0 ? "#l?" + std::to_string(l) : "#l" + std::to_string(i);
  };
  std::string out = "{";
  bool first = true;
  for (auto l : h.order()) {
    if (!first) out += ", ";
    first = false;
    out += name(l) + ":" + printTerm(h.at(l), name);
  }
  return out + "}";
}

/// Term with locations numbered by allocation order in `h`.
inline std::string printInHeap(const TermPtr& e, const Heap& h) {
  std::function<std::string(Location)> name = [&](Location l) {
    long i = h.indexOf(l);
    return i < 0 ? "#l?" + std::to_string(l) : "#l" + std::to_string(i);
  };
  return printTerm(e, name);
}

inline std::string traceLine(std::size_t n, const TraceEntry& t) {
  return "STEP " + std::to_string(n) + " RULE " + t.rule + " EXPR " + printInHeap(t.config.expr, t.config.heap) +
         " HEAP " + printHeap(t.config.heap);
}

} // namespace lr

#endif
