#ifndef LR_CONTEXT_HPP
#define LR_CONTEXT_HPP

// Program contexts: plugging, context typing, and bounded search for a
// context that tells two terms apart.

#include "dynamics.hpp"
#include "generate.hpp"
#include "statics.hpp"
#include "verdict.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lr {

struct ContextTyping {
  HoleTyping hole;
  TypePtr result = ty::boolean();
};

/// Replaces the hole by `e` verbatim; binders of C may capture free variables of e.
inline TermPtr plug(const TermPtr& c, const TermPtr& e) {
  if (!c) return nullptr;
  if (c->kind == TermKind::Hole) return e;
  auto a = plug(c->a, e), b = plug(c->b, e), cc = plug(c->c, e);
  if (a == c->a && b == c->b && cc == c->c) return c;
  return tm::rebuild(c, a, b, cc, c->type, c->type2);
}

inline bool contextTypecheck(const TermPtr& c, const ContextTyping& ct) {
  if (countHoles(c) != 1) return false;
  try {
    return alphaEq(Typechecker({}, {}, {}, &ct.hole).infer(c), ct.result);
  } catch (const TypeError&) {
    return false;
  }
}

/// Annotation alphabet for contexts around a hole of type `t`: Bool, Int when
/// the level has it, and the closed subtypes of `t`.
inline std::vector<TypePtr> contextAlphabet(const TypePtr& t, LangLevel level) {
  std::vector<TypePtr> out{ty::boolean()};
  if (level.has(Feature::Int)) out.push_back(ty::integer());
  std::vector<TypePtr> parts;
  detail::subtypes(t, parts);
  for (auto& p : parts) {
    if (!freeTypeVars(p).empty()) continue;
    bool dup = false;
    for (auto& q : out) dup = dup || alphaEq(p, q);
    if (!dup) out.push_back(p);
  }
  return out;
}

/// Well-typed contexts of size <= maxSize, smallest first.
inline std::vector<TermPtr> enumerateContexts(const ContextTyping& ct, int maxSize, LangLevel level,
                                              std::vector<TypePtr> alphabet) {
  TermEnumerator::Options o;
  o.level = level;
  o.types = std::move(alphabet);
  o.hole = ct.hole;
  TermEnumerator en(o);
  return en.ofType(TermEnumerator::Scope{}, ct.result, maxSize, 1);
}

inline std::vector<TermPtr> enumerateContexts(const ContextTyping& ct, int maxSize, LangLevel level) {
  return enumerateContexts(ct, maxSize, level, contextAlphabet(ct.hole.type, level));
}

struct Distinction {
  Verdict verdict = Verdict::upToBounds("NoContext");
  TermPtr context;
  std::string lhs, rhs;
  std::size_t tried = 0;
  int bound = 0;
  std::size_t fuel = 0;

  std::string line() const {
    if (context)
      return "DISTINGUISHED size=" + std::to_string(termSize(context)) + " ctx=" + printTerm(context) +
             " lhs=" + lhs + " rhs=" + rhs;
    return "NO-CONTEXT bound=" + std::to_string(bound) + " fuel=" + std::to_string(fuel);
  }
};

namespace detail {

// Observable outcome of a closed program: its value, "cycle", or empty when
// inconclusive.
inline std::string observe(const TermPtr& p, std::size_t fuel, bool cycles) {
  auto alloc = Allocator::sequential();
  auto r = evalStar(Config{Heap{}, p}, fuel, alloc, cycles);
  if (r.kind == EvalResult::Kind::Value) return printInHeap(r.config.expr, r.config.heap);
  if (r.kind == EvalResult::Kind::FuelExhausted && r.cycle) return "cycle";
  return {};
}

} // namespace detail

/// Searches contexts of size <= sizeBound for one where e1 and e2 produce
/// different results.
inline Distinction distinguish(const TermPtr& e1, const TermPtr& e2, const ContextTyping& ct, int sizeBound,
                               std::size_t fuel) {
  LangLevel level = levelOf(e1) | levelOf(e2);
  Distinction out;
  out.bound = sizeBound;
  out.fuel = fuel;
  bool cycles = level.has(Feature::Mu) || level.has(Feature::Ref);
  for (auto& c : enumerateContexts(ct, sizeBound, level)) {
    auto p1 = plug(c, e1), p2 = plug(c, e2);
    if (!hasType(p1, ct.result) || !hasType(p2, ct.result)) continue;
    ++out.tried;
    auto v1 = detail::observe(p1, fuel, cycles);
    if (v1.empty()) continue;
    auto v2 = detail::observe(p2, fuel, cycles);
    if (v2.empty() || v1 == v2) continue;
    if (v1 == "cycle" && v2 == "cycle") continue;
    out.context = c;
    out.lhs = v1;
    out.rhs = v2;
    out.verdict = Verdict::disproven(printTerm(c), "lhs=" + v1 + " rhs=" + v2);
    return out;
  }
  Bounds b;
  b.fuel = fuel;
  b.ctxSize = std::size_t(sizeBound);
  b.note = "NoContext";
  out.verdict = Verdict::upToBounds(b);
  return out;
}

} // namespace lr

#endif
