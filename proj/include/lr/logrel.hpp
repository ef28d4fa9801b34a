#ifndef LR_LOGREL_HPP
#define LR_LOGREL_HPP

// Unary logical predicates: strong normalization and the safety
// interpretation, with arrow quantifiers finitized by a value corpus.

#include "dynamics.hpp"
#include "generate.hpp"
#include "statics.hpp"
#include "verdict.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace lr {

enum class PredicateMode { StrongNormalization, Safety };

namespace detail {

inline std::string stuckWitness(const EvalResult& r) {
  return printInHeap(r.config.expr, r.config.heap) + " [" + toString(r.reason) + "]";
}

} // namespace detail

/// SN_t(e): e has type t, terminates within fuel, and arrow-typed terms map
/// corpus arguments satisfying SN to results satisfying SN.
inline Verdict snCheck(const TermPtr& e, const TypePtr& t, ValueCorpus& corpus, std::size_t fuel) {
  auto got = tryTypecheck(e);
  if (!got || !alphaEq(*got, t)) return Verdict::disproven(printTerm(e), "not of type " + printType(t));
  auto alloc = Allocator::sequential();
  auto r = evalStar(e, fuel, alloc, true);
  if (r.kind == EvalResult::Kind::Stuck) return Verdict::disproven(detail::stuckWitness(r), "stuck");
  if (r.kind == EvalResult::Kind::FuelExhausted) {
    if (r.cycle) return Verdict::disproven(printTerm(e), "diverges (cycle)");
    return Verdict::upToBounds("FuelExhausted");
  }
  const TermPtr& v = r.config.expr;
  switch (t->kind) {
  case TypeKind::Bool: case TypeKind::Int:
    return Verdict::proven();
  case TypeKind::Prod:
    return snCheck(v->a, t->left, corpus, fuel) && snCheck(v->b, t->right, corpus, fuel);
  case TypeKind::Sum:
    return snCheck(v->a, v->kind == TermKind::Inl ? t->left : t->right, corpus, fuel);
  case TypeKind::Arrow: {
    Verdict out = Verdict::upToBounds("CorpusLimited");
    for (auto& arg : corpus.values(t->left)) {
      if (snCheck(arg, t->left, corpus, fuel).isDisproven()) continue;
      auto res = snCheck(tm::app(e, arg), t->right, corpus, fuel);
      if (res.isDisproven()) return res;
      out &= res;
    }
    return out;
  }
  default:
    throw std::invalid_argument("snCheck: unsupported type " + printType(t));
  }
}

inline Verdict eMember(const TermPtr& e, const TypePtr& t, ValueCorpus& corpus, std::size_t fuel);

/// v in V[t] of the safety interpretation; no well-typedness is required.
inline Verdict vMember(const TermPtr& v, const TypePtr& t, ValueCorpus& corpus, std::size_t fuel) {
  auto no = [&](const std::string& why) { return Verdict::disproven(printTerm(v), why + " at " + printType(t)); };
  if (!isValue(v)) return no("not a value");
  switch (t->kind) {
  case TypeKind::Bool:
    return v->kind == TermKind::True || v->kind == TermKind::False ? Verdict::proven() : no("not a boolean");
  case TypeKind::Int:
    return v->kind == TermKind::Int ? Verdict::proven() : no("not an integer");
  case TypeKind::Prod:
    if (v->kind != TermKind::Pair) return no("not a pair");
    return vMember(v->a, t->left, corpus, fuel) && vMember(v->b, t->right, corpus, fuel);
  case TypeKind::Sum:
    if (v->kind == TermKind::Inl) return vMember(v->a, t->left, corpus, fuel);
    if (v->kind == TermKind::Inr) return vMember(v->a, t->right, corpus, fuel);
    return no("not an injection");
  case TypeKind::Arrow: {
    if (v->kind != TermKind::Lam) return no("not a function");
    Verdict out = Verdict::proven();
    for (auto& arg : corpus.values(t->left)) {
      if (vMember(arg, t->left, corpus, fuel).isDisproven()) continue;
      auto res = eMember(substTerm(v->a, arg, v->name), t->right, corpus, fuel);
      if (res.isDisproven()) return Verdict::disproven(printTerm(tm::app(v, arg)), res.reason());
      out &= res;
    }
    return ValueCorpus::exhaustive(t->left) ? out : out.bounded("CorpusLimited");
  }
  default:
    throw std::invalid_argument("vMember: unsupported type " + printType(t));
  }
}

/// e in E[t]: every irreducible result of e is in V[t].
inline Verdict eMember(const TermPtr& e, const TypePtr& t, ValueCorpus& corpus, std::size_t fuel) {
  auto alloc = Allocator::sequential();
  auto r = evalStar(e, fuel, alloc);
  if (r.kind == EvalResult::Kind::Stuck) return Verdict::disproven(detail::stuckWitness(r), "stuck");
  if (r.kind == EvalResult::Kind::FuelExhausted) return Verdict::upToBounds("FuelExhausted");
  return vMember(r.config.expr, t, corpus, fuel);
}

/// safe(e): no configuration reachable from <{}, e> within fuel is stuck.
inline Verdict safeCheck(const TermPtr& e, std::size_t fuel, Allocator& alloc) {
  auto r = evalStar(Config{Heap{}, e}, fuel, alloc, true);
  if (r.kind == EvalResult::Kind::Value) return Verdict::proven();
  if (r.kind == EvalResult::Kind::Stuck) return Verdict::disproven(detail::stuckWitness(r), toString(r.reason));
  return Verdict::upToBounds(r.cycle ? "cycle" : "FuelExhausted");
}

/// Safety starting from an arbitrary configuration (API-level stuck states).
inline Verdict safeCheck(const Config& c, std::size_t fuel, Allocator& alloc) {
  auto r = evalStar(c, fuel, alloc, true);
  if (r.kind == EvalResult::Kind::Value) return Verdict::proven();
  if (r.kind == EvalResult::Kind::Stuck) return Verdict::disproven(detail::stuckWitness(r), toString(r.reason));
  return Verdict::upToBounds(r.cycle ? "cycle" : "FuelExhausted");
}

using ValueSubst = std::map<Name, TermPtr>;

/// gamma |= Gamma under the selected predicate.
inline Verdict gammaSatisfies(const ValueSubst& gamma, const TermCtx& ctx, ValueCorpus& corpus, std::size_t fuel,
                              PredicateMode mode = PredicateMode::Safety) {
  if (gamma.size() != ctx.size()) return Verdict::disproven("-", "domains differ");
  Verdict out = Verdict::proven();
  for (auto& [x, t] : ctx) {
    auto it = gamma.find(x);
    if (it == gamma.end()) return Verdict::disproven(x, "unbound in substitution");
    auto v = mode == PredicateMode::StrongNormalization ? snCheck(it->second, t, corpus, fuel)
                                                        : vMember(it->second, t, corpus, fuel);
    if (v.isDisproven()) return Verdict::disproven(x + " := " + printTerm(it->second), v.reason());
    out &= v;
  }
  return out;
}

/// Applies a closing substitution of closed values.
inline TermPtr applySubst(TermPtr e, const ValueSubst& gamma) {
  for (auto& [x, v] : gamma) e = substTerm(e, v, x);
  return e;
}

} // namespace lr

#endif
