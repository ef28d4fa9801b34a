#ifndef LR_RELATIONAL_HPP
#define LR_RELATIONAL_HPP

// Binary logical relation for System F with existentials: finite relations,
// relational substitutions, V/E/G membership, logical equivalence,
// the compositionality oracle and free-theorem runners.

#include "dynamics.hpp"
#include "generate.hpp"
#include "logrel.hpp"
#include "statics.hpp"
#include "surface.hpp"
#include "verdict.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lr {

using ValuePair = std::pair<TermPtr, TermPtr>;

/// A member of Rel[left, right]: a finite set of pairs of closed values.
struct FiniteRel {
  TypePtr left, right;
  std::vector<ValuePair> pairs;
  std::string label;

  bool contains(const TermPtr& a, const TermPtr& b) const {
    for (auto& [x, y] : pairs)
      if (alphaEq(x, a) && alphaEq(y, b)) return true;
    return false;
  }

  /// Every pair is well typed at (left, right) and the types are closed.
  bool wellFormed() const {
    if (!freeTypeVars(left).empty() || !freeTypeVars(right).empty()) return false;
    for (auto& [a, b] : pairs)
      if (!isValue(a) || !isValue(b) || !hasType(a, left) || !hasType(b, right)) return false;
    return true;
  }

  std::string toString() const {
    std::string s = "R : " + printType(left) + " ~ " + printType(right) + " {";
    for (std::size_t i = 0; i < pairs.size(); ++i)
      s += (i ? "; (" : " (") + printTerm(pairs[i].first) + ", " + printTerm(pairs[i].second) + ")";
    return s + (pairs.empty() ? "}" : " }");
  }

  static FiniteRel fromLiteral(const RelLiteral& lit, TypePtr defaultLeft = nullptr, TypePtr defaultRight = nullptr) {
    FiniteRel r{lit.left ? lit.left : defaultLeft, lit.right ? lit.right : defaultRight, lit.pairs, "supplied"};
    if (!r.left || !r.right) {
      // infer from the first pair
      if (r.pairs.empty()) throw std::invalid_argument("relation literal needs types or at least one pair");
      if (!r.left) r.left = typecheck(r.pairs.front().first);
      if (!r.right) r.right = typecheck(r.pairs.front().second);
    }
    if (!r.wellFormed()) throw std::invalid_argument("relation " + r.toString() + " is not in Rel");
    return r;
  }
};

/// rho: type variable -> (left type, right type, relation).
class RelSubst {
public:
  RelSubst() = default;

  RelSubst extend(const Name& a, FiniteRel r) const {
    RelSubst out = *this;
    out.map_[a] = std::move(r);
    return out;
  }

  const FiniteRel* find(const Name& a) const {
    auto it = map_.find(a);
    return it == map_.end() ? nullptr : &it->second;
  }

  TypePtr left(TypePtr t) const {
    for (auto& [a, r] : map_) t = substType(t, r.left, a);
    return t;
  }
  TypePtr right(TypePtr t) const {
    for (auto& [a, r] : map_) t = substType(t, r.right, a);
    return t;
  }
  TermPtr left(TermPtr e) const {
    for (auto& [a, r] : map_) e = substType(e, r.left, a);
    return e;
  }
  TermPtr right(TermPtr e) const {
    for (auto& [a, r] : map_) e = substType(e, r.right, a);
    return e;
  }

  TypeCtx domain() const {
    TypeCtx d;
    for (auto& [a, r] : map_) d.push_back(a);
    return d;
  }
  std::size_t size() const { return map_.size(); }
  const std::map<Name, FiniteRel>& entries() const { return map_; }

  std::string toString() const {
    std::string s = "{";
    bool first = true;
    for (auto& [a, r] : map_) {
      s += (first ? "" : ", ") + a + " -> " + r.toString();
      first = false;
    }
    return s + "}";
  }

private:
  std::map<Name, FiniteRel> map_;
};

/// Finite stand-in for "all relations in Rel[t1, t2]".
class RelCatalog {
public:
  RelCatalog() = default;

  /// identity, empty, graphs of corpus functions and singletons over the base
  /// type pairs, interleaved and cut to `size` entries.
  static RelCatalog standard(ValueCorpus& corpus, std::size_t size = 16) {
    std::vector<std::pair<TypePtr, TypePtr>> typePairs{
        {ty::boolean(), ty::boolean()}, {ty::integer(), ty::integer()},
        {ty::integer(), ty::boolean()}, {ty::boolean(), ty::integer()}};
    std::vector<std::vector<FiniteRel>> perPair;
    for (auto& [l, r] : typePairs) perPair.push_back(candidates(corpus, l, r));
    RelCatalog cat;
    for (std::size_t i = 0; cat.entries_.size() < size; ++i) {
      bool any = false;
      for (auto& list : perPair) {
        if (i < list.size() && cat.entries_.size() < size) {
          cat.entries_.push_back(list[i]);
          any = true;
        }
      }
      if (!any) break;
    }
    return cat;
  }

  static std::vector<FiniteRel> candidates(ValueCorpus& corpus, const TypePtr& l, const TypePtr& r) {
    std::vector<FiniteRel> out;
    auto& ls = corpus.values(l);
    auto& rs = corpus.values(r);
    std::string tag = printType(l) + "~" + printType(r);
    if (alphaEq(l, r)) {
      FiniteRel id{l, r, {}, "id:" + tag};
      for (auto& v : ls) id.pairs.emplace_back(v, v);
      out.push_back(id);
    }
    out.push_back(FiniteRel{l, r, {}, "empty:" + tag});
    // graphs of corpus functions l -> r
    auto fns = corpus.values(ty::arrow(l, r));
    std::size_t graphs = 0;
    for (auto& f : fns) {
      if (graphs >= 8) break;
      FiniteRel g{l, r, {}, "graph:" + printTerm(f)};
      bool ok = true;
      for (auto& v : ls) {
        auto res = evalStar(tm::app(f, v), 1000);
        if (!res.isValue()) { ok = false; break; }
        g.pairs.emplace_back(v, res.config.expr);
      }
      if (ok) {
        out.push_back(g);
        ++graphs;
      }
    }
    for (auto& a : ls)
      for (auto& b : rs) out.push_back(FiniteRel{l, r, {{a, b}}, "single:" + tag});
    // drop relations with the same pair set as an earlier one
    std::vector<FiniteRel> uniq;
    std::set<std::string> seen;
    for (auto& rel : out) {
      std::set<std::string> keys;
      for (auto& [a, b] : rel.pairs) keys.insert(canonicalKey(a) + "~" + canonicalKey(b));
      std::string key;
      for (auto& k : keys) key += k + ";";
      if (seen.insert(key).second) uniq.push_back(std::move(rel));
    }
    return uniq;
  }

  void add(FiniteRel r) { entries_.push_back(std::move(r)); }
  const std::vector<FiniteRel>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

private:
  std::vector<FiniteRel> entries_;
};

struct RelEnv {
  RelCatalog& catalog;
  ValueCorpus& corpus;
  std::size_t fuel = 10000;
  std::vector<FiniteRel> supplied; // tried first by existential clauses
  std::size_t pairCap = 64;
};

inline Verdict eRelMember(const TermPtr& e1, const TermPtr& e2, const TypePtr& t, const RelSubst& rho, RelEnv& env);
inline Verdict vRelMember(const TermPtr& v1, const TermPtr& v2, const TypePtr& t, const RelSubst& rho, RelEnv& env);

namespace detail {

inline bool relExhaustive(const TypePtr& t, const RelSubst& rho) {
  switch (t->kind) {
  case TypeKind::Bool: return true;
  case TypeKind::Var: return rho.find(t->name) != nullptr;
  case TypeKind::Prod: case TypeKind::Sum: return relExhaustive(t->left, rho) && relExhaustive(t->right, rho);
  default: return false;
  }
}

inline std::string pairWitness(const TermPtr& a, const TermPtr& b) {
  return "(" + printTerm(a) + ", " + printTerm(b) + ")";
}

} // namespace detail

/// Pairs of values related at t under rho, drawn from the corpus (exact for
/// Bool and for type variables). Pairs the relation rejects are dropped.
inline std::vector<ValuePair> relatedPairs(const TypePtr& t, const RelSubst& rho, RelEnv& env) {
  std::vector<ValuePair> out;
  switch (t->kind) {
  case TypeKind::Var: {
    auto r = rho.find(t->name);
    if (!r) throw std::invalid_argument("relatedPairs: unbound type variable " + t->name);
    return r->pairs;
  }
  case TypeKind::Bool:
    return {{tm::tru(), tm::tru()}, {tm::fls(), tm::fls()}};
  case TypeKind::Int:
    for (auto& v : env.corpus.values(t)) out.emplace_back(v, v);
    return out;
  case TypeKind::Prod: {
    auto as = relatedPairs(t->left, rho, env);
    auto bs = relatedPairs(t->right, rho, env);
    for (auto& a : as)
      for (auto& b : bs) {
        if (out.size() >= env.pairCap) return out;
        out.emplace_back(tm::pair(a.first, b.first), tm::pair(a.second, b.second));
      }
    return out;
  }
  case TypeKind::Sum: {
    auto l = rho.left(t), r = rho.right(t);
    for (auto& a : relatedPairs(t->left, rho, env)) out.emplace_back(tm::inl(a.first, l), tm::inl(a.second, r));
    for (auto& b : relatedPairs(t->right, rho, env)) out.emplace_back(tm::inr(b.first, l), tm::inr(b.second, r));
    return out;
  }
  default: {
    auto& ls = env.corpus.values(rho.left(t));
    auto& rs = env.corpus.values(rho.right(t));
    for (auto& a : ls)
      for (auto& b : rs) {
        if (out.size() >= env.pairCap) return out;
        if (!vRelMember(a, b, t, rho, env).isDisproven()) out.emplace_back(a, b);
      }
    return out;
  }
  }
}

/// (v1, v2) in V[t]rho.
inline Verdict vRelMember(const TermPtr& v1, const TermPtr& v2, const TypePtr& t, const RelSubst& rho, RelEnv& env) {
  auto no = [&](const std::string& why) {
    return Verdict::disproven(detail::pairWitness(v1, v2), why + " at " + printType(t));
  };
  if (!isValue(v1) || !isValue(v2)) return no("not values");
  auto t1 = rho.left(t), t2 = rho.right(t);
  if (!hasType(v1, t1)) return no("left side not of type " + printType(t1));
  if (!hasType(v2, t2)) return no("right side not of type " + printType(t2));

  switch (t->kind) {
  case TypeKind::Bool:
  case TypeKind::Int:
    return alphaEq(v1, v2) ? Verdict::proven() : no("different results");
  case TypeKind::Var: {
    auto r = rho.find(t->name);
    if (!r) throw std::invalid_argument("vRelMember: unbound type variable " + t->name);
    return r->contains(v1, v2) ? Verdict::proven() : no("pair not in relation for " + t->name);
  }
  case TypeKind::Prod:
    return vRelMember(v1->a, v2->a, t->left, rho, env) && vRelMember(v1->b, v2->b, t->right, rho, env);
  case TypeKind::Sum:
    if (v1->kind != v2->kind) return no("different injections");
    return vRelMember(v1->a, v2->a, v1->kind == TermKind::Inl ? t->left : t->right, rho, env);
  case TypeKind::Arrow: {
    Verdict out = Verdict::proven();
    for (auto& [a1, a2] : relatedPairs(t->left, rho, env)) {
      auto res = eRelMember(tm::app(v1, a1), tm::app(v2, a2), t->right, rho, env);
      if (res.isDisproven())
        return Verdict::disproven(detail::pairWitness(tm::app(v1, a1), tm::app(v2, a2)), res.reason());
      out &= res;
    }
    return detail::relExhaustive(t->left, rho) ? out : out.bounded("CorpusLimited");
  }
  case TypeKind::Forall: {
    Verdict out = Verdict::proven();
    for (auto& r : env.catalog.entries()) {
      auto res = eRelMember(tm::tyapp(v1, r.left), tm::tyapp(v2, r.right), t->left, rho.extend(t->name, r), env);
      if (res.isDisproven())
        return Verdict::disproven(detail::pairWitness(tm::tyapp(v1, r.left), tm::tyapp(v2, r.right)) +
                                      " with " + r.toString(),
                                  res.reason());
      out &= res;
    }
    return out.bounded("CatalogLimited");
  }
  case TypeKind::Exists: {
    const TermPtr& p1 = v1->a;
    const TypePtr& wt1 = v1->type;
    const TypePtr& wt2 = v2->type;
    std::vector<const FiniteRel*> cands;
    for (auto& r : env.supplied)
      if (alphaEq(r.left, wt1) && alphaEq(r.right, wt2)) cands.push_back(&r);
    for (auto& r : env.catalog.entries())
      if (alphaEq(r.left, wt1) && alphaEq(r.right, wt2)) cands.push_back(&r);
    std::optional<Verdict> best;
    for (auto* r : cands) {
      auto res = vRelMember(p1, v2->a, t->left, rho.extend(t->name, *r), env);
      if (res.isProven()) return res;
      if (res.isUpToBounds() && !best) best = res;
    }
    if (best) return *best;
    return Verdict::upToBounds("CatalogExhausted");
  }
  default:
    throw std::invalid_argument("vRelMember: unsupported type " + printType(t));
  }
}

/// (e1, e2) in E[t]rho: both terminate, with related values.
inline Verdict eRelMember(const TermPtr& e1, const TermPtr& e2, const TypePtr& t, const RelSubst& rho, RelEnv& env) {
  auto r1 = evalStar(e1, env.fuel);
  auto r2 = evalStar(e2, env.fuel);
  if (r1.kind == EvalResult::Kind::Stuck || r2.kind == EvalResult::Kind::Stuck)
    return Verdict::disproven(detail::pairWitness(e1, e2), "stuck");
  if (!r1.isValue() || !r2.isValue()) return Verdict::upToBounds("FuelExhausted");
  return vRelMember(r1.config.expr, r2.config.expr, t, rho, env);
}

/// (gamma1, gamma2) in G[Gamma]rho, as a product of related corpus pairs.
inline std::vector<std::map<Name, ValuePair>> relatedSubsts(const TermCtx& gamma, const RelSubst& rho, RelEnv& env,
                                                            std::size_t cap = 64) {
  std::vector<std::map<Name, ValuePair>> out{{}};
  for (auto& [x, t] : gamma) {
    std::vector<std::map<Name, ValuePair>> next;
    for (auto& partial : out)
      for (auto& p : relatedPairs(t, rho, env)) {
        if (next.size() >= cap) break;
        auto m = partial;
        m[x] = p;
        next.push_back(std::move(m));
      }
    out = std::move(next);
  }
  return out;
}

/// Delta; Gamma |- e1 ~ e2 : t over catalog-built rho and corpus-built gamma.
inline Verdict logEquivCheck(const TypeCtx& delta, const TermCtx& gamma, const TermPtr& e1, const TermPtr& e2,
                             const TypePtr& t, RelEnv& env) {
  auto ty1 = tryTypecheck({}, delta, gamma, e1);
  auto ty2 = tryTypecheck({}, delta, gamma, e2);
  if (!ty1 || !alphaEq(*ty1, t)) throw std::invalid_argument("left term does not have type " + printType(t));
  if (!ty2 || !alphaEq(*ty2, t)) throw std::invalid_argument("right term does not have type " + printType(t));

  std::vector<RelSubst> rhos{RelSubst{}};
  for (auto& a : delta) {
    std::vector<RelSubst> next;
    for (auto& rho : rhos)
      for (auto& r : env.catalog.entries()) next.push_back(rho.extend(a, r));
    rhos = std::move(next);
  }
  Verdict out = Verdict::proven();
  for (auto& rho : rhos) {
    for (auto& g : relatedSubsts(gamma, rho, env)) {
      TermPtr c1 = rho.left(e1), c2 = rho.right(e2);
      for (auto& [x, p] : g) {
        c1 = substTerm(c1, p.first, x);
        c2 = substTerm(c2, p.second, x);
      }
      auto res = eRelMember(c1, c2, t, rho, env);
      if (res.isDisproven()) {
        std::string w = "rho=" + rho.toString() + " gamma={";
        for (auto& [x, p] : g) w += x + ":=" + detail::pairWitness(p.first, p.second) + " ";
        return Verdict::disproven(w + "} at " + res.witness(), res.reason());
      }
      out &= res;
    }
  }
  bool exact = delta.empty();
  for (auto& [x, tx] : gamma) exact = exact && detail::relExhaustive(tx, RelSubst{});
  return exact ? out : out.bounded("CorpusLimited");
}

/// V[t[t'/a]]rho agrees with V[t]rho[a -> V[t']rho] on every sample pair.
inline Verdict compositionalityOracle(const TypePtr& t, const TypePtr& tPrime, const Name& a, const RelSubst& rho,
                                      const std::vector<ValuePair>& samples, RelEnv& env) {
  FiniteRel graph{rho.left(tPrime), rho.right(tPrime), relatedPairs(tPrime, rho, env), "V[" + printType(tPrime) + "]"};
  auto rhoExt = rho.extend(a, graph);
  auto substituted = substType(t, tPrime, a);
  for (auto& [v1, v2] : samples) {
    auto lhs = vRelMember(v1, v2, substituted, rho, env);
    auto rhs = vRelMember(v1, v2, t, rhoExt, env);
    if (lhs.isDisproven() != rhs.isDisproven())
      return Verdict::disproven(detail::pairWitness(v1, v2), std::string("substituted: ") + lhs.kindName() +
                                                                  ", semantic: " + rhs.kindName());
  }
  return Verdict::proven();
}

// ---------------------------------------------------------------------------
// Free theorems

enum class FreeTheorem { Identity, Constant, ConstCrossType, Continuation };

inline FreeTheorem parseFreeTheorem(const std::string& s) {
  if (s == "identity") return FreeTheorem::Identity;
  if (s == "constant") return FreeTheorem::Constant;
  if (s == "constCrossType") return FreeTheorem::ConstCrossType;
  if (s == "continuation") return FreeTheorem::Continuation;
  throw std::invalid_argument("unknown free theorem kind '" + s + "'");
}

struct FreeTheoremInput {
  TermPtr e;
  TypePtr tau, tau2;  // instantiations
  TermPtr v1, v2;     // arguments (continuation: v1 = k)
  TypePtr tauK;       // continuation result type
};

namespace detail {

inline std::optional<TermPtr> run(const TermPtr& e, std::size_t fuel) {
  auto r = evalStar(e, fuel);
  if (!r.isValue()) return std::nullopt;
  return r.config.expr;
}

inline void requireType(const TermPtr& e, const TypePtr& t, const char* what) {
  auto got = tryTypecheck(e);
  if (!got || !alphaEq(*got, t))
    throw std::invalid_argument(std::string(what) + " " + printTerm(e) + " does not have type " + printType(t));
}

} // namespace detail

inline Verdict freeTheoremRun(FreeTheorem kind, const FreeTheoremInput& in, RelEnv& env) {
  const std::size_t fuel = env.fuel;
  switch (kind) {
  case FreeTheorem::Identity: {
    detail::requireType(in.e, parseType("all a. a -> a"), "term");
    detail::requireType(in.v1, in.tau, "argument");
    auto r = detail::run(tm::app(tm::tyapp(in.e, in.tau), in.v1), fuel);
    if (!r) return Verdict::upToBounds("FuelExhausted");
    return alphaEq(*r, in.v1) ? Verdict::proven()
                              : Verdict::disproven(printTerm(in.e), "returned " + printTerm(*r) + " for " + printTerm(in.v1));
  }
  case FreeTheorem::Constant:
  case FreeTheorem::ConstCrossType: {
    detail::requireType(in.e, parseType("all a. a -> Bool"), "term");
    auto t2 = kind == FreeTheorem::Constant ? in.tau : in.tau2;
    detail::requireType(in.v1, in.tau, "first argument");
    detail::requireType(in.v2, t2, "second argument");
    auto r1 = detail::run(tm::app(tm::tyapp(in.e, in.tau), in.v1), fuel);
    auto r2 = detail::run(tm::app(tm::tyapp(in.e, t2), in.v2), fuel);
    if (!r1 || !r2) return Verdict::upToBounds("FuelExhausted");
    return alphaEq(*r1, *r2) ? Verdict::proven()
                             : Verdict::disproven(printTerm(in.e), printTerm(*r1) + " vs " + printTerm(*r2));
  }
  case FreeTheorem::Continuation: {
    auto eType = ty::forall("a", ty::arrow(ty::arrow(in.tau, ty::var("a")), ty::var("a")));
    detail::requireType(in.e, eType, "term");
    detail::requireType(in.v1, ty::arrow(in.tau, in.tauK), "continuation");
    auto lhs = tm::app(tm::tyapp(in.e, in.tauK), in.v1);
    auto rhs = tm::app(in.v1, tm::app(tm::tyapp(in.e, in.tau), tm::lam("x", in.tau, tm::var("x"))));
    if (in.tauK->kind == TypeKind::Bool || in.tauK->kind == TypeKind::Int) {
      auto r1 = detail::run(lhs, fuel);
      auto r2 = detail::run(rhs, fuel);
      if (!r1 || !r2) return Verdict::upToBounds("FuelExhausted");
      return alphaEq(*r1, *r2) ? Verdict::proven()
                               : Verdict::disproven(printTerm(in.e), printTerm(*r1) + " vs " + printTerm(*r2));
    }
    return logEquivCheck({}, {}, lhs, rhs, in.tauK, env);
  }
  }
  return Verdict::upToBounds("unknown");
}

} // namespace lr

#endif
