#ifndef LR_SYNTAX_HPP
#define LR_SYNTAX_HPP

// Abstract syntax shared by every calculus in the workbench: types, terms,
// language levels, free-name computation, capture-avoiding substitution and
// alpha-equivalence.

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lr {

using Name = std::string;
using Location = std::uint64_t;

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 0;
  int column = 0;
};

// ---------------------------------------------------------------------------
// Types

enum class TypeKind { Bool, Int, Arrow, Prod, Sum, Forall, Exists, Mu, Ref, Var };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  TypeKind kind;
  Name name;     // binder (Forall/Exists/Mu) or variable name
  TypePtr left;  // Arrow/Prod/Sum left operand; body of binders and Ref
  TypePtr right; // Arrow/Prod/Sum right operand

  bool isBinder() const {
    return kind == TypeKind::Forall || kind == TypeKind::Exists || kind == TypeKind::Mu;
  }
  bool isBinary() const {
    return kind == TypeKind::Arrow || kind == TypeKind::Prod || kind == TypeKind::Sum;
  }
};

namespace ty {

inline TypePtr make(TypeKind k, Name n, TypePtr l, TypePtr r) {
  return std::make_shared<const Type>(Type{k, std::move(n), std::move(l), std::move(r)});
}
inline TypePtr boolean() {
  static const TypePtr t = make(TypeKind::Bool, {}, nullptr, nullptr);
  return t;
}
inline TypePtr integer() {
  static const TypePtr t = make(TypeKind::Int, {}, nullptr, nullptr);
  return t;
}
inline TypePtr arrow(TypePtr a, TypePtr b) { return make(TypeKind::Arrow, {}, std::move(a), std::move(b)); }
inline TypePtr prod(TypePtr a, TypePtr b) { return make(TypeKind::Prod, {}, std::move(a), std::move(b)); }
inline TypePtr sum(TypePtr a, TypePtr b) { return make(TypeKind::Sum, {}, std::move(a), std::move(b)); }
inline TypePtr forall(Name a, TypePtr body) { return make(TypeKind::Forall, std::move(a), std::move(body), nullptr); }
inline TypePtr exists(Name a, TypePtr body) { return make(TypeKind::Exists, std::move(a), std::move(body), nullptr); }
inline TypePtr mu(Name a, TypePtr body) { return make(TypeKind::Mu, std::move(a), std::move(body), nullptr); }
inline TypePtr ref(TypePtr t) { return make(TypeKind::Ref, {}, std::move(t), nullptr); }
inline TypePtr var(Name a) { return make(TypeKind::Var, std::move(a), nullptr, nullptr); }

inline TypePtr rebuild(const TypePtr& t, TypePtr l, TypePtr r) {
  if (l == t->left && r == t->right) return t;
  return make(t->kind, t->name, std::move(l), std::move(r));
}

} // namespace ty

// ---------------------------------------------------------------------------
// Terms

enum class TermKind {
  Var, True, False, Int, If, Lam, App, Pair, Fst, Snd, Inl, Inr, Case,
  TyLam, TyApp, Pack, Unpack, Fold, Unfold, Alloc, Assign, Deref, Loc,
  IntEq, Not, Hole
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// One node of the unified term language.
///
/// Field usage by kind:
///   Var x                      name
///   Int n                      number
///   Lam x:T. a                 name, type, a
///   Inl/Inr a as T             type, a
///   Case a of inl x => b | inr y => c
///                              name = x, name2 = y
///   TyLam X. a                 name
///   TyApp a [T]                type
///   Pack <W, a> as T           type = W (witness), type2 = T
///   Unpack <X, y> = a in b     name = X, name2 = y
///   Fold a as T                type
///   Loc                        loc
/// Binary forms use a and b; If uses a, b, c.
struct Term {
  TermKind kind = TermKind::Hole;
  Name name;
  Name name2;
  std::int64_t number = 0;
  Location loc = 0;
  TypePtr type;
  TypePtr type2;
  TermPtr a, b, c;
  SourceSpan span;
};

namespace tm {

inline TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

inline Term node(TermKind k, Name n = {}, Name n2 = {}) {
  Term t;
  t.kind = k;
  t.name = std::move(n);
  t.name2 = std::move(n2);
  return t;
}

inline TermPtr var(Name x) { return make(node(TermKind::Var, std::move(x))); }
inline TermPtr tru() {
  static const TermPtr t = make(node(TermKind::True));
  return t;
}
inline TermPtr fls() {
  static const TermPtr t = make(node(TermKind::False));
  return t;
}
inline TermPtr boolean(bool b) { return b ? tru() : fls(); }
inline TermPtr integer(std::int64_t n) {
  Term t = node(TermKind::Int);
  t.number = n;
  return make(std::move(t));
}
inline TermPtr ite(TermPtr c, TermPtr t, TermPtr e) {
  Term n = node(TermKind::If);
  n.a = std::move(c); n.b = std::move(t); n.c = std::move(e);
  return make(std::move(n));
}
inline TermPtr lam(Name x, TypePtr ty, TermPtr body) {
  Term n = node(TermKind::Lam, std::move(x));
  n.type = std::move(ty); n.a = std::move(body);
  return make(std::move(n));
}
inline TermPtr unary(TermKind k, TermPtr a) {
  Term n = node(k);
  n.a = std::move(a);
  return make(std::move(n));
}
inline TermPtr binary(TermKind k, TermPtr a, TermPtr b) {
  Term n = node(k);
  n.a = std::move(a); n.b = std::move(b);
  return make(std::move(n));
}
inline TermPtr app(TermPtr f, TermPtr x) { return binary(TermKind::App, std::move(f), std::move(x)); }
inline TermPtr pair(TermPtr a, TermPtr b) { return binary(TermKind::Pair, std::move(a), std::move(b)); }
inline TermPtr fst(TermPtr a) { return unary(TermKind::Fst, std::move(a)); }
inline TermPtr snd(TermPtr a) { return unary(TermKind::Snd, std::move(a)); }
inline TermPtr inl(TermPtr a, TypePtr annot) {
  Term n = node(TermKind::Inl);
  n.a = std::move(a); n.type = std::move(annot);
  return make(std::move(n));
}
inline TermPtr inr(TermPtr a, TypePtr annot) {
  Term n = node(TermKind::Inr);
  n.a = std::move(a); n.type = std::move(annot);
  return make(std::move(n));
}
inline TermPtr caseOf(TermPtr scrut, Name x, TermPtr l, Name y, TermPtr r) {
  Term n = node(TermKind::Case, std::move(x), std::move(y));
  n.a = std::move(scrut); n.b = std::move(l); n.c = std::move(r);
  return make(std::move(n));
}
inline TermPtr tylam(Name a, TermPtr body) {
  Term n = node(TermKind::TyLam, std::move(a));
  n.a = std::move(body);
  return make(std::move(n));
}
inline TermPtr tyapp(TermPtr f, TypePtr arg) {
  Term n = node(TermKind::TyApp);
  n.a = std::move(f); n.type = std::move(arg);
  return make(std::move(n));
}
inline TermPtr pack(TypePtr witness, TermPtr payload, TypePtr annot) {
  Term n = node(TermKind::Pack);
  n.type = std::move(witness); n.type2 = std::move(annot); n.a = std::move(payload);
  return make(std::move(n));
}
inline TermPtr unpack(Name a, Name x, TermPtr packed, TermPtr body) {
  Term n = node(TermKind::Unpack, std::move(a), std::move(x));
  n.a = std::move(packed); n.b = std::move(body);
  return make(std::move(n));
}
inline TermPtr fold(TermPtr a, TypePtr annot) {
  Term n = node(TermKind::Fold);
  n.a = std::move(a); n.type = std::move(annot);
  return make(std::move(n));
}
inline TermPtr unfold(TermPtr a) { return unary(TermKind::Unfold, std::move(a)); }
inline TermPtr alloc(TermPtr a) { return unary(TermKind::Alloc, std::move(a)); }
inline TermPtr assign(TermPtr l, TermPtr v) { return binary(TermKind::Assign, std::move(l), std::move(v)); }
inline TermPtr deref(TermPtr a) { return unary(TermKind::Deref, std::move(a)); }
inline TermPtr loc(Location l) {
  Term n = node(TermKind::Loc);
  n.loc = l;
  return make(std::move(n));
}
inline TermPtr inteq(TermPtr a, TermPtr b) { return binary(TermKind::IntEq, std::move(a), std::move(b)); }
inline TermPtr lnot(TermPtr a) { return unary(TermKind::Not, std::move(a)); }
inline TermPtr hole() {
  static const TermPtr t = make(node(TermKind::Hole));
  return t;
}

/// Copy of `t` with new children/annotations; returns `t` itself when nothing changed.
inline TermPtr rebuild(const TermPtr& t, TermPtr a, TermPtr b, TermPtr c,
                       TypePtr type, TypePtr type2) {
  if (a == t->a && b == t->b && c == t->c && type == t->type && type2 == t->type2) return t;
  Term n = *t;
  n.a = std::move(a); n.b = std::move(b); n.c = std::move(c);
  n.type = std::move(type); n.type2 = std::move(type2);
  return make(std::move(n));
}

} // namespace tm

// ---------------------------------------------------------------------------
// Language levels

enum class Feature : unsigned {
  Base = 1u << 0,
  Pairs = 1u << 1,
  Sums = 1u << 2,
  Int = 1u << 3,
  SystemF = 1u << 4,
  Existential = 1u << 5,
  Mu = 1u << 6,
  Ref = 1u << 7,
};

class LangLevel {
public:
  constexpr LangLevel() = default;
  constexpr explicit LangLevel(unsigned bits) : bits_(bits | unsigned(Feature::Base)) {}
  constexpr LangLevel(std::initializer_list<Feature> fs) {
    for (auto f : fs) bits_ |= unsigned(f);
  }

  static constexpr LangLevel all() { return LangLevel(0xFFu); }
  static constexpr LangLevel stlc() {
    return {Feature::Base, Feature::Pairs, Feature::Sums, Feature::Int};
  }

  constexpr bool has(Feature f) const { return (bits_ & unsigned(f)) != 0; }
  constexpr LangLevel with(Feature f) const { return LangLevel(bits_ | unsigned(f)); }
  constexpr LangLevel operator|(LangLevel o) const { return LangLevel(bits_ | o.bits_); }
  constexpr bool includes(LangLevel o) const { return (o.bits_ & ~bits_) == 0; }
  constexpr unsigned bits() const { return bits_; }
  constexpr bool operator==(const LangLevel&) const = default;

  std::string toString() const {
    static const std::pair<Feature, const char*> names[] = {
        {Feature::Base, "base"}, {Feature::Pairs, "pairs"}, {Feature::Sums, "sums"},
        {Feature::Int, "int"}, {Feature::SystemF, "systemF"},
        {Feature::Existential, "existential"}, {Feature::Mu, "mu"}, {Feature::Ref, "ref"}};
    std::string out;
    for (auto& [f, n] : names) {
      if (!has(f)) continue;
      if (!out.empty()) out += '+';
      out += n;
    }
    return out;
  }

  /// Accepts "+"-separated feature names and the aliases stlc, systemf,
  /// exists, mu, ref, full.
  static LangLevel parse(const std::string& text) {
    LangLevel out{Feature::Base};
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto next = text.find('+', pos);
      if (next == std::string::npos) next = text.size();
      std::string part = text.substr(pos, next - pos);
      pos = next + 1;
      if (part.empty()) throw std::invalid_argument("empty language level component");
      if (part == "base") continue;
      else if (part == "pairs") out = out.with(Feature::Pairs);
      else if (part == "sums") out = out.with(Feature::Sums);
      else if (part == "int") out = out.with(Feature::Int);
      else if (part == "systemF" || part == "systemf" || part == "forall") out = out.with(Feature::SystemF);
      else if (part == "existential" || part == "exists") out = out.with(Feature::Existential);
      else if (part == "mu") out = out.with(Feature::Mu);
      else if (part == "ref") out = out.with(Feature::Ref);
      else if (part == "stlc") out = out | stlc();
      else if (part == "full" || part == "all") out = all();
      else throw std::invalid_argument("unknown language level '" + part + "'");
    }
    return out;
  }

private:
  unsigned bits_ = unsigned(Feature::Base);
};

inline bool levelCheck(const TypePtr& t, LangLevel level) {
  if (!t) return true;
  switch (t->kind) {
  case TypeKind::Bool: return true;
  case TypeKind::Int: return level.has(Feature::Int);
  case TypeKind::Arrow: break;
  case TypeKind::Prod: if (!level.has(Feature::Pairs)) return false; break;
  case TypeKind::Sum: if (!level.has(Feature::Sums)) return false; break;
  case TypeKind::Forall: if (!level.has(Feature::SystemF)) return false; break;
  case TypeKind::Exists: if (!level.has(Feature::Existential)) return false; break;
  case TypeKind::Mu: if (!level.has(Feature::Mu)) return false; break;
  case TypeKind::Ref: if (!level.has(Feature::Ref)) return false; break;
  case TypeKind::Var:
    return level.has(Feature::SystemF) || level.has(Feature::Existential) || level.has(Feature::Mu);
  }
  return levelCheck(t->left, level) && levelCheck(t->right, level);
}

/// True iff every constructor of `e` (including its type annotations) is enabled by `level`.
inline bool levelCheck(const TermPtr& e, LangLevel level) {
  if (!e) return true;
  bool ok = true;
  switch (e->kind) {
  case TermKind::Int: case TermKind::IntEq: ok = level.has(Feature::Int); break;
  case TermKind::Pair: case TermKind::Fst: case TermKind::Snd: ok = level.has(Feature::Pairs); break;
  case TermKind::Inl: case TermKind::Inr: case TermKind::Case: ok = level.has(Feature::Sums); break;
  case TermKind::TyLam: case TermKind::TyApp: ok = level.has(Feature::SystemF); break;
  case TermKind::Pack: case TermKind::Unpack: ok = level.has(Feature::Existential); break;
  case TermKind::Fold: case TermKind::Unfold: ok = level.has(Feature::Mu); break;
  case TermKind::Alloc: case TermKind::Assign: case TermKind::Deref: case TermKind::Loc:
    ok = level.has(Feature::Ref); break;
  default: break;
  }
  return ok && levelCheck(e->type, level) && levelCheck(e->type2, level) &&
         levelCheck(e->a, level) && levelCheck(e->b, level) && levelCheck(e->c, level);
}

/// Smallest level accepting `e`.
inline LangLevel levelOf(const TermPtr& e) {
  static const Feature fs[] = {Feature::Pairs, Feature::Sums, Feature::Int, Feature::SystemF,
                               Feature::Existential, Feature::Mu, Feature::Ref};
  LangLevel out{Feature::Base};
  for (auto f : fs)
    if (!levelCheck(e, LangLevel(LangLevel::all().bits() & ~unsigned(f)))) out = out.with(f);
  return out;
}

// ---------------------------------------------------------------------------
// Free names

inline void collectFreeTypeVars(const TypePtr& t, std::set<Name>& bound, std::set<Name>& out) {
  if (!t) return;
  switch (t->kind) {
  case TypeKind::Var:
    if (!bound.count(t->name)) out.insert(t->name);
    return;
  case TypeKind::Forall: case TypeKind::Exists: case TypeKind::Mu: {
    bool fresh = bound.insert(t->name).second;
    collectFreeTypeVars(t->left, bound, out);
    if (fresh) bound.erase(t->name);
    return;
  }
  default:
    collectFreeTypeVars(t->left, bound, out);
    collectFreeTypeVars(t->right, bound, out);
  }
}

inline std::set<Name> freeTypeVars(const TypePtr& t) {
  std::set<Name> bound, out;
  collectFreeTypeVars(t, bound, out);
  return out;
}

inline void collectFreeTypeVars(const TermPtr& e, std::set<Name>& bound, std::set<Name>& out) {
  if (!e) return;
  collectFreeTypeVars(e->type, bound, out);
  collectFreeTypeVars(e->type2, bound, out);
  if (e->kind == TermKind::TyLam) {
    bool fresh = bound.insert(e->name).second;
    collectFreeTypeVars(e->a, bound, out);
    if (fresh) bound.erase(e->name);
    return;
  }
  if (e->kind == TermKind::Unpack) {
    collectFreeTypeVars(e->a, bound, out);
    bool fresh = bound.insert(e->name).second;
    collectFreeTypeVars(e->b, bound, out);
    if (fresh) bound.erase(e->name);
    return;
  }
  collectFreeTypeVars(e->a, bound, out);
  collectFreeTypeVars(e->b, bound, out);
  collectFreeTypeVars(e->c, bound, out);
}

inline std::set<Name> freeTypeVars(const TermPtr& e) {
  std::set<Name> bound, out;
  collectFreeTypeVars(e, bound, out);
  return out;
}

inline void collectFreeVars(const TermPtr& e, std::multiset<Name>& bound, std::set<Name>& out) {
  if (!e) return;
  auto under = [&](const Name& x, const TermPtr& body) {
    auto it = bound.insert(x);
    collectFreeVars(body, bound, out);
    bound.erase(it);
  };
  switch (e->kind) {
  case TermKind::Var:
    if (!bound.count(e->name)) out.insert(e->name);
    return;
  case TermKind::Lam:
    under(e->name, e->a);
    return;
  case TermKind::Case:
    collectFreeVars(e->a, bound, out);
    under(e->name, e->b);
    under(e->name2, e->c);
    return;
  case TermKind::Unpack:
    collectFreeVars(e->a, bound, out);
    under(e->name2, e->b);
    return;
  default:
    collectFreeVars(e->a, bound, out);
    collectFreeVars(e->b, bound, out);
    collectFreeVars(e->c, bound, out);
  }
}

inline std::set<Name> freeVars(const TermPtr& e) {
  std::multiset<Name> bound;
  std::set<Name> out;
  collectFreeVars(e, bound, out);
  return out;
}

inline bool isClosed(const TermPtr& e) { return freeVars(e).empty() && freeTypeVars(e).empty(); }

/// `base` if unused, otherwise base followed by the smallest numeric suffix not in `avoid`.
inline Name freshName(const Name& base, const std::set<Name>& avoid) {
  if (!avoid.count(base)) return base;
  for (unsigned i = 1;; ++i) {
    Name cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

inline void collectAllNames(const TypePtr& t, std::set<Name>& out) {
  if (!t) return;
  if (!t->name.empty()) out.insert(t->name);
  collectAllNames(t->left, out);
  collectAllNames(t->right, out);
}

inline void collectAllNames(const TermPtr& e, std::set<Name>& out) {
  if (!e) return;
  if (!e->name.empty()) out.insert(e->name);
  if (!e->name2.empty()) out.insert(e->name2);
  collectAllNames(e->type, out);
  collectAllNames(e->type2, out);
  collectAllNames(e->a, out);
  collectAllNames(e->b, out);
  collectAllNames(e->c, out);
}

// ---------------------------------------------------------------------------
// Substitution

namespace detail {

inline TypePtr substType(const TypePtr& t, const TypePtr& repl, const Name& a,
                         const std::set<Name>& replFree) {
  if (!t) return t;
  switch (t->kind) {
  case TypeKind::Bool: case TypeKind::Int: return t;
  case TypeKind::Var: return t->name == a ? repl : t;
  case TypeKind::Forall: case TypeKind::Exists: case TypeKind::Mu: {
    if (t->name == a) return t;
    if (replFree.count(t->name)) {
      auto bodyFree = freeTypeVars(t->left);
      if (!bodyFree.count(a)) return t;
      std::set<Name> avoid = replFree;
      avoid.insert(bodyFree.begin(), bodyFree.end());
      avoid.insert(a);
      Name fresh = freshName(t->name, avoid);
      auto renamed = substType(t->left, ty::var(fresh), t->name, {fresh});
      return ty::make(t->kind, fresh, substType(renamed, repl, a, replFree), nullptr);
    }
    return ty::rebuild(t, substType(t->left, repl, a, replFree), nullptr);
  }
  default:
    return ty::rebuild(t, substType(t->left, repl, a, replFree), substType(t->right, repl, a, replFree));
  }
}

inline TermPtr substTypeInTerm(const TermPtr& e, const TypePtr& repl, const Name& a,
                               const std::set<Name>& replFree) {
  if (!e) return e;
  auto st = [&](const TypePtr& t) { return substType(t, repl, a, replFree); };
  auto se = [&](const TermPtr& t) { return substTypeInTerm(t, repl, a, replFree); };
  auto renameBinder = [&](const TermPtr& body) -> std::pair<Name, TermPtr> {
    // rename the type binder e->name in `body` away from replFree
    std::set<Name> avoid = replFree;
    auto bodyFree = freeTypeVars(body);
    avoid.insert(bodyFree.begin(), bodyFree.end());
    avoid.insert(a);
    Name fresh = freshName(e->name, avoid);
    return {fresh, substTypeInTerm(body, ty::var(fresh), e->name, {fresh})};
  };
  switch (e->kind) {
  case TermKind::TyLam: {
    if (e->name == a) return e;
    if (replFree.count(e->name) && freeTypeVars(e->a).count(a)) {
      auto [fresh, body] = renameBinder(e->a);
      return tm::tylam(fresh, se(body));
    }
    return tm::rebuild(e, se(e->a), nullptr, nullptr, nullptr, nullptr);
  }
  case TermKind::Unpack: {
    auto packed = se(e->a);
    if (e->name == a) return tm::rebuild(e, packed, e->b, nullptr, nullptr, nullptr);
    if (replFree.count(e->name) && freeTypeVars(e->b).count(a)) {
      auto [fresh, body] = renameBinder(e->b);
      return tm::unpack(fresh, e->name2, packed, se(body));
    }
    return tm::rebuild(e, packed, se(e->b), nullptr, nullptr, nullptr);
  }
  default:
    return tm::rebuild(e, se(e->a), se(e->b), se(e->c), st(e->type), st(e->type2));
  }
}

struct TermSubst {
  const TermPtr& value;
  const Name& x;
  std::set<Name> valueFree;
  std::set<Name> valueFreeTypes;

  // Rename term binder `binder` to a name not free in the value.
  std::pair<Name, TermPtr> rename(const Name& binder, const TermPtr& body) const {
    std::set<Name> avoid = valueFree;
    auto bodyFree = freeVars(body);
    avoid.insert(bodyFree.begin(), bodyFree.end());
    avoid.insert(x);
    Name fresh = freshName(binder, avoid);
    return {fresh, TermSubst{tm::var(fresh), binder, {fresh}, {}}.run(body)};
  }

  TermPtr under(const Name& binder, const TermPtr& body, Name& outBinder) const {
    outBinder = binder;
    if (binder == x) return body;
    if (valueFree.count(binder) && freeVars(body).count(x)) {
      auto [fresh, renamed] = rename(binder, body);
      outBinder = fresh;
      return run(renamed);
    }
    return run(body);
  }

  TermPtr run(const TermPtr& e) const {
    if (!e) return e;
    switch (e->kind) {
    case TermKind::Var: return e->name == x ? value : e;
    case TermKind::True: case TermKind::False: case TermKind::Int: case TermKind::Loc:
    case TermKind::Hole:
      return e;
    case TermKind::Lam: {
      Name b;
      auto body = under(e->name, e->a, b);
      if (b == e->name) return tm::rebuild(e, body, nullptr, nullptr, e->type, nullptr);
      return tm::lam(b, e->type, body);
    }
    case TermKind::Case: {
      Name bx, by;
      auto scrut = run(e->a);
      auto l = under(e->name, e->b, bx);
      auto r = under(e->name2, e->c, by);
      if (bx == e->name && by == e->name2) return tm::rebuild(e, scrut, l, r, nullptr, nullptr);
      return tm::caseOf(scrut, bx, l, by, r);
    }
    case TermKind::TyLam: {
      if (valueFreeTypes.count(e->name) && freeVars(e->a).count(x)) {
        std::set<Name> avoid = valueFreeTypes;
        auto bodyFree = freeTypeVars(e->a);
        avoid.insert(bodyFree.begin(), bodyFree.end());
        Name fresh = freshName(e->name, avoid);
        return tm::tylam(fresh, run(substTypeInTerm(e->a, ty::var(fresh), e->name, {fresh})));
      }
      return tm::rebuild(e, run(e->a), nullptr, nullptr, nullptr, nullptr);
    }
    case TermKind::Unpack: {
      auto packed = run(e->a);
      Name tyBinder = e->name;
      TermPtr body = e->b;
      if (e->name2 != x && valueFreeTypes.count(tyBinder) && freeVars(body).count(x)) {
        std::set<Name> avoid = valueFreeTypes;
        auto bodyFree = freeTypeVars(body);
        avoid.insert(bodyFree.begin(), bodyFree.end());
        Name fresh = freshName(tyBinder, avoid);
        body = substTypeInTerm(body, ty::var(fresh), tyBinder, {fresh});
        tyBinder = fresh;
      }
      Name bx;
      auto newBody = under(e->name2, body, bx);
      if (bx == e->name2 && tyBinder == e->name) return tm::rebuild(e, packed, newBody, nullptr, nullptr, nullptr);
      return tm::unpack(tyBinder, bx, packed, newBody);
    }
    default:
      return tm::rebuild(e, run(e->a), run(e->b), run(e->c), e->type, e->type2);
    }
  }
};

} // namespace detail

/// Capture-avoiding type substitution t[repl/a].
inline TypePtr substType(const TypePtr& t, const TypePtr& repl, const Name& a) {
  return detail::substType(t, repl, a, freeTypeVars(repl));
}

/// Capture-avoiding substitution of a type for a type variable inside a term's annotations.
inline TermPtr substType(const TermPtr& e, const TypePtr& repl, const Name& a) {
  return detail::substTypeInTerm(e, repl, a, freeTypeVars(repl));
}

/// Capture-avoiding term substitution e[v/x].
inline TermPtr substTerm(const TermPtr& e, const TermPtr& v, const Name& x) {
  detail::TermSubst s{v, x, freeVars(v), freeTypeVars(v)};
  return s.run(e);
}

/// Unfolding of a recursive type: body[mu a. body / a].
inline TypePtr unrollMu(const TypePtr& muType) { return substType(muType->left, muType, muType->name); }

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace detail {

using Scope = std::vector<std::pair<Name, Name>>;

inline int lookup(const Scope& s, const Name& n, bool left) {
  for (int i = int(s.size()) - 1; i >= 0; --i)
    if ((left ? s[i].first : s[i].second) == n) return i;
  return -1;
}

inline bool alphaEqType(const TypePtr& a, const TypePtr& b, Scope& s) {
  if (a == b && s.empty()) return true;
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
  case TypeKind::Bool: case TypeKind::Int: return true;
  case TypeKind::Var: {
    int i = lookup(s, a->name, true), j = lookup(s, b->name, false);
    if (i < 0 && j < 0) return a->name == b->name;
    return i == j;
  }
  case TypeKind::Forall: case TypeKind::Exists: case TypeKind::Mu: {
    s.emplace_back(a->name, b->name);
    bool r = alphaEqType(a->left, b->left, s);
    s.pop_back();
    return r;
  }
  default:
    return alphaEqType(a->left, b->left, s) && alphaEqType(a->right, b->right, s);
  }
}

inline bool alphaEqTerm(const TermPtr& a, const TermPtr& b, Scope& vs, Scope& ts) {
  if (a == b && vs.empty() && ts.empty()) return true;
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  if (!alphaEqType(a->type, b->type, ts) || !alphaEqType(a->type2, b->type2, ts)) return false;
  auto under = [&](Scope& s, const Name& x, const Name& y, const TermPtr& l, const TermPtr& r) {
    s.emplace_back(x, y);
    bool ok = alphaEqTerm(l, r, vs, ts);
    s.pop_back();
    return ok;
  };
  switch (a->kind) {
  case TermKind::Var: {
    int i = lookup(vs, a->name, true), j = lookup(vs, b->name, false);
    if (i < 0 && j < 0) return a->name == b->name;
    return i == j;
  }
  case TermKind::Int: return a->number == b->number;
  case TermKind::Loc: return a->loc == b->loc;
  case TermKind::Lam: return under(vs, a->name, b->name, a->a, b->a);
  case TermKind::TyLam: return under(ts, a->name, b->name, a->a, b->a);
  case TermKind::Case:
    return alphaEqTerm(a->a, b->a, vs, ts) && under(vs, a->name, b->name, a->b, b->b) &&
           under(vs, a->name2, b->name2, a->c, b->c);
  case TermKind::Unpack: {
    if (!alphaEqTerm(a->a, b->a, vs, ts)) return false;
    ts.emplace_back(a->name, b->name);
    bool ok = under(vs, a->name2, b->name2, a->b, b->b);
    ts.pop_back();
    return ok;
  }
  default:
    return alphaEqTerm(a->a, b->a, vs, ts) && alphaEqTerm(a->b, b->b, vs, ts) &&
           alphaEqTerm(a->c, b->c, vs, ts);
  }
}

} // namespace detail

inline bool alphaEq(const TypePtr& a, const TypePtr& b) {
  detail::Scope s;
  return detail::alphaEqType(a, b, s);
}

inline bool alphaEq(const TermPtr& a, const TermPtr& b) {
  detail::Scope vs, ts;
  return detail::alphaEqTerm(a, b, vs, ts);
}

// ---------------------------------------------------------------------------
// Nameless keys: equal keys iff alpha-equivalent. Used for hashing and dedup.

namespace detail {

inline void typeKey(const TypePtr& t, std::vector<Name>& bound, std::string& out) {
  if (!t) { out += '_'; return; }
  switch (t->kind) {
  case TypeKind::Bool: out += 'B'; return;
  case TypeKind::Int: out += 'I'; return;
  case TypeKind::Var: {
    for (int i = int(bound.size()) - 1; i >= 0; --i)
      if (bound[i] == t->name) { out += '^' + std::to_string(bound.size() - 1 - i) + ';'; return; }
    out += '$' + t->name + ';';
    return;
  }
  case TypeKind::Forall: case TypeKind::Exists: case TypeKind::Mu:
    out += t->kind == TypeKind::Forall ? 'A' : t->kind == TypeKind::Exists ? 'E' : 'M';
    bound.push_back(t->name);
    typeKey(t->left, bound, out);
    bound.pop_back();
    return;
  case TypeKind::Ref: out += 'R'; typeKey(t->left, bound, out); return;
  default:
    out += t->kind == TypeKind::Arrow ? '>' : t->kind == TypeKind::Prod ? '*' : '+';
    typeKey(t->left, bound, out);
    typeKey(t->right, bound, out);
  }
}

inline void termKey(const TermPtr& e, std::vector<Name>& vs, std::vector<Name>& ts, std::string& out,
                    const std::function<std::string(Location)>* locName) {
  if (!e) { out += '_'; return; }
  out += char('a' + int(e->kind));
  if (e->type) typeKey(e->type, ts, out);
  if (e->type2) typeKey(e->type2, ts, out);
  switch (e->kind) {
  case TermKind::Var: {
    for (int i = int(vs.size()) - 1; i >= 0; --i)
      if (vs[i] == e->name) { out += std::to_string(vs.size() - 1 - i) + ';'; return; }
    out += '$' + e->name + ';';
    return;
  }
  case TermKind::Int: out += std::to_string(e->number) + ';'; return;
  case TermKind::Loc:
    out += (locName ? (*locName)(e->loc) : std::to_string(e->loc)) + ';';
    return;
  case TermKind::Lam:
    vs.push_back(e->name); termKey(e->a, vs, ts, out, locName); vs.pop_back();
    return;
  case TermKind::TyLam:
    ts.push_back(e->name); termKey(e->a, vs, ts, out, locName); ts.pop_back();
    return;
  case TermKind::Case:
    termKey(e->a, vs, ts, out, locName);
    vs.push_back(e->name); termKey(e->b, vs, ts, out, locName); vs.pop_back();
    vs.push_back(e->name2); termKey(e->c, vs, ts, out, locName); vs.pop_back();
    return;
  case TermKind::Unpack:
    termKey(e->a, vs, ts, out, locName);
    ts.push_back(e->name); vs.push_back(e->name2);
    termKey(e->b, vs, ts, out, locName);
    vs.pop_back(); ts.pop_back();
    return;
  default:
    if (e->a) termKey(e->a, vs, ts, out, locName);
    if (e->b) termKey(e->b, vs, ts, out, locName);
    if (e->c) termKey(e->c, vs, ts, out, locName);
  }
}

} // namespace detail

inline std::string canonicalKey(const TypePtr& t) {
  std::vector<Name> bound;
  std::string out;
  detail::typeKey(t, bound, out);
  return out;
}

inline std::string canonicalKey(const TermPtr& e,
                                const std::function<std::string(Location)>* locName = nullptr) {
  std::vector<Name> vs, ts;
  std::string out;
  detail::termKey(e, vs, ts, out, locName);
  return out;
}

// ---------------------------------------------------------------------------
// Misc structural queries

/// Values: booleans, integers, abstractions, pairs/injections/packs/folds of
/// values, and locations.
inline bool isValue(const TermPtr& e) {
  switch (e->kind) {
  case TermKind::True: case TermKind::False: case TermKind::Int: case TermKind::Lam:
  case TermKind::TyLam: case TermKind::Loc:
    return true;
  case TermKind::Pair: return isValue(e->a) && isValue(e->b);
  case TermKind::Inl: case TermKind::Inr: case TermKind::Pack: case TermKind::Fold:
    return isValue(e->a);
  default: return false;
  }
}

/// Number of term constructors; type annotations are not counted.
inline std::size_t termSize(const TermPtr& e) {
  if (!e) return 0;
  return 1 + termSize(e->a) + termSize(e->b) + termSize(e->c);
}

inline bool containsLoc(const TermPtr& e) {
  if (!e) return false;
  return e->kind == TermKind::Loc || containsLoc(e->a) || containsLoc(e->b) || containsLoc(e->c);
}

inline std::size_t countHoles(const TermPtr& e) {
  if (!e) return 0;
  return (e->kind == TermKind::Hole ? 1 : 0) + countHoles(e->a) + countHoles(e->b) + countHoles(e->c);
}

inline void collectLocs(const TermPtr& e, std::set<Location>& out) {
  if (!e) return;
  if (e->kind == TermKind::Loc) out.insert(e->loc);
  collectLocs(e->a, out);
  collectLocs(e->b, out);
  collectLocs(e->c, out);
}

} // namespace lr

#endif
