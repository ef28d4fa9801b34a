#ifndef LR_GENERATE_HPP
#define LR_GENERATE_HPP

// Random type-directed generation of well-typed terms, exhaustive bottom-up
// enumeration of typed terms (optionally with one hole), and value corpora.

#include "statics.hpp"
#include "syntax.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lr {

class GenerationFailed : public std::runtime_error {
public:
  explicit GenerationFailed(const std::string& what) : std::runtime_error(what) {}
};

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// ---------------------------------------------------------------------------
// Random types

inline TypePtr genType(LangLevel level, const TypeCtx& delta, int size, Rng& rng) {
  std::vector<std::function<TypePtr()>> leaves;
  leaves.push_back([] { return ty::boolean(); });
  if (level.has(Feature::Int)) leaves.push_back([] { return ty::integer(); });
  for (auto& a : delta) leaves.push_back([a] { return ty::var(a); });
  if (size <= 1) return leaves[pick(rng, leaves.size())]();

  std::vector<std::function<TypePtr()>> forms = leaves;
  int sub = size - 1;
  auto half = [&] { return std::max(1, int(pick(rng, std::size_t(sub))) + 1); };
  forms.push_back([&] { int l = half(); return ty::arrow(genType(level, delta, l, rng), genType(level, delta, sub - l + 1, rng)); });
  if (level.has(Feature::Pairs))
    forms.push_back([&] { int l = half(); return ty::prod(genType(level, delta, l, rng), genType(level, delta, sub - l + 1, rng)); });
  if (level.has(Feature::Sums))
    forms.push_back([&] { int l = half(); return ty::sum(genType(level, delta, l, rng), genType(level, delta, sub - l + 1, rng)); });
  auto binder = [&](TypeKind k) {
    Name a = freshName("t" + std::to_string(delta.size()), std::set<Name>(delta.begin(), delta.end()));
    TypeCtx d2 = delta;
    d2.push_back(a);
    auto body = genType(level, d2, sub, rng);
    return ty::make(k, a, body, nullptr);
  };
  if (level.has(Feature::SystemF)) forms.push_back([&] { return binder(TypeKind::Forall); });
  if (level.has(Feature::Existential)) forms.push_back([&] { return binder(TypeKind::Exists); });
  if (level.has(Feature::Mu)) {
    // recursive types with an inhabited unfolding: lists and streams of functions
    forms.push_back([&] {
      Name a = freshName("r" + std::to_string(delta.size()), std::set<Name>(delta.begin(), delta.end()));
      auto elem = genType(level, delta, std::max(1, sub / 2), rng);
      if (level.has(Feature::Sums) && level.has(Feature::Pairs) && coin(rng))
        return ty::mu(a, ty::sum(ty::boolean(), ty::prod(elem, ty::var(a))));
      return ty::mu(a, ty::arrow(ty::var(a), elem));
    });
  }
  if (level.has(Feature::Ref)) forms.push_back([&] { return ty::ref(genType(level, delta, sub, rng)); });
  return forms[pick(rng, forms.size())]();
}

// ---------------------------------------------------------------------------
// Random well-typed terms

namespace detail {

struct GenScope {
  TypeCtx delta;
  std::vector<std::pair<Name, TypePtr>> gamma;

  std::set<Name> names() const {
    std::set<Name> s(delta.begin(), delta.end());
    for (auto& [x, t] : gamma) s.insert(x);
    return s;
  }
  // innermost binding of each variable
  std::vector<std::pair<Name, TypePtr>> visible() const {
    std::vector<std::pair<Name, TypePtr>> out;
    std::set<Name> seen;
    for (auto it = gamma.rbegin(); it != gamma.rend(); ++it)
      if (seen.insert(it->first).second) out.push_back(*it);
    return out;
  }
  Name freshVar() const { return freshName("x" + std::to_string(gamma.size()), names()); }
  Name freshTyVar() const { return freshName("a" + std::to_string(delta.size()), names()); }
};

// Replaces occurrences of `part` inside `whole` by `a` (where not captured).
inline TypePtr abstractType(const TypePtr& whole, const TypePtr& part, const Name& a, std::set<Name>& bound) {
  if (alphaEq(whole, part)) {
    auto fv = freeTypeVars(part);
    bool captured = std::any_of(fv.begin(), fv.end(), [&](auto& v) { return bound.count(v) > 0; });
    if (!captured) return ty::var(a);
  }
  if (whole->isBinder()) {
    bool fresh = bound.insert(whole->name).second;
    auto body = abstractType(whole->left, part, a, bound);
    if (fresh) bound.erase(whole->name);
    return ty::rebuild(whole, body, nullptr);
  }
  if (!whole->left) return whole;
  return ty::rebuild(whole, abstractType(whole->left, part, a, bound),
                     whole->right ? abstractType(whole->right, part, a, bound) : nullptr);
}

inline void subtypes(const TypePtr& t, std::vector<TypePtr>& out) {
  if (!t) return;
  out.push_back(t);
  if (t->isBinder()) return;
  subtypes(t->left, out);
  subtypes(t->right, out);
}

class RandomGen {
public:
  RandomGen(LangLevel level, std::uint64_t seed, std::size_t workLimit = 20000)
      : level_(level), rng_(seed), workLimit_(workLimit) {}

  TermPtr gen(const GenScope& s, const TypePtr& t, int size) {
    if (size < 1 || ++work_ > workLimit_) return nullptr;
    std::vector<std::function<TermPtr()>> leaves, forms;
    addVariables(s, t, size, leaves, forms);
    addIntros(s, t, size, leaves, forms);
    if (size >= 3) addElims(s, t, size, forms);

    std::shuffle(leaves.begin(), leaves.end(), rng_);
    std::shuffle(forms.begin(), forms.end(), rng_);
    // small budgets favour leaves; otherwise mostly structured forms
    std::vector<std::function<TermPtr()>> order;
    bool leavesFirst = size <= 2 || coin(rng_, 0.25);
    if (leavesFirst) order.insert(order.end(), leaves.begin(), leaves.end());
    order.insert(order.end(), forms.begin(), forms.end());
    if (!leavesFirst) order.insert(order.end(), leaves.begin(), leaves.end());
    std::size_t tries = 0;
    for (auto& f : order) {
      if (tries++ >= 5) break;
      if (auto r = f()) return r;
    }
    return nullptr;
  }

  LangLevel level() const { return level_; }
  Rng& rng() { return rng_; }

private:
  LangLevel level_;
  Rng rng_;
  std::size_t work_ = 0;
  std::size_t workLimit_;

  int split(int budget) { return budget <= 1 ? 1 : 1 + int(pick(rng_, std::size_t(budget - 1))); }

  TypePtr smallType(const GenScope& s) { return genType(level_, s.delta, 1 + int(pick(rng_, 3)), rng_); }

  // Builds `head` (of type `have`) into a term of type `want` by eliminations.
  TermPtr eliminate(const GenScope& s, TermPtr head, const TypePtr& have, const TypePtr& want, int budget, int depth) {
    if (alphaEq(have, want)) return head;
    if (depth > 3 || budget < 2) return nullptr;
    switch (have->kind) {
    case TypeKind::Arrow: {
      int argBudget = split(budget - 1);
      auto arg = gen(s, have->left, argBudget);
      if (!arg) return nullptr;
      return eliminate(s, tm::app(head, arg), have->right, want, budget - 1 - int(termSize(arg)), depth + 1);
    }
    case TypeKind::Prod:
      if (!level_.has(Feature::Pairs)) return nullptr;
      if (coin(rng_)) {
        if (auto r = eliminate(s, tm::fst(head), have->left, want, budget - 1, depth + 1)) return r;
        return eliminate(s, tm::snd(head), have->right, want, budget - 1, depth + 1);
      }
      if (auto r = eliminate(s, tm::snd(head), have->right, want, budget - 1, depth + 1)) return r;
      return eliminate(s, tm::fst(head), have->left, want, budget - 1, depth + 1);
    case TypeKind::Ref:
      return eliminate(s, tm::deref(head), have->left, want, budget - 1, depth + 1);
    case TypeKind::Mu:
      return eliminate(s, tm::unfold(head), unrollMu(have), want, budget - 1, depth + 1);
    default:
      return nullptr;
    }
  }

  void addVariables(const GenScope& s, const TypePtr& t, int size,
                    std::vector<std::function<TermPtr()>>& leaves, std::vector<std::function<TermPtr()>>& forms) {
    for (auto& [x, xt] : s.visible()) {
      if (alphaEq(xt, t)) {
        leaves.push_back([x = x] { return tm::var(x); });
      } else if (size >= 2) {
        forms.push_back([this, &s, x = x, xt = xt, t, size] { return eliminate(s, tm::var(x), xt, t, size - 1, 0); });
      }
    }
  }

  void addIntros(const GenScope& s, const TypePtr& t, int size,
                 std::vector<std::function<TermPtr()>>& leaves, std::vector<std::function<TermPtr()>>& forms) {
    switch (t->kind) {
    case TypeKind::Bool:
      leaves.push_back([] { return tm::tru(); });
      leaves.push_back([] { return tm::fls(); });
      if (size >= 2) forms.push_back([=, this, &s] {
        auto a = gen(s, ty::boolean(), size - 1);
        return a ? tm::lnot(a) : nullptr;
      });
      if (size >= 3 && level_.has(Feature::Int)) forms.push_back([=, this, &s] {
        int l = split(size - 2);
        auto a = gen(s, ty::integer(), l);
        if (!a) return TermPtr{};
        auto b = gen(s, ty::integer(), size - 1 - int(termSize(a)));
        return b ? tm::inteq(a, b) : nullptr;
      });
      break;
    case TypeKind::Int:
      leaves.push_back([this] { return tm::integer(std::int64_t(pick(rng_, 7)) - 3); });
      break;
    case TypeKind::Arrow:
      if (size >= 2) forms.push_back([=, this, &s] {
        GenScope s2 = s;
        Name x = s.freshVar();
        s2.gamma.emplace_back(x, t->left);
        auto body = gen(s2, t->right, size - 1);
        return body ? tm::lam(x, t->left, body) : nullptr;
      });
      break;
    case TypeKind::Prod:
      if (size >= 3) forms.push_back([=, this, &s] {
        auto a = gen(s, t->left, split(size - 2));
        if (!a) return TermPtr{};
        auto b = gen(s, t->right, size - 1 - int(termSize(a)));
        return b ? tm::pair(a, b) : nullptr;
      });
      break;
    case TypeKind::Sum:
      if (size >= 2) forms.push_back([=, this, &s] {
        bool left = coin(rng_);
        auto a = gen(s, left ? t->left : t->right, size - 1);
        if (!a) return TermPtr{};
        return left ? tm::inl(a, t) : tm::inr(a, t);
      });
      break;
    case TypeKind::Forall:
      if (size >= 2) forms.push_back([=, this, &s] {
        GenScope s2 = s;
        Name a = s.freshTyVar();
        s2.delta.push_back(a);
        auto body = gen(s2, substType(t->left, ty::var(a), t->name), size - 1);
        return body ? tm::tylam(a, body) : nullptr;
      });
      break;
    case TypeKind::Exists:
      if (size >= 2) forms.push_back([=, this, &s] {
        auto w = smallType(s);
        auto a = gen(s, substType(t->left, w, t->name), size - 1);
        return a ? tm::pack(w, a, t) : nullptr;
      });
      break;
    case TypeKind::Mu:
      if (size >= 2) forms.push_back([=, this, &s] {
        auto a = gen(s, unrollMu(t), size - 1);
        return a ? tm::fold(a, t) : nullptr;
      });
      break;
    case TypeKind::Ref:
      if (size >= 2) forms.push_back([=, this, &s] {
        auto a = gen(s, t->left, size - 1);
        return a ? tm::alloc(a) : nullptr;
      });
      break;
    default:
      break;
    }
  }

  void addElims(const GenScope& s, const TypePtr& t, int size, std::vector<std::function<TermPtr()>>& forms) {
    forms.push_back([=, this, &s] {
      int c = split(std::max(1, (size - 1) / 3));
      auto cond = gen(s, ty::boolean(), c);
      if (!cond) return TermPtr{};
      int rest = size - 1 - int(termSize(cond));
      if (rest < 2) return TermPtr{};
      auto a = gen(s, t, split(rest - 1));
      if (!a) return TermPtr{};
      auto b = gen(s, t, rest - int(termSize(a)));
      return b ? tm::ite(cond, a, b) : nullptr;
    });
    forms.push_back([=, this, &s] {
      auto sigma = smallType(s);
      GenScope s2 = s;
      Name x = s.freshVar();
      s2.gamma.emplace_back(x, sigma);
      auto body = gen(s2, t, split(size - 2));
      if (!body) return TermPtr{};
      auto arg = gen(s, sigma, size - 2 - int(termSize(body)));
      return arg ? tm::app(tm::lam(x, sigma, body), arg) : nullptr;
    });
    if (level_.has(Feature::Pairs)) forms.push_back([=, this, &s] {
      auto other = smallType(s);
      bool first = coin(rng_);
      auto p = gen(s, first ? ty::prod(t, other) : ty::prod(other, t), size - 1);
      if (!p) return TermPtr{};
      return first ? tm::fst(p) : tm::snd(p);
    });
    if (level_.has(Feature::Sums)) forms.push_back([=, this, &s] {
      auto l = smallType(s), r = smallType(s);
      auto scrut = gen(s, ty::sum(l, r), split(std::max(1, (size - 1) / 3)));
      if (!scrut) return TermPtr{};
      int rest = size - 1 - int(termSize(scrut));
      if (rest < 2) return TermPtr{};
      GenScope sl = s, sr = s;
      Name x = s.freshVar();
      sl.gamma.emplace_back(x, l);
      sr.gamma.emplace_back(x, r);
      auto a = gen(sl, t, split(rest - 1));
      if (!a) return TermPtr{};
      auto b = gen(sr, t, rest - int(termSize(a)));
      return b ? tm::caseOf(scrut, x, a, x, b) : nullptr;
    });
    if (level_.has(Feature::SystemF)) forms.push_back([=, this, &s] {
      std::vector<TypePtr> parts;
      subtypes(t, parts);
      parts.erase(std::remove_if(parts.begin(), parts.end(), [&](auto& p) { return !wfType(s.delta, p); }), parts.end());
      auto part = parts.empty() ? smallType(s) : parts[pick(rng_, parts.size())];
      Name a = freshName("a" + std::to_string(s.delta.size()), [&] {
        auto n = s.names();
        collectAllNames(t, n);
        return n;
      }());
      std::set<Name> bound;
      auto body = abstractType(t, part, a, bound);
      auto f = gen(s, ty::forall(a, body), size - 1);
      return f ? tm::tyapp(f, part) : nullptr;
    });
    if (level_.has(Feature::Existential)) forms.push_back([=, this, &s] {
      Name a = s.freshTyVar();
      TypeCtx d2 = s.delta;
      d2.push_back(a);
      auto body = genType(level_, d2, 2 + int(pick(rng_, 2)), rng_);
      auto pkgType = ty::exists(a, body);
      auto pkg = gen(s, pkgType, split(size - 2));
      if (!pkg) return TermPtr{};
      GenScope s2 = s;
      Name x = s.freshVar();
      s2.delta.push_back(a);
      s2.gamma.emplace_back(x, body);
      auto b = gen(s2, t, size - 1 - int(termSize(pkg)));
      return b ? tm::unpack(a, x, pkg, b) : nullptr;
    });
    if (level_.has(Feature::Mu)) forms.push_back([=, this, &s] {
      Name a = freshName("r", [&] {
        auto n = s.names();
        collectAllNames(t, n);
        return n;
      }());
      auto f = gen(s, ty::mu(a, t), size - 1);
      return f ? tm::unfold(f) : nullptr;
    });
    if (level_.has(Feature::Ref)) {
      forms.push_back([=, this, &s] {
        auto r = gen(s, ty::ref(t), size - 1);
        return r ? tm::deref(r) : nullptr;
      });
      forms.push_back([=, this, &s] {
        auto r = gen(s, ty::ref(t), split(size - 2));
        if (!r) return TermPtr{};
        auto v = gen(s, t, size - 1 - int(termSize(r)));
        return v ? tm::assign(r, v) : nullptr;
      });
    }
  }
};

} // namespace detail

/// Random term with Delta; Gamma |- e : t and size(e) <= size. Deterministic per seed.
inline TermPtr genWellTyped(LangLevel level, const TypeCtx& delta, const TermCtx& gamma, const TypePtr& t,
                            int size, std::uint64_t seed) {
  if (!wfType(delta, t)) throw std::invalid_argument("genWellTyped: type not well formed: " + printType(t));
  detail::GenScope s{delta, {}};
  for (auto& [x, xt] : gamma) s.gamma.emplace_back(x, xt);
  for (int attempt = 0; attempt < 4; ++attempt) {
    detail::RandomGen g(level, seed * 0x9E3779B97F4A7C15ull + std::uint64_t(attempt));
    if (auto e = g.gen(s, t, size)) return e;
  }
  throw GenerationFailed("no inhabitant of " + printType(t) + " found within size " + std::to_string(size));
}

/// A random closed type together with a closed well-typed term of that type.
inline std::pair<TermPtr, TypePtr> genClosedProgram(LangLevel level, int size, std::uint64_t seed, int typeSize = 3) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto t = genType(level, {}, 1 + int(pick(rng, std::size_t(typeSize))), rng);
    try {
      return {genWellTyped(level, {}, {}, t, size, rng()), t};
    } catch (const GenerationFailed&) {
    }
  }
  throw GenerationFailed("no closed program generated");
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

struct EnumEntry {
  TermPtr term;
  TypePtr type;
};

/// Exhaustive bottom-up enumeration of typed terms of an exact size, with at
/// most one hole. All annotations are drawn from a fixed type alphabet (plus
/// the type variables in scope); binder names are canonical per depth plus
/// the names mentioned in the hole typing.
class TermEnumerator {
public:
  struct Options {
    LangLevel level = LangLevel::all();
    std::vector<TypePtr> types{ty::boolean(), ty::integer()};
    std::vector<std::int64_t> ints{0, 1};
    std::optional<HoleTyping> hole;
  };

  explicit TermEnumerator(Options o) : opt_(std::move(o)) {}

  struct Scope {
    TypeCtx delta;
    std::vector<std::pair<Name, TypePtr>> gamma;
    int depth = 0;

    TypePtr lookup(const Name& x) const {
      for (auto it = gamma.rbegin(); it != gamma.rend(); ++it)
        if (it->first == x) return it->second;
      return nullptr;
    }
    bool hasTyVar(const Name& a) const { return std::find(delta.begin(), delta.end(), a) != delta.end(); }
    std::string key() const {
      std::map<Name, std::string> vis;
      for (auto& [x, t] : gamma) vis[x] = canonicalKey(t);
      std::set<Name> d(delta.begin(), delta.end());
      std::string k = std::to_string(depth) + "D";
      for (auto& a : d) k += a + ",";
      k += "G";
      for (auto& [x, t] : vis) k += x + ":" + t + ",";
      return k;
    }
  };

  using Bucket = std::map<std::string, std::vector<EnumEntry>>; // by type key

  /// Terms of exactly `size` constructors with exactly `holes` holes.
  const Bucket& exact(const Scope& s, int size, int holes) {
    std::string key = s.key() + "|" + std::to_string(size) + "|" + std::to_string(holes);
    auto it = memo_.find(key);
    if (it != memo_.end()) return *it->second;
    auto out = std::make_shared<Bucket>();
    build(s, size, holes, *out);
    return *memo_.emplace(key, out).first->second;
  }

  /// All terms of size <= maxSize of type `t` (alpha-equivalent type), smallest first.
  std::vector<TermPtr> ofType(const Scope& s, const TypePtr& t, int maxSize, int holes = 0) {
    std::vector<TermPtr> out;
    auto k = canonicalKey(t);
    for (int n = 1; n <= maxSize; ++n) {
      auto& b = exact(s, n, holes);
      auto it = b.find(k);
      if (it == b.end()) continue;
      for (auto& e : it->second) out.push_back(e.term);
    }
    return out;
  }

  /// Binder names a term binder at `depth` may use.
  std::vector<Name> varBinders(const Scope& s) const {
    std::vector<Name> out{"x" + std::to_string(s.depth)};
    if (opt_.hole)
      for (auto& [x, t] : opt_.hole->gamma)
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    return out;
  }

  std::vector<Name> tyBinders(const Scope& s) const {
    std::vector<Name> out;
    Name canon = "a" + std::to_string(s.depth);
    if (!s.hasTyVar(canon)) out.push_back(canon);
    if (opt_.hole)
      for (auto& a : opt_.hole->delta)
        if (!s.hasTyVar(a) && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    return out;
  }

  /// Alphabet of annotation types usable in scope.
  std::vector<TypePtr> alphabet(const Scope& s) const {
    std::vector<TypePtr> out;
    for (auto& t : opt_.types)
      if (wfType(s.delta, t) && levelCheck(t, opt_.level)) out.push_back(t);
    for (auto& a : s.delta) out.push_back(ty::var(a));
    return out;
  }

  const Options& options() const { return opt_; }

private:
  Options opt_;
  std::unordered_map<std::string, std::shared_ptr<Bucket>> memo_;

  bool has(Feature f) const { return opt_.level.has(f); }

  static void add(Bucket& b, TermPtr e, TypePtr t) {
    auto k = canonicalKey(t);
    b[k].push_back(EnumEntry{std::move(e), std::move(t)});
  }

  // Calls f(h1, h2) for every split of `holes` between two children.
  template <class F>
  static void holeSplits(int holes, F&& f) {
    for (int h1 = 0; h1 <= holes; ++h1) f(h1, holes - h1);
  }

  Scope bindVar(const Scope& s, const Name& x, const TypePtr& t) const {
    Scope s2 = s;
    s2.gamma.emplace_back(x, t);
    s2.depth++;
    return s2;
  }

  Scope bindTy(const Scope& s, const Name& a) const {
    Scope s2 = s;
    s2.delta.push_back(a);
    s2.depth++;
    return s2;
  }

  bool holeFits(const Scope& s) const {
    if (!opt_.hole) return false;
    for (auto& a : opt_.hole->delta)
      if (!s.hasTyVar(a)) return false;
    for (auto& [x, t] : opt_.hole->gamma) {
      auto got = s.lookup(x);
      if (!got || !alphaEq(got, t)) return false;
    }
    return true;
  }

  void build(const Scope& s, int n, int holes, Bucket& out) {
    if (n < 1) return;
    auto types = alphabet(s);
    if (n == 1) {
      if (holes == 1) {
        if (holeFits(s)) add(out, tm::hole(), opt_.hole->type);
        return;
      }
      std::set<Name> seen;
      for (auto it = s.gamma.rbegin(); it != s.gamma.rend(); ++it)
        if (seen.insert(it->first).second) add(out, tm::var(it->first), it->second);
      add(out, tm::tru(), ty::boolean());
      add(out, tm::fls(), ty::boolean());
      if (has(Feature::Int))
        for (auto i : opt_.ints) add(out, tm::integer(i), ty::integer());
      return;
    }

    // unary forms over a child of size n-1
    {
      auto& child = exact(s, n - 1, holes);
      for (auto& [k, entries] : child) {
        for (auto& c : entries) {
          const auto& t = c.type;
          if (t->kind == TypeKind::Bool) add(out, tm::lnot(c.term), ty::boolean());
          if (has(Feature::Pairs) && t->kind == TypeKind::Prod) {
            add(out, tm::fst(c.term), t->left);
            add(out, tm::snd(c.term), t->right);
          }
          if (has(Feature::Mu) && t->kind == TypeKind::Mu) add(out, tm::unfold(c.term), unrollMu(t));
          if (has(Feature::Ref)) {
            add(out, tm::alloc(c.term), ty::ref(t));
            if (t->kind == TypeKind::Ref) add(out, tm::deref(c.term), t->left);
          }
          if (has(Feature::SystemF) && t->kind == TypeKind::Forall)
            for (auto& a : types) add(out, tm::tyapp(c.term, a), substType(t->left, a, t->name));
        }
      }
      for (auto& annot : types) {
        if (has(Feature::Sums) && annot->kind == TypeKind::Sum) {
          if (auto it = child.find(canonicalKey(annot->left)); it != child.end())
            for (auto& c : it->second) add(out, tm::inl(c.term, annot), annot);
          if (auto it = child.find(canonicalKey(annot->right)); it != child.end())
            for (auto& c : it->second) add(out, tm::inr(c.term, annot), annot);
        }
        if (has(Feature::Mu) && annot->kind == TypeKind::Mu) {
          if (auto it = child.find(canonicalKey(unrollMu(annot))); it != child.end())
            for (auto& c : it->second) add(out, tm::fold(c.term, annot), annot);
        }
        if (has(Feature::Existential) && annot->kind == TypeKind::Exists) {
          for (auto& w : types) {
            if (auto it = child.find(canonicalKey(substType(annot->left, w, annot->name))); it != child.end())
              for (auto& c : it->second) add(out, tm::pack(w, c.term, annot), annot);
          }
        }
      }
      // binders
      for (auto& annot : types) {
        for (auto& x : varBinders(s)) {
          auto& body = exact(bindVar(s, x, annot), n - 1, holes);
          for (auto& [k, entries] : body)
            for (auto& c : entries) add(out, tm::lam(x, annot, c.term), ty::arrow(annot, c.type));
        }
      }
      if (has(Feature::SystemF)) {
        for (auto& a : tyBinders(s)) {
          auto& body = exact(bindTy(s, a), n - 1, holes);
          for (auto& [k, entries] : body)
            for (auto& c : entries) add(out, tm::tylam(a, c.term), ty::forall(a, c.type));
        }
      }
    }

    // binary forms
    for (int n1 = 1; n1 <= n - 2; ++n1) {
      int n2 = n - 1 - n1;
      holeSplits(holes, [&](int h1, int h2) {
        auto& left = exact(s, n1, h1);
        if (left.empty()) return;
        auto& right = exact(s, n2, h2);
        for (auto& [k, ls] : left) {
          const auto& lt = ls.front().type;
          if (lt->kind == TypeKind::Arrow) {
            if (auto it = right.find(canonicalKey(lt->left)); it != right.end())
              for (auto& f : ls)
                for (auto& x : it->second) add(out, tm::app(f.term, x.term), lt->right);
          }
          if (has(Feature::Int) && lt->kind == TypeKind::Int) {
            if (auto it = right.find(k); it != right.end())
              for (auto& a : ls)
                for (auto& b : it->second) add(out, tm::inteq(a.term, b.term), ty::boolean());
          }
          if (has(Feature::Ref) && lt->kind == TypeKind::Ref) {
            if (auto it = right.find(canonicalKey(lt->left)); it != right.end())
              for (auto& a : ls)
                for (auto& b : it->second) add(out, tm::assign(a.term, b.term), lt->left);
          }
          if (has(Feature::Pairs)) {
            for (auto& [k2, rs] : right)
              for (auto& a : ls)
                for (auto& b : rs) add(out, tm::pair(a.term, b.term), ty::prod(a.type, b.type));
          }
          if (has(Feature::Existential) && lt->kind == TypeKind::Exists) {
            for (auto& a : tyBinders(s)) {
              for (auto& x : varBinders(s)) {
                Scope s2 = bindTy(s, a);
                s2.gamma.emplace_back(x, substType(lt->left, ty::var(a), lt->name));
                auto& body = exact(s2, n2, h2);
                for (auto& [bk, bs] : body) {
                  if (!wfType(s.delta, bs.front().type)) continue;
                  for (auto& p : ls)
                    for (auto& b : bs) add(out, tm::unpack(a, x, p.term, b.term), b.type);
                }
              }
            }
          }
        }
      });
    }

    // ternary forms
    for (int n1 = 1; n1 <= n - 3; ++n1) {
      for (int n2 = 1; n1 + n2 <= n - 2; ++n2) {
        int n3 = n - 1 - n1 - n2;
        for (int h1 = 0; h1 <= holes; ++h1) {
          for (int h2 = 0; h1 + h2 <= holes; ++h2) {
            int h3 = holes - h1 - h2;
            auto& first = exact(s, n1, h1);
            if (first.empty()) continue;
            // if
            if (auto it = first.find(canonicalKey(ty::boolean())); it != first.end()) {
              auto& b = exact(s, n2, h2);
              auto& c = exact(s, n3, h3);
              for (auto& [k, bs] : b) {
                auto jt = c.find(k);
                if (jt == c.end()) continue;
                for (auto& cond : it->second)
                  for (auto& x : bs)
                    for (auto& y : jt->second) add(out, tm::ite(cond.term, x.term, y.term), x.type);
              }
            }
            // case
            if (has(Feature::Sums)) {
              for (auto& [k, ss] : first) {
                const auto& st = ss.front().type;
                if (st->kind != TypeKind::Sum) continue;
                for (auto& x : varBinders(s)) {
                  for (auto& y : varBinders(s)) {
                    auto& b = exact(bindVar(s, x, st->left), n2, h2);
                    auto& c = exact(bindVar(s, y, st->right), n3, h3);
                    for (auto& [bk, bs] : b) {
                      auto jt = c.find(bk);
                      if (jt == c.end()) continue;
                      for (auto& sc : ss)
                        for (auto& l : bs)
                          for (auto& r : jt->second) add(out, tm::caseOf(sc.term, x, l.term, y, r.term), l.type);
                    }
                  }
                }
              }
            }
          }
        }
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Value corpora

/// Finite lists of closed values per type. Bool is exhaustive, Int is a fixed
/// sample, other types are built structurally or by enumeration up to `depth`.
class ValueCorpus {
public:
  explicit ValueCorpus(std::size_t depth = 3, std::uint64_t seed = 0, std::size_t cap = 12)
      : depth_(depth), seed_(seed), cap_(cap) {}

  std::size_t depth() const { return depth_; }
  std::uint64_t seed() const { return seed_; }

  static const std::vector<std::int64_t>& intSample() {
    static const std::vector<std::int64_t> v{-2, -1, 0, 1, 2, INT64_MIN, INT64_MAX};
    return v;
  }

  /// True when the list for `t` contains every closed value of `t`.
  static bool exhaustive(const TypePtr& t) {
    switch (t->kind) {
    case TypeKind::Bool: return true;
    case TypeKind::Prod: case TypeKind::Sum: return exhaustive(t->left) && exhaustive(t->right);
    default: return false;
    }
  }

  const std::vector<TermPtr>& values(const TypePtr& t) { return values(t, int(depth_)); }

  const std::vector<TermPtr>& values(const TypePtr& t, int depth) {
    auto key = canonicalKey(t) + "@" + std::to_string(depth);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto v = build(t, depth);
    return cache_.emplace(key, std::move(v)).first->second;
  }

private:
  std::size_t depth_;
  std::uint64_t seed_;
  std::size_t cap_;
  std::map<std::string, std::vector<TermPtr>> cache_;

  void cap(std::vector<TermPtr>& v, const TypePtr& t) {
    std::set<std::string> seen;
    std::vector<TermPtr> uniq;
    for (auto& e : v)
      if (seen.insert(canonicalKey(e)).second) uniq.push_back(e);
    v = std::move(uniq);
    if (v.size() <= cap_ || exhaustive(t)) return;
    // keep the smallest few, then a seeded sample of the rest
    std::size_t keep = cap_ / 2;
    std::vector<TermPtr> rest(v.begin() + long(keep), v.end());
    Rng rng(seed_ ^ std::hash<std::string>{}(canonicalKey(t)));
    std::shuffle(rest.begin(), rest.end(), rng);
    v.resize(keep);
    v.insert(v.end(), rest.begin(), rest.begin() + long(cap_ - keep));
  }

  std::vector<TermPtr> build(const TypePtr& t, int depth) {
    std::vector<TermPtr> out;
    switch (t->kind) {
    case TypeKind::Bool:
      return {tm::tru(), tm::fls()};
    case TypeKind::Int:
      for (auto i : intSample()) out.push_back(tm::integer(i));
      return out;
    case TypeKind::Prod: {
      auto as = values(t->left, depth);
      auto bs = values(t->right, depth);
      for (auto& a : as)
        for (auto& b : bs) out.push_back(tm::pair(a, b));
      break;
    }
    case TypeKind::Sum: {
      auto as = values(t->left, depth);
      auto bs = values(t->right, depth);
      for (auto& a : as) out.push_back(tm::inl(a, t));
      for (auto& b : bs) out.push_back(tm::inr(b, t));
      break;
    }
    case TypeKind::Arrow: {
      TermEnumerator::Options o;
      o.types = {ty::boolean(), ty::integer()};
      std::vector<TypePtr> parts;
      detail::subtypes(t, parts);
      for (auto& p : parts)
        if (freeTypeVars(p).empty() && p->kind != TypeKind::Bool && p->kind != TypeKind::Int) o.types.push_back(p);
      TermEnumerator en(o);
      TermEnumerator::Scope s;
      s.gamma.emplace_back("x", t->left);
      s.depth = 1;
      if (depth >= 2)
        for (auto& body : en.ofType(s, t->right, depth - 1)) out.push_back(tm::lam("x", t->left, body));
      if (depth >= 2)
        for (auto& v : values(t->right, depth - 1)) out.push_back(tm::lam("x", t->left, v));
      break;
    }
    case TypeKind::Forall: {
      if (depth < 2) break;
      TermEnumerator::Options o;
      TermEnumerator en(o);
      TermEnumerator::Scope s;
      s.delta.push_back(t->name);
      s.depth = 1;
      for (auto& body : en.ofType(s, t->left, depth - 1))
        if (isValue(body)) out.push_back(tm::tylam(t->name, body));
      break;
    }
    case TypeKind::Exists: {
      if (depth < 1) break;
      for (auto& w : {ty::boolean(), ty::integer()})
        for (auto& v : values(substType(t->left, w, t->name), depth - 1)) out.push_back(tm::pack(w, v, t));
      break;
    }
    case TypeKind::Mu: {
      if (depth < 1) break;
      for (auto& v : values(unrollMu(t), depth - 1)) out.push_back(tm::fold(v, t));
      break;
    }
    default:
      break;
    }
    cap(out, t);
    return out;
  }
};

} // namespace lr

#endif
