#ifndef LR_STATICS_HPP
#define LR_STATICS_HPP

// Algorithmic typechecking for Sigma; Delta; Gamma |- e : T, well-formedness,
// and heap typing.

#include "heap.hpp"
#include "surface.hpp"
#include "syntax.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lr {

using TypeCtx = std::vector<Name>;
using TermCtx = std::map<Name, TypePtr>;
using StoreTyping = std::map<Location, TypePtr>;

class TypeError : public std::runtime_error {
public:
  TypeError(const std::string& msg, std::string rule, SourceSpan span)
      : std::runtime_error(rule + ": " + msg), rule_(std::move(rule)), span_(span) {}
  const std::string& rule() const { return rule_; }
  const SourceSpan& span() const { return span_; }

private:
  std::string rule_;
  SourceSpan span_;
};

inline bool wfType(const TypeCtx& delta, const TypePtr& t) {
  for (auto& a : freeTypeVars(t))
    if (std::find(delta.begin(), delta.end(), a) == delta.end()) return false;
  return true;
}

inline bool wfCtx(const TypeCtx& delta, const TermCtx& gamma) {
  return std::all_of(gamma.begin(), gamma.end(), [&](auto& kv) { return wfType(delta, kv.second); });
}

/// Typing assumed for the single hole of a program context.
struct HoleTyping {
  TypeCtx delta;
  TermCtx gamma;
  TypePtr type;
};

class Typechecker {
public:
  Typechecker(const StoreTyping& sigma, TypeCtx delta, const TermCtx& gamma,
              const HoleTyping* hole = nullptr)
      : sigma_(sigma), delta_(std::move(delta)), hole_(hole) {
    for (auto& [x, t] : gamma) gamma_.emplace_back(x, t);
  }

  TypePtr infer(const TermPtr& e) {
    switch (e->kind) {
    case TermKind::Var: {
      for (auto it = gamma_.rbegin(); it != gamma_.rend(); ++it)
        if (it->first == e->name) return it->second;
      fail(e, "T-Var", "unbound variable '" + e->name + "'");
    }
    case TermKind::True: case TermKind::False: return ty::boolean();
    case TermKind::Int: return ty::integer();
    case TermKind::If: {
      expectType(e->a, ty::boolean(), "T-If");
      auto t1 = infer(e->b);
      auto t2 = infer(e->c);
      if (!alphaEq(t1, t2)) mismatch(e, "T-If", t1, t2);
      return t1;
    }
    case TermKind::Lam: {
      wf(e, e->type, "T-Abs");
      gamma_.emplace_back(e->name, e->type);
      auto body = infer(e->a);
      gamma_.pop_back();
      return ty::arrow(e->type, body);
    }
    case TermKind::App: {
      auto f = infer(e->a);
      if (f->kind != TypeKind::Arrow) fail(e->a, "T-App", "expected a function, found " + printType(f));
      auto x = infer(e->b);
      if (!alphaEq(f->left, x)) mismatch(e->b, "T-App", f->left, x);
      return f->right;
    }
    case TermKind::Pair: return ty::prod(infer(e->a), infer(e->b));
    case TermKind::Fst: case TermKind::Snd: {
      auto p = infer(e->a);
      const char* rule = e->kind == TermKind::Fst ? "T-Fst" : "T-Snd";
      if (p->kind != TypeKind::Prod) fail(e->a, rule, "expected a product, found " + printType(p));
      return e->kind == TermKind::Fst ? p->left : p->right;
    }
    case TermKind::Inl: case TermKind::Inr: {
      const char* rule = e->kind == TermKind::Inl ? "T-Inl" : "T-Inr";
      wf(e, e->type, rule);
      if (e->type->kind != TypeKind::Sum) fail(e, rule, "annotation must be a sum type, found " + printType(e->type));
      expectType(e->a, e->kind == TermKind::Inl ? e->type->left : e->type->right, rule);
      return e->type;
    }
    case TermKind::Case: {
      auto s = infer(e->a);
      if (s->kind != TypeKind::Sum) fail(e->a, "T-Case", "expected a sum, found " + printType(s));
      gamma_.emplace_back(e->name, s->left);
      auto t1 = infer(e->b);
      gamma_.pop_back();
      gamma_.emplace_back(e->name2, s->right);
      auto t2 = infer(e->c);
      gamma_.pop_back();
      if (!alphaEq(t1, t2)) mismatch(e, "T-Case", t1, t2);
      return t1;
    }
    case TermKind::TyLam: {
      Name a = e->name;
      TermPtr body = e->a;
      if (inDelta(a)) {
        a = freshTypeName(a, body);
        body = substType(body, ty::var(a), e->name);
      }
      delta_.push_back(a);
      auto t = infer(body);
      delta_.pop_back();
      return ty::forall(a, t);
    }
    case TermKind::TyApp: {
      auto f = infer(e->a);
      if (f->kind != TypeKind::Forall) fail(e->a, "T-TApp", "expected a polymorphic term, found " + printType(f));
      wf(e, e->type, "T-TApp");
      return substType(f->left, e->type, f->name);
    }
    case TermKind::Pack: {
      wf(e, e->type, "T-Pack");
      wf(e, e->type2, "T-Pack");
      if (e->type2->kind != TypeKind::Exists)
        fail(e, "T-Pack", "annotation must be an existential type, found " + printType(e->type2));
      expectType(e->a, substType(e->type2->left, e->type, e->type2->name), "T-Pack");
      return e->type2;
    }
    case TermKind::Unpack: {
      auto p = infer(e->a);
      if (p->kind != TypeKind::Exists) fail(e->a, "T-Unpack", "expected a package, found " + printType(p));
      Name a = e->name;
      TermPtr body = e->b;
      if (inDelta(a)) {
        a = freshTypeName(a, body);
        body = substType(body, ty::var(a), e->name);
      }
      delta_.push_back(a);
      gamma_.emplace_back(e->name2, substType(p->left, ty::var(a), p->name));
      auto t = infer(body);
      gamma_.pop_back();
      delta_.pop_back();
      if (!wfType(delta_, t))
        fail(e, "T-Unpack", "abstract type '" + e->name + "' escapes its scope in " + printType(t));
      return t;
    }
    case TermKind::Fold: {
      wf(e, e->type, "T-Fold");
      if (e->type->kind != TypeKind::Mu) fail(e, "T-Fold", "annotation must be a recursive type, found " + printType(e->type));
      expectType(e->a, unrollMu(e->type), "T-Fold");
      return e->type;
    }
    case TermKind::Unfold: {
      auto t = infer(e->a);
      if (t->kind != TypeKind::Mu) fail(e->a, "T-Unfold", "expected a recursive type, found " + printType(t));
      return unrollMu(t);
    }
    case TermKind::Alloc: return ty::ref(infer(e->a));
    case TermKind::Assign: {
      auto r = infer(e->a);
      if (r->kind != TypeKind::Ref) fail(e->a, "T-Assign", "expected a reference, found " + printType(r));
      expectType(e->b, r->left, "T-Assign");
      return r->left;
    }
    case TermKind::Deref: {
      auto r = infer(e->a);
      if (r->kind != TypeKind::Ref) fail(e->a, "T-Deref", "expected a reference, found " + printType(r));
      return r->left;
    }
    case TermKind::Loc: {
      auto it = sigma_.find(e->loc);
      if (it == sigma_.end()) fail(e, "T-Loc", "location #l" + std::to_string(e->loc) + " not in store typing");
      return ty::ref(it->second);
    }
    case TermKind::IntEq:
      expectType(e->a, ty::integer(), "T-Eq");
      expectType(e->b, ty::integer(), "T-Eq");
      return ty::boolean();
    case TermKind::Not:
      expectType(e->a, ty::boolean(), "T-Not");
      return ty::boolean();
    case TermKind::Hole: {
      if (!hole_) fail(e, "T-Hole", "hole outside a program context");
      for (auto& a : hole_->delta)
        if (!inDelta(a)) fail(e, "T-Hole", "type variable '" + a + "' not in scope at the hole");
      for (auto& [x, t] : hole_->gamma) {
        auto it = std::find_if(gamma_.rbegin(), gamma_.rend(), [&](auto& kv) { return kv.first == x; });
        if (it == gamma_.rend() || !alphaEq(it->second, t))
          fail(e, "T-Hole", "variable '" + x + "' not bound at type " + printType(t) + " at the hole");
      }
      return hole_->type;
    }
    }
    fail(e, "T-?", "unknown term form");
  }

private:
  StoreTyping sigma_;
  TypeCtx delta_;
  std::vector<std::pair<Name, TypePtr>> gamma_;
  const HoleTyping* hole_;

  bool inDelta(const Name& a) const { return std::find(delta_.begin(), delta_.end(), a) != delta_.end(); }

  Name freshTypeName(const Name& a, const TermPtr& body) const {
    std::set<Name> avoid(delta_.begin(), delta_.end());
    collectAllNames(body, avoid);
    for (auto& [x, t] : gamma_) collectAllNames(t, avoid);
    return freshName(a, avoid);
  }

  [[noreturn]] static void fail(const TermPtr& e, const std::string& rule, const std::string& msg) {
    throw TypeError(msg, rule, e->span);
  }

  [[noreturn]] static void mismatch(const TermPtr& e, const std::string& rule, const TypePtr& want, const TypePtr& got) {
    fail(e, rule, "type mismatch: expected " + printType(want) + ", found " + printType(got));
  }

  void wf(const TermPtr& e, const TypePtr& t, const std::string& rule) {
    if (!wfType(delta_, t)) fail(e, rule, "type " + printType(t) + " is not well formed here");
  }

  void expectType(const TermPtr& e, const TypePtr& want, const std::string& rule) {
    auto got = infer(e);
    if (!alphaEq(want, got)) mismatch(e, rule, want, got);
  }
};

/// Sigma; Delta; Gamma |- e : T. Throws TypeError.
inline TypePtr typecheck(const StoreTyping& sigma, const TypeCtx& delta, const TermCtx& gamma, const TermPtr& e) {
  return Typechecker(sigma, delta, gamma).infer(e);
}

inline TypePtr typecheck(const TermPtr& e) { return typecheck({}, {}, {}, e); }

inline std::optional<TypePtr> tryTypecheck(const StoreTyping& sigma, const TypeCtx& delta, const TermCtx& gamma,
                                           const TermPtr& e) {
  try {
    return typecheck(sigma, delta, gamma, e);
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

inline std::optional<TypePtr> tryTypecheck(const TermPtr& e) { return tryTypecheck({}, {}, {}, e); }

inline bool hasType(const TermPtr& e, const TypePtr& t, const StoreTyping& sigma = {}) {
  auto got = tryTypecheck(sigma, {}, {}, e);
  return got && alphaEq(*got, t);
}

inline bool heapWellTyped(const Heap& h, const StoreTyping& sigma) {
  if (h.size() != sigma.size()) return false;
  for (auto& [l, v] : h.cells()) {
    auto it = sigma.find(l);
    if (it == sigma.end() || !hasType(v, it->second, sigma)) return false;
  }
  return true;
}

/// Extends `sigma` with inferred types for the locations of `h` it lacks, so
/// that the heap is well typed. Locations already in `sigma` keep their type.
inline std::optional<StoreTyping> extendStoreTyping(const StoreTyping& sigma, const Heap& h) {
  StoreTyping out = sigma;
  for (bool progress = true; progress;) {
    progress = false;
    for (auto& [l, v] : h.cells()) {
      if (out.count(l)) continue;
      if (auto t = tryTypecheck(out, {}, {}, v)) {
        out.emplace(l, *t);
        progress = true;
      }
    }
  }
  if (!heapWellTyped(h, out)) return std::nullopt;
  return out;
}

} // namespace lr

#endif
