#ifndef LR_STEPWORLD_HPP
#define LR_STEPWORLD_HPP

// Step-indexed unary interpretations for recursive types and references.
// Worlds map locations to closed syntactic types.

#include "dynamics.hpp"
#include "generate.hpp"
#include "indexed_predicate.hpp"
#include "logrel.hpp"
#include "statics.hpp"
#include "verdict.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lr {

using World = std::map<Location, TypePtr>;

/// W2 is a future world of W: it keeps every old location at the same type.
inline bool futureWorld(const World& w2, const World& w) {
  for (auto& [l, t] : w) {
    auto it = w2.find(l);
    if (it == w2.end() || !alphaEq(it->second, t)) return false;
  }
  return true;
}

inline std::string worldKey(const World& w) {
  std::string s;
  for (auto& [l, t] : w) s += std::to_string(l) + ":" + canonicalKey(t) + ";";
  return s;
}

/// Adds one or two fresh locations whose types are drawn from `pool`.
inline World extendWorld(const World& w, Rng& rng, const std::vector<TypePtr>& pool) {
  World out = w;
  Location next = w.empty() ? 0 : w.rbegin()->first + 1;
  std::size_t n = 1 + pick(rng, 2);
  for (std::size_t i = 0; i < n && !pool.empty(); ++i) out.emplace(next++, pool[pick(rng, pool.size())]);
  return out;
}

class StepChecker {
public:
  StepChecker(ValueCorpus& corpus, std::size_t fuel, std::uint64_t seed = 0, std::size_t worldSamples = 3)
      : corpus_(corpus), fuel_(fuel), seed_(seed), worldSamples_(worldSamples) {}

  std::size_t fuel() const { return fuel_; }

  /// Closed candidate values of `t` under world `w`: corpus values, with
  /// reference positions filled by locations of the right type.
  std::vector<TermPtr> candidates(const TypePtr& t, const World& w) {
    std::vector<TermPtr> out;
    switch (t->kind) {
    case TypeKind::Ref:
      for (auto& [l, lt] : w)
        if (alphaEq(lt, t->left)) out.push_back(tm::loc(l));
      break;
    case TypeKind::Prod: {
      auto as = candidates(t->left, w);
      auto bs = candidates(t->right, w);
      for (auto& a : as)
        for (auto& b : bs)
          if (out.size() < kCap) out.push_back(tm::pair(a, b));
      break;
    }
    case TypeKind::Sum:
      for (auto& a : candidates(t->left, w))
        if (out.size() < kCap) out.push_back(tm::inl(a, t));
      for (auto& b : candidates(t->right, w))
        if (out.size() < kCap) out.push_back(tm::inr(b, t));
      break;
    default:
      out = corpus_.values(t);
    }
    return out;
  }

  /// A heap satisfying `w` at index k built from candidates, if one is found.
  std::optional<Heap> heapFor(std::size_t k, const World& w) {
    Heap h;
    for (auto& [l, t] : w) {
      bool found = false;
      for (auto& v : candidates(t, w)) {
        if (vMemberK(k, v, t, w).isDisproven()) continue;
        h.allocate(l, v);
        found = true;
        break;
      }
      if (!found) return std::nullopt;
    }
    return h;
  }

  Verdict vMemberK(std::size_t k, const TermPtr& v, const TypePtr& t, const World& w) {
    auto key = std::to_string(k) + (nested_ ? "n|" : "|") + canonicalKey(v) + "|" + canonicalKey(t) + "|" + worldKey(w);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    auto r = vMemberKUncached(k, v, t, w);
    memo_.emplace(key, r);
    return r;
  }

  Verdict eMemberK(std::size_t k, const TermPtr& e, const TypePtr& t, const World& w, const Heap& h) {
    if (k == 0) return Verdict::proven();
    Config c{h, e};
    World w2 = w;
    auto alloc = Allocator::sequential();
    std::size_t limit = std::min(k - 1, fuel_);
    for (std::size_t i = 0;; ++i) {
      if (isValue(c.expr)) {
        if (i == 0) return vMemberK(k, c.expr, t, w2);
        auto hs = heapSat(k - i, c.heap, w2);
        if (hs.isDisproven()) return hs;
        return hs && vMemberK(k - i, c.expr, t, w2);
      }
      if (i == limit) return limit < k - 1 ? Verdict::upToBounds("FuelExhausted") : Verdict::proven();
      std::string rule;
      StuckReason why = StuckReason::None;
      if (stepInPlace(c, alloc, &rule, &why) == StepOutcome::Kind::Stuck)
        return Verdict::disproven(printInHeap(c.expr, c.heap) + " [" + toString(why) + "]", "stuck");
      if (rule == "ALLOC") {
        for (auto& [l, v] : c.heap.cells()) {
          if (w2.count(l)) continue;
          if (auto got = tryTypecheck(w2, {}, {}, v)) w2.emplace(l, *got);
        }
      }
    }
  }

  Verdict heapSat(std::size_t k, const Heap& h, const World& w) {
    if (h.size() != w.size()) return Verdict::disproven(printHeap(h), "heap and world domains differ");
    Verdict out = Verdict::proven();
    for (auto& [l, t] : w) {
      if (!h.contains(l)) return Verdict::disproven("#l" + std::to_string(l), "location missing from heap");
      auto r = vMemberK(k, h.at(l), t, w);
      if (r.isDisproven())
        return Verdict::disproven("#l" + std::to_string(l) + " := " + printTerm(h.at(l)), r.reason());
      out &= r;
    }
    return out;
  }

  /// Closing substitutions for `gamma` at index k under `w`, capped in number.
  std::vector<ValueSubst> substitutions(std::size_t k, const TermCtx& gamma, const World& w, bool& complete) {
    std::vector<ValueSubst> out{ValueSubst{}};
    complete = true;
    for (auto& [x, t] : gamma) {
      if (!exactUnderWorld(t)) complete = false;
      std::vector<TermPtr> vs;
      for (auto& v : candidates(t, w))
        if (!vMemberK(k, v, t, w).isDisproven()) vs.push_back(v);
      std::vector<ValueSubst> next;
      for (auto& g : out)
        for (auto& v : vs) {
          if (next.size() >= kSubstCap) {
            complete = false;
            break;
          }
          auto g2 = g;
          g2[x] = v;
          next.push_back(std::move(g2));
        }
      out = std::move(next);
    }
    return out;
  }

  Verdict semSafeK(const TermCtx& gamma, const TermPtr& e, const TypePtr& t, std::size_t k, const World& w) {
    auto h = heapFor(k, w);
    if (!h) return Verdict::upToBounds("NoHeapForWorld");
    bool complete = true;
    Verdict out = Verdict::proven();
    for (auto& g : substitutions(k, gamma, w, complete)) {
      auto r = eMemberK(k, applySubst(e, g), t, w, *h);
      if (r.isDisproven()) {
        std::string wit = "{";
        for (auto& [x, v] : g) wit += (wit.size() > 1 ? ", " : "") + x + " := " + printTerm(v);
        return Verdict::disproven(wit + "} heap " + printHeap(*h) + " -> " + r.witness(), r.reason());
      }
      out &= r;
    }
    return complete ? out : out.bounded("CorpusLimited");
  }

private:
  static constexpr std::size_t kCap = 12;
  static constexpr std::size_t kSubstCap = 64;

  ValueCorpus& corpus_;
  std::size_t fuel_;
  std::uint64_t seed_;
  std::size_t worldSamples_;
  std::unordered_map<std::string, Verdict> memo_;
  bool nested_ = false; // inside an arrow clause: no further world or index sampling

  static bool exactUnderWorld(const TypePtr& t) {
    switch (t->kind) {
    case TypeKind::Bool: case TypeKind::Ref: return true;
    case TypeKind::Prod: case TypeKind::Sum: return exactUnderWorld(t->left) && exactUnderWorld(t->right);
    default: return false;
    }
  }

  std::vector<std::size_t> indexSamples(std::size_t k) const {
    if (nested_) return {k};
    std::set<std::size_t> js{k / 2, k};
    if (k > 0) js.insert(k - 1);
    for (std::size_t j = 0; j <= std::min<std::size_t>(k, 4); ++j) js.insert(j);
    return {js.begin(), js.end()};
  }

  static void refTargets(const TypePtr& t, std::vector<TypePtr>& pool) {
    if (!t) return;
    if (t->kind == TypeKind::Ref && freeTypeVars(t->left).empty() &&
        std::none_of(pool.begin(), pool.end(), [&](const TypePtr& p) { return alphaEq(p, t->left); }))
      pool.push_back(t->left);
    refTargets(t->left, pool);
    refTargets(t->right, pool);
  }

  // w itself, one extension holding every pool type, and seeded random extensions
  std::vector<World> futureSamples(const World& w, const TypePtr& arg) {
    if (nested_) return {w};
    std::vector<TypePtr> pool{ty::boolean(), ty::integer()};
    refTargets(arg, pool);
    Rng rng(seed_ ^ (std::hash<std::string>{}(worldKey(w) + canonicalKey(arg))));
    World rich = w;
    Location next = w.empty() ? 0 : w.rbegin()->first + 1;
    for (auto& t : pool) rich.emplace(next++, t);
    std::vector<World> out{w, rich};
    for (std::size_t i = 0; i < worldSamples_; ++i) out.push_back(extendWorld(w, rng, pool));
    return out;
  }

  Verdict vMemberKUncached(std::size_t k, const TermPtr& v, const TypePtr& t, const World& w) {
    auto no = [&](const std::string& why) {
      return Verdict::disproven(printTerm(v), why + " at " + printType(t) + " (k=" + std::to_string(k) + ")");
    };
    if (!isValue(v)) return no("not a value");
    switch (t->kind) {
    case TypeKind::Bool:
      return v->kind == TermKind::True || v->kind == TermKind::False ? Verdict::proven() : no("not a boolean");
    case TypeKind::Int:
      return v->kind == TermKind::Int ? Verdict::proven() : no("not an integer");
    case TypeKind::Prod:
      if (v->kind != TermKind::Pair) return no("not a pair");
      return vMemberK(k, v->a, t->left, w) && vMemberK(k, v->b, t->right, w);
    case TypeKind::Sum:
      if (v->kind == TermKind::Inl) return vMemberK(k, v->a, t->left, w);
      if (v->kind == TermKind::Inr) return vMemberK(k, v->a, t->right, w);
      return no("not an injection");
    case TypeKind::Mu:
      if (v->kind != TermKind::Fold) return no("not a fold");
      if (k == 0) return Verdict::proven();
      return vMemberK(k - 1, v->a, unrollMu(t), w);
    case TypeKind::Ref: {
      if (v->kind != TermKind::Loc) return no("not a location");
      auto it = w.find(v->loc);
      if (it == w.end()) return no("location outside the world");
      return alphaEq(it->second, t->left) ? Verdict::proven() : no("world assigns " + printType(it->second));
    }
    case TypeKind::Exists:
      if (v->kind != TermKind::Pack) return no("not a package");
      if (!freeTypeVars(v->type).empty()) return no("open witness type");
      return vMemberK(k, v->a, substType(t->left, v->type, t->name), w);
    case TypeKind::Forall: {
      if (v->kind != TermKind::TyLam) return no("not a type abstraction");
      if (k == 0) return Verdict::proven();
      auto h = heapFor(k - 1, w);
      if (!h) return Verdict::upToBounds("NoHeapForWorld");
      Verdict out = Verdict::proven();
      for (auto& inst : {ty::boolean(), ty::integer()}) {
        auto r = eMemberK(k, substType(v->a, inst, v->name), substType(t->left, inst, t->name), w, *h);
        if (r.isDisproven()) return Verdict::disproven(printTerm(tm::tyapp(v, inst)), r.reason());
        out &= r;
      }
      return out.bounded("CatalogLimited");
    }
    case TypeKind::Arrow: {
      if (v->kind != TermKind::Lam) return no("not a function");
      Verdict out = Verdict::proven();
      auto worlds = futureSamples(w, t->left);
      auto indices = indexSamples(k);
      bool outer = !nested_;
      nested_ = true;
      struct Restore {
        bool& flag;
        bool value;
        ~Restore() { flag = value; }
      } restore{nested_, !outer};
      for (auto& w2 : worlds) {
        for (auto j : indices) {
          if (j == 0) continue;
          // the heap is read only after a step, so index j - 1 suffices
          auto h = heapFor(j - 1, w2);
          if (!h) continue;
          for (auto& arg : candidates(t->left, w2)) {
            if (vMemberK(j, arg, t->left, w2).isDisproven()) continue;
            auto r = eMemberK(j, substTerm(v->a, arg, v->name), t->right, w2, *h);
            if (r.isDisproven())
              return Verdict::disproven("(j=" + std::to_string(j) + ", arg=" + printTerm(arg) + ", world=" +
                                            printWorld(w2) + ")",
                                        r.witness() + ": " + r.reason());
            out &= r;
          }
        }
      }
      return out.bounded("WorldSampled");
    }
    default:
      throw std::invalid_argument("vMemberK: type is not closed: " + printType(t));
    }
  }
};

inline Verdict vMemberK(std::size_t k, const TermPtr& v, const TypePtr& t, const World& w, ValueCorpus& corpus,
                        std::size_t fuel) {
  return StepChecker(corpus, fuel).vMemberK(k, v, t, w);
}

inline Verdict eMemberK(std::size_t k, const TermPtr& e, const TypePtr& t, const World& w, const Heap& h,
                        ValueCorpus& corpus, std::size_t fuel) {
  return StepChecker(corpus, fuel).eMemberK(k, e, t, w, h);
}

inline Verdict heapSat(std::size_t k, const Heap& h, const World& w, ValueCorpus& corpus, std::size_t fuel) {
  return StepChecker(corpus, fuel).heapSat(k, h, w);
}

inline Verdict semSafeK(const TermCtx& gamma, const TermPtr& e, const TypePtr& t, std::size_t k, const World& w,
                        ValueCorpus& corpus, std::size_t fuel) {
  return StepChecker(corpus, fuel).semSafeK(gamma, e, t, k, w);
}

} // namespace lr

#endif
