#ifndef LR_VERDICT_HPP
#define LR_VERDICT_HPP

#include <cstddef>
#include <optional>
#include <string>

namespace lr {

/// The finitization limits a check ran under. Unset fields are not printed.
struct Bounds {
  std::size_t fuel = 0;
  std::optional<std::size_t> corpus;
  std::optional<std::size_t> catalog;
  std::optional<std::size_t> ctxSize;
  std::optional<std::size_t> k;
  std::string note; // e.g. CatalogExhausted, cycle

  std::string toString() const {
    std::string s = "fuel=" + std::to_string(fuel);
    if (corpus) s += " corpus=" + std::to_string(*corpus);
    if (catalog) s += " catalog=" + std::to_string(*catalog);
    if (ctxSize) s += " ctx=" + std::to_string(*ctxSize);
    if (k) s += " k=" + std::to_string(*k);
    if (!note.empty()) s += " note=" + note;
    return s;
  }
};

class Verdict {
public:
  enum class Kind { Proven, Disproven, UpToBounds };

  static Verdict proven() { return Verdict(Kind::Proven, {}, {}); }
  static Verdict disproven(std::string witness, std::string reason = {}) {
    Verdict v(Kind::Disproven, std::move(witness), {});
    v.reason_ = std::move(reason);
    return v;
  }
  static Verdict upToBounds(Bounds b) { return Verdict(Kind::UpToBounds, {}, std::move(b)); }
  static Verdict upToBounds(std::string note) {
    Bounds b;
    b.note = std::move(note);
    return upToBounds(b);
  }

  Kind kind() const { return kind_; }
  bool isProven() const { return kind_ == Kind::Proven; }
  bool isDisproven() const { return kind_ == Kind::Disproven; }
  bool isUpToBounds() const { return kind_ == Kind::UpToBounds; }
  const std::string& witness() const { return witness_; }
  const std::string& reason() const { return reason_; }
  const Bounds& bounds() const { return bounds_; }

  Verdict& withBounds(const Bounds& b) {
    std::string note = bounds_.note;
    bounds_ = b;
    if (!note.empty()) bounds_.note = note;
    return *this;
  }

  /// Conjunction: Disproven dominates, then UpToBounds, then Proven.
  Verdict operator&&(const Verdict& o) const {
    if (isDisproven()) return *this;
    if (o.isDisproven()) return o;
    if (isUpToBounds()) return *this;
    return o;
  }
  Verdict& operator&=(const Verdict& o) { return *this = (*this && o); }

  /// Weakens Proven to UpToBounds (used when a quantifier was sampled).
  Verdict bounded(const std::string& note = {}) const {
    if (!isProven()) return *this;
    return upToBounds(note);
  }

  std::string line(const Bounds& b) const {
    Bounds shown = b;
    if (!bounds_.note.empty()) shown.note = bounds_.note;
    return std::string("VERDICT ") + kindName() + " WITNESS " + (witness_.empty() ? "-" : witness_) +
           " BOUNDS " + shown.toString();
  }

  const char* kindName() const {
    switch (kind_) {
    case Kind::Proven: return "Proven";
    case Kind::Disproven: return "Disproven";
    case Kind::UpToBounds: return "UpToBounds";
    }
    return "?";
  }

private:
  Verdict(Kind k, std::string w, Bounds b) : kind_(k), witness_(std::move(w)), bounds_(std::move(b)) {}
  Kind kind_;
  std::string witness_;
  std::string reason_;
  Bounds bounds_;
};

} // namespace lr

#endif
