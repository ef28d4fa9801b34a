#ifndef LR_INDEXED_PREDICATE_HPP
#define LR_INDEXED_PREDICATE_HPP

// Finite step-indexed predicates (sets of (index, value) pairs) with k-cut
// and k-equality.

#include <cstddef>
#include <set>
#include <utility>

namespace lr {

template <class V>
class IndexedPredicate {
public:
  using Entry = std::pair<std::size_t, V>;

  IndexedPredicate() = default;
  explicit IndexedPredicate(std::set<Entry> entries) : entries_(std::move(entries)) {}

  /// Smallest downward-closed predicate containing (n, v) for each pair given.
  static IndexedPredicate closure(const std::set<Entry>& tops) {
    std::set<Entry> out;
    for (auto& [n, v] : tops)
      for (std::size_t m = 0; m <= n; ++m) out.emplace(m, v);
    return IndexedPredicate(std::move(out));
  }

  void insert(std::size_t n, V v) { entries_.emplace(n, std::move(v)); }
  bool contains(std::size_t n, const V& v) const { return entries_.count(Entry{n, v}) != 0; }
  const std::set<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool downwardClosed() const {
    for (auto& [n, v] : entries_)
      if (n > 0 && !contains(n - 1, v)) return false;
    return true;
  }

  bool operator==(const IndexedPredicate& o) const { return entries_ == o.entries_; }

  IndexedPredicate unite(const IndexedPredicate& o) const {
    auto out = entries_;
    out.insert(o.entries_.begin(), o.entries_.end());
    return IndexedPredicate(std::move(out));
  }

  IndexedPredicate intersect(const IndexedPredicate& o) const {
    std::set<Entry> out;
    for (auto& e : entries_)
      if (o.entries_.count(e)) out.insert(e);
    return IndexedPredicate(std::move(out));
  }

  /// Shifts every index up by one and adds all of `universe` at index 0.
  IndexedPredicate later(const std::set<V>& universe) const {
    std::set<Entry> out;
    for (auto& v : universe) out.emplace(0, v);
    for (auto& [n, v] : entries_) out.emplace(n + 1, v);
    return IndexedPredicate(std::move(out));
  }

private:
  std::set<Entry> entries_;
};

/// Entries with index strictly below k.
template <class V>
IndexedPredicate<V> kCut(std::size_t k, const IndexedPredicate<V>& p) {
  std::set<typename IndexedPredicate<V>::Entry> out;
  for (auto& e : p.entries())
    if (e.first < k) out.insert(e);
  return IndexedPredicate<V>(std::move(out));
}

template <class V>
bool kEqual(std::size_t k, const IndexedPredicate<V>& p, const IndexedPredicate<V>& q) {
  return kCut(k, p) == kCut(k, q);
}

} // namespace lr

#endif
