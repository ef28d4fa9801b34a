#ifndef LR_HEAP_HPP
#define LR_HEAP_HPP

#include "syntax.hpp"

#include <map>
#include <string>
#include <vector>

namespace lr {

/// Finite map from locations to closed values; remembers allocation order.
class Heap {
public:
  bool contains(Location l) const { return cells_.count(l) != 0; }
  const TermPtr& at(Location l) const { return cells_.at(l); }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  void allocate(Location l, TermPtr v) {
    if (cells_.emplace(l, std::move(v)).second) order_.push_back(l);
  }
  void write(Location l, TermPtr v) { cells_.at(l) = std::move(v); }

  const std::map<Location, TermPtr>& cells() const { return cells_; }
  const std::vector<Location>& order() const { return order_; }

  /// Position of `l` in allocation order, or -1.
  long indexOf(Location l) const {
    for (std::size_t i = 0; i < order_.size(); ++i)
      if (order_[i] == l) return long(i);
    return -1;
  }

  bool operator==(const Heap& o) const {
    if (cells_.size() != o.cells_.size()) return false;
    for (auto& [l, v] : cells_) {
      auto it = o.cells_.find(l);
      if (it == o.cells_.end() || !alphaEq(v, it->second)) return false;
    }
    return true;
  }

private:
  std::map<Location, TermPtr> cells_;
  std::vector<Location> order_;
};

} // namespace lr

#endif
