#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace multigiant {

/// Disjoint sets over 0..n-1 with union by size and path halving.
class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1), count_(n) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --count_;
    return true;
  }

  std::size_t size_of(std::uint32_t x) { return size_[find(x)]; }
  std::size_t count() const noexcept { return count_; }

private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t count_;
};

} // namespace multigiant
