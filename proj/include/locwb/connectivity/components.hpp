#pragma once

#include <numeric>
#include <utility>
#include <vector>

#include "locwb/core/category.hpp"

namespace locwb {

  class UnionFind {
   public:
    explicit UnionFind(std::size_t n) : _parent(n) {
      std::iota(_parent.begin(), _parent.end(), 0);
    }

    std::size_t find(std::size_t x) {
      while (_parent[x] != x) {
        _parent[x] = _parent[_parent[x]];
        x          = _parent[x];
      }
      return x;
    }

    bool unite(std::size_t a, std::size_t b) {
      a = find(a);
      b = find(b);
      if (a == b) {
        return false;
      }
      if (b < a) {
        std::swap(a, b);
      }
      _parent[b] = a;
      return true;
    }

   private:
    std::vector<std::size_t> _parent;
  };

  // Connected components of a graph given by an edge list; each component
  // is sorted and components are ordered by their least vertex.
  inline std::vector<std::vector<int>> components_of(
      std::size_t n, std::vector<std::pair<int, int>> const& edges) {
    UnionFind uf(n);
    for (auto [a, b] : edges) {
      uf.unite(a, b);
    }
    std::vector<int>              slot(n, -1);
    std::vector<std::vector<int>> result;
    for (std::size_t x = 0; x < n; ++x) {
      auto r = uf.find(x);
      if (slot[r] < 0) {
        slot[r] = static_cast<int>(result.size());
        result.emplace_back();
      }
      result[slot[r]].push_back(static_cast<int>(x));
    }
    return result;
  }

  // Zig-zag components of a finite category.
  inline std::vector<std::vector<int>> pi0(FinCategory const& C) {
    std::vector<std::pair<int, int>> edges;
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      if (!C.is_identity(f)) {
        edges.emplace_back(C.src(f), C.dst(f));
      }
    }
    return components_of(C.num_objects(), edges);
  }

  inline bool is_zero_connected(FinCategory const& C) {
    return C.num_objects() > 0 && pi0(C).size() == 1;
  }

}  // namespace locwb
