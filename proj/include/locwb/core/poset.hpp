#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/errors.hpp"
#include "locwb/core/validation.hpp"

namespace locwb {

  // A finite partial order. Elements are indexed 0..n-1; the strict pairs
  // (i, j) with i < j are enumerated in lexicographic index order and that
  // order fixes the layout of Diagram::arr.
  class FinPoset {
   public:
    FinPoset() = default;

    // `relations` lists pairs (a, b) meaning a <= b; the reflexive
    // transitive closure is taken. Throws InvalidInput on a cycle.
    FinPoset(std::string name, std::vector<std::string> elements,
             std::vector<std::pair<int, int>> const& relations)
        : _name(std::move(name)), _elements(std::move(elements)) {
      auto n = _elements.size();
      _leq.assign(n * n, false);
      for (std::size_t i = 0; i < n; ++i) {
        _leq[i * n + i] = true;
      }
      for (auto [a, b] : relations) {
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n
            || static_cast<std::size_t>(b) >= n) {
          throw InvalidInput("poset relation out of range");
        }
        _leq[a * n + b] = true;
      }
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          if (!_leq[i * n + k]) {
            continue;
          }
          for (std::size_t j = 0; j < n; ++j) {
            if (_leq[k * n + j]) {
              _leq[i * n + j] = true;
            }
          }
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (_leq[i * n + j] && _leq[j * n + i]) {
            throw InvalidInput("poset " + _name + " is not antisymmetric ("
                               + _elements[i] + ", " + _elements[j] + ")");
          }
        }
      }
      finish();
    }

    static FinPoset chain(int n) {
      std::vector<std::string>         elements;
      std::vector<std::pair<int, int>> rel;
      for (int i = 0; i <= n; ++i) {
        elements.push_back(std::to_string(i));
        if (i > 0) {
          rel.emplace_back(i - 1, i);
        }
      }
      return FinPoset("Delta" + std::to_string(n), elements, rel);
    }

    static FinPoset discrete(int n) {
      std::vector<std::string> elements;
      for (int i = 0; i < n; ++i) {
        elements.push_back(std::to_string(i));
      }
      return FinPoset("Disc" + std::to_string(n), elements, {});
    }

    static FinPoset product(FinPoset const& E, FinPoset const& F) {
      std::vector<std::string>         elements;
      std::vector<std::pair<int, int>> rel;
      auto                             m = static_cast<int>(F.size());
      for (std::size_t i = 0; i < E.size(); ++i) {
        for (std::size_t j = 0; j < F.size(); ++j) {
          elements.push_back("(" + E.element(i) + "," + F.element(j) + ")");
        }
      }
      for (std::size_t i = 0; i < E.size(); ++i) {
        for (std::size_t j = 0; j < F.size(); ++j) {
          for (std::size_t k = 0; k < E.size(); ++k) {
            for (std::size_t l = 0; l < F.size(); ++l) {
              if (E.leq(i, k) && F.leq(j, l)) {
                rel.emplace_back(static_cast<int>(i) * m + static_cast<int>(j),
                                 static_cast<int>(k) * m + static_cast<int>(l));
              }
            }
          }
        }
      }
      return FinPoset(E.name() + "x" + F.name(), elements, rel);
    }

    std::string const& name() const noexcept {
      return _name;
    }
    std::size_t size() const noexcept {
      return _elements.size();
    }
    std::string const& element(std::size_t i) const {
      return _elements[i];
    }
    std::vector<std::string> const& elements() const noexcept {
      return _elements;
    }
    bool leq(std::size_t i, std::size_t j) const {
      return _leq[i * _elements.size() + j];
    }
    bool lt(std::size_t i, std::size_t j) const {
      return i != j && leq(i, j);
    }

    std::vector<std::pair<int, int>> const& strict_pairs() const noexcept {
      return _pairs;
    }

    int pair_index(int i, int j) const {
      return _pair_index[i * _elements.size() + j];
    }

    // Covering relations (Hasse diagram edges).
    std::vector<std::pair<int, int>> covers() const {
      std::vector<std::pair<int, int>> result;
      for (auto [i, j] : _pairs) {
        bool cover = true;
        for (std::size_t k = 0; k < size() && cover; ++k) {
          if (lt(i, k) && lt(k, j)) {
            cover = false;
          }
        }
        if (cover) {
          result.emplace_back(i, j);
        }
      }
      return result;
    }

    // A linear extension, minimal elements first.
    std::vector<int> const& linear_extension() const noexcept {
      return _order;
    }

    void rename(std::string name) {
      _name = std::move(name);
    }

   private:
    void finish() {
      auto n = _elements.size();
      _pairs.clear();
      _pair_index.assign(n * n, -1);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j && _leq[i * n + j]) {
            _pair_index[i * n + j] = static_cast<int>(_pairs.size());
            _pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
          }
        }
      }
      _order.resize(n);
      std::iota(_order.begin(), _order.end(), 0);
      std::vector<int> below(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j && _leq[j * n + i]) {
            ++below[i];
          }
        }
      }
      std::stable_sort(_order.begin(), _order.end(),
                       [&below](int a, int b) { return below[a] < below[b]; });
    }

    std::string              _name;
    std::vector<std::string> _elements;
    std::vector<bool>        _leq;
    std::vector<std::pair<int, int>> _pairs;
    std::vector<int>         _pair_index;
    std::vector<int>         _order;
  };

  inline ValidationReport validate_poset(FinPoset const& E) {
    ValidationReport report;
    for (std::size_t i = 0; i < E.size(); ++i) {
      if (!E.leq(i, i)) {
        report.add("reflexivity", {E.element(i)});
      }
      for (std::size_t j = 0; j < E.size(); ++j) {
        if (i != j && E.leq(i, j) && E.leq(j, i)) {
          report.add("antisymmetry", {E.element(i), E.element(j)});
        }
        for (std::size_t k = 0; k < E.size(); ++k) {
          if (E.leq(i, j) && E.leq(j, k) && !E.leq(i, k)) {
            report.add("transitivity",
                       {E.element(i), E.element(j), E.element(k)});
          }
        }
      }
    }
    return report;
  }

  // The poset as a thin category; the morphism for a < b is named "a<=b".
  inline FinCategory poset_category(FinPoset const& E) {
    CategoryBuilder b(E.name());
    for (auto const& e : E.elements()) {
      b.add_object(e);
    }
    std::vector<MorId> arrow(E.size() * E.size(), kNone);
    for (std::size_t i = 0; i < E.size(); ++i) {
      arrow[i * E.size() + i] = b.identity(static_cast<ObjId>(i));
    }
    for (auto [i, j] : E.strict_pairs()) {
      arrow[i * E.size() + j] = b.add_morphism(
          E.element(i) + "<=" + E.element(j), static_cast<ObjId>(i),
          static_cast<ObjId>(j));
    }
    for (auto [i, j] : E.strict_pairs()) {
      for (std::size_t k = 0; k < E.size(); ++k) {
        if (E.lt(j, k)) {
          b.set_composite(arrow[j * E.size() + k], arrow[i * E.size() + j],
                          arrow[i * E.size() + k]);
        }
      }
    }
    return b.build();
  }

  // All posets with at most `max_size` elements, one per isomorphism class,
  // ordered by size. Intended for max_size <= 4.
  inline std::vector<FinPoset> posets_up_to_iso(std::size_t max_size) {
    std::vector<FinPoset> result;
    for (std::size_t n = 1; n <= max_size; ++n) {
      std::vector<std::pair<int, int>> candidates;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j) {
            candidates.emplace_back(static_cast<int>(i), static_cast<int>(j));
          }
        }
      }
      std::set<std::vector<bool>> seen;
      std::vector<int>            perm(n);
      auto const                  total = std::size_t{1} << candidates.size();
      for (std::size_t bits = 0; bits < total; ++bits) {
        std::vector<bool> rel(n * n, false);
        for (std::size_t i = 0; i < n; ++i) {
          rel[i * n + i] = true;
        }
        for (std::size_t c = 0; c < candidates.size(); ++c) {
          if (bits & (std::size_t{1} << c)) {
            rel[candidates[c].first * n + candidates[c].second] = true;
          }
        }
        bool is_order = true;
        for (std::size_t i = 0; i < n && is_order; ++i) {
          for (std::size_t j = 0; j < n && is_order; ++j) {
            if (i != j && rel[i * n + j] && rel[j * n + i]) {
              is_order = false;
            }
            for (std::size_t k = 0; k < n && is_order; ++k) {
              if (rel[i * n + j] && rel[j * n + k] && !rel[i * n + k]) {
                is_order = false;
              }
            }
          }
        }
        if (!is_order) {
          continue;
        }
        std::vector<bool> best;
        std::iota(perm.begin(), perm.end(), 0);
        do {
          std::vector<bool> image(n * n, false);
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
              image[perm[i] * n + perm[j]] = rel[i * n + j];
            }
          }
          if (best.empty() || image < best) {
            best = image;
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!seen.insert(best).second) {
          continue;
        }
        std::vector<std::string>         elements;
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t i = 0; i < n; ++i) {
          elements.push_back(std::to_string(i));
          for (std::size_t j = 0; j < n; ++j) {
            if (i != j && best[i * n + j]) {
              pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
          }
        }
        result.emplace_back("P" + std::to_string(n) + "_"
                                + std::to_string(seen.size() - 1),
                            elements, pairs);
      }
    }
    return result;
  }

  // A functor from a finite poset into a finite category.
  struct Diagram {
    std::vector<ObjId> obj;  // per element
    std::vector<MorId> arr;  // per strict pair, FinPoset::strict_pairs order

    bool operator==(Diagram const&) const = default;
    auto operator<=>(Diagram const&) const = default;
  };

  inline Diagram point_diagram(ObjId x) {
    return Diagram{{x}, {}};
  }

  inline Diagram arrow_diagram(FinCategory const& C, MorId f) {
    return Diagram{{C.src(f), C.dst(f)}, {f}};
  }

  // (f2, f1) with f1: d0 -> d1, f2: d1 -> d2 as an object of C^{Delta^2}.
  inline Diagram pair_diagram(FinCategory const& C, MorId f2, MorId f1) {
    // Delta^2 strict pairs in order: (0,1), (0,2), (1,2).
    return Diagram{{C.src(f1), C.dst(f1), C.dst(f2)},
                   {f1, C.compose(f2, f1), f2}};
  }

  inline MorId diagram_arrow(FinPoset const& E, Diagram const& d, int i,
                             int j, FinCategory const& C) {
    if (i == j) {
      return C.identity(d.obj[i]);
    }
    return d.arr[E.pair_index(i, j)];
  }

  // Enumerates all diagrams E -> C (functors from the poset). The callback
  // returns false to stop early. Returns false iff stopped early.
  inline bool for_each_diagram(FinCategory const& C, FinPoset const& E,
                               std::function<bool(Diagram const&)> const& visit) {
    auto const n     = E.size();
    auto const order = E.linear_extension();
    Diagram    d;
    d.obj.assign(n, 0);
    d.arr.assign(E.strict_pairs().size(), kNone);
    // Strict pairs (i, j) grouped by the position of j in the order.
    std::vector<std::vector<int>> incoming(n);
    for (std::size_t p = 0; p < E.strict_pairs().size(); ++p) {
      incoming[E.strict_pairs()[p].second].push_back(static_cast<int>(p));
    }

    std::function<bool(std::size_t)>              place;
    std::function<bool(std::size_t, std::size_t)> assign_arrows;

    assign_arrows = [&](std::size_t pos, std::size_t k) -> bool {
      int j = order[pos];
      if (k == incoming[j].size()) {
        return place(pos + 1);
      }
      int p = incoming[j][k];
      int i = E.strict_pairs()[p].first;
      for (MorId u : C.hom(d.obj[i], d.obj[j])) {
        bool ok = true;
        // Functoriality against every i < m < j already assigned.
        for (std::size_t q = 0; q < k && ok; ++q) {
          int pm = incoming[j][q];
          int m  = E.strict_pairs()[pm].first;
          if (E.lt(i, m)) {
            ok = C.compose(d.arr[pm], d.arr[E.pair_index(i, m)]) == u;
          }
        }
        if (!ok) {
          continue;
        }
        d.arr[p] = u;
        if (!assign_arrows(pos, k + 1)) {
          return false;
        }
      }
      d.arr[p] = kNone;
      return true;
    };

    place = [&](std::size_t pos) -> bool {
      if (pos == n) {
        return visit(d);
      }
      int j = order[pos];
      for (ObjId x = 0; x < static_cast<ObjId>(C.num_objects()); ++x) {
        d.obj[j] = x;
        // Process incoming pairs with the source larger in the order last so
        // that compositions through intermediate elements can be checked.
        if (!assign_arrows(pos, 0)) {
          return false;
        }
      }
      return true;
    };

    // Sort each incoming list so that for i < m < j the pair (i, j) is
    // visited after (m, j): sources in decreasing linear-extension position.
    std::vector<int> position(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
      position[order[pos]] = static_cast<int>(pos);
    }
    for (auto& list : incoming) {
      std::sort(list.begin(), list.end(), [&](int a, int b) {
        return position[E.strict_pairs()[a].first]
               > position[E.strict_pairs()[b].first];
      });
    }
    return place(0);
  }

  inline std::string encode_diagram(FinCategory const& C, FinPoset const& E,
                                    Diagram const& d) {
    std::string s = "<";
    for (std::size_t i = 0; i < d.obj.size(); ++i) {
      if (i) {
        s += ",";
      }
      s += C.object_name(d.obj[i]);
    }
    if (!d.arr.empty()) {
      s += "|";
      for (std::size_t p = 0; p < d.arr.size(); ++p) {
        if (p) {
          s += ",";
        }
        s += C.morphism_name(d.arr[p]);
      }
    }
    (void) E;
    return s + ">";
  }

}  // namespace locwb
