#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "locwb/connectivity/components.hpp"
#include "locwb/core/category.hpp"
#include "locwb/core/errors.hpp"
#include "locwb/core/morph_class.hpp"

namespace locwb {

  // Conditions for morphisms of S^-1 C to be spans x <-s- x' -f-> y
  // (read f s^-1) with s in S.
  struct OreReport {
    bool ore          = true;
    bool cancellation = true;
    // Cospan (f, t) with t in S admitting no square, as morphism names.
    std::vector<std::string> ore_witness;
    // (t, f, g) with t f = t g, t in S, not equalised by any member of S.
    std::vector<std::string> cancellation_witness;

    bool holds() const {
      return ore && cancellation;
    }
  };

  inline OreReport ore_check(FinCategory const& C, std::vector<bool> const& S) {
    OreReport  r;
    auto const m = static_cast<MorId>(C.num_morphisms());
    // For every cospan x' -f-> y <-t- y' with t in S there is a square
    // t f' = f s' with s' in S.
    for (MorId t = 0; t < m && r.ore; ++t) {
      if (!S[t] || C.is_identity(t)) {
        continue;
      }
      for (MorId f : C.in(C.dst(t))) {
        bool found = false;
        for (MorId s2 : C.in(C.src(f))) {
          if (!S[s2]) {
            continue;
          }
          MorId fs = C.compose(f, s2);
          for (MorId f2 : C.hom(C.src(s2), C.src(t))) {
            if (C.compose(t, f2) == fs) {
              found = true;
              break;
            }
          }
          if (found) {
            break;
          }
        }
        if (!found) {
          r.ore         = false;
          r.ore_witness = {C.morphism_name(f), C.morphism_name(t)};
          break;
        }
      }
    }
    // t f = t g with t in S implies f s = g s for some s in S.
    for (MorId t = 0; t < m && r.cancellation; ++t) {
      if (!S[t] || C.is_identity(t)) {
        continue;
      }
      auto into = C.in(C.src(t));
      for (std::size_t i = 0; i < into.size() && r.cancellation; ++i) {
        for (std::size_t k = i + 1; k < into.size(); ++k) {
          MorId f = into[i];
          MorId g = into[k];
          if (C.src(f) != C.src(g) || C.compose(t, f) != C.compose(t, g)) {
            continue;
          }
          bool found = false;
          for (MorId s : C.in(C.src(f))) {
            if (S[s] && C.compose(f, s) == C.compose(g, s)) {
              found = true;
              break;
            }
          }
          if (!found) {
            r.cancellation         = false;
            r.cancellation_witness = {C.morphism_name(t), C.morphism_name(f),
                                      C.morphism_name(g)};
            break;
          }
        }
      }
    }
    return r;
  }

  // A span x <-s- x' -f-> y.
  struct Span {
    MorId s;
    MorId f;
    auto operator<=>(Span const&) const = default;
  };

  // Morphisms of S^-1 C computed as classes of spans under refinement
  // (s, f) ~ (s u, f u) for s u in S. Valid when ore_check holds.
  class FractionModel {
   public:
    FractionModel(CategoryRef C, std::vector<bool> S)
        : _C(std::move(C)), _S(std::move(S)) {
      auto const&       c = *_C;
      auto const        n = static_cast<ObjId>(c.num_objects());
      _classes.resize(std::size_t(n) * n);
      for (ObjId x = 0; x < n; ++x) {
        for (ObjId y = 0; y < n; ++y) {
          std::vector<Span> spans;
          for (MorId s : c.in(x)) {
            if (!_S[s]) {
              continue;
            }
            for (MorId f : c.hom(c.src(s), y)) {
              spans.push_back({s, f});
            }
          }
          std::sort(spans.begin(), spans.end());
          UnionFind uf(spans.size());
          for (std::size_t k = 0; k < spans.size(); ++k) {
            auto [s, f] = spans[k];
            for (MorId u : c.in(c.src(s))) {
              MorId su = c.compose(s, u);
              if (!_S[su]) {
                continue;
              }
              Span refined{su, c.compose(f, u)};
              auto it = std::lower_bound(spans.begin(), spans.end(), refined);
              uf.unite(k, static_cast<std::size_t>(it - spans.begin()));
            }
          }
          std::vector<std::vector<int>> groups(spans.size());
          for (std::size_t k = 0; k < spans.size(); ++k) {
            groups[uf.find(k)].push_back(static_cast<int>(k));
          }
          auto& cls = _classes[x * n + y];
          for (auto const& g : groups) {
            if (g.empty()) {
              continue;
            }
            std::vector<Span> members;
            for (int k : g) {
              members.push_back(spans[k]);
            }
            cls.push_back(std::move(members));
          }
          // Classes ordered by their least span (members are sorted).
          std::sort(cls.begin(), cls.end());
        }
      }
    }

    CategoryRef const& category() const {
      return _C;
    }

    std::vector<bool> const& mask() const {
      return _S;
    }

    // Span classes of Hom(x, y); each class sorted, classes ordered by
    // their least member.
    std::vector<std::vector<Span>> const& hom(ObjId x, ObjId y) const {
      return _classes[x * _C->num_objects() + y];
    }

    // Index in hom(x, y) of the class containing sp.
    int class_of(ObjId x, ObjId y, Span sp) const {
      auto const& cls = hom(x, y);
      for (std::size_t k = 0; k < cls.size(); ++k) {
        if (std::binary_search(cls[k].begin(), cls[k].end(), sp)) {
          return static_cast<int>(k);
        }
      }
      return -1;
    }

    // (g t^-1) o (f s^-1) through an Ore square t f' = f s'.
    Span compose(Span second, Span first) const {
      auto const& c = *_C;
      MorId const f = first.f;
      MorId const t = second.s;
      for (MorId s2 : c.in(c.src(f))) {
        if (!_S[s2]) {
          continue;
        }
        MorId fs = c.compose(f, s2);
        for (MorId f2 : c.hom(c.src(s2), c.src(t))) {
          if (c.compose(t, f2) == fs) {
            return {c.compose(first.s, s2), c.compose(second.f, f2)};
          }
        }
      }
      throw PreconditionViolation("fraction composition: no Ore square");
    }

   private:
    CategoryRef                                 _C;
    std::vector<bool>                           _S;
    std::vector<std::vector<std::vector<Span>>> _classes;
  };

}  // namespace locwb
