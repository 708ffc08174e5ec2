#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/constructions.hpp"
#include "locwb/core/errors.hpp"
#include "locwb/core/functor.hpp"
#include "locwb/core/morph_class.hpp"
#include "locwb/core/setup.hpp"

namespace locwb {

  enum class GenStrategy { Poset, DagQuotient, MonoidGlue, Mixed };

  inline char const* to_string(GenStrategy s) {
    switch (s) {
      case GenStrategy::Poset: return "poset";
      case GenStrategy::DagQuotient: return "dag-quotient";
      case GenStrategy::MonoidGlue: return "monoid-glue";
      case GenStrategy::Mixed: return "mixed";
    }
    return "";
  }

  inline std::optional<GenStrategy> parse_strategy(std::string const& s) {
    for (auto g : {GenStrategy::Poset, GenStrategy::DagQuotient,
                   GenStrategy::MonoidGlue, GenStrategy::Mixed}) {
      if (s == to_string(g)) {
        return g;
      }
    }
    return std::nullopt;
  }

  // Densities are in permille so that generation stays in integers.
  struct GenConfig {
    std::uint64_t seed              = 1;
    int           max_objects       = 4;
    int           max_morphisms     = 8;  // non-identity
    int           relation_permille = 400;
    int           class_permille    = 400;
    GenStrategy   strategy          = GenStrategy::Mixed;
  };

  inline void check_config(GenConfig const& cfg) {
    if (cfg.max_objects <= 0 || cfg.max_morphisms < 0
        || cfg.relation_permille < 0 || cfg.relation_permille > 1000
        || cfg.class_permille < 0 || cfg.class_permille > 1000) {
      throw PreconditionViolation("generator bounds out of range");
    }
  }

  // mt19937_64 output is fixed by the standard; the distributions are
  // implemented here because the library ones are not.
  class Rng {
   public:
    explicit Rng(std::uint64_t seed)
        : _eng(seed) {}

    // Uniform in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n) {
      std::uint64_t const limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
      std::uint64_t       x;
      do {
        x = _eng();
      } while (x >= limit);
      return x % n;
    }

    int between(int lo, int hi) {
      return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool chance(int permille) {
      return static_cast<int>(below(1000)) < permille;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
      for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[below(i)]);
      }
    }

   private:
    std::mt19937_64 _eng;
  };

  namespace detail {

    inline std::string gen_object_name(int i) {
      return std::string(1, static_cast<char>('a' + i % 26))
             + (i >= 26 ? std::to_string(i / 26) : "");
    }

    // A category given by explicit hom data, before naming.
    struct RawCategory {
      int                                      objects = 0;
      std::vector<std::pair<int, int>>         arrows;  // non-identity, src dst
      std::map<std::pair<int, int>, int>       compose;  // (g, f) -> h, -1 = identity
    };

    inline CategoryRef materialise(RawCategory const& R, std::string const& name,
                                   std::string const& prefix) {
      CategoryBuilder    b(name);
      std::vector<ObjId> obj;
      for (int i = 0; i < R.objects; ++i) {
        obj.push_back(b.add_object(gen_object_name(i)));
      }
      std::vector<MorId> mor;
      for (std::size_t i = 0; i < R.arrows.size(); ++i) {
        mor.push_back(b.add_morphism(prefix + std::to_string(i),
                                     obj[R.arrows[i].first],
                                     obj[R.arrows[i].second]));
      }
      for (auto const& [gf, h] : R.compose) {
        b.set_composite(mor[gf.first], mor[gf.second],
                        h < 0 ? b.identity(obj[R.arrows[gf.second].first])
                              : mor[h]);
      }
      return b.build_ref();
    }

    inline std::optional<RawCategory> gen_poset(Rng& rng, int n, int max_mor,
                                                int density) {
      std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          lt[i][j] = rng.chance(density);
        }
      }
      for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if (lt[i][k] && lt[k][j]) {
              lt[i][j] = true;
            }
          }
        }
      }
      // Random relabelling so that the order is not always the index order.
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);
      RawCategory R;
      R.objects = n;
      std::map<std::pair<int, int>, int> id;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (lt[i][j]) {
            id[{i, j}] = static_cast<int>(R.arrows.size());
            R.arrows.push_back({perm[i], perm[j]});
          }
        }
      }
      if (static_cast<int>(R.arrows.size()) > max_mor) {
        return std::nullopt;
      }
      for (auto const& [ij, f] : id) {
        for (int k = 0; k < n; ++k) {
          if (lt[ij.second][k]) {
            R.compose[{id.at({ij.second, k}), f}] = id.at({ij.first, k});
          }
        }
      }
      return R;
    }

    // Free category on a random DAG modulo the congruence generated by
    // random identifications of parallel paths.
    inline std::optional<RawCategory> gen_dag_quotient(Rng& rng, int n,
                                                       int max_mor,
                                                       int density) {
      std::vector<std::pair<int, int>> edges;
      int const budget_edges = std::max(0, std::min(max_mor, n * (n - 1)));
      int const m            = budget_edges == 0 ? 0 : rng.between(0, budget_edges);
      for (int e = 0; e < m && n > 1; ++e) {
        int i = rng.between(0, n - 2);
        int j = rng.between(i + 1, n - 1);
        edges.push_back({i, j});
      }
      // Paths of length >= 1 as edge sequences.
      std::vector<std::vector<int>> paths;
      std::map<std::vector<int>, int> index;
      for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        index[{e}] = static_cast<int>(paths.size());
        paths.push_back({e});
      }
      for (std::size_t p = 0; p < paths.size(); ++p) {
        if (paths.size() > 64) {
          return std::nullopt;
        }
        int end = edges[paths[p].back()].second;
        for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
          if (edges[e].first == end) {
            auto q = paths[p];
            q.push_back(e);
            index[q] = static_cast<int>(paths.size());
            paths.push_back(std::move(q));
          }
        }
      }
      auto src = [&](int p) { return edges[paths[p].front()].first; };
      auto dst = [&](int p) { return edges[paths[p].back()].second; };
      std::vector<int> parent(paths.size());
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
      };
      auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) {
          return false;
        }
        parent[std::max(a, b)] = std::min(a, b);
        return true;
      };
      for (int p = 0; p < static_cast<int>(paths.size()); ++p) {
        for (int q = p + 1; q < static_cast<int>(paths.size()); ++q) {
          if (src(p) == src(q) && dst(p) == dst(q) && rng.chance(density)) {
            unite(p, q);
          }
        }
      }
      auto concat = [&](int p, int q) {  // p then q
        auto r = paths[p];
        r.insert(r.end(), paths[q].begin(), paths[q].end());
        return index.at(r);
      };
      for (bool changed = true; changed;) {
        changed = false;
        for (int p = 0; p < static_cast<int>(paths.size()); ++p) {
          for (int q = 0; q < static_cast<int>(paths.size()); ++q) {
            if (p == q || find(p) != find(q)) {
              continue;
            }
            for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
              if (edges[e].first == dst(p)) {
                changed |= unite(concat(p, index.at({e})), concat(q, index.at({e})));
              }
              if (edges[e].second == src(p)) {
                changed |= unite(concat(index.at({e}), p), concat(index.at({e}), q));
              }
            }
          }
        }
      }
      RawCategory R;
      R.objects = n;
      std::map<int, int> cls;  // root -> arrow id
      for (int p = 0; p < static_cast<int>(paths.size()); ++p) {
        int r = find(p);
        if (!cls.count(r)) {
          cls[r] = static_cast<int>(R.arrows.size());
          R.arrows.push_back({src(p), dst(p)});
        }
      }
      if (static_cast<int>(R.arrows.size()) > max_mor) {
        return std::nullopt;
      }
      for (int p = 0; p < static_cast<int>(paths.size()); ++p) {
        for (int q = 0; q < static_cast<int>(paths.size()); ++q) {
          if (dst(p) == src(q)) {
            R.compose[{cls[find(q)], cls[find(p)]}] = cls[find(concat(p, q))];
          }
        }
      }
      return R;
    }

    // A random transformation monoid on at most three points, as the
    // endomorphisms of one object; element 0 is the identity.
    inline std::vector<std::vector<int>> gen_monoid(Rng& rng, int max_elems) {
      int const points = rng.between(1, 3);
      std::vector<int> ident(points);
      std::iota(ident.begin(), ident.end(), 0);
      std::vector<std::vector<int>> elems{ident};
      int const gens = rng.between(0, 2);
      std::vector<std::vector<int>> g;
      for (int i = 0; i < gens; ++i) {
        std::vector<int> t(points);
        for (auto& x : t) {
          x = rng.between(0, points - 1);
        }
        g.push_back(t);
      }
      for (std::size_t i = 0; i < elems.size(); ++i) {
        for (auto const& t : g) {
          std::vector<int> c(points);
          for (int x = 0; x < points; ++x) {
            c[x] = t[elems[i][x]];
          }
          if (std::find(elems.begin(), elems.end(), c) == elems.end()) {
            elems.push_back(c);
            if (static_cast<int>(elems.size()) > max_elems) {
              return {ident};
            }
          }
        }
      }
      return elems;
    }

    // Blocks (posets, or one-object monoids) joined along a random order
    // of the blocks by unique arrows between blocks.
    inline std::optional<RawCategory> gen_monoid_glue(Rng& rng, int n,
                                                      int max_mor, int density) {
      std::vector<int> block_of(n);
      int              blocks = 0;
      for (int i = 0; i < n; ++i) {
        block_of[i] = (i == 0 || rng.chance(500)) ? blocks++ : blocks - 1;
      }
      RawCategory R;
      R.objects = n;
      // Within-block data: arrows keyed by (src, dst, tag).
      std::vector<std::vector<std::vector<int>>> monoid(n);
      std::map<std::tuple<int, int, int>, int> id;
      auto add = [&](int s, int t, int tag) {
        id[{s, t, tag}] = static_cast<int>(R.arrows.size());
        R.arrows.push_back({s, t});
      };
      std::vector<std::vector<bool>> below_in(n, std::vector<bool>(n, false));
      for (int b = 0; b < blocks; ++b) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i) {
          if (block_of[i] == b) {
            members.push_back(i);
          }
        }
        if (members.size() == 1) {
          int x     = members[0];
          monoid[x] = gen_monoid(rng, max_mor + 1);
          for (int e = 1; e < static_cast<int>(monoid[x].size()); ++e) {
            add(x, x, e);
          }
          continue;
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
          for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (rng.chance(density)) {
              below_in[members[i]][members[j]] = true;
            }
          }
        }
      }
      std::vector<std::vector<bool>> block_lt(blocks, std::vector<bool>(blocks, false));
      for (int a = 0; a < blocks; ++a) {
        for (int b = a + 1; b < blocks; ++b) {
          block_lt[a][b] = rng.chance(density);
        }
      }
      // The order on objects: within a block as drawn, across by blocks.
      std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          lt[i][j] = block_of[i] == block_of[j] ? below_in[i][j]
                                                : block_lt[block_of[i]][block_of[j]];
        }
      }
      for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if (lt[i][k] && lt[k][j]) {
              lt[i][j] = true;
            }
          }
        }
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (lt[i][j]) {
            add(i, j, 0);
          }
        }
      }
      if (static_cast<int>(R.arrows.size()) > max_mor) {
        return std::nullopt;
      }
      // Composition: endomorphisms of a monoid object compose as maps;
      // anything involving an arrow between distinct objects is the unique
      // arrow between its endpoints.
      auto arrow = [&](int s, int t, int tag) {
        return s == t && tag == 0 ? -1 : id.at({s, t, tag});
      };
      for (auto const& [f_key, f] : id) {
        auto [fs, ft, ftag] = f_key;
        for (auto const& [g_key, g] : id) {
          auto [gs, gt, gtag] = g_key;
          if (gs != ft) {
            continue;
          }
          if (fs == ft && gs == gt) {
            auto const&      M = monoid[fs];
            std::vector<int> c(M[0].size());
            for (std::size_t x = 0; x < c.size(); ++x) {
              c[x] = M[gtag][M[ftag][x]];
            }
            int e = static_cast<int>(std::find(M.begin(), M.end(), c) - M.begin());
            R.compose[{g, f}] = arrow(fs, fs, e);
          } else {
            R.compose[{g, f}] = arrow(fs, gt, 0);
          }
        }
      }
      return R;
    }

  }  // namespace detail

  // A seeded stream of categories and setups.
  class Fuzzer {
   public:
    explicit Fuzzer(GenConfig cfg)
        : _cfg(cfg),
          _rng(cfg.seed) {
      check_config(cfg);
    }

    GenConfig const& config() const {
      return _cfg;
    }

    CategoryRef next_category(std::string const& name = "C",
                              std::string const& prefix = "f") {
      for (int attempt = 0; attempt < 64; ++attempt) {
        auto strategy = _cfg.strategy;
        if (strategy == GenStrategy::Mixed) {
          strategy = static_cast<GenStrategy>(_rng.below(3));
        }
        int  n = _rng.between(1, _cfg.max_objects);
        std::optional<detail::RawCategory> raw;
        switch (strategy) {
          case GenStrategy::Poset:
            raw = detail::gen_poset(_rng, n, _cfg.max_morphisms,
                                    _cfg.relation_permille);
            break;
          case GenStrategy::DagQuotient:
            raw = detail::gen_dag_quotient(_rng, n, _cfg.max_morphisms,
                                           _cfg.relation_permille);
            break;
          default:
            raw = detail::gen_monoid_glue(_rng, n, _cfg.max_morphisms,
                                          _cfg.relation_permille);
            break;
        }
        if (raw) {
          return detail::materialise(*raw, name, prefix);
        }
      }
      detail::RawCategory pt;
      pt.objects = 1;
      return detail::materialise(pt, name, prefix);
    }

    // Composition closure of a random subset of the non-identity arrows.
    MorphClass next_class(CategoryRef const& C, std::string name) {
      std::vector<bool> seed(C->num_morphisms(), false);
      for (MorId f = 0; f < static_cast<MorId>(seed.size()); ++f) {
        if (!C->is_identity(f)) {
          seed[f] = _rng.chance(_cfg.class_permille);
        }
      }
      return MorphClass::closure(C, std::move(seed), std::move(name));
    }

    LocalisationSetup next_setup(std::string name = "") {
      if (name.empty()) {
        name = "Fuzz" + std::to_string(_cfg.seed) + "_" + std::to_string(_count);
      }
      ++_count;
      auto              D = next_category("D", "u");
      LocalisationSetup L;
      L.name = std::move(name);
      L.D    = D;
      if (_rng.chance(600)) {
        std::vector<ObjId> keep;
        for (ObjId x = 0; x < static_cast<ObjId>(D->num_objects()); ++x) {
          if (_rng.chance(600)) {
            keep.push_back(x);
          }
        }
        if (keep.empty()) {
          keep.push_back(static_cast<ObjId>(_rng.below(D->num_objects())));
        }
        auto [C, inc] = full_subcategory(D, keep, "C");
        // Rename the arrows of C so the two categories stay distinguishable.
        CategoryBuilder b("C");
        for (auto const& x : C->object_names()) {
          b.add_object(x);
        }
        for (MorId f = 0; f < static_cast<MorId>(C->num_morphisms()); ++f) {
          if (!C->is_identity(f)) {
            b.add_morphism("f" + C->morphism_name(f).substr(1), C->src(f),
                           C->dst(f));
          }
        }
        auto rename = [&](MorId f) {
          return C->is_identity(f) ? b.identity(C->src(f))
                                   : b.morphism("f" + C->morphism_name(f).substr(1));
        };
        for (MorId f = 0; f < static_cast<MorId>(C->num_morphisms()); ++f) {
          for (MorId g : C->out(C->dst(f))) {
            if (!C->is_identity(f) && !C->is_identity(g)) {
              b.set_composite(rename(g), rename(f), rename(C->compose(g, f)));
            }
          }
        }
        L.C = b.build_ref();
        L.T = FunctorData{"T", L.C, D, {}, {}};
        for (ObjId x = 0; x < static_cast<ObjId>(L.C->num_objects()); ++x) {
          L.T.omap.push_back(D->object(L.C->object_name(x)));
        }
        for (MorId f = 0; f < static_cast<MorId>(L.C->num_morphisms()); ++f) {
          L.T.mmap.push_back(
              L.C->is_identity(f)
                  ? D->identity(L.T.omap[L.C->src(f)])
                  : D->morphism_id("u" + L.C->morphism_name(f).substr(1)));
        }
        (void)inc;
      } else {
        L.C = next_category("C", "f");
        L.T = random_functor(L.C, D);
      }
      L.Sprime = next_class(D, "Sprime");
      std::vector<bool> pre(L.C->num_morphisms(), false);
      for (MorId f = 0; f < static_cast<MorId>(pre.size()); ++f) {
        pre[f] = L.Sprime.contains(L.T.mor(f));
      }
      if (_cfg.class_permille == 0) {
        L.S = MorphClass::identities(L.C, "S");
      } else if (_rng.chance(700)) {
        L.S = MorphClass(L.C, std::move(pre), "S");
      } else {
        std::vector<bool> seed(pre.size(), false);
        for (MorId f = 0; f < static_cast<MorId>(pre.size()); ++f) {
          seed[f] = pre[f] && !L.C->is_identity(f)
                    && _rng.chance(_cfg.class_permille);
        }
        L.S = MorphClass::closure(L.C, std::move(seed), "S");
      }
      return L;
    }

    // Backtracking search for a functor with random choices; falls back to
    // a constant functor.
    FunctorData random_functor(CategoryRef const& C, CategoryRef const& D) {
      auto const& c = *C;
      auto const& d = *D;
      for (int attempt = 0; attempt < 8; ++attempt) {
        FunctorData T{"T", C, D, {}, std::vector<MorId>(c.num_morphisms(), kNone)};
        for (ObjId x = 0; x < static_cast<ObjId>(c.num_objects()); ++x) {
          T.omap.push_back(static_cast<ObjId>(_rng.below(d.num_objects())));
        }
        std::vector<MorId> order;
        for (MorId f = 0; f < static_cast<MorId>(c.num_morphisms()); ++f) {
          if (c.is_identity(f)) {
            T.mmap[f] = d.identity(T.omap[c.src(f)]);
          } else {
            order.push_back(f);
          }
        }
        int  nodes = 0;
        auto consistent = [&](MorId f) {
          for (MorId g : c.out(c.dst(f))) {
            MorId h = c.compose(g, f);
            if (T.mmap[g] != kNone && T.mmap[h] != kNone
                && d.compose(T.mmap[g], T.mmap[f]) != T.mmap[h]) {
              return false;
            }
          }
          for (MorId e : c.in(c.src(f))) {
            MorId h = c.compose(f, e);
            if (T.mmap[e] != kNone && T.mmap[h] != kNone
                && d.compose(T.mmap[f], T.mmap[e]) != T.mmap[h]) {
              return false;
            }
          }
          // f as a composite of assigned arrows.
          for (MorId e = 0; e < static_cast<MorId>(c.num_morphisms()); ++e) {
            if (T.mmap[e] == kNone || c.src(e) != c.src(f)) {
              continue;
            }
            for (MorId g : c.out(c.dst(e))) {
              if (T.mmap[g] != kNone && c.compose(g, e) == f
                  && d.compose(T.mmap[g], T.mmap[e]) != T.mmap[f]) {
                return false;
              }
            }
          }
          return true;
        };
        std::function<bool(std::size_t)> rec = [&](std::size_t i) {
          if (i == order.size()) {
            return true;
          }
          if (++nodes > 4000) {
            return false;
          }
          MorId f    = order[i];
          auto  span = d.hom(T.omap[c.src(f)], T.omap[c.dst(f)]);
          std::vector<MorId> cand(span.begin(), span.end());
          _rng.shuffle(cand);
          for (MorId u : cand) {
            T.mmap[f] = u;
            if (consistent(f) && rec(i + 1)) {
              return true;
            }
          }
          T.mmap[f] = kNone;
          return false;
        };
        if (rec(0)) {
          return T;
        }
      }
      return constant_functor(C, D, static_cast<ObjId>(_rng.below(d.num_objects())),
                             "T");
    }

   private:
    GenConfig     _cfg;
    Rng           _rng;
    std::uint64_t _count = 0;
  };

  inline CategoryRef gen_category(GenConfig const& cfg) {
    return Fuzzer(cfg).next_category();
  }

  inline LocalisationSetup gen_setup(GenConfig const& cfg) {
    return Fuzzer(cfg).next_setup();
  }

}  // namespace locwb
