#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locwb/comma/comma.hpp"
#include "locwb/connectivity/components.hpp"
#include "locwb/core/category.hpp"
#include "locwb/core/errors.hpp"
#include "locwb/core/poset.hpp"
#include "locwb/core/setup.hpp"

namespace locwb {

  // The data a slice is built from: T: C -> D with masks for the arrows
  // allowed as components of objects (sprime, in D) and of morphisms
  // (s, in C). The J-type slices reuse the same machinery with full masks.
  struct SliceContext {
    CategoryRef        C;
    CategoryRef        D;
    FunctorData const* T;
    std::vector<bool>  s;
    std::vector<bool>  sprime;
  };

  inline SliceContext context_I(LocalisationSetup const& L) {
    return {L.C, L.D, &L.T, L.S.mask(), L.Sprime.mask()};
  }

  // d \ T: arbitrary arrows d -> T(c), arbitrary morphisms of C.
  inline SliceContext context_JT(LocalisationSetup const& L) {
    return {L.C, L.D, &L.T,
            std::vector<bool>(L.C->num_morphisms(), true),
            std::vector<bool>(L.D->num_morphisms(), true)};
  }

  struct SliceObject {
    Diagram            c;  // diagram in C (in D for the d \ D slices)
    std::vector<MorId> s;  // s_e: d_e -> T c_e  (u_e -> T c_e when underlined)
    Diagram            u;  // underlined slices only: diagram in D
    std::vector<MorId> j;  // underlined slices only: j_e: u_e -> d_e

    bool operator==(SliceObject const&) const = default;
  };

  struct SliceMorphism {
    int                src;
    int                dst;
    std::vector<MorId> sigma;  // components in C
    std::vector<MorId> tau;    // underlined slices only: components in D
  };

  // A slice category I_{d.}, its d \ T / d \ D variants, or an underlined
  // slice, over a diagram index d. of shape E. Objects are sorted by their
  // encodings so that indices coincide with the ids of category().
  class Slice {
   public:
    FinPoset                   shape;
    Diagram                    index;
    bool                       underline = false;
    std::vector<SliceObject>   objects;
    std::vector<std::string>   names;
    std::vector<SliceMorphism> morphisms;  // identities excluded

    std::size_t size() const noexcept {
      return objects.size();
    }

    bool empty() const noexcept {
      return objects.empty();
    }

    std::vector<std::vector<int>> components() const {
      std::vector<std::pair<int, int>> edges;
      for (auto const& m : morphisms) {
        edges.emplace_back(m.src, m.dst);
      }
      return components_of(objects.size(), edges);
    }

    bool zero_connected() const {
      return !objects.empty() && components().size() == 1;
    }

    int find(std::string const& name) const {
      auto it = std::lower_bound(names.begin(), names.end(), name);
      if (it == names.end() || *it != name) {
        return -1;
      }
      return static_cast<int>(it - names.begin());
    }

    int find_morphism(int src, int dst, std::vector<MorId> const& sigma,
                      std::vector<MorId> const& tau = {}) const {
      for (std::size_t k = 0; k < morphisms.size(); ++k) {
        auto const& m = morphisms[k];
        if (m.src == src && m.dst == dst && m.sigma == sigma && m.tau == tau) {
          return static_cast<int>(k);
        }
      }
      return -1;
    }

    // Full subcategory on the objects with keep[x] set.
    Slice restricted(std::vector<bool> const& keep) const {
      Slice out = *this;
      out._category.reset();
      out.objects.clear();
      out.names.clear();
      out.morphisms.clear();
      std::vector<int> renum(objects.size(), -1);
      for (std::size_t x = 0; x < objects.size(); ++x) {
        if (keep[x]) {
          renum[x] = static_cast<int>(out.objects.size());
          out.objects.push_back(objects[x]);
          out.names.push_back(names[x]);
        }
      }
      for (auto m : morphisms) {
        if (renum[m.src] >= 0 && renum[m.dst] >= 0) {
          m.src = renum[m.src];
          m.dst = renum[m.dst];
          out.morphisms.push_back(std::move(m));
        }
      }
      return out;
    }

    // The slice as a finite category; morphism k of `morphisms` is named
    // by morphism_name(k).
    CategoryRef const& category() const {
      if (!_category) {
        build_category();
      }
      return _category;
    }

    // Id in category() of morphism k of `morphisms`.
    MorId morphism_id(int k) const {
      category();
      return _morphism_ids[k];
    }

    // Index in `morphisms` of a non-identity id of category(), or -1.
    int morphism_index(MorId f) const {
      category();
      return _morphism_index[f];
    }

    std::string morphism_name(int k) const {
      auto const& m = morphisms[k];
      std::string n = names[m.src] + "=[";
      for (std::size_t i = 0; i < m.tau.size(); ++i) {
        n += _tau_names[m.tau[i]] + ",";
      }
      if (!m.tau.empty()) {
        n.back() = ';';
      }
      for (std::size_t i = 0; i < m.sigma.size(); ++i) {
        if (i) {
          n += ",";
        }
        n += _sigma_names[m.sigma[i]];
      }
      return n + "]=>" + names[m.dst];
    }

    void set_morphism_names(std::vector<std::string> sigma_names,
                            std::vector<std::string> tau_names) {
      _sigma_names = std::move(sigma_names);
      _tau_names   = std::move(tau_names);
    }

    // Composite of morphisms g after f (indices into `morphisms`), given
    // the composition of the underlying categories.
    std::function<MorId(MorId, MorId)> compose_sigma;
    std::function<MorId(MorId, MorId)> compose_tau;

   private:
    void build_category() const {
      CategoryBuilder b("slice");
      for (auto const& n : names) {
        b.add_object(n);
      }
      std::vector<MorId> local(morphisms.size());
      std::map<std::tuple<int, int, std::vector<MorId>, std::vector<MorId>>, MorId>
          lookup;
      std::vector<std::vector<int>> outgoing(objects.size());
      for (std::size_t k = 0; k < morphisms.size(); ++k) {
        auto const& m = morphisms[k];
        local[k]      = b.add_morphism(morphism_name(static_cast<int>(k)),
                                       m.src, m.dst);
        lookup[{m.src, m.dst, m.sigma, m.tau}] = local[k];
        outgoing[m.src].push_back(static_cast<int>(k));
      }
      for (std::size_t k = 0; k < morphisms.size(); ++k) {
        auto const& f = morphisms[k];
        for (int l : outgoing[f.dst]) {
          auto const&        g = morphisms[l];
          std::vector<MorId> sigma(f.sigma.size());
          std::vector<MorId> tau(f.tau.size());
          for (std::size_t e = 0; e < sigma.size(); ++e) {
            sigma[e] = compose_sigma(g.sigma[e], f.sigma[e]);
          }
          for (std::size_t e = 0; e < tau.size(); ++e) {
            tau[e] = compose_tau(g.tau[e], f.tau[e]);
          }
          MorId h;
          if (f.src == g.dst && is_identity_data(f.src, sigma, tau)) {
            h = b.identity(f.src);
          } else {
            h = lookup.at({f.src, g.dst, sigma, tau});
          }
          b.set_composite(local[l], local[k], h);
        }
      }
      auto built = b.build();
      _morphism_ids.resize(morphisms.size());
      _morphism_index.assign(built.num_morphisms(), -1);
      for (std::size_t k = 0; k < morphisms.size(); ++k) {
        _morphism_ids[k] = built.morphism_id(morphism_name(static_cast<int>(k)));
        _morphism_index[_morphism_ids[k]] = static_cast<int>(k);
      }
      _category = std::make_shared<FinCategory const>(std::move(built));
    }

   public:
    // Whether the component data is that of the identity of object x.
    std::function<bool(int, std::vector<MorId> const&,
                       std::vector<MorId> const&)>
        identity_data;

   private:
    bool is_identity_data(int x, std::vector<MorId> const& sigma,
                          std::vector<MorId> const& tau) const {
      return identity_data(x, sigma, tau);
    }

    std::vector<std::string>    _sigma_names;
    std::vector<std::string>    _tau_names;
    mutable CategoryRef         _category;
    mutable std::vector<MorId>  _morphism_ids;
    mutable std::vector<int>    _morphism_index;
  };

  namespace detail {

    inline std::string encode_components(FinCategory const&        X,
                                         std::vector<MorId> const& comp) {
      std::string s = "[";
      for (std::size_t i = 0; i < comp.size(); ++i) {
        if (i) {
          s += ",";
        }
        s += X.morphism_name(comp[i]);
      }
      return s + "]";
    }

    // Strict predecessors of each element, sorted so that for i < m < e the
    // pair (m, e) comes before (i, e).
    inline std::vector<std::vector<int>> predecessors(FinPoset const& E) {
      auto const&      order = E.linear_extension();
      std::vector<int> position(E.size());
      for (std::size_t p = 0; p < order.size(); ++p) {
        position[order[p]] = static_cast<int>(p);
      }
      std::vector<std::vector<int>> preds(E.size());
      for (std::size_t e = 0; e < E.size(); ++e) {
        for (std::size_t i = 0; i < E.size(); ++i) {
          if (E.lt(i, e)) {
            preds[e].push_back(static_cast<int>(i));
          }
        }
        std::sort(preds[e].begin(), preds[e].end(),
                  [&](int a, int b) { return position[a] > position[b]; });
      }
      return preds;
    }

    // Backtracking over the arrows x(i, e) of a diagram in X for the
    // predecessors of e, with functoriality against already placed arrows
    // and an extra per-arrow predicate.
    inline bool assign_diagram_arrows(
        FinCategory const& X, FinPoset const& E, Diagram& x, int e,
        std::vector<int> const& preds, std::size_t k,
        std::function<bool(int, MorId)> const& accept,
        std::function<bool()> const&            next) {
      if (k == preds.size()) {
        return next();
      }
      int i = preds[k];
      int p = E.pair_index(i, e);
      for (MorId a : X.hom(x.obj[i], x.obj[e])) {
        bool ok = accept(i, a);
        for (std::size_t q = 0; q < k && ok; ++q) {
          int m = preds[q];
          if (E.lt(i, m)) {
            ok = X.compose(x.arr[E.pair_index(m, e)], x.arr[E.pair_index(i, m)])
                 == a;
          }
        }
        if (!ok) {
          continue;
        }
        x.arr[p] = a;
        if (!assign_diagram_arrows(X, E, x, e, preds, k + 1, accept, next)) {
          return false;
        }
      }
      return true;
    }

  }  // namespace detail

  // Objects of I_{d.}: diagrams c. in C with an S'-natural transformation
  // s.: d. -> T c.; morphisms: S-natural sigma with T(sigma) s = s'.
  inline Slice build_slice(SliceContext const& ctx, FinPoset const& E,
                           Diagram const& d, Budget const& budget = {}) {
    auto const& C = *ctx.C;
    auto const& D = *ctx.D;
    auto const& T = *ctx.T;
    auto const  n = E.size();
    auto const& order = E.linear_extension();
    auto const  preds = detail::predecessors(E);

    Slice slice;
    slice.shape = E;
    slice.index = d;

    SliceObject cur;
    cur.c.obj.assign(n, 0);
    cur.c.arr.assign(E.strict_pairs().size(), kNone);
    cur.s.assign(n, kNone);

    std::function<bool(std::size_t)> place = [&](std::size_t pos) -> bool {
      if (pos == n) {
        slice.objects.push_back(cur);
        if (slice.objects.size() > budget.max_morphisms) {
          throw BudgetExceeded("slice exceeds the size cap");
        }
        return true;
      }
      int e = order[pos];
      for (ObjId c = 0; c < static_cast<ObjId>(C.num_objects()); ++c) {
        cur.c.obj[e] = c;
        for (MorId s : D.hom(d.obj[e], T.obj(c))) {
          if (!ctx.sprime[s]) {
            continue;
          }
          cur.s[e] = s;
          detail::assign_diagram_arrows(
              C, E, cur.c, e, preds[e], 0,
              [&](int i, MorId a) {
                return D.compose(T.mor(a), cur.s[i])
                       == D.compose(s, d.arr[E.pair_index(i, e)]);
              },
              [&] { return place(pos + 1); });
        }
      }
      return true;
    };
    place(0);

    // Sort by encoding.
    std::vector<std::string> enc;
    for (auto const& o : slice.objects) {
      if (n == 1) {
        enc.push_back("(" + C.object_name(o.c.obj[0]) + ","
                      + D.morphism_name(o.s[0]) + ")");
      } else {
        enc.push_back("(" + encode_diagram(C, E, o.c) + ","
                      + detail::encode_components(D, o.s) + ")");
      }
    }
    std::vector<std::size_t> perm(enc.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return enc[a] < enc[b]; });
    std::vector<SliceObject> sorted;
    for (auto p : perm) {
      sorted.push_back(std::move(slice.objects[p]));
      slice.names.push_back(enc[p]);
    }
    slice.objects = std::move(sorted);

    // Morphisms.
    std::vector<MorId> sigma(n, kNone);
    for (std::size_t x = 0; x < slice.objects.size(); ++x) {
      for (std::size_t y = 0; y < slice.objects.size(); ++y) {
        auto const& a = slice.objects[x];
        auto const& b = slice.objects[y];
        std::function<void(std::size_t)> rec = [&](std::size_t pos) {
          if (pos == n) {
            if (x == y) {
              bool id = true;
              for (std::size_t e = 0; e < n && id; ++e) {
                id = C.is_identity(sigma[e]);
              }
              if (id) {
                return;
              }
            }
            slice.morphisms.push_back(
                {static_cast<int>(x), static_cast<int>(y), sigma, {}});
            if (slice.morphisms.size() > budget.max_morphisms) {
              throw BudgetExceeded("slice exceeds the morphism cap");
            }
            return;
          }
          int e = order[pos];
          for (MorId g : C.hom(a.c.obj[e], b.c.obj[e])) {
            if (!ctx.s[g] || D.compose(T.mor(g), a.s[e]) != b.s[e]) {
              continue;
            }
            bool ok = true;
            for (int i : preds[e]) {
              int p = E.pair_index(i, e);
              ok    = ok
                   && C.compose(g, a.c.arr[p]) == C.compose(b.c.arr[p], sigma[i]);
            }
            if (!ok) {
              continue;
            }
            sigma[e] = g;
            rec(pos + 1);
          }
        };
        rec(0);
      }
    }
    std::vector<std::string> sigma_names(C.num_morphisms());
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      sigma_names[f] = C.morphism_name(f);
    }
    slice.set_morphism_names(std::move(sigma_names), {});
    slice.compose_sigma = [Cp = ctx.C](MorId g, MorId f) {
      return Cp->compose(g, f);
    };
    slice.identity_data = [Cp = ctx.C](int, std::vector<MorId> const& sg,
                                       std::vector<MorId> const&) {
      return std::all_of(sg.begin(), sg.end(),
                         [&](MorId f) { return Cp->is_identity(f); });
    };
    return slice;
  }

  // Underlined slice: objects (u., j.: u. -> d., c., s.: u. -> T c.) with
  // j, s componentwise in S'; morphisms (tau in S', sigma in S) with
  // j' tau = j and T(sigma) s = s' tau.
  inline Slice build_underline_slice(SliceContext const& ctx, FinPoset const& E,
                                     Diagram const& d, Budget const& budget = {}) {
    auto const& C     = *ctx.C;
    auto const& D     = *ctx.D;
    auto const& T     = *ctx.T;
    auto const  n     = E.size();
    auto const& order = E.linear_extension();
    auto const  preds = detail::predecessors(E);

    Slice slice;
    slice.shape     = E;
    slice.index     = d;
    slice.underline = true;

    SliceObject cur;
    cur.c.obj.assign(n, 0);
    cur.c.arr.assign(E.strict_pairs().size(), kNone);
    cur.u.obj.assign(n, 0);
    cur.u.arr.assign(E.strict_pairs().size(), kNone);
    cur.s.assign(n, kNone);
    cur.j.assign(n, kNone);

    std::function<bool(std::size_t)> place = [&](std::size_t pos) -> bool {
      if (pos == n) {
        slice.objects.push_back(cur);
        if (slice.objects.size() > budget.max_morphisms) {
          throw BudgetExceeded("slice exceeds the size cap");
        }
        return true;
      }
      int e = order[pos];
      for (ObjId u = 0; u < static_cast<ObjId>(D.num_objects()); ++u) {
        cur.u.obj[e] = u;
        for (MorId j : D.hom(u, d.obj[e])) {
          if (!ctx.sprime[j]) {
            continue;
          }
          cur.j[e] = j;
          detail::assign_diagram_arrows(
              D, E, cur.u, e, preds[e], 0,
              [&](int i, MorId a) {
                return D.compose(j, a)
                       == D.compose(d.arr[E.pair_index(i, e)], cur.j[i]);
              },
              [&] {
                for (ObjId c = 0; c < static_cast<ObjId>(C.num_objects()); ++c) {
                  cur.c.obj[e] = c;
                  for (MorId s : D.hom(u, T.obj(c))) {
                    if (!ctx.sprime[s]) {
                      continue;
                    }
                    cur.s[e] = s;
                    detail::assign_diagram_arrows(
                        C, E, cur.c, e, preds[e], 0,
                        [&](int i, MorId a) {
                          return D.compose(T.mor(a), cur.s[i])
                                 == D.compose(s, cur.u.arr[E.pair_index(i, e)]);
                        },
                        [&] { return place(pos + 1); });
                  }
                }
                return true;
              });
        }
      }
      return true;
    };
    place(0);

    std::vector<std::string> enc;
    for (auto const& o : slice.objects) {
      enc.push_back("(" + encode_diagram(D, E, o.u) + ","
                    + detail::encode_components(D, o.j) + ","
                    + encode_diagram(C, E, o.c) + ","
                    + detail::encode_components(D, o.s) + ")");
    }
    std::vector<std::size_t> perm(enc.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return enc[a] < enc[b]; });
    std::vector<SliceObject> sorted;
    for (auto p : perm) {
      sorted.push_back(std::move(slice.objects[p]));
      slice.names.push_back(enc[p]);
    }
    slice.objects = std::move(sorted);

    std::vector<MorId> sigma(n, kNone);
    std::vector<MorId> tau(n, kNone);
    for (std::size_t x = 0; x < slice.objects.size(); ++x) {
      for (std::size_t y = 0; y < slice.objects.size(); ++y) {
        auto const& a = slice.objects[x];
        auto const& b = slice.objects[y];
        std::function<void(std::size_t)> rec = [&](std::size_t pos) {
          if (pos == n) {
            if (x == y) {
              bool id = true;
              for (std::size_t e = 0; e < n && id; ++e) {
                id = C.is_identity(sigma[e]) && D.is_identity(tau[e]);
              }
              if (id) {
                return;
              }
            }
            slice.morphisms.push_back(
                {static_cast<int>(x), static_cast<int>(y), sigma, tau});
            if (slice.morphisms.size() > budget.max_morphisms) {
              throw BudgetExceeded("slice exceeds the morphism cap");
            }
            return;
          }
          int e = order[pos];
          for (MorId t : D.hom(a.u.obj[e], b.u.obj[e])) {
            if (!ctx.sprime[t] || D.compose(b.j[e], t) != a.j[e]) {
              continue;
            }
            bool ok = true;
            for (int i : preds[e]) {
              int p = E.pair_index(i, e);
              ok    = ok && D.compose(t, a.u.arr[p]) == D.compose(b.u.arr[p], tau[i]);
            }
            if (!ok) {
              continue;
            }
            tau[e] = t;
            for (MorId g : C.hom(a.c.obj[e], b.c.obj[e])) {
              if (!ctx.s[g]
                  || D.compose(T.mor(g), a.s[e]) != D.compose(b.s[e], t)) {
                continue;
              }
              bool ok2 = true;
              for (int i : preds[e]) {
                int p = E.pair_index(i, e);
                ok2   = ok2
                      && C.compose(g, a.c.arr[p])
                             == C.compose(b.c.arr[p], sigma[i]);
              }
              if (!ok2) {
                continue;
              }
              sigma[e] = g;
              rec(pos + 1);
            }
          }
        };
        rec(0);
      }
    }
    std::vector<std::string> sigma_names(C.num_morphisms());
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      sigma_names[f] = C.morphism_name(f);
    }
    std::vector<std::string> tau_names(D.num_morphisms());
    for (MorId f = 0; f < static_cast<MorId>(D.num_morphisms()); ++f) {
      tau_names[f] = D.morphism_name(f);
    }
    slice.set_morphism_names(std::move(sigma_names), std::move(tau_names));
    slice.compose_sigma = [Cp = ctx.C](MorId g, MorId f) {
      return Cp->compose(g, f);
    };
    slice.compose_tau = [Dp = ctx.D](MorId g, MorId f) {
      return Dp->compose(g, f);
    };
    slice.identity_data = [Cp = ctx.C, Dp = ctx.D](
                              int, std::vector<MorId> const& sg,
                              std::vector<MorId> const& tu) {
      return std::all_of(sg.begin(), sg.end(),
                         [&](MorId f) { return Cp->is_identity(f); })
             && std::all_of(tu.begin(), tu.end(),
                            [&](MorId f) { return Dp->is_identity(f); });
    };
    return slice;
  }

  // ---- Named slices of a setup ------------------------------------------

  inline Slice slice_I(LocalisationSetup const& L, FinPoset const& E,
                       Diagram const& d, Budget const& budget = {}) {
    return build_slice(context_I(L), E, d, budget);
  }

  inline Slice slice_I(LocalisationSetup const& L, ObjId d,
                       Budget const& budget = {}) {
    return build_slice(context_I(L), FinPoset::chain(0), point_diagram(d),
                       budget);
  }

  inline Slice slice_I_underline(LocalisationSetup const& L, FinPoset const& E,
                                 Diagram const& d, Budget const& budget = {}) {
    return build_underline_slice(context_I(L), E, d, budget);
  }

  inline Slice slice_I_underline(LocalisationSetup const& L, ObjId d,
                                 Budget const& budget = {}) {
    return build_underline_slice(context_I(L), FinPoset::chain(0),
                                 point_diagram(d), budget);
  }

  enum class JVariant { UnderD, UnderT };

  // J_d: d \ D (all arrows out of d) or d \ T (arrows d -> T c, morphisms
  // from C).
  inline Slice slice_J(LocalisationSetup const& L, ObjId d,
                       JVariant variant = JVariant::UnderT,
                       Budget const& budget = {}) {
    if (variant == JVariant::UnderT) {
      return build_slice(context_JT(L), FinPoset::chain(0), point_diagram(d),
                         budget);
    }
    auto         id = identity_functor(L.D);
    SliceContext ctx{L.D, L.D, &id,
                     std::vector<bool>(L.D->num_morphisms(), true),
                     std::vector<bool>(L.D->num_morphisms(), true)};
    return build_slice(ctx, FinPoset::chain(0), point_diagram(d), budget);
  }

  // The comparison functor I_d -> J_d: (c, s) |-> (T c, s) for d \ D and
  // the inclusion for d \ T.
  inline FunctorData phi_comparison(LocalisationSetup const& L, Slice const& I,
                                    Slice const& J, JVariant variant) {
    FunctorData F;
    F.name   = "Phi";
    F.source = I.category();
    F.target = J.category();
    auto const& C = *L.C;
    auto const& D = *L.D;
    for (auto const& o : I.objects) {
      std::string name =
          variant == JVariant::UnderT
              ? "(" + C.object_name(o.c.obj[0]) + "," + D.morphism_name(o.s[0]) + ")"
              : "(" + D.object_name(L.T.obj(o.c.obj[0])) + ","
                    + D.morphism_name(o.s[0]) + ")";
      int y = J.find(name);
      if (y < 0) {
        throw PreconditionViolation("comparison target missing: " + name);
      }
      F.omap.push_back(y);
    }
    F.mmap.assign(I.category()->num_morphisms(), kNone);
    for (ObjId x = 0; x < static_cast<ObjId>(I.size()); ++x) {
      F.mmap[I.category()->identity(x)] = J.category()->identity(F.omap[x]);
    }
    for (std::size_t k = 0; k < I.morphisms.size(); ++k) {
      auto const&        m = I.morphisms[k];
      std::vector<MorId> sigma{variant == JVariant::UnderT ? m.sigma[0]
                                                           : L.T.mor(m.sigma[0])};
      int                src = F.omap[m.src];
      int                dst = F.omap[m.dst];
      MorId              img;
      if (src == dst && J.identity_data(src, sigma, {})) {
        img = J.category()->identity(src);
      } else {
        int l = J.find_morphism(src, dst, sigma);
        if (l < 0) {
          throw PreconditionViolation("comparison morphism missing");
        }
        img = J.morphism_id(l);
      }
      F.mmap[I.morphism_id(static_cast<int>(k))] = img;
    }
    return F;
  }

  struct CofinalityReport {
    // Per object j of the target: whether L/j is 0-connected, with its
    // component decomposition (object ids of L/j grouped).
    std::vector<bool>                          verdicts;
    std::vector<std::vector<std::vector<int>>> components;
    bool                                       cofinal = true;
    std::optional<ObjId>                       first_failure;
  };

  inline CofinalityReport is_cofinal(FunctorData const& L,
                                     Budget const&      budget = {}) {
    CofinalityReport report;
    for (ObjId j = 0; j < static_cast<ObjId>(L.target->num_objects()); ++j) {
      auto over_j = over(L, j, budget);
      auto comps  = pi0(*over_j.carrier);
      bool ok     = over_j.carrier->num_objects() > 0 && comps.size() == 1;
      report.verdicts.push_back(ok);
      report.components.push_back(std::move(comps));
      if (!ok && report.cofinal) {
        report.cofinal       = false;
        report.first_failure = j;
      }
    }
    return report;
  }

  // Restriction of a slice object to the sub-chain of E on `elements`
  // (listed increasingly); used for face functors of chain-indexed slices.
  inline SliceObject restrict_object(SliceObject const& o, FinPoset const& E,
                                     std::vector<int> const& elements) {
    SliceObject r;
    for (int e : elements) {
      r.c.obj.push_back(o.c.obj[e]);
      r.s.push_back(o.s[e]);
      if (!o.u.obj.empty()) {
        r.u.obj.push_back(o.u.obj[e]);
        r.j.push_back(o.j[e]);
      }
    }
    for (std::size_t a = 0; a < elements.size(); ++a) {
      for (std::size_t b = 0; b < elements.size(); ++b) {
        if (a < b) {
          r.c.arr.push_back(o.c.arr[E.pair_index(elements[a], elements[b])]);
          if (!o.u.obj.empty()) {
            r.u.arr.push_back(o.u.arr[E.pair_index(elements[a], elements[b])]);
          }
        }
      }
    }
    return r;
  }

}  // namespace locwb
