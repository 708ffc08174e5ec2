#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/functor.hpp"
#include "locwb/core/morph_class.hpp"

namespace locwb {

  inline std::string toggle_op(std::string const& name) {
    static std::string const suffix = "^op";
    if (name.size() >= suffix.size()
        && name.compare(name.size() - suffix.size(), suffix.size(), suffix)
               == 0) {
      return name.substr(0, name.size() - suffix.size());
    }
    return name + suffix;
  }

  // Same object and morphism names, endpoints swapped, composition
  // reversed. Ids coincide with those of C.
  inline FinCategory opposite(FinCategory const& C) {
    CategoryBuilder b(toggle_op(C.name()));
    for (auto const& x : C.object_names()) {
      b.add_object(x);
    }
    std::vector<MorId> id(C.num_morphisms(), kNone);
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      if (C.is_identity(f)) {
        id[f] = b.identity(C.src(f));
      } else {
        id[f] = b.add_morphism(C.morphism_name(f), C.dst(f), C.src(f));
      }
    }
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      for (MorId g : C.out(C.dst(f))) {
        if (C.is_identity(f) || C.is_identity(g)) {
          continue;
        }
        MorId h = C.compose(g, f);
        if (h != kNone) {
          b.set_composite(id[f], id[g], id[h]);
        }
      }
    }
    return b.build();
  }

  inline CategoryRef opposite_ref(CategoryRef const& C) {
    return std::make_shared<FinCategory const>(opposite(*C));
  }

  // The same class viewed in the opposite category (ids agree).
  inline MorphClass opposite_class(MorphClass const& S, CategoryRef Cop) {
    return MorphClass(std::move(Cop), S.mask(), S.name());
  }

  // Full subcategory on the given objects, with its inclusion functor.
  inline std::pair<CategoryRef, FunctorData> full_subcategory(
      CategoryRef const& C, std::vector<ObjId> const& objects,
      std::string name) {
    CategoryBuilder    b(std::move(name));
    std::vector<ObjId> local(C->num_objects(), kNone);
    for (ObjId x : objects) {
      local[x] = b.add_object(C->object_name(x));
    }
    std::vector<MorId> local_mor(C->num_morphisms(), kNone);
    std::vector<MorId> members;
    for (MorId f = 0; f < static_cast<MorId>(C->num_morphisms()); ++f) {
      if (local[C->src(f)] == kNone || local[C->dst(f)] == kNone) {
        continue;
      }
      members.push_back(f);
      local_mor[f] = C->is_identity(f)
                         ? b.identity(local[C->src(f)])
                         : b.add_morphism(C->morphism_name(f),
                                          local[C->src(f)], local[C->dst(f)]);
    }
    for (MorId f : members) {
      for (MorId g : C->out(C->dst(f))) {
        if (local_mor[g] == kNone || C->is_identity(f) || C->is_identity(g)) {
          continue;
        }
        b.set_composite(local_mor[g], local_mor[f],
                        local_mor[C->compose(g, f)]);
      }
    }
    auto sub = b.build_ref();
    FunctorData inc;
    inc.name   = "incl";
    inc.source = sub;
    inc.target = C;
    for (auto const& x : sub->object_names()) {
      inc.omap.push_back(C->object(x));
    }
    for (MorId f = 0; f < static_cast<MorId>(sub->num_morphisms()); ++f) {
      inc.mmap.push_back(C->morphism_id(sub->morphism_name(f)));
    }
    return {sub, inc};
  }

  // ---- Limits and colimits by exhaustive search -------------------------

  inline std::optional<ObjId> terminal_object(FinCategory const& C) {
    for (ObjId t = 0; t < static_cast<ObjId>(C.num_objects()); ++t) {
      bool ok = true;
      for (ObjId x = 0; x < static_cast<ObjId>(C.num_objects()) && ok; ++x) {
        ok = C.hom(x, t).size() == 1;
      }
      if (ok) {
        return t;
      }
    }
    return std::nullopt;
  }

  inline std::optional<ObjId> initial_object(FinCategory const& C) {
    for (ObjId t = 0; t < static_cast<ObjId>(C.num_objects()); ++t) {
      bool ok = true;
      for (ObjId x = 0; x < static_cast<ObjId>(C.num_objects()) && ok; ++x) {
        ok = C.hom(t, x).size() == 1;
      }
      if (ok) {
        return t;
      }
    }
    return std::nullopt;
  }

  struct ProductWitness {
    ObjId apex;
    MorId left;
    MorId right;
  };

  // A product of a and b: for every x, h |-> (p1 h, p2 h) is a bijection
  // hom(x, p) -> hom(x, a) x hom(x, b). First witness in canonical order.
  inline std::optional<ProductWitness> find_product(FinCategory const& C,
                                                    ObjId a, ObjId b) {
    auto const n = static_cast<ObjId>(C.num_objects());
    for (ObjId p = 0; p < n; ++p) {
      for (MorId p1 : C.hom(p, a)) {
        for (MorId p2 : C.hom(p, b)) {
          bool ok = true;
          for (ObjId x = 0; x < n && ok; ++x) {
            auto hx = C.hom(x, p);
            if (hx.size() != C.hom(x, a).size() * C.hom(x, b).size()) {
              ok = false;
              break;
            }
            std::vector<std::pair<MorId, MorId>> seen;
            for (MorId h : hx) {
              seen.emplace_back(C.compose(p1, h), C.compose(p2, h));
            }
            std::sort(seen.begin(), seen.end());
            ok = std::adjacent_find(seen.begin(), seen.end()) == seen.end();
          }
          if (ok) {
            return ProductWitness{p, p1, p2};
          }
        }
      }
    }
    return std::nullopt;
  }

  struct PushoutWitness {
    ObjId apex;
    MorId along_first;   // b -> q
    MorId along_second;  // c -> q
  };

  // Pushout of the span b <-f- a -g-> c by cocone enumeration plus the
  // universality check.
  inline std::optional<PushoutWitness> find_pushout(FinCategory const& C,
                                                    MorId f, MorId g) {
    auto const n = static_cast<ObjId>(C.num_objects());
    ObjId      b = C.dst(f);
    ObjId      c = C.dst(g);
    // Cocones per apex.
    std::vector<std::vector<std::pair<MorId, MorId>>> cocones(n);
    for (ObjId x = 0; x < n; ++x) {
      for (MorId u : C.hom(b, x)) {
        for (MorId v : C.hom(c, x)) {
          if (C.compose(u, f) == C.compose(v, g)) {
            cocones[x].emplace_back(u, v);
          }
        }
      }
    }
    for (ObjId q = 0; q < n; ++q) {
      for (auto [i1, i2] : cocones[q]) {
        bool ok = true;
        for (ObjId x = 0; x < n && ok; ++x) {
          auto hq = C.hom(q, x);
          if (hq.size() != cocones[x].size()) {
            ok = false;
            break;
          }
          std::vector<std::pair<MorId, MorId>> seen;
          for (MorId h : hq) {
            seen.emplace_back(C.compose(h, i1), C.compose(h, i2));
          }
          std::sort(seen.begin(), seen.end());
          ok = std::adjacent_find(seen.begin(), seen.end()) == seen.end();
        }
        if (ok) {
          return PushoutWitness{q, i1, i2};
        }
      }
    }
    return std::nullopt;
  }

  struct ProductsReport {
    std::optional<ObjId>                                   terminal;
    std::vector<std::pair<std::pair<ObjId, ObjId>, ProductWitness>> products;
    std::optional<std::pair<ObjId, ObjId>>                 failing_pair;

    bool pass() const noexcept {
      return terminal.has_value() && !failing_pair.has_value();
    }
  };

  inline ProductsReport has_finite_products(FinCategory const& C) {
    ProductsReport report;
    report.terminal = terminal_object(C);
    auto const n    = static_cast<ObjId>(C.num_objects());
    for (ObjId a = 0; a < n; ++a) {
      for (ObjId b = a; b < n; ++b) {
        auto w = find_product(C, a, b);
        if (!w) {
          if (!report.failing_pair) {
            report.failing_pair = std::make_pair(a, b);
          }
          continue;
        }
        report.products.push_back({{a, b}, *w});
      }
    }
    return report;
  }

  // Whether T sends the chosen products of C (and its terminal object) to
  // products (terminal objects) of D.
  inline bool preserves_products(FunctorData const&    T,
                                 ProductsReport const& products) {
    auto const& D = *T.target;
    if (products.terminal) {
      ObjId t = T.obj(*products.terminal);
      for (ObjId x = 0; x < static_cast<ObjId>(D.num_objects()); ++x) {
        if (D.hom(x, t).size() != 1) {
          return false;
        }
      }
    }
    for (auto const& [pair, w] : products.products) {
      ObjId a  = T.obj(pair.first);
      ObjId b  = T.obj(pair.second);
      ObjId p  = T.obj(w.apex);
      MorId p1 = T.mor(w.left);
      MorId p2 = T.mor(w.right);
      for (ObjId x = 0; x < static_cast<ObjId>(D.num_objects()); ++x) {
        auto hx = D.hom(x, p);
        if (hx.size() != D.hom(x, a).size() * D.hom(x, b).size()) {
          return false;
        }
        std::vector<std::pair<MorId, MorId>> seen;
        for (MorId h : hx) {
          seen.emplace_back(D.compose(p1, h), D.compose(p2, h));
        }
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
          return false;
        }
      }
    }
    return true;
  }

  // Whether u is invertible in C; returns the inverse.
  inline std::optional<MorId> inverse_in(FinCategory const& C, MorId u) {
    for (MorId v : C.hom(C.dst(u), C.src(u))) {
      if (C.compose(v, u) == C.identity(C.src(u))
          && C.compose(u, v) == C.identity(C.dst(u))) {
        return v;
      }
    }
    return std::nullopt;
  }

  inline MorphClass isomorphisms(CategoryRef const& C, std::string name = "") {
    std::vector<bool> members(C->num_morphisms(), false);
    for (MorId f = 0; f < static_cast<MorId>(C->num_morphisms()); ++f) {
      members[f] = inverse_in(*C, f).has_value();
    }
    return MorphClass(C, std::move(members), std::move(name));
  }

  // An isomorphism-preserving bijection search between two small
  // categories: object map plus morphism map respecting composition.
  // Used by tests and the nested functor category property.
  inline bool isomorphic(FinCategory const& A, FinCategory const& B) {
    if (A.num_objects() != B.num_objects()
        || A.num_morphisms() != B.num_morphisms()) {
      return false;
    }
    auto const         n = static_cast<ObjId>(A.num_objects());
    std::vector<ObjId> omap(n, kNone);
    std::vector<bool>  used(n, false);
    std::vector<MorId> mmap(A.num_morphisms(), kNone);
    std::vector<bool>  mused(B.num_morphisms(), false);

    // Morphisms of A grouped by hom-set, assigned after objects.
    std::vector<MorId> order;
    for (MorId f = 0; f < static_cast<MorId>(A.num_morphisms()); ++f) {
      if (!A.is_identity(f)) {
        order.push_back(f);
      }
    }
    std::function<bool(std::size_t)> assign_mor = [&](std::size_t k) -> bool {
      if (k == order.size()) {
        for (MorId f = 0; f < static_cast<MorId>(A.num_morphisms()); ++f) {
          for (MorId g : A.out(A.dst(f))) {
            if (B.compose(mmap[g], mmap[f]) != mmap[A.compose(g, f)]) {
              return false;
            }
          }
        }
        return true;
      }
      MorId f = order[k];
      for (MorId u : B.hom(omap[A.src(f)], omap[A.dst(f)])) {
        if (mused[u] || B.is_identity(u)) {
          continue;
        }
        // Early composition check against already assigned morphisms.
        bool ok = true;
        for (std::size_t q = 0; q < k && ok; ++q) {
          MorId g  = order[q];
          MorId gf = A.dst(f) == A.src(g) ? A.compose(g, f) : kNone;
          if (gf != kNone && mmap[gf] != kNone) {
            ok = B.compose(mmap[g], u) == mmap[gf];
          }
          MorId fg = A.dst(g) == A.src(f) ? A.compose(f, g) : kNone;
          if (ok && fg != kNone && mmap[fg] != kNone) {
            ok = B.compose(u, mmap[g]) == mmap[fg];
          }
        }
        if (!ok) {
          continue;
        }
        mused[u] = true;
        mmap[f]  = u;
        if (assign_mor(k + 1)) {
          return true;
        }
        mused[u] = false;
        mmap[f]  = kNone;
      }
      return false;
    };
    std::function<bool(ObjId)> assign_obj = [&](ObjId x) -> bool {
      if (x == n) {
        for (ObjId a = 0; a < n; ++a) {
          mmap[A.identity(a)] = B.identity(omap[a]);
        }
        return assign_mor(0);
      }
      for (ObjId y = 0; y < n; ++y) {
        if (used[y]) {
          continue;
        }
        bool ok = A.hom(x, x).size() == B.hom(y, y).size();
        for (ObjId a = 0; a < x && ok; ++a) {
          ok = A.hom(a, x).size() == B.hom(omap[a], y).size()
               && A.hom(x, a).size() == B.hom(y, omap[a]).size();
        }
        if (!ok) {
          continue;
        }
        used[y]  = true;
        omap[x]  = y;
        if (assign_obj(x + 1)) {
          return true;
        }
        used[y] = false;
      }
      omap[x] = kNone;
      return false;
    };
    return assign_obj(0);
  }

}  // namespace locwb
