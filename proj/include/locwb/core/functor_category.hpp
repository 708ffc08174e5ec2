#pragma once

#include <functional>
#include <map>
#include <optional>
#include <memory>
#include <string>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/errors.hpp"
#include "locwb/core/functor.hpp"
#include "locwb/core/morph_class.hpp"
#include "locwb/core/poset.hpp"

namespace locwb {

  // The diagram category C^E together with the decoding of its objects and
  // morphisms (components per element of E).
  struct FunctorCategory {
    CategoryRef                     category;
    CategoryRef                     base;
    FinPoset                        shape;
    std::vector<Diagram>            objects;     // indexed by ObjId
    std::vector<std::vector<MorId>> components;  // indexed by MorId

    // S(E): natural transformations all of whose components lie in S.
    MorphClass lift(MorphClass const& S) const {
      std::vector<bool> members(category->num_morphisms(), false);
      for (std::size_t f = 0; f < members.size(); ++f) {
        bool ok = true;
        for (MorId c : components[f]) {
          ok = ok && S.contains(c);
        }
        members[f] = ok;
      }
      return MorphClass(category, std::move(members),
                        S.name().empty() ? "" : S.name() + "(" + shape.name()
                                                    + ")");
    }

    std::optional<ObjId> find(Diagram const& d) const {
      for (std::size_t i = 0; i < objects.size(); ++i) {
        if (objects[i] == d) {
          return static_cast<ObjId>(i);
        }
      }
      return std::nullopt;
    }
  };

  // Natural transformations a => b between two diagrams E -> C, each given by
  // its component list. Optionally restricted to components in `allowed`.
  inline void for_each_transformation(
      FinCategory const& C, FinPoset const& E, Diagram const& a,
      Diagram const& b, std::vector<bool> const* allowed,
      std::function<void(std::vector<MorId> const&)> const& visit) {
    auto const       n     = E.size();
    auto const&      order = E.linear_extension();
    std::vector<MorId> comp(n, kNone);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == n) {
        visit(comp);
        return;
      }
      int e = order[pos];
      for (MorId u : C.hom(a.obj[e], b.obj[e])) {
        if (allowed != nullptr && !(*allowed)[u]) {
          continue;
        }
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
          if (E.lt(i, e)) {
            int p = E.pair_index(static_cast<int>(i), e);
            ok    = C.compose(u, a.arr[p]) == C.compose(b.arr[p], comp[i]);
          }
        }
        if (!ok) {
          continue;
        }
        comp[e] = u;
        rec(pos + 1);
      }
      comp[e] = kNone;
    };
    rec(0);
  }

  inline std::string encode_components(FinCategory const& C,
                                       std::vector<MorId> const& comp) {
    std::string s = "[";
    for (std::size_t i = 0; i < comp.size(); ++i) {
      if (i) {
        s += ",";
      }
      s += C.morphism_name(comp[i]);
    }
    return s + "]";
  }

  // C^E: objects are all functors E -> C, morphisms all natural
  // transformations. Throws BudgetExceeded past budget.max_morphisms.
  inline FunctorCategory functor_category(CategoryRef const& C,
                                          FinPoset const&    E,
                                          Budget const&      budget = {}) {
    std::vector<Diagram> diagrams;
    for_each_diagram(*C, E, [&](Diagram const& d) {
      diagrams.push_back(d);
      if (diagrams.size() > budget.max_morphisms) {
        throw BudgetExceeded("functor category " + C->name() + "^" + E.name()
                             + " exceeds the morphism cap");
      }
      return true;
    });

    CategoryBuilder    b(C->name() + "^" + E.name());
    std::vector<ObjId> ids;
    std::vector<std::string> names;
    for (auto const& d : diagrams) {
      names.push_back(encode_diagram(*C, E, d));
      ids.push_back(b.add_object(names.back()));
    }
    std::map<std::pair<std::vector<MorId>, std::pair<ObjId, ObjId>>, MorId>
        lookup;
    std::vector<std::vector<MorId>> builder_components;
    for (std::size_t x = 0; x < diagrams.size(); ++x) {
      std::vector<MorId> ids_comp(E.size());
      for (std::size_t e = 0; e < E.size(); ++e) {
        ids_comp[e] = C->identity(diagrams[x].obj[e]);
      }
      lookup[{ids_comp, {ids[x], ids[x]}}] = b.identity(ids[x]);
    }
    builder_components.resize(b.num_morphisms());
    for (std::size_t x = 0; x < diagrams.size(); ++x) {
      for (std::size_t e = 0; e < E.size(); ++e) {
        builder_components[b.identity(ids[x])].push_back(
            C->identity(diagrams[x].obj[e]));
      }
    }
    for (std::size_t x = 0; x < diagrams.size(); ++x) {
      for (std::size_t y = 0; y < diagrams.size(); ++y) {
        for_each_transformation(
            *C, E, diagrams[x], diagrams[y], nullptr,
            [&](std::vector<MorId> const& comp) {
              auto key = std::make_pair(comp, std::make_pair(ids[x], ids[y]));
              if (lookup.count(key)) {
                return;
              }
              if (b.num_morphisms() >= budget.max_morphisms) {
                throw BudgetExceeded("functor category " + C->name() + "^"
                                     + E.name()
                                     + " exceeds the morphism cap");
              }
              MorId f = b.add_morphism(names[x] + "=" + encode_components(*C, comp)
                                           + "=>" + names[y],
                                       ids[x], ids[y]);
              lookup[key] = f;
              builder_components.push_back(comp);
            });
      }
    }
    // Composition componentwise.
    auto const m = static_cast<MorId>(b.num_morphisms());
    std::vector<std::vector<MorId>> outgoing(b.num_objects());
    for (MorId g = 0; g < m; ++g) {
      if (!b.is_identity(g)) {
        outgoing[b.morphism_data(g).src].push_back(g);
      }
    }
    for (MorId f = 0; f < m; ++f) {
      if (b.is_identity(f)) {
        continue;
      }
      auto const& mf = b.morphism_data(f);
      for (MorId g : outgoing[mf.dst]) {
        std::vector<MorId> comp(E.size());
        for (std::size_t e = 0; e < E.size(); ++e) {
          comp[e] = C->compose(builder_components[g][e],
                               builder_components[f][e]);
        }
        b.set_composite(g, f,
                        lookup.at({comp, {mf.src, b.morphism_data(g).dst}}));
      }
    }

    FunctorCategory result;
    auto            built = b.build();
    // Recover the decodings in the canonical (sorted) order.
    result.objects.resize(diagrams.size());
    for (std::size_t x = 0; x < diagrams.size(); ++x) {
      result.objects[built.object(names[x])] = diagrams[x];
    }
    result.components.resize(built.num_morphisms());
    for (MorId f = 0; f < m; ++f) {
      auto const& mf = b.morphism_data(f);
      result.components[built.morphism_id(mf.name)] = builder_components[f];
    }
    result.category = std::make_shared<FinCategory const>(std::move(built));
    result.base     = C;
    result.shape    = E;
    return result;
  }

  // T^E: C^E -> D^E, applying T pointwise.
  inline FunctorData lift_functor(FunctorData const&     T,
                                  FunctorCategory const& CE,
                                  FunctorCategory const& DE) {
    FunctorData result;
    result.name   = T.name.empty() ? "" : T.name + "^" + CE.shape.name();
    result.source = CE.category;
    result.target = DE.category;
    std::map<Diagram, ObjId> index;
    for (std::size_t y = 0; y < DE.objects.size(); ++y) {
      index.emplace(DE.objects[y], static_cast<ObjId>(y));
    }
    result.omap.resize(CE.objects.size());
    for (std::size_t x = 0; x < CE.objects.size(); ++x) {
      Diagram img;
      for (ObjId c : CE.objects[x].obj) {
        img.obj.push_back(T.obj(c));
      }
      for (MorId u : CE.objects[x].arr) {
        img.arr.push_back(T.mor(u));
      }
      result.omap[x] = index.at(img);
    }
    result.mmap.resize(CE.components.size());
    for (std::size_t f = 0; f < CE.components.size(); ++f) {
      std::vector<MorId> comp;
      for (MorId u : CE.components[f]) {
        comp.push_back(T.mor(u));
      }
      ObjId a     = result.omap[CE.category->src(static_cast<MorId>(f))];
      ObjId b     = result.omap[CE.category->dst(static_cast<MorId>(f))];
      MorId found = kNone;
      for (MorId g : DE.category->hom(a, b)) {
        if (DE.components[g] == comp) {
          found = g;
          break;
        }
      }
      result.mmap[f] = found;
    }
    return result;
  }

}  // namespace locwb
