#pragma once

#include <string>
#include <map>
#include <tuple>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/errors.hpp"
#include "locwb/core/functor.hpp"

namespace locwb {

  struct CommaObject {
    ObjId a;
    ObjId b;
    MorId f;  // F(a) -> G(b)
    auto operator<=>(CommaObject const&) const = default;
  };

  // F ↓ G for F: A -> X <- B: G. Objects (a, b, f: F a -> G b); morphisms
  // (phi: a -> a', psi: b -> b') with G(psi) f = f' F(phi).
  struct CommaCategory {
    CategoryRef                          carrier;
    FunctorData                          proj_left;   // to A
    FunctorData                          proj_right;  // to B
    std::vector<CommaObject>             object_decode;    // by ObjId
    std::vector<std::pair<MorId, MorId>> morphism_decode;  // by MorId
    // Objects whose connecting arrow is an identity (the strict fibre
    // product sitting inside the comma category).
    std::vector<bool> fibred;
  };

  inline std::string encode_comma_object(FinCategory const& A,
                                         FinCategory const& B,
                                         FinCategory const& X,
                                         CommaObject const& o) {
    return "(" + A.object_name(o.a) + "," + B.object_name(o.b) + ","
           + X.morphism_name(o.f) + ")";
  }

  inline CommaCategory comma(FunctorData const& F, FunctorData const& G,
                             Budget const& budget = {}) {
    if (F.target != G.target) {
      throw PreconditionViolation("comma: functors have different targets");
    }
    auto const& A = *F.source;
    auto const& B = *G.source;
    auto const& X = *F.target;

    std::vector<CommaObject> objects;
    for (ObjId a = 0; a < static_cast<ObjId>(A.num_objects()); ++a) {
      for (ObjId b = 0; b < static_cast<ObjId>(B.num_objects()); ++b) {
        for (MorId f : X.hom(F.obj(a), G.obj(b))) {
          objects.push_back({a, b, f});
        }
      }
    }
    std::vector<std::string> names;
    for (auto const& o : objects) {
      names.push_back(encode_comma_object(A, B, X, o));
    }
    CategoryBuilder    builder("(" + F.name + "|" + G.name + ")");
    for (auto const& n : names) {
      builder.add_object(n);
    }
    std::vector<std::pair<MorId, MorId>> decode(objects.size());
    for (std::size_t x = 0; x < objects.size(); ++x) {
      decode[builder.identity(static_cast<ObjId>(x))] = {
          A.identity(objects[x].a), B.identity(objects[x].b)};
    }
    // Morphism lookup by (src, dst, phi, psi).
    std::map<std::tuple<ObjId, ObjId, MorId, MorId>, MorId> lookup;
    for (std::size_t x = 0; x < objects.size(); ++x) {
      auto const& o = objects[x];
      lookup[{static_cast<ObjId>(x), static_cast<ObjId>(x),
              A.identity(o.a), B.identity(o.b)}] =
          builder.identity(static_cast<ObjId>(x));
    }
    std::vector<std::vector<MorId>> outgoing(objects.size());
    for (std::size_t x = 0; x < objects.size(); ++x) {
      for (std::size_t y = 0; y < objects.size(); ++y) {
        auto const& o = objects[x];
        auto const& p = objects[y];
        for (MorId phi : A.hom(o.a, p.a)) {
          for (MorId psi : B.hom(o.b, p.b)) {
            if (X.compose(G.mor(psi), o.f) != X.compose(p.f, F.mor(phi))) {
              continue;
            }
            if (x == y && A.is_identity(phi) && B.is_identity(psi)) {
              continue;
            }
            if (builder.num_morphisms() >= budget.max_morphisms) {
              throw BudgetExceeded("comma category exceeds the morphism cap");
            }
            MorId m = builder.add_morphism(
                names[x] + "=[" + A.morphism_name(phi) + ","
                    + B.morphism_name(psi) + "]=>" + names[y],
                static_cast<ObjId>(x), static_cast<ObjId>(y));
            decode.push_back({phi, psi});
            lookup[{static_cast<ObjId>(x), static_cast<ObjId>(y), phi, psi}] =
                m;
            outgoing[x].push_back(m);
          }
        }
      }
    }
    auto const m = static_cast<MorId>(builder.num_morphisms());
    for (MorId f = 0; f < m; ++f) {
      if (builder.is_identity(f)) {
        continue;
      }
      auto const& mf = builder.morphism_data(f);
      for (MorId g : outgoing[mf.dst]) {
        auto const& mg = builder.morphism_data(g);
        builder.set_composite(
            g, f,
            lookup.at({mf.src, mg.dst, A.compose(decode[g].first, decode[f].first),
                       B.compose(decode[g].second, decode[f].second)}));
      }
    }

    auto built = std::make_shared<FinCategory const>(builder.build());
    CommaCategory result;
    result.carrier = built;
    result.object_decode.resize(objects.size());
    result.fibred.resize(objects.size());
    for (std::size_t x = 0; x < objects.size(); ++x) {
      ObjId id                  = built->object(names[x]);
      result.object_decode[id]  = objects[x];
      result.fibred[id]         = X.is_identity(objects[x].f);
    }
    result.morphism_decode.resize(m);
    for (MorId f = 0; f < m; ++f) {
      result.morphism_decode[built->morphism_id(builder.morphism_data(f).name)] =
          decode[f];
    }
    result.proj_left  = FunctorData{"pr1", built, F.source, {}, {}};
    result.proj_right = FunctorData{"pr2", built, G.source, {}, {}};
    for (auto const& o : result.object_decode) {
      result.proj_left.omap.push_back(o.a);
      result.proj_right.omap.push_back(o.b);
    }
    for (auto const& [phi, psi] : result.morphism_decode) {
      result.proj_left.mmap.push_back(phi);
      result.proj_right.mmap.push_back(psi);
    }
    return result;
  }

  // L / j: objects (a, L a -> j).
  inline CommaCategory over(FunctorData const& L, ObjId j,
                            Budget const& budget = {}) {
    auto pt = [] {
      CategoryBuilder b("pt");
      b.add_object("*");
      return b.build_ref();
    }();
    return comma(L, constant_functor(pt, L.target, j, L.target->object_name(j)),
                 budget);
  }

  // j \ L: objects (j -> L a).
  inline CommaCategory under(FunctorData const& L, ObjId j,
                             Budget const& budget = {}) {
    auto pt = [] {
      CategoryBuilder b("pt");
      b.add_object("*");
      return b.build_ref();
    }();
    return comma(constant_functor(pt, L.target, j, L.target->object_name(j)), L,
                 budget);
  }

}  // namespace locwb
