#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/morph_class.hpp"
#include "locwb/core/setup.hpp"

namespace locwb {

  // Objects + morphisms of both categories + members of both classes.
  inline std::size_t setup_size(LocalisationSetup const& L) {
    return L.C->num_objects() + L.C->num_morphisms() + L.D->num_objects()
           + L.D->num_morphisms() + L.S.members().size()
           + L.Sprime.members().size();
  }

  namespace detail {

    // The subcategory on the kept morphisms (objects: those whose identity
    // is kept), or nullopt when the kept set is not closed. `index` maps old
    // morphism ids to new ones.
    inline std::optional<CategoryRef> sub_category(FinCategory const&       C,
                                                   std::vector<bool> const& keep,
                                                   std::vector<MorId>&      index) {
      CategoryBuilder    b(C.name());
      std::vector<ObjId> obj(C.num_objects(), kNone);
      for (ObjId x = 0; x < static_cast<ObjId>(C.num_objects()); ++x) {
        if (keep[C.identity(x)]) {
          obj[x] = b.add_object(C.object_name(x));
        }
      }
      std::vector<MorId> local(C.num_morphisms(), kNone);
      for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
        if (!keep[f]) {
          continue;
        }
        if (obj[C.src(f)] == kNone || obj[C.dst(f)] == kNone) {
          return std::nullopt;
        }
        local[f] = C.is_identity(f)
                       ? b.identity(obj[C.src(f)])
                       : b.add_morphism(C.morphism_name(f), obj[C.src(f)],
                                        obj[C.dst(f)]);
      }
      for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
        if (!keep[f] || C.is_identity(f)) {
          continue;
        }
        for (MorId g : C.out(C.dst(f))) {
          if (!keep[g] || C.is_identity(g)) {
            continue;
          }
          MorId h = C.compose(g, f);
          if (!keep[h]) {
            return std::nullopt;
          }
          b.set_composite(local[g], local[f], local[h]);
        }
      }
      auto out = b.build_ref();
      index.assign(C.num_morphisms(), kNone);
      for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
        if (keep[f]) {
          index[f] = out->morphism_id(C.morphism_name(f));
        }
      }
      return out;
    }

    struct ShrinkPlan {
      std::vector<bool> keep_c, keep_d, s, sprime;  // over the old ids
    };

    inline std::optional<LocalisationSetup> apply_plan(LocalisationSetup const& L,
                                                       ShrinkPlan const& p) {
      std::vector<MorId> ic, id;
      auto               C = sub_category(*L.C, p.keep_c, ic);
      auto               D = sub_category(*L.D, p.keep_d, id);
      if (!C || !D || (*C)->num_objects() == 0 || (*D)->num_objects() == 0) {
        return std::nullopt;
      }
      LocalisationSetup out;
      out.name = L.name;
      out.C    = *C;
      out.D    = *D;
      out.T    = FunctorData{L.T.name, out.C, out.D, {}, {}};
      for (auto const& x : out.C->object_names()) {
        ObjId t = L.T.obj(L.C->object(x));
        if (!p.keep_d[L.D->identity(t)]) {
          return std::nullopt;
        }
        out.T.omap.push_back(out.D->object(L.D->object_name(t)));
      }
      for (MorId f = 0; f < static_cast<MorId>(out.C->num_morphisms()); ++f) {
        MorId u = L.T.mor(L.C->morphism_id(out.C->morphism_name(f)));
        if (!p.keep_d[u]) {
          return std::nullopt;
        }
        out.T.mmap.push_back(id[u]);
      }
      std::vector<bool> s(out.C->num_morphisms(), false);
      std::vector<bool> sp(out.D->num_morphisms(), false);
      for (MorId f = 0; f < static_cast<MorId>(ic.size()); ++f) {
        if (ic[f] != kNone) {
          s[ic[f]] = p.s[f] || L.C->is_identity(f);
        }
      }
      for (MorId f = 0; f < static_cast<MorId>(id.size()); ++f) {
        if (id[f] != kNone) {
          sp[id[f]] = p.sprime[f] || L.D->is_identity(f);
        }
      }
      out.S      = MorphClass(out.C, std::move(s), L.S.name());
      out.Sprime = MorphClass(out.D, std::move(sp), L.Sprime.name());
      if (!validate_setup(out).pass()) {
        return std::nullopt;
      }
      return out;
    }

    inline std::vector<ShrinkPlan> shrink_candidates(LocalisationSetup const& L) {
      auto const& C = *L.C;
      auto const& D = *L.D;
      ShrinkPlan  base{std::vector<bool>(C.num_morphisms(), true),
                      std::vector<bool>(D.num_morphisms(), true), L.S.mask(),
                      L.Sprime.mask()};
      std::vector<ShrinkPlan> out;
      // Dropping D-arrows drops their T-preimages as well.
      auto drop_d = [&](ShrinkPlan& p, auto pred) {
        for (MorId u = 0; u < static_cast<MorId>(D.num_morphisms()); ++u) {
          if (pred(u)) {
            p.keep_d[u] = false;
          }
        }
        for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
          if (!p.keep_d[L.T.mor(f)]) {
            p.keep_c[f] = false;
          }
        }
      };
      for (ObjId d = 0; d < static_cast<ObjId>(D.num_objects()); ++d) {
        auto p = base;
        drop_d(p, [&](MorId u) { return D.src(u) == d || D.dst(u) == d; });
        for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
          if (!p.keep_c[C.identity(C.src(f))] || !p.keep_c[C.identity(C.dst(f))]) {
            p.keep_c[f] = false;
          }
        }
        out.push_back(std::move(p));
      }
      for (ObjId c = 0; c < static_cast<ObjId>(C.num_objects()); ++c) {
        auto p = base;
        for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
          if (C.src(f) == c || C.dst(f) == c) {
            p.keep_c[f] = false;
          }
        }
        out.push_back(std::move(p));
      }
      for (MorId u = 0; u < static_cast<MorId>(D.num_morphisms()); ++u) {
        if (!D.is_identity(u)) {
          auto p = base;
          drop_d(p, [&](MorId v) { return v == u; });
          out.push_back(std::move(p));
        }
      }
      for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
        if (!C.is_identity(f)) {
          auto p      = base;
          p.keep_c[f] = false;
          out.push_back(std::move(p));
        }
      }
      for (MorId u = 0; u < static_cast<MorId>(D.num_morphisms()); ++u) {
        if (L.Sprime.contains(u) && !D.is_identity(u)) {
          auto p      = base;
          p.sprime[u] = false;
          for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
            if (L.T.mor(f) == u) {
              p.s[f] = false;
            }
          }
          out.push_back(std::move(p));
        }
      }
      for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
        if (L.S.contains(f) && !C.is_identity(f)) {
          auto p = base;
          p.s[f] = false;
          out.push_back(std::move(p));
        }
      }
      return out;
    }

  }  // namespace detail

  // Greedy minimisation: repeatedly takes the first smaller valid variant
  // (object, arrow or class member removed) on which `still_fails` holds.
  inline LocalisationSetup shrink(
      LocalisationSetup L,
      std::function<bool(LocalisationSetup const&)> const& still_fails) {
    for (bool progress = true; progress;) {
      progress = false;
      for (auto const& plan : detail::shrink_candidates(L)) {
        auto cand = detail::apply_plan(L, plan);
        if (cand && setup_size(*cand) < setup_size(L) && still_fails(*cand)) {
          L        = std::move(*cand);
          progress = true;
          break;
        }
      }
    }
    return L;
  }

}  // namespace locwb
