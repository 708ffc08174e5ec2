#pragma once

#include <map>
#include <string>
#include <vector>

#include "locwb/comma/slices.hpp"
#include "locwb/core/constructions.hpp"
#include "locwb/core/setup.hpp"
#include "locwb/hypotheses/report.hpp"
#include "locwb/hypotheses/t0.hpp"

namespace locwb {

  // c \ C -> T(c) \ D induced by T, with S and S' pulled back along the
  // forgetful functors. Objects are named by their structure arrow,
  // morphisms "v@u" for v applied to the object u.
  struct UnderSetup {
    LocalisationSetup  setup;
    std::vector<ObjId> c_object;    // underlying object of C, per object
    std::vector<MorId> c_morphism;  // underlying arrow of C, per morphism
    std::vector<ObjId> d_object;
    std::vector<MorId> d_morphism;
  };

  namespace detail {

    struct UnderCategory {
      CategoryRef        category;
      std::vector<ObjId> object;
      std::vector<MorId> morphism;
      std::vector<MorId> structure;  // per object: the arrow out of the base
    };

    inline UnderCategory under_category(FinCategory const& X, ObjId x) {
      CategoryBuilder    b(X.object_name(x) + "\\" + X.name());
      auto               out_x = X.out(x);
      std::vector<MorId> arrows(out_x.begin(), out_x.end());
      std::vector<ObjId> local(X.num_morphisms(), kNone);
      for (MorId u : arrows) {
        local[u] = b.add_object("[" + X.morphism_name(u) + "]");
      }
      // Morphism (v, u): u -> v u.
      std::map<std::pair<MorId, MorId>, MorId> mor;
      for (MorId u : arrows) {
        for (MorId v : X.out(X.dst(u))) {
          mor[{v, u}] = X.is_identity(v)
                            ? b.identity(local[u])
                            : b.add_morphism(X.morphism_name(v) + "@"
                                                 + X.morphism_name(u),
                                             local[u], local[X.compose(v, u)]);
        }
      }
      for (auto const& [vu, m] : mor) {
        auto [v, u] = vu;
        MorId w0    = X.compose(v, u);
        for (MorId w : X.out(X.dst(v))) {
          b.set_composite(mor.at({w, w0}), m, mor.at({X.compose(w, v), u}));
        }
      }
      UnderCategory out;
      out.category = b.build_ref();
      auto const& U = *out.category;
      out.object.resize(U.num_objects());
      out.structure.resize(U.num_objects());
      for (MorId u : arrows) {
        ObjId o         = U.object("[" + X.morphism_name(u) + "]");
        out.object[o]    = X.dst(u);
        out.structure[o] = u;
      }
      out.morphism.resize(U.num_morphisms());
      for (auto const& [vu, m] : mor) {
        auto  [v, u] = vu;
        ObjId o      = U.object("[" + X.morphism_name(u) + "]");
        MorId id     = X.is_identity(v)
                           ? U.identity(o)
                           : U.morphism_id(X.morphism_name(v) + "@"
                                           + X.morphism_name(u));
        out.morphism[id] = v;
      }
      return out;
    }

  }  // namespace detail

  inline UnderSetup under_setup(LocalisationSetup const& L, ObjId c) {
    auto const& C  = *L.C;
    auto const& D  = *L.D;
    auto        uc = detail::under_category(C, c);
    auto        ud = detail::under_category(D, L.T.obj(c));
    auto const& UC = *uc.category;
    auto const& UD = *ud.category;

    UnderSetup out;
    out.c_object   = uc.object;
    out.c_morphism = uc.morphism;
    out.d_object   = ud.object;
    out.d_morphism = ud.morphism;

    auto& U  = out.setup;
    U.name   = C.object_name(c) + "\\" + L.name;
    U.C      = uc.category;
    U.D      = ud.category;
    U.T.name = L.T.name + "_" + C.object_name(c);
    U.T.source = U.C;
    U.T.target = U.D;
    for (ObjId o = 0; o < static_cast<ObjId>(UC.num_objects()); ++o) {
      U.T.omap.push_back(UD.object("[" + D.morphism_name(L.T.mor(uc.structure[o]))
                                   + "]"));
    }
    for (MorId m = 0; m < static_cast<MorId>(UC.num_morphisms()); ++m) {
      MorId v  = L.T.mor(uc.morphism[m]);
      ObjId a  = U.T.omap[UC.src(m)];
      MorId im = kNone;
      for (MorId w : UD.hom(a, U.T.omap[UC.dst(m)])) {
        if (ud.morphism[w] == v) {
          im = w;
          break;
        }
      }
      U.T.mmap.push_back(im);
    }
    std::vector<bool> s(UC.num_morphisms()), sp(UD.num_morphisms());
    for (MorId m = 0; m < static_cast<MorId>(UC.num_morphisms()); ++m) {
      s[m] = L.S.contains(uc.morphism[m]);
    }
    for (MorId m = 0; m < static_cast<MorId>(UD.num_morphisms()); ++m) {
      sp[m] = L.Sprime.contains(ud.morphism[m]);
    }
    U.S      = MorphClass(U.C, std::move(s), L.S.name());
    U.Sprime = MorphClass(U.D, std::move(sp), L.Sprime.name());
    return out;
  }

  // Hypotheses (0)-(2) and (0)+(1') for the under-setup at c, plus the
  // isomorphisms delta \ (c \ S) -> d \ S and delta \ (c \ C) -> d \ T for
  // every delta: T(c) -> d, checked by the forgetful bijection on objects
  // and an isomorphism of the slice categories. Throws
  // PreconditionViolation unless T is fully faithful.
  inline std::vector<HypothesisReport> check_c1(LocalisationSetup const& L,
                                                ObjId c,
                                                Budget const& budget = {}) {
    if (!validate_functor(L.T).fully_faithful) {
      throw PreconditionViolation("T is not fully faithful");
    }
    auto        U  = under_setup(L, c);
    auto const& UD = *U.setup.D;
    auto const& C  = *L.C;
    auto const& D  = *L.D;

    std::vector<HypothesisReport> out;
    for (auto r : check_t0(U.setup, budget)) {
      r.id = "c1." + r.id;
      out.push_back(std::move(r));
    }
    for (auto r : check_c2(U.setup, budget)) {
      r.id = "c1." + r.id;
      out.push_back(std::move(r));
    }

    HypothesisReport iso;
    iso.id = "c1.iso";
    for (ObjId delta = 0; delta < static_cast<ObjId>(UD.num_objects()); ++delta) {
      ObjId d = U.d_object[delta];
      try {
        for (int kind = 0; kind < 2; ++kind) {
          auto top  = kind == 0 ? slice_I(U.setup, delta, budget)
                                : slice_J(U.setup, delta, JVariant::UnderT, budget);
          auto base = kind == 0 ? slice_I(L, d, budget)
                                : slice_J(L, d, JVariant::UnderT, budget);
          std::vector<bool> hit(base.size(), false);
          bool              ok = top.size() == base.size();
          for (auto const& o : top.objects) {
            ObjId       cc = U.c_object[o.c.obj[0]];
            MorId       ss = U.d_morphism[o.s[0]];
            std::string nm = "(" + C.object_name(cc) + "," + D.morphism_name(ss) + ")";
            int         x  = base.find(nm);
            if (x < 0 || hit[x]) {
              ok = false;
              break;
            }
            hit[x] = true;
          }
          ok = ok && top.morphisms.size() == base.morphisms.size()
               && isomorphic(*top.category(), *base.category());
          record(iso, ok ? Status::Holds : Status::Fails,
                 {UD.object_name(delta), kind == 0 ? "I" : "J"},
                 ok ? "" : "forgetful functor is not an isomorphism");
        }
      } catch (BudgetExceeded const& e) {
        record(iso, Status::Unknown, {UD.object_name(delta)}, e.what());
      }
    }
    out.push_back(iso);
    return out;
  }

}  // namespace locwb
