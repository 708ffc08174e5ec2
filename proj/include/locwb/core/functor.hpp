#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/morph_class.hpp"
#include "locwb/core/validation.hpp"

namespace locwb {

  struct FunctorData {
    std::string        name;
    CategoryRef        source;
    CategoryRef        target;
    std::vector<ObjId> omap;
    std::vector<MorId> mmap;

    ObjId obj(ObjId x) const {
      return omap[x];
    }
    MorId mor(MorId f) const {
      return mmap[f];
    }
  };

  inline FunctorData identity_functor(CategoryRef C, std::string name = "") {
    FunctorData F;
    F.name   = std::move(name);
    F.source = C;
    F.target = C;
    F.omap.resize(C->num_objects());
    F.mmap.resize(C->num_morphisms());
    for (std::size_t x = 0; x < F.omap.size(); ++x) {
      F.omap[x] = static_cast<ObjId>(x);
    }
    for (std::size_t f = 0; f < F.mmap.size(); ++f) {
      F.mmap[f] = static_cast<MorId>(f);
    }
    return F;
  }

  // G o F.
  inline FunctorData compose_functors(FunctorData const& G,
                                      FunctorData const& F,
                                      std::string        name = "") {
    FunctorData H;
    H.name   = std::move(name);
    H.source = F.source;
    H.target = G.target;
    H.omap.resize(F.omap.size());
    H.mmap.resize(F.mmap.size());
    for (std::size_t x = 0; x < F.omap.size(); ++x) {
      H.omap[x] = G.omap[F.omap[x]];
    }
    for (std::size_t f = 0; f < F.mmap.size(); ++f) {
      H.mmap[f] = G.mmap[F.mmap[f]];
    }
    return H;
  }

  // The constant functor with value x.
  inline FunctorData constant_functor(CategoryRef source, CategoryRef target,
                                      ObjId x, std::string name = "") {
    FunctorData F;
    F.name   = std::move(name);
    F.source = source;
    F.target = target;
    F.omap.assign(source->num_objects(), x);
    F.mmap.assign(source->num_morphisms(), target->identity(x));
    return F;
  }

  struct FunctorReport {
    ValidationReport    laws;
    bool                faithful       = false;
    bool                full           = false;
    bool                fully_faithful = false;
    std::optional<bool> preserves_classes;

    bool pass() const noexcept {
      return laws.pass();
    }
  };

  // Functor laws, plus faithfulness/fullness by hom-set comparison and, when
  // classes are supplied, whether T(S) is contained in S'.
  inline FunctorReport validate_functor(FunctorData const& T,
                                        MorphClass const*  S      = nullptr,
                                        MorphClass const*  Sprime = nullptr) {
    FunctorReport report;
    auto const&   C = *T.source;
    auto const&   D = *T.target;
    if (T.omap.size() != C.num_objects()
        || T.mmap.size() != C.num_morphisms()) {
      report.laws.add("arity", {T.name});
      return report;
    }
    for (ObjId x : T.omap) {
      if (x < 0 || static_cast<std::size_t>(x) >= D.num_objects()) {
        report.laws.add("object image out of range", {T.name});
        return report;
      }
    }
    for (MorId f : T.mmap) {
      if (f < 0 || static_cast<std::size_t>(f) >= D.num_morphisms()) {
        report.laws.add("morphism image out of range", {T.name});
        return report;
      }
    }
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      MorId Tf = T.mmap[f];
      if (D.src(Tf) != T.omap[C.src(f)] || D.dst(Tf) != T.omap[C.dst(f)]) {
        report.laws.add("endpoint preservation", {C.morphism_name(f)});
      }
    }
    for (ObjId x = 0; x < static_cast<ObjId>(C.num_objects()); ++x) {
      if (T.mmap[C.identity(x)] != D.identity(T.omap[x])) {
        report.laws.add("identity preservation", {C.object_name(x)});
      }
    }
    if (!report.laws.pass()) {
      return report;
    }
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      for (MorId g : C.out(C.dst(f))) {
        MorId gf = C.compose(g, f);
        if (gf == kNone) {
          continue;
        }
        if (T.mmap[gf] != D.compose(T.mmap[g], T.mmap[f])) {
          report.laws.add("composition preservation",
                          {C.morphism_name(g), C.morphism_name(f)});
        }
      }
    }

    report.faithful = true;
    report.full     = true;
    std::vector<char> hit(D.num_morphisms(), 0);
    for (ObjId a = 0; a < static_cast<ObjId>(C.num_objects()); ++a) {
      for (ObjId b = 0; b < static_cast<ObjId>(C.num_objects()); ++b) {
        auto target_hom = D.hom(T.omap[a], T.omap[b]);
        for (MorId u : target_hom) {
          hit[u] = 0;
        }
        for (MorId f : C.hom(a, b)) {
          if (hit[T.mmap[f]]) {
            report.faithful = false;
          }
          hit[T.mmap[f]] = 1;
        }
        for (MorId u : target_hom) {
          if (!hit[u]) {
            report.full = false;
          }
        }
      }
    }
    report.fully_faithful = report.faithful && report.full;

    if (S != nullptr && Sprime != nullptr) {
      bool ok = true;
      for (MorId f : S->members()) {
        ok = ok && Sprime->contains(T.mmap[f]);
      }
      report.preserves_classes = ok;
    }
    return report;
  }

}  // namespace locwb
