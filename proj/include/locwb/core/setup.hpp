#pragma once

#include <string>

#include "locwb/core/category.hpp"
#include "locwb/core/functor.hpp"
#include "locwb/core/morph_class.hpp"
#include "locwb/core/validation.hpp"

namespace locwb {

  // A functor T: C -> D with marked classes S in C and S' in D such that
  // T(S) is contained in S'.
  struct LocalisationSetup {
    std::string name;
    CategoryRef C;
    CategoryRef D;
    FunctorData T;
    MorphClass  S;
    MorphClass  Sprime;
  };

  inline ValidationReport validate_setup(LocalisationSetup const& L) {
    ValidationReport report;
    auto             append = [&report](ValidationReport const& r,
                            std::string const&      where) {
      for (auto const& v : r.violations) {
        auto ids = v.ids;
        ids.insert(ids.begin(), where);
        report.add(v.law, ids);
      }
    };
    append(validate_category(*L.C), "C");
    append(validate_category(*L.D), "D");
    if (!report.pass()) {
      return report;
    }
    if (L.T.source != L.C || L.T.target != L.D) {
      report.add("functor endpoints", {L.T.name});
      return report;
    }
    if (L.S.carrier() != L.C || L.Sprime.carrier() != L.D) {
      report.add("class carrier", {L.S.name(), L.Sprime.name()});
      return report;
    }
    auto fr = validate_functor(L.T, &L.S, &L.Sprime);
    append(fr.laws, "T");
    append(validate_class(L.S), "S");
    append(validate_class(L.Sprime), "Sprime");
    if (fr.pass() && fr.preserves_classes && !*fr.preserves_classes) {
      for (MorId f : L.S.members()) {
        if (!L.Sprime.contains(L.T.mor(f))) {
          report.add("T(S) not contained in S'",
                     {L.C->morphism_name(f), L.D->morphism_name(L.T.mor(f))});
        }
      }
    }
    return report;
  }

}  // namespace locwb
