#pragma once

#include <string>
#include <vector>

#include "locwb/core/category.hpp"

namespace locwb {

  struct Violation {
    std::string              law;
    std::vector<std::string> ids;
  };

  struct ValidationReport {
    std::vector<Violation> violations;

    bool pass() const noexcept {
      return violations.empty();
    }

    void add(std::string law, std::vector<std::string> ids) {
      violations.push_back({std::move(law), std::move(ids)});
    }

    bool has(std::string const& law) const {
      for (auto const& v : violations) {
        if (v.law == law) {
          return true;
        }
      }
      return false;
    }
  };

  // Exhaustive check of the category axioms: typing of composites,
  // totality on composable pairs, identity laws and associativity.
  inline ValidationReport validate_category(FinCategory const& C) {
    ValidationReport report;
    auto const       m = static_cast<MorId>(C.num_morphisms());

    for (ObjId x = 0; x < static_cast<ObjId>(C.num_objects()); ++x) {
      MorId id = C.identity(x);
      if (id == kNone || C.src(id) != x || C.dst(id) != x) {
        report.add("identity typing", {C.object_name(x)});
      }
    }

    for (MorId f = 0; f < m; ++f) {
      auto const& mf = C.morphism(f);
      if (C.compose(C.identity(mf.dst), f) != f
          || C.compose(f, C.identity(mf.src)) != f) {
        report.add("identity law", {mf.name});
      }
    }

    for (MorId f = 0; f < m; ++f) {
      for (MorId g : C.out(C.dst(f))) {
        MorId h = C.compose(g, f);
        if (h == kNone) {
          report.add("composition undefined",
                     {C.morphism_name(g), C.morphism_name(f)});
        } else if (C.src(h) != C.src(f) || C.dst(h) != C.dst(g)) {
          report.add("composite typing", {C.morphism_name(g),
                                           C.morphism_name(f),
                                           C.morphism_name(h)});
        }
      }
    }
    if (!report.pass()) {
      return report;
    }

    for (MorId f = 0; f < m; ++f) {
      for (MorId g : C.out(C.dst(f))) {
        MorId gf = C.compose(g, f);
        for (MorId h : C.out(C.dst(g))) {
          if (C.compose(h, gf) != C.compose(C.compose(h, g), f)) {
            report.add("associativity", {C.morphism_name(h),
                                         C.morphism_name(g),
                                         C.morphism_name(f)});
          }
        }
      }
    }
    return report;
  }

}  // namespace locwb
