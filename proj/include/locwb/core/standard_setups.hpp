#pragma once

#include "locwb/core/setup.hpp"
#include "locwb/core/standard.hpp"

namespace locwb::standard {

  // C = {1} included in D = Arrow; S = {id_1}, S' = all of Arrow.
  inline LocalisationSetup riou_fix() {
    auto C = point("1", "One");
    auto D = arrow();
    FunctorData T{"incl", C, D, {D->object("1")}, {D->identity(D->object("1"))}};
    return {"RiouFix", C, D, T, MorphClass::identities(C, "S"),
            MorphClass::all(D, "Sprime")};
  }

  // Pt included in Pt + Pt with trivial classes; not an equivalence.
  inline LocalisationSetup non_example() {
    auto C = point();
    auto D = two_points();
    FunctorData T{"incl", C, D, {D->object("x")}, {D->identity(D->object("x"))}};
    return {"NonExample", C, D, T, MorphClass::identities(C, "S"),
            MorphClass::identities(D, "Sprime")};
  }

  // T = Id_C with S = S' given by a member mask (closed by the caller).
  inline LocalisationSetup identity_setup(CategoryRef C, std::vector<bool> mask,
                                          std::string name = "Id") {
    MorphClass S(C, mask, "S");
    MorphClass Sp(C, std::move(mask), "Sprime");
    return {std::move(name), C, C, identity_functor(C, "Id"), S, Sp};
  }

}  // namespace locwb::standard
