#pragma once

#include <functional>
#include <string>
#include <vector>

#include "locwb/comma/slices.hpp"
#include "locwb/connectivity/connectivity.hpp"
#include "locwb/core/poset.hpp"
#include "locwb/core/setup.hpp"
#include "locwb/hypotheses/report.hpp"

namespace locwb {

  struct GradeResult {
    Status      status = Status::Holds;
    std::string detail;
    bool        pi1_unknown = false;
  };

  // Connectivity grade of a slice: -1 nonempty, 0 one component, 1 one
  // component with trivial fundamental group.
  inline GradeResult slice_grade(Slice const& I, int grade,
                                 Budget const& budget) {
    if (I.empty()) {
      return {Status::Fails, "empty"};
    }
    if (grade < 0) {
      return {};
    }
    auto comps = I.components();
    if (comps.size() != 1) {
      return {Status::Fails, std::to_string(comps.size()) + " components"};
    }
    if (grade < 1) {
      return {};
    }
    auto const& C = *I.category();
    auto        v = decide_triviality(pi1_presentation(C, comps.front()), budget);
    switch (v.status) {
      case Pi1Status::Trivial: return {};
      case Pi1Status::Nontrivial: {
        std::string detail = "pi1 nontrivial (" + v.stage + ")";
        return {Status::Fails, detail};
      }
      case Pi1Status::Unknown:
        return {Status::Unknown, "pi1 undecided: " + v.stage, true};
    }
    return {};
  }

  // Indices of the three families: objects, arrows, composable pairs.
  struct SliceIndex {
    FinPoset                 shape;
    Diagram                  diagram;
    std::vector<std::string> names;
  };

  inline std::vector<SliceIndex> slice_indices(FinCategory const& D, int n) {
    std::vector<SliceIndex> out;
    if (n == 0) {
      for (ObjId d = 0; d < static_cast<ObjId>(D.num_objects()); ++d) {
        out.push_back({FinPoset::chain(0), point_diagram(d), {D.object_name(d)}});
      }
    } else if (n == 1) {
      for (MorId f = 0; f < static_cast<MorId>(D.num_morphisms()); ++f) {
        out.push_back(
            {FinPoset::chain(1), arrow_diagram(D, f), {D.morphism_name(f)}});
      }
    } else {
      for (MorId f1 = 0; f1 < static_cast<MorId>(D.num_morphisms()); ++f1) {
        for (MorId f2 : D.out(D.dst(f1))) {
          out.push_back({FinPoset::chain(2), pair_diagram(D, f2, f1),
                         {D.morphism_name(f2), D.morphism_name(f1)}});
        }
      }
    }
    return out;
  }

  enum class SliceKind { I, Underline };

  namespace detail {

    inline Slice make_slice(LocalisationSetup const& L, SliceKind kind,
                            SliceIndex const& ix, Budget const& budget) {
      return kind == SliceKind::I
                 ? slice_I(L, ix.shape, ix.diagram, budget)
                 : slice_I_underline(L, ix.shape, ix.diagram, budget);
    }

    // Grade n - 1 ... the Simplicial theorem asks grade 1 for objects,
    // 0 for arrows and -1 for pairs.
    inline HypothesisReport grade_family(LocalisationSetup const& L,
                                         SliceKind kind, int n,
                                         std::string const& id,
                                         Budget const&      budget) {
      HypothesisReport r;
      r.id = id;
      for (auto const& ix : slice_indices(*L.D, n)) {
        try {
          auto g = slice_grade(make_slice(L, kind, ix, budget), 1 - n, budget);
          record(r, g.status, ix.names, g.detail, g.pi1_unknown);
        } catch (BudgetExceeded const& e) {
          record(r, Status::Unknown, ix.names, e.what());
        }
      }
      return r;
    }

  }  // namespace detail

  // Hypotheses (0), (1), (2): I_d 1-connected, I_f 0-connected,
  // I_(f2,f1) nonempty.
  inline std::vector<HypothesisReport> check_t0(LocalisationSetup const& L,
                                                Budget const& budget = {}) {
    return {detail::grade_family(L, SliceKind::I, 0, "t0.0", budget),
            detail::grade_family(L, SliceKind::I, 1, "t0.1", budget),
            detail::grade_family(L, SliceKind::I, 2, "t0.2", budget)};
  }

  // Re-evaluates one index of a t0/tu0 family; used to replay witnesses.
  inline GradeResult replay_grade(LocalisationSetup const&        L,
                                  std::string const&              id,
                                  std::vector<std::string> const& witness,
                                  Budget const&                   budget = {}) {
    auto const& D    = *L.D;
    int         n    = id.back() - '0';
    SliceKind   kind = id.rfind("tu0", 0) == 0 ? SliceKind::Underline : SliceKind::I;
    SliceIndex  ix;
    if (n == 0) {
      ix = {FinPoset::chain(0), point_diagram(D.object(witness.at(0))), witness};
    } else if (n == 1) {
      ix = {FinPoset::chain(1), arrow_diagram(D, D.morphism_id(witness.at(0))),
            witness};
    } else {
      ix = {FinPoset::chain(2),
            pair_diagram(D, D.morphism_id(witness.at(0)),
                         D.morphism_id(witness.at(1))),
            witness};
    }
    return slice_grade(detail::make_slice(L, kind, ix, budget), 1 - n, budget);
  }

  // (1'): the comparison functor I_d -> J_d is cofinal for every d.
  inline HypothesisReport check_c2_prime(LocalisationSetup const& L,
                                         JVariant variant = JVariant::UnderT,
                                         Budget const& budget = {}) {
    HypothesisReport r;
    r.id = "c2.1'";
    for (ObjId d = 0; d < static_cast<ObjId>(L.D->num_objects()); ++d) {
      try {
        auto I   = slice_I(L, d, budget);
        auto J   = slice_J(L, d, variant, budget);
        auto Phi = phi_comparison(L, I, J, variant);
        auto c   = is_cofinal(Phi, budget);
        if (c.cofinal) {
          record(r, Status::Holds, {}, "");
        } else {
          record(r, Status::Fails, {L.D->object_name(d)},
                 "comparison/" + J.names[*c.first_failure] + " not 0-connected");
        }
      } catch (BudgetExceeded const& e) {
        record(r, Status::Unknown, {L.D->object_name(d)}, e.what());
      }
    }
    return r;
  }

  inline std::vector<HypothesisReport> check_c2(LocalisationSetup const& L,
                                                Budget const& budget = {},
                                                JVariant variant = JVariant::UnderT) {
    auto zero = detail::grade_family(L, SliceKind::I, 0, "c2.0", budget);
    return {zero, check_c2_prime(L, variant, budget)};
  }

  // (*): s in S' and s t in S' imply t in S'.
  inline HypothesisReport check_two_of_three(LocalisationSetup const& L) {
    HypothesisReport r;
    r.id          = "tu0.star";
    auto const& D = *L.D;
    for (MorId t = 0; t < static_cast<MorId>(D.num_morphisms()); ++t) {
      for (MorId s : D.out(D.dst(t))) {
        bool bad = L.Sprime.contains(s) && L.Sprime.contains(D.compose(s, t))
                   && !L.Sprime.contains(t);
        record(r, bad ? Status::Fails : Status::Holds,
               {D.morphism_name(s), D.morphism_name(t)},
               bad ? "s and st in S' but t is not" : "");
      }
    }
    return r;
  }

  inline std::vector<HypothesisReport> check_tu0(LocalisationSetup const& L,
                                                 Budget const& budget = {}) {
    return {detail::grade_family(L, SliceKind::Underline, 0, "tu0.0", budget),
            detail::grade_family(L, SliceKind::Underline, 1, "tu0.1", budget),
            detail::grade_family(L, SliceKind::Underline, 2, "tu0.2", budget),
            check_two_of_three(L)};
  }

}  // namespace locwb
