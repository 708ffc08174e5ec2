#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "locwb/comma/slices.hpp"
#include "locwb/core/constructions.hpp"
#include "locwb/core/functor_category.hpp"
#include "locwb/core/poset.hpp"
#include "locwb/core/setup.hpp"
#include "locwb/hypotheses/report.hpp"
#include "locwb/hypotheses/t0.hpp"

namespace locwb {

  // Whether the pushout of s along f (b <-s- a -f-> c) exists, and whether
  // some choice of it has its arrow c -> q in `cls`. Pushouts are unique up
  // to isomorphism of the apex, so the other choices differ from the first
  // one found by an isomorphism out of the apex.
  struct PushoutVerdict {
    bool exists   = false;
    bool in_class = false;
  };

  inline PushoutVerdict pushout_along(FinCategory const& D,
                                      MorphClass const& cls, MorId s,
                                      MorId f) {
    PushoutVerdict v;
    auto           po = find_pushout(D, s, f);
    if (!po) {
      return v;
    }
    v.exists = true;
    for (ObjId q = 0; q < static_cast<ObjId>(D.num_objects()) && !v.in_class;
         ++q) {
      for (MorId h : D.hom(po->apex, q)) {
        if (inverse_in(D, h) && cls.contains(D.compose(h, po->along_second))) {
          v.in_class = true;
          break;
        }
      }
    }
    return v;
  }

  inline std::vector<bool> image_objects(LocalisationSetup const& L) {
    std::vector<bool> in(L.D->num_objects(), false);
    for (ObjId c = 0; c < static_cast<ObjId>(L.C->num_objects()); ++c) {
      in[L.T.obj(c)] = true;
    }
    return in;
  }

  // T fully faithful and S = S' restricted along T.
  inline HypothesisReport check_fully_faithful_class(LocalisationSetup const& L,
                                                     std::string id) {
    HypothesisReport r;
    r.id          = std::move(id);
    auto const& C = *L.C;
    auto const& D = *L.D;
    auto const  n = static_cast<ObjId>(C.num_objects());
    for (ObjId a = 0; a < n; ++a) {
      for (ObjId b = 0; b < n; ++b) {
        std::map<MorId, int> hits;
        for (MorId f : C.hom(a, b)) {
          ++hits[L.T.mor(f)];
        }
        for (MorId u : D.hom(L.T.obj(a), L.T.obj(b))) {
          int k = hits.count(u) ? hits[u] : 0;
          record(r, k == 1 ? Status::Holds : Status::Fails,
                 {C.object_name(a), C.object_name(b), D.morphism_name(u)},
                 k == 0 ? "not full" : "not faithful");
        }
      }
    }
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      bool ok = L.S.contains(f) == L.Sprime.contains(L.T.mor(f));
      record(r, ok ? Status::Holds : Status::Fails, {C.morphism_name(f)},
             ok ? "" : "S differs from the restriction of S'");
    }
    return r;
  }

  // (ii): pushouts of S' arrows along arbitrary arrows exist and lie in S'.
  inline HypothesisReport check_riou_pushouts(LocalisationSetup const& L) {
    HypothesisReport r;
    r.id          = "riou.ii";
    auto const& D = *L.D;
    for (MorId s : L.Sprime.members()) {
      if (D.is_identity(s)) {
        continue;
      }
      for (MorId g : D.out(D.src(s))) {
        if (D.is_identity(g)) {
          continue;
        }
        auto v = pushout_along(D, L.Sprime, s, g);
        record(r, v.in_class ? Status::Holds : Status::Fails,
               {D.morphism_name(s), D.morphism_name(g)},
               !v.exists ? "no pushout" : "pushed arrow not in S'");
      }
    }
    return r;
  }

  // (iii): an S' arrow with source in T(C) has its target in T(C).
  inline HypothesisReport check_riou_image(LocalisationSetup const& L) {
    HypothesisReport r;
    r.id          = "riou.iii";
    auto const& D = *L.D;
    auto const  in = image_objects(L);
    for (MorId s : L.Sprime.members()) {
      bool bad = in[D.src(s)] && !in[D.dst(s)];
      record(r, bad ? Status::Fails : Status::Holds, {D.morphism_name(s)},
             bad ? "target outside the image of T" : "");
    }
    return r;
  }

  // (iv): every I_d is nonempty.
  inline HypothesisReport check_riou_nonempty(LocalisationSetup const& L,
                                              std::string id = "riou.iv") {
    HypothesisReport r;
    r.id          = std::move(id);
    auto const& D = *L.D;
    auto const  in = image_objects(L);
    for (ObjId d = 0; d < static_cast<ObjId>(D.num_objects()); ++d) {
      bool found = false;
      for (MorId s : D.out(d)) {
        if (L.Sprime.contains(s) && in[D.dst(s)]) {
          found = true;
          break;
        }
      }
      record(r, found ? Status::Holds : Status::Fails, {D.object_name(d)},
             found ? "" : "I_d empty");
    }
    return r;
  }

  inline std::vector<HypothesisReport> check_riou(LocalisationSetup const& L) {
    return {check_fully_faithful_class(L, "riou.i"), check_riou_pushouts(L),
            check_riou_image(L), check_riou_nonempty(L)};
  }

  // (iii) is reported but does not take part in the conjunction.
  inline Status riou_status(std::vector<HypothesisReport> const& reports) {
    return conjunction(reports, {"riou.i", "riou.ii", "riou.iv"});
  }

  // ---- Diagram lifts -------------------------------------------------------

  struct LiftedSetup {
    FunctorCategory   CE;
    FunctorCategory   DE;
    LocalisationSetup setup;
  };

  // T^E: C^E -> D^E with the pointwise classes S(E), S'(E).
  inline LiftedSetup lift_setup(LocalisationSetup const& L, FinPoset const& E,
                                Budget const& budget = {}) {
    LiftedSetup out{functor_category(L.C, E, budget),
                    functor_category(L.D, E, budget),
                    {}};
    out.setup.name   = L.name + "^" + E.name();
    out.setup.C      = out.CE.category;
    out.setup.D      = out.DE.category;
    out.setup.T      = lift_functor(L.T, out.CE, out.DE);
    out.setup.S      = out.CE.lift(L.S);
    out.setup.Sprime = out.DE.lift(L.Sprime);
    return out;
  }

  namespace detail {

    inline bool is_chain(FinPoset const& E) {
      for (std::size_t i = 0; i < E.size(); ++i) {
        for (std::size_t j = 0; j < E.size(); ++j) {
          if (!E.leq(i, j) && !E.leq(j, i)) {
            return false;
          }
        }
      }
      return true;
    }

    // Finite posets up to isomorphism, with the standard chains.
    inline std::vector<FinPoset> shapes_up_to(std::size_t bound) {
      auto shapes = posets_up_to_iso(bound);
      for (auto& E : shapes) {
        if (is_chain(E)) {
          E = FinPoset::chain(static_cast<int>(E.size()) - 1);
        }
      }
      return shapes;
    }

    inline void fold(HypothesisReport& into, HypothesisReport const& r,
                     std::string const& prefix) {
      if (r.status == Status::Holds) {
        record(into, Status::Holds, {}, "");
        return;
      }
      auto w = r.witness;
      w.insert(w.begin(), prefix);
      record(into, r.status, w, r.id + ": " + r.detail, r.pi1_unknown);
    }

  }  // namespace detail

  // Riou's (i), (ii), (iv) lifted to every shape E with |E| <= bound (p3.a),
  // the base I_d 1-connected (p3.b), and the Simplicial theorem hypotheses
  // for each lift (p3.c). Throws PreconditionViolation when (i), (ii), (iv)
  // do not all hold for the base setup.
  inline std::vector<HypothesisReport> check_p3(LocalisationSetup const& L,
                                                std::size_t   poset_bound,
                                                Budget const& budget = {}) {
    auto base = check_riou(L);
    if (riou_status(base) != Status::Holds) {
      for (auto const& r : base) {
        if (r.id != "riou.iii" && !r.holds()) {
          throw PreconditionViolation(r.id + " does not hold");
        }
      }
    }
    HypothesisReport a;
    a.id = "p3.a";
    HypothesisReport c;
    c.id   = "p3.c";
    auto b = detail::grade_family(L, SliceKind::I, 0, "p3.b", budget);
    for (auto const& E : detail::shapes_up_to(poset_bound)) {
      try {
        auto lifted = lift_setup(L, E, budget);
        for (auto const& r : check_riou(lifted.setup)) {
          if (r.id != "riou.iii") {
            detail::fold(a, r, E.name());
          }
        }
        for (auto const& r : check_t0(lifted.setup, budget)) {
          detail::fold(c, r, E.name());
        }
      } catch (BudgetExceeded const& e) {
        record(a, Status::Unknown, {E.name()}, e.what());
        record(c, Status::Unknown, {E.name()}, e.what());
      }
    }
    return {a, b, c};
  }

  // Bounded form of the referee's lemma: every I_{d.} over a poset with at
  // most `poset_bound` elements is 0-connected (referee.hyp), cross-checked
  // against the 1-connectedness of each I_d (referee.pi1). The lemma's
  // conclusion for all posets is not certified.
  inline std::vector<HypothesisReport> check_referee(LocalisationSetup const& L,
                                                     std::size_t poset_bound,
                                                     Budget const& budget = {}) {
    HypothesisReport hyp;
    hyp.id        = "referee.hyp";
    auto const& D = *L.D;
    for (auto const& E : detail::shapes_up_to(poset_bound)) {
      try {
        for_each_diagram(D, E, [&](Diagram const& d) {
          auto I  = slice_I(L, E, d, budget);
          bool ok = I.zero_connected();
          record(hyp, ok ? Status::Holds : Status::Fails,
                 {E.name(), encode_diagram(D, E, d)},
                 ok ? "" : (I.empty() ? "empty" : "not 0-connected"));
          return hyp.status != Status::Fails;
        });
      } catch (BudgetExceeded const& e) {
        record(hyp, Status::Unknown, {E.name()}, e.what());
      }
      if (hyp.fails()) {
        break;
      }
    }
    auto pi = detail::grade_family(L, SliceKind::I, 0, "referee.pi1", budget);
    return {hyp, pi};
  }

}  // namespace locwb
