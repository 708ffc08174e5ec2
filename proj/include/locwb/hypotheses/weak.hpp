#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "locwb/comma/slices.hpp"
#include "locwb/core/functor_category.hpp"
#include "locwb/core/setup.hpp"
#include "locwb/hypotheses/report.hpp"
#include "locwb/hypotheses/t0.hpp"
#include "locwb/localisation/model.hpp"

namespace locwb {

  // Subcategories I'_x of the slices <I>_x built over the strong
  // saturations, for x an object (n = 0), an arrow (n = 1) or a composable
  // pair (n = 2). A selection lists slice object names; indices without a
  // selection take the whole slice. Subcategories are full.
  struct WeakReplacement {
    std::string name;
    std::map<std::pair<int, std::vector<std::string>>, std::set<std::string>>
        selections;
  };

  namespace detail {

    struct WeakSlice {
      SliceIndex        index;
      Slice             saturated;
      std::vector<bool> keep;
      Slice             selected;
    };

    inline int find_object(Slice const& s, SliceObject const& o) {
      for (std::size_t x = 0; x < s.objects.size(); ++x) {
        if (s.objects[x] == o) {
          return static_cast<int>(x);
        }
      }
      return -1;
    }

  }  // namespace detail

  // Stability of the selections under pullback along S', face stability,
  // the degenerate-object bullet, and the connectivity grades of the
  // Simplicial theorem on the I'. Everything is Unknown when a strong
  // saturation could not be decided.
  inline std::vector<HypothesisReport> check_t1v(LocalisationSetup const& L,
                                                 WeakReplacement const& W,
                                                 Budget const& budget = {}) {
    HypothesisReport valid, face, unit;
    valid.id = "t1v.valid";
    face.id  = "t1v.face";
    unit.id  = "t1v.unit";
    std::vector<HypothesisReport> grades(3);
    for (int n = 0; n < 3; ++n) {
      grades[n].id = "t1v." + std::to_string(n);
    }

    auto const& D    = *L.D;
    auto        satC = saturation(L.C, L.S.mask(), budget);
    auto        satD = saturation(L.D, L.Sprime.mask(), budget);
    if (!satC.exact || !satD.exact) {
      std::vector<HypothesisReport> out{valid, face, unit};
      out.insert(out.end(), grades.begin(), grades.end());
      for (auto& r : out) {
        record(r, Status::Unknown, {}, "strong saturation undecided");
      }
      return out;
    }
    SliceContext ctx{L.C, L.D, &L.T, satC.members, satD.members};

    std::vector<std::map<Diagram, detail::WeakSlice>> fam(3);
    try {
      for (int n = 0; n < 3; ++n) {
        for (auto const& ix : slice_indices(D, n)) {
          detail::WeakSlice ws{ix, build_slice(ctx, ix.shape, ix.diagram, budget),
                               {}, {}};
          auto it = W.selections.find({n, ix.names});
          ws.keep.assign(ws.saturated.size(), it == W.selections.end());
          if (it != W.selections.end()) {
            for (auto const& nm : it->second) {
              int x = ws.saturated.find(nm);
              if (x < 0) {
                auto w = ix.names;
                w.push_back(nm);
                record(valid, Status::Fails, w,
                       "not an object of the saturated slice");
                continue;
              }
              ws.keep[x] = true;
            }
          }
          ws.selected = ws.saturated.restricted(ws.keep);
          fam[n].emplace(ix.diagram, std::move(ws));
        }
      }
    } catch (BudgetExceeded const& e) {
      std::vector<HypothesisReport> out{valid, face, unit};
      out.insert(out.end(), grades.begin(), grades.end());
      for (auto& r : out) {
        record(r, Status::Unknown, {}, e.what());
      }
      return out;
    }

    // Pullback along morphisms of S'(Delta^n): (c, t) |-> (c, t sigma).
    for (int n = 0; n < 3; ++n) {
      try {
        auto DE = functor_category(L.D, FinPoset::chain(n), budget);
        auto SE = DE.lift(L.Sprime);
        for (MorId sig : SE.members()) {
          auto const& from = fam[n].at(DE.objects[DE.category->src(sig)]);
          auto const& to   = fam[n].at(DE.objects[DE.category->dst(sig)]);
          auto const& comp = DE.components[sig];
          for (std::size_t x = 0; x < to.saturated.size(); ++x) {
            if (!to.keep[x]) {
              continue;
            }
            SliceObject o = to.saturated.objects[x];
            for (std::size_t e = 0; e < o.s.size(); ++e) {
              o.s[e] = D.compose(o.s[e], comp[e]);
            }
            int  y  = detail::find_object(from.saturated, o);
            bool ok = y >= 0 && from.keep[y];
            auto w  = to.index.names;
            w.push_back(DE.category->morphism_name(sig));
            w.push_back(to.saturated.names[x]);
            record(valid, ok ? Status::Holds : Status::Fails, w,
                   ok ? "" : "pullback leaves the selection");
          }
        }
      } catch (BudgetExceeded const& e) {
        record(valid, Status::Unknown, {std::to_string(n)}, e.what());
      }
    }

    // Faces.
    auto check_face = [&](detail::WeakSlice const& ws, FinPoset const& E,
                          std::vector<int> const& elems, int m,
                          Diagram const& target, std::string const& label) {
      auto const& tgt = fam[m].at(target);
      for (std::size_t x = 0; x < ws.saturated.size(); ++x) {
        if (!ws.keep[x]) {
          continue;
        }
        auto r  = restrict_object(ws.saturated.objects[x], E, elems);
        int  y  = detail::find_object(tgt.saturated, r);
        bool ok = y >= 0 && tgt.keep[y];
        auto w  = ws.index.names;
        w.push_back(label);
        w.push_back(ws.saturated.names[x]);
        record(face, ok ? Status::Holds : Status::Fails, w,
               ok ? "" : "face image outside the selection");
      }
    };
    auto const E1 = FinPoset::chain(1);
    auto const E2 = FinPoset::chain(2);
    for (auto const& [d, ws] : fam[1]) {
      check_face(ws, E1, {0}, 0, point_diagram(d.obj[0]), "d0");
      check_face(ws, E1, {1}, 0, point_diagram(d.obj[1]), "d1");
    }
    for (auto const& [d, ws] : fam[2]) {
      MorId f1 = d.arr[E2.pair_index(0, 1)];
      MorId f2 = d.arr[E2.pair_index(1, 2)];
      check_face(ws, E2, {0, 1}, 1, arrow_diagram(D, f1), "f1");
      check_face(ws, E2, {1, 2}, 1, arrow_diagram(D, f2), "f2");
      check_face(ws, E2, {0, 2}, 1, arrow_diagram(D, D.compose(f2, f1)),
                 "f2f1");
    }

    // An object [1_d -> T(1_c)] in I'_{1_d}.
    auto const& C = *L.C;
    for (ObjId d = 0; d < static_cast<ObjId>(D.num_objects()); ++d) {
      auto const& ws    = fam[1].at(arrow_diagram(D, D.identity(d)));
      bool        found = false;
      for (std::size_t x = 0; x < ws.saturated.size() && !found; ++x) {
        found = ws.keep[x] && C.is_identity(ws.saturated.objects[x].c.arr[0]);
      }
      record(unit, found ? Status::Holds : Status::Fails, {D.object_name(d)},
             found ? "" : "no object over an identity of C");
    }

    for (int n = 0; n < 3; ++n) {
      for (auto const& [d, ws] : fam[n]) {
        try {
          auto g = slice_grade(ws.selected, 1 - n, budget);
          record(grades[n], g.status, ws.index.names, g.detail, g.pi1_unknown);
        } catch (BudgetExceeded const& e) {
          record(grades[n], Status::Unknown, ws.index.names, e.what());
        }
      }
    }
    std::vector<HypothesisReport> out{valid, face, unit};
    out.insert(out.end(), grades.begin(), grades.end());
    return out;
  }

}  // namespace locwb
