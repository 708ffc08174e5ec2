#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "locwb/comma/comma.hpp"
#include "locwb/comma/slices.hpp"
#include "locwb/connectivity/connectivity.hpp"
#include "locwb/core/constructions.hpp"
#include "locwb/core/setup.hpp"
#include "locwb/hypotheses/report.hpp"
#include "locwb/hypotheses/riou.hpp"
#include "locwb/hypotheses/t0.hpp"

namespace locwb {

  // Selects K_d among the objects of J_d (by index into J's objects).
  using KSelector = std::function<bool(ObjId d, Slice const& J, int j)>;

  namespace detail {

    inline bool has_arrow(FinCategory const& X, ObjId a, ObjId b) {
      return !X.hom(a, b).empty();
    }

    inline bool isomorphic_objects(FinCategory const& X, ObjId a, ObjId b) {
      for (MorId u : X.hom(a, b)) {
        if (inverse_in(X, u)) {
          return true;
        }
      }
      return false;
    }

  }  // namespace detail

  // Cofiltering conditions on I_d and I_d/j (a), their sufficient
  // conditions (b), and the product-based criterion (c). Without a
  // selector K_d is the image of I_d in J_d.
  inline std::vector<HypothesisReport> check_p1(LocalisationSetup const& L,
                                                KSelector const* K = nullptr,
                                                Budget const& budget = {},
                                                JVariant variant = JVariant::UnderT) {
    HypothesisReport a1, a2, b1, b2, b3, c0, c1, c2;
    a1.id = "p1.a1";
    a2.id = "p1.a2";
    b1.id = "p1.b1";
    b2.id = "p1.b2";
    b3.id = "p1.b3";
    c0.id = "p1.c0";
    c1.id = "p1.c1";
    c2.id = "p1.c2";

    auto const& C = *L.C;
    auto const& D = *L.D;

    // (b1): T(f) s = T(g) s with s in S' forces f = g.
    for (ObjId c = 0; c < static_cast<ObjId>(C.num_objects()); ++c) {
      auto out = C.out(c);
      for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t k = i + 1; k < out.size(); ++k) {
          MorId f = out[i];
          MorId g = out[k];
          if (C.dst(f) != C.dst(g)) {
            continue;
          }
          for (MorId s : D.in(L.T.obj(c))) {
            if (!L.Sprime.contains(s)) {
              continue;
            }
            bool bad = D.compose(L.T.mor(f), s) == D.compose(L.T.mor(g), s);
            record(b1, bad ? Status::Fails : Status::Holds,
                   {C.morphism_name(f), C.morphism_name(g), D.morphism_name(s)},
                   bad ? "T(f) s = T(g) s with f != g" : "");
          }
        }
      }
    }

    auto products = has_finite_products(C);
    bool prod_ok  = products.pass() && preserves_products(L.T, products);
    record(c0, prod_ok ? Status::Holds : Status::Fails, {},
           !products.pass() ? "C lacks finite products"
                            : "T does not preserve products");

    for (ObjId d = 0; d < static_cast<ObjId>(D.num_objects()); ++d) {
      auto const& dn = D.object_name(d);
      try {
        auto        I   = slice_I(L, d, budget);
        auto        J   = slice_J(L, d, variant, budget);
        auto        Phi = phi_comparison(L, I, J, variant);
        auto const& IC  = *I.category();
        auto const& JC  = *J.category();

        auto fr = filtering_check(IC);
        record(a1, fr.cofiltering ? Status::Holds : Status::Fails, {dn},
               fr.cofiltering ? "" : "I_d not cofiltering");
        record(b2, I.empty() ? Status::Fails : Status::Holds, {dn},
               I.empty() ? "I_d empty" : "");

        for (ObjId j = 0; j < static_cast<ObjId>(J.size()); ++j) {
          auto over_j = over(Phi, j, budget);
          auto fj     = filtering_check(*over_j.carrier);
          record(a2, fj.cofiltering ? Status::Holds : Status::Fails,
                 {dn, J.names[j]},
                 fj.cofiltering ? "" : "I_d/j empty or not cofiltering");
        }

        for (ObjId i = 0; i < static_cast<ObjId>(I.size()); ++i) {
          for (ObjId j = 0; j < static_cast<ObjId>(J.size()); ++j) {
            bool found = false;
            for (ObjId x = 0; x < static_cast<ObjId>(I.size()) && !found; ++x) {
              found = detail::has_arrow(IC, x, i)
                      && detail::has_arrow(JC, Phi.obj(x), j);
            }
            record(b3, found ? Status::Holds : Status::Fails,
                   {dn, I.names[i], J.names[j]},
                   found ? "" : "no common refinement");
          }
        }

        std::vector<bool> inK(J.size(), false);
        for (ObjId j = 0; j < static_cast<ObjId>(J.size()); ++j) {
          inK[j] = K != nullptr ? (*K)(d, J, j) : false;
        }
        if (K == nullptr) {
          for (ObjId x = 0; x < static_cast<ObjId>(I.size()); ++x) {
            inK[Phi.obj(x)] = true;
          }
        }
        bool nonempty = std::find(inK.begin(), inK.end(), true) != inK.end();
        record(c1, nonempty ? Status::Holds : Status::Fails, {dn},
               nonempty ? "" : "K_d empty");
        for (ObjId x = 0; x < static_cast<ObjId>(I.size()); ++x) {
          bool ok = inK[Phi.obj(x)];
          record(c1, ok ? Status::Holds : Status::Fails, {dn, I.names[x]},
                 ok ? "" : "I_d not contained in K_d");
        }
        for (ObjId k = 0; k < static_cast<ObjId>(J.size()); ++k) {
          if (!inK[k]) {
            continue;
          }
          bool ok = false;
          for (ObjId x = 0; x < static_cast<ObjId>(I.size()) && !ok; ++x) {
            ok = detail::has_arrow(JC, Phi.obj(x), k);
          }
          record(c1, ok ? Status::Holds : Status::Fails, {dn, J.names[k]},
                 ok ? "" : "I_d/k empty");
          for (ObjId j = 0; j < static_cast<ObjId>(J.size()); ++j) {
            auto        w = find_product(JC, j, k);
            bool        in = false;
            std::string why = "no product in J_d";
            if (w) {
              why = "product outside K_d";
              for (ObjId p = 0; p < static_cast<ObjId>(J.size()) && !in; ++p) {
                in = inK[p] && detail::isomorphic_objects(JC, w->apex, p);
              }
            }
            record(c2, in ? Status::Holds : Status::Fails,
                   {dn, J.names[j], J.names[k]}, in ? "" : why);
          }
        }
      } catch (BudgetExceeded const& e) {
        for (auto* r : {&a1, &a2, &b2, &b3, &c1, &c2}) {
          record(*r, Status::Unknown, {dn}, e.what());
        }
      }
    }
    return {a1, a2, b1, b2, b3, c0, c1, c2};
  }

  // Good position (pushout of s along f exists with pushed arrow in S'),
  // memoised per pair.
  class GoodPosition {
   public:
    explicit GoodPosition(LocalisationSetup const& L) : _L(L) {}

    bool operator()(MorId s, MorId f) {
      auto key = std::make_pair(s, f);
      auto it  = _memo.find(key);
      if (it != _memo.end()) {
        return it->second;
      }
      bool v      = pushout_along(*_L.D, _L.Sprime, s, f).in_class;
      _memo[key] = v;
      return v;
    }

   private:
    LocalisationSetup const&         _L;
    std::map<std::pair<MorId, MorId>, bool> _memo;
  };

  // Conditions (d1)-(d5) and, as p2.conclusion, their consequence that
  // every I_{d.} over Delta^0..2 is ordered and filtering.
  inline std::vector<HypothesisReport> check_p2(LocalisationSetup const& L,
                                                Budget const& budget = {}) {
    HypothesisReport d1, d2, d3, d5, concl;
    d1.id    = "p2.d1";
    d2.id    = "p2.d2";
    d3.id    = "p2.d3";
    d5.id    = "p2.d5";
    concl.id = "p2.conclusion";

    auto const&  D = *L.D;
    GoodPosition good(L);
    auto         name = [&](MorId f) { return D.morphism_name(f); };

    // (d1): u s = v s with s, u, v in S' forces u = v.
    for (MorId s : L.Sprime.members()) {
      auto out = D.out(D.dst(s));
      for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t k = i + 1; k < out.size(); ++k) {
          MorId u = out[i];
          MorId v = out[k];
          if (D.dst(u) != D.dst(v) || !L.Sprime.contains(u)
              || !L.Sprime.contains(v)) {
            continue;
          }
          bool bad = D.compose(u, s) == D.compose(v, s);
          record(d1, bad ? Status::Fails : Status::Holds,
                 {name(s), name(u), name(v)},
                 bad ? "u s = v s with u != v" : "");
        }
      }
    }

    for (MorId s : L.Sprime.members()) {
      for (MorId f : D.out(D.src(s))) {
        // (d2): f in S'.
        if (L.Sprime.contains(f)) {
          bool ok = good(s, f);
          record(d2, ok ? Status::Holds : Status::Fails, {name(s), name(f)},
                 ok ? "" : "not in good position");
        }
        // (d3): good for g f implies good for f.
        for (MorId g : D.out(D.dst(f))) {
          bool bad = good(s, D.compose(g, f)) && !good(s, f);
          record(d3, bad ? Status::Fails : Status::Holds,
                 {name(s), name(g), name(f)},
                 bad ? "good for g f but not for f" : "");
        }
      }
    }

    auto d4   = check_fully_faithful_class(L, "p2.d4");
    auto imgs = image_objects(L);
    for (MorId f = 0; f < static_cast<MorId>(D.num_morphisms()); ++f) {
      bool found = false;
      for (MorId s : D.out(D.src(f))) {
        if (L.Sprime.contains(s) && imgs[D.dst(s)] && good(s, f)) {
          found = true;
          break;
        }
      }
      record(d5, found ? Status::Holds : Status::Fails, {name(f)},
             found ? "" : "no object of I_d in good position");
    }

    // The conclusion is only evaluated where it is claimed.
    std::vector<HypothesisReport> const hyps{d1, d2, d3, d4, d5};
    if (conjunction(hyps, {"p2.d1", "p2.d2", "p2.d3", "p2.d4", "p2.d5"})
        != Status::Holds) {
      record(concl, Status::Unknown, {}, "not evaluated: (d1)-(d5) do not all hold");
      return {d1, d2, d3, d4, d5, concl};
    }
    for (int n = 0; n <= 2; ++n) {
      for (auto const& ix : slice_indices(D, n)) {
        try {
          auto I  = slice_I(L, ix.shape, ix.diagram, budget);
          auto fr = filtering_check(*I.category());
          bool ok = fr.ordered && fr.filtering;
          record(concl, ok ? Status::Holds : Status::Fails, ix.names,
                 ok ? "" : (fr.ordered ? "not filtering" : "not ordered"));
        } catch (BudgetExceeded const& e) {
          record(concl, Status::Unknown, ix.names, e.what());
        }
      }
    }
    return {d1, d2, d3, d4, d5, concl};
  }

  inline Status p2_status(std::vector<HypothesisReport> const& reports) {
    return conjunction(reports, {"p2.d1", "p2.d2", "p2.d3", "p2.d4", "p2.d5"});
  }

}  // namespace locwb
