#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locwb/connectivity/components.hpp"
#include "locwb/connectivity/group.hpp"
#include "locwb/core/category.hpp"
#include "locwb/core/constructions.hpp"
#include "locwb/core/errors.hpp"

namespace locwb {

  // Edge-path group of the nerve restricted to one component: generators
  // are the non-identity morphisms, a BFS spanning tree is killed and each
  // composable pair (f, g) contributes f g (g f)^-1 in path order.
  inline GroupPresentation pi1_presentation(FinCategory const&      C,
                                            std::vector<int> const& component) {
    if (component.empty()) {
      throw PreconditionViolation("pi1_presentation: empty component");
    }
    std::vector<bool> inside(C.num_objects(), false);
    for (int x : component) {
      inside[x] = true;
    }
    GroupPresentation P;
    std::vector<int>  letter(C.num_morphisms(), 0);  // 0 = identity
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      if (!C.is_identity(f) && inside[C.src(f)]) {
        P.generators.push_back(C.morphism_name(f));
        letter[f] = static_cast<int>(P.generators.size());
      }
    }
    // Spanning tree.
    std::vector<bool> seen(C.num_objects(), false);
    std::vector<int>  queue{component.front()};
    seen[component.front()] = true;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      int x = queue[q];
      for (MorId f : C.out(x)) {
        if (letter[f] && !seen[C.dst(f)]) {
          seen[C.dst(f)] = true;
          queue.push_back(C.dst(f));
          P.relators.push_back({letter[f]});
        }
      }
      for (MorId f : C.in(x)) {
        if (letter[f] && !seen[C.src(f)]) {
          seen[C.src(f)] = true;
          queue.push_back(C.src(f));
          P.relators.push_back({letter[f]});
        }
      }
    }
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      if (!letter[f]) {
        continue;
      }
      for (MorId g : C.out(C.dst(f))) {
        if (!letter[g]) {
          continue;
        }
        GroupWord w{letter[f], letter[g]};
        MorId     h = C.compose(g, f);
        if (letter[h]) {
          w.push_back(-letter[h]);
        }
        P.relators.push_back(std::move(w));
      }
    }
    return P;
  }

  struct FilteringReport {
    bool ordered     = true;
    bool cofiltering = true;
    bool filtering   = true;
    // First failing witnesses, as morphism or object names.
    std::vector<std::string> unordered_pair;   // (a, b) with |hom(a,b)| > 1
    std::vector<std::string> cofiltering_failure;
    std::vector<std::string> filtering_failure;
  };

  namespace detail {

    // Cones pointing into a pair / equalising arrows on the left; with
    // `dual`, cocones and coequalising arrows. Returns an empty vector on
    // success or the failing witness.
    inline std::vector<std::string> cofiltering_witness(FinCategory const& C,
                                                        bool dual = false) {
      auto const n = static_cast<ObjId>(C.num_objects());
      if (n == 0) {
        return {"empty"};
      }
      auto into = [&](ObjId a) { return dual ? C.out(a) : C.in(a); };
      auto other = [&](MorId h) { return dual ? C.dst(h) : C.src(h); };
      std::size_t const words = (static_cast<std::size_t>(n) + 63) / 64;
      std::vector<std::uint64_t> reach(static_cast<std::size_t>(n) * words, 0);
      for (ObjId a = 0; a < n; ++a) {
        for (MorId h : into(a)) {
          ObjId c = other(h);
          reach[a * words + c / 64] |= std::uint64_t{1} << (c % 64);
        }
      }
      for (ObjId a = 0; a < n; ++a) {
        for (ObjId b = a + 1; b < n; ++b) {
          bool found = false;
          for (std::size_t w = 0; w < words && !found; ++w) {
            found = (reach[a * words + w] & reach[b * words + w]) != 0;
          }
          if (!found) {
            return {dual ? "no cocone" : "no cone", C.object_name(a),
                    C.object_name(b)};
          }
        }
      }
      for (ObjId a = 0; a < n; ++a) {
        for (ObjId b = 0; b < n; ++b) {
          auto hs = dual ? C.hom(b, a) : C.hom(a, b);
          for (std::size_t i = 0; i < hs.size(); ++i) {
            for (std::size_t k = i + 1; k < hs.size(); ++k) {
              bool found = false;
              for (MorId h : into(a)) {
                found = dual ? C.compose(h, hs[i]) == C.compose(h, hs[k])
                             : C.compose(hs[i], h) == C.compose(hs[k], h);
                if (found) {
                  break;
                }
              }
              if (!found) {
                return {dual ? "no coequalising arrow" : "no equalising arrow",
                        C.morphism_name(hs[i]), C.morphism_name(hs[k])};
              }
            }
          }
        }
      }
      return {};
    }

  }  // namespace detail

  inline FilteringReport filtering_check(FinCategory const& C) {
    FilteringReport r;
    auto const      n = static_cast<ObjId>(C.num_objects());
    for (ObjId a = 0; a < n && r.ordered; ++a) {
      for (ObjId b = 0; b < n && r.ordered; ++b) {
        if (C.hom(a, b).size() > 1) {
          r.ordered        = false;
          r.unordered_pair = {C.object_name(a), C.object_name(b)};
        }
      }
    }
    r.cofiltering_failure = detail::cofiltering_witness(C);
    r.cofiltering         = r.cofiltering_failure.empty();
    r.filtering_failure   = detail::cofiltering_witness(C, true);
    r.filtering           = r.filtering_failure.empty();
    return r;
  }

  struct ComponentPi1 {
    std::vector<int>  objects;
    GroupPresentation presentation;
    TrivialityVerdict verdict;
  };

  struct ConnectivityReport {
    bool                      nonempty = false;
    std::vector<ComponentPi1> components;
    FilteringReport           filtering;
    // Name of the sufficient condition for infinite connectedness, if any:
    // "cofiltering", "filtering", "initial object", "terminal object".
    std::optional<std::string> infinity;

    bool zero_connected() const {
      return nonempty && components.size() == 1;
    }

    bool one_connected() const {
      return zero_connected()
             && components.front().verdict.status == Pi1Status::Trivial;
    }

    // Three-valued 1-connectedness: nullopt when pi_1 is Unknown.
    std::optional<bool> one_connected_verdict() const {
      if (!zero_connected()) {
        return false;
      }
      switch (components.front().verdict.status) {
        case Pi1Status::Trivial: return true;
        case Pi1Status::Nontrivial: return false;
        case Pi1Status::Unknown: return std::nullopt;
      }
      return std::nullopt;
    }
  };

  inline ConnectivityReport connectivity(FinCategory const& C,
                                         Budget const&      budget = {}) {
    ConnectivityReport r;
    r.nonempty = C.num_objects() > 0;
    for (auto& comp : pi0(C)) {
      ComponentPi1 c;
      c.objects      = comp;
      c.presentation = pi1_presentation(C, comp);
      c.verdict      = decide_triviality(c.presentation, budget);
      r.components.push_back(std::move(c));
    }
    r.filtering = filtering_check(C);
    if (!r.nonempty) {
      return r;
    }
    if (r.filtering.cofiltering) {
      r.infinity = "cofiltering";
    } else if (r.filtering.filtering) {
      r.infinity = "filtering";
    } else if (initial_object(C)) {
      r.infinity = "initial object";
    } else if (terminal_object(C)) {
      r.infinity = "terminal object";
    }
    return r;
  }

  // Replays the certificate carried by a verdict against its presentation.
  inline bool verify_verdict(TrivialityVerdict const& v) {
    auto const& P = v.simplified;
    switch (v.status) {
      case Pi1Status::Unknown: return true;
      case Pi1Status::Trivial:
        if (P.generators.empty()) {
          return true;
        }
        return v.cosets && v.cosets->index == 1
               && verify_permutation_action(P, v.cosets->action, 1);
      case Pi1Status::Nontrivial:
        if (v.abelian) {
          return verify_abelian_certificate(P, *v.abelian);
        }
        if (v.cosets) {
          return v.cosets->index > 1
                 && verify_permutation_action(P, v.cosets->action,
                                              v.cosets->index)
                 && is_nontrivial_action(v.cosets->action);
        }
        if (v.quotient) {
          auto n = v.quotient->empty() ? 0 : v.quotient->front().size();
          return verify_permutation_action(P, *v.quotient, n)
                 && is_nontrivial_action(*v.quotient);
        }
        return false;
    }
    return false;
  }

}  // namespace locwb
