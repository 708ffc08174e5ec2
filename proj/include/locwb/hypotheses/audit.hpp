#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "locwb/core/setup.hpp"
#include "locwb/hypotheses/report.hpp"
#include "locwb/hypotheses/riou.hpp"
#include "locwb/hypotheses/sufficient.hpp"
#include "locwb/hypotheses/t0.hpp"

namespace locwb {

  // Verdicts of one setup, keyed by hypothesis id.
  struct AuditCase {
    std::string                   name;
    std::vector<HypothesisReport> reports;

    Status status(std::vector<std::string> const& ids) const {
      return conjunction(reports, ids);
    }
    bool pi1_unknown(std::vector<std::string> const& ids) const {
      for (auto const& id : ids) {
        auto const* r = find_report(reports, id);
        if (r && r->status == Status::Unknown && r->pi1_unknown) {
          return true;
        }
      }
      return false;
    }
  };

  struct AuditOptions {
    bool        riou    = true;
    bool        c2      = true;
    bool        p2      = true;
    bool        referee = false;
    std::size_t poset_bound = 3;
  };

  inline AuditCase audit_case(LocalisationSetup const& L,
                              AuditOptions const&      opt    = {},
                              Budget const&            budget = {}) {
    AuditCase a;
    a.name = L.name;
    auto add = [&](std::vector<HypothesisReport> rs) {
      for (auto& r : rs) {
        a.reports.push_back(std::move(r));
      }
    };
    add(check_t0(L, budget));
    if (opt.riou) {
      add(check_riou(L));
    }
    if (opt.c2) {
      add({check_c2_prime(L, JVariant::UnderT, budget)});
    }
    if (opt.p2) {
      add(check_p2(L, budget));
    }
    if (opt.referee) {
      add(check_referee(L, opt.poset_bound, budget));
    }
    return a;
  }

  // One audited implication. A case counts when the antecedent Holds; it
  // is excluded when the antecedent or the consequent is Unknown. For
  // open implications a failure is recorded as a counterexample, not a
  // violation.
  struct Implication {
    std::string              name;
    std::vector<std::string> antecedent;
    std::vector<std::string> consequent;
    bool                     open = false;
    // Only a Fails consequent counts against the implication; Unknown is
    // accepted (used where the consequent is only semi-decidable).
    bool unknown_ok = false;
  };

  struct ImplicationTally {
    Implication              implication;
    std::size_t              antecedent_held = 0;
    std::size_t              confirmed       = 0;
    std::size_t              excluded        = 0;
    std::size_t              pi1_blamed      = 0;
    std::vector<std::string> violations;  // case names
  };

  inline std::vector<Implication> standard_implications(AuditOptions const& opt = {}) {
    std::vector<Implication> out;
    if (opt.riou) {
      out.push_back({"riou=>t0", {"riou.i", "riou.ii", "riou.iv"},
                     {"t0.0", "t0.1", "t0.2"}});
      if (opt.c2) {
        out.push_back({"riou=>c2.1'", {"riou.i", "riou.ii", "riou.iv"},
                       {"c2.1'"}, true});
      }
    }
    if (opt.c2) {
      out.push_back({"c2=>t0.1,t0.2", {"t0.0", "c2.1'"}, {"t0.1", "t0.2"}});
    }
    if (opt.p2) {
      out.push_back({"p2=>t0", {"p2.d1", "p2.d2", "p2.d3", "p2.d4", "p2.d5"},
                     {"p2.conclusion", "t0.0", "t0.1", "t0.2"}});
    }
    if (opt.referee) {
      out.push_back({"referee=>pi1", {"referee.hyp"}, {"referee.pi1"}, false,
                     true});
    }
    return out;
  }

  struct AuditReport {
    std::size_t                   cases = 0;
    std::vector<ImplicationTally> tallies;
    // Setups where (0), (1), (2) hold but (1') fails.
    std::size_t              t0_without_c2 = 0;
    std::vector<std::string> t0_without_c2_cases;

    std::size_t violations() const {
      std::size_t n = 0;
      for (auto const& t : tallies) {
        if (!t.implication.open) {
          n += t.violations.size();
        }
      }
      return n;
    }

    ImplicationTally const* tally(std::string const& name) const {
      for (auto const& t : tallies) {
        if (t.implication.name == name) {
          return &t;
        }
      }
      return nullptr;
    }
  };

  // Whether `c` violates `imp` (antecedent Holds, consequent Fails).
  inline bool violates(AuditCase const& c, Implication const& imp) {
    return c.status(imp.antecedent) == Status::Holds
           && c.status(imp.consequent) == Status::Fails;
  }

  class ImplicationAudit {
   public:
    explicit ImplicationAudit(AuditOptions opt = {})
        : _opt(opt) {
      for (auto& imp : standard_implications(opt)) {
        ImplicationTally t;
        t.implication = std::move(imp);
        _report.tallies.push_back(std::move(t));
      }
    }

    AuditOptions const& options() const {
      return _opt;
    }

    // Folds one case; returns the implications it violates.
    std::vector<std::string> add(AuditCase const& c) {
      std::vector<std::string> hit;
      ++_report.cases;
      for (auto& t : _report.tallies) {
        auto const& imp = t.implication;
        Status      a   = c.status(imp.antecedent);
        if (a == Status::Unknown) {
          ++t.excluded;
          continue;
        }
        if (a == Status::Fails) {
          continue;
        }
        ++t.antecedent_held;
        Status b = c.status(imp.consequent);
        if (b == Status::Unknown && !imp.unknown_ok) {
          ++t.excluded;
          t.pi1_blamed += c.pi1_unknown(imp.consequent);
          continue;
        }
        if (b == Status::Fails) {
          t.violations.push_back(c.name);
          hit.push_back(imp.name);
        } else {
          ++t.confirmed;
        }
      }
      if (c.status({"t0.0", "t0.1", "t0.2"}) == Status::Holds
          && c.status({"c2.1'"}) == Status::Fails) {
        ++_report.t0_without_c2;
        _report.t0_without_c2_cases.push_back(c.name);
      }
      return hit;
    }

    AuditReport const& report() const {
      return _report;
    }

   private:
    AuditOptions _opt;
    AuditReport  _report;
  };

  inline AuditReport implication_audit(
      std::vector<LocalisationSetup> const& stream, AuditOptions const& opt = {},
      Budget const& budget = {}) {
    ImplicationAudit audit(opt);
    for (auto const& L : stream) {
      audit.add(audit_case(L, opt, budget));
    }
    return audit.report();
  }

}  // namespace locwb
