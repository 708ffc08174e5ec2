#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "locwb/comma/slices.hpp"
#include "locwb/connectivity/connectivity.hpp"
#include "locwb/core/errors.hpp"
#include "locwb/core/setup.hpp"
#include "locwb/core/validation.hpp"
#include "locwb/dsl/json.hpp"
#include "locwb/dsl/loader.hpp"
#include "locwb/envelope/envelope.hpp"
#include "locwb/fuzz/generate.hpp"
#include "locwb/fuzz/shrink.hpp"
#include "locwb/hypotheses/audit.hpp"
#include "locwb/hypotheses/riou.hpp"
#include "locwb/hypotheses/sufficient.hpp"
#include "locwb/hypotheses/t0.hpp"
#include "locwb/hypotheses/under.hpp"
#include "locwb/hypotheses/weak.hpp"
#include "locwb/localisation/equivalence.hpp"
#include "locwb/localisation/model.hpp"

namespace locwb::cli {

  using Json = nlohmann::ordered_json;

  inline constexpr int kSchemaVersion = 1;

  enum Exit { kPass = 0, kFail = 1, kInconclusive = 2, kInvalid = 3 };

  struct Options {
    std::string command;     // validate, comma, connectivity, check, ...
    std::string hypothesis;  // for check: t0, c2, c1, riou, ...
    std::string setup;       // default: the first declared setup
    std::string category;    // connectivity of a category instead of slices
    std::string object;      // c1: one object of C (default: all)
    std::string weak;        // t1v
    std::string kselector;   // p1
    std::string functor;     // kan: F from D (default: the quotient of D)
    std::uint64_t seed          = 1;
    std::size_t   count         = 100;
    std::string   strategy      = "mixed";
    int           max_objects   = 5;
    int           max_morphisms = 10;
    bool          referee       = false;  // fuzz-audit: add the referee audit
    Budget        budget;
  };

  struct Outcome {
    int  exit_code = kPass;
    Json report;

    std::string text() const {
      return report.dump(2) + "\n";
    }
  };

  inline std::string digest(std::string const& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
  }

  namespace detail {

    struct Record {
      std::string              id;
      Status                   status = Status::Holds;
      std::vector<std::string> witness;
      std::string              detail;
      std::size_t              checked  = 0;
      bool                     blocking = true;
      Json                     certificate;
    };

    inline Record from_report(HypothesisReport const& r, bool blocking = true) {
      return {r.id, r.status, r.witness, r.detail, r.checked, blocking, nullptr};
    }

    inline Json to_json(Record const& r) {
      Json j = {{"id", r.id},
                {"status", to_string(r.status)},
                {"checked", r.checked},
                {"witness", r.witness},
                {"detail", r.detail}};
      if (!r.blocking) {
        j["blocking"] = false;
      }
      if (!r.certificate.is_null()) {
        j["certificate"] = r.certificate;
      }
      return j;
    }

    inline Json names_of(FinCategory const& C, std::vector<int> const& objs) {
      Json out = Json::array();
      for (int x : objs) {
        out.push_back(C.object_name(x));
      }
      return out;
    }

    inline Json hom_table(FinCategory const& C) {
      Json rows = Json::array();
      for (ObjId a = 0; a < static_cast<ObjId>(C.num_objects()); ++a) {
        Json row = Json::array();
        for (ObjId b = 0; b < static_cast<ObjId>(C.num_objects()); ++b) {
          row.push_back(C.hom(a, b).size());
        }
        rows.push_back(row);
      }
      return {{"objects", C.object_names()}, {"hom_sizes", rows}};
    }

    inline std::string violation_text(ValidationReport const& v) {
      std::string out;
      for (auto const& x : v.violations) {
        out += (out.empty() ? "" : "; ") + x.law;
        for (auto const& id : x.ids) {
          out += " " + id;
        }
      }
      return out;
    }

    inline Record validation_record(std::string id, ValidationReport const& v) {
      Record r;
      r.id      = std::move(id);
      r.checked = 1;
      if (!v.pass()) {
        r.status  = Status::Fails;
        r.witness = v.violations.front().ids;
        r.detail  = violation_text(v);
      }
      return r;
    }

    inline LocalisationSetup const& pick_setup(dsl::Workspace const& ws,
                                               std::string const&    name) {
      if (name.empty()) {
        if (ws.setup_order.empty()) {
          throw InvalidInput("the document declares no setup");
        }
        return ws.setups.at(ws.setup_order.front());
      }
      auto it = ws.setups.find(name);
      if (it == ws.setups.end()) {
        throw InvalidInput("unknown setup '" + name + "'");
      }
      return it->second;
    }

    inline void require_valid(LocalisationSetup const& L) {
      auto v = validate_setup(L);
      if (!v.pass()) {
        throw InvalidInput("setup " + L.name + " is invalid: " + violation_text(v));
      }
    }

    // Status of a connectivity grade: 1 = 1-connected, 0 = connected,
    // -1 = nonempty, -2 = empty; nullopt when pi_1 is undecided.
    inline Json connectivity_json(FinCategory const& C, Budget const& budget,
                                  Status& status) {
      auto rep = connectivity(C, budget);
      Json comps = Json::array();
      bool undecided = false;
      for (auto const& c : rep.components) {
        Json comp = {{"objects", names_of(C, c.objects)},
                     {"pi1", to_string(c.verdict.status)},
                     {"stage", c.verdict.stage}};
        if (c.verdict.abelian) {
          comp["abelian_invariants"] = c.verdict.abelian->invariants;  // 0 = Z
        }
        comps.push_back(comp);
        undecided = undecided || c.verdict.status == Pi1Status::Unknown;
      }
      Json grade;
      if (!rep.nonempty) {
        grade = -2;
      } else if (!rep.zero_connected()) {
        grade = -1;
      } else if (auto one = rep.one_connected_verdict()) {
        grade = *one ? 1 : 0;
      } else {
        grade = nullptr;
      }
      status = undecided && rep.zero_connected() ? Status::Unknown : Status::Holds;
      Json j = {{"grade", grade}, {"components", comps}};
      j["contractible_by"] = rep.infinity ? Json(*rep.infinity) : Json(nullptr);
      return j;
    }

    class Runner {
     public:
      Runner(Options const& opt, std::string const& input)
          : _opt(opt),
            _input(input) {}

      std::vector<Record> run() {
        auto const& cmd = _opt.command;
        if (cmd == "fuzz-audit") {
          return fuzz_audit();
        }
        _doc = dsl::parse(_input);
        _ws  = dsl::load(_doc, _opt.budget);
        if (cmd == "validate") {
          return validate();
        }
        if (cmd == "export") {
          _export = dsl::to_json(_doc);
          return {};
        }
        if (cmd == "connectivity" && !_opt.category.empty()) {
          return category_connectivity();
        }
        auto const& L = pick_setup(_ws, _opt.setup);
        require_valid(L);
        _setup = L.name;
        if (cmd == "comma") {
          return comma(L);
        }
        if (cmd == "connectivity") {
          return slice_connectivity(L);
        }
        if (cmd == "check") {
          return check(L);
        }
        if (cmd == "localize") {
          return localize(L);
        }
        if (cmd == "equivalence") {
          return equivalence(L);
        }
        if (cmd == "kan") {
          return kan(L);
        }
        if (cmd == "envelope") {
          return envelope(L);
        }
        throw InvalidInput("unknown command '" + cmd + "'");
      }

      std::string const& setup_name() const {
        return _setup;
      }

      Json const& exported() const {
        return _export;
      }

     private:
      std::vector<Record> validate() {
        std::vector<Record> out;
        for (auto const& [name, C] : _ws.categories) {
          out.push_back(validation_record("validate.category." + name,
                                          validate_category(*C)));
        }
        for (auto const& [name, S] : _ws.classes) {
          out.push_back(validation_record("validate.class." + name, validate_class(S)));
        }
        for (auto const& [name, F] : _ws.functors) {
          out.push_back(validation_record("validate.functor." + name,
                                          validate_functor(F).laws));
        }
        for (auto const& [name, L] : _ws.setups) {
          out.push_back(validation_record("validate.setup." + name, validate_setup(L)));
        }
        for (auto const& [name, E] : _ws.posets) {
          out.push_back(validation_record("validate.poset." + name, validate_poset(E)));
        }
        return out;
      }

      std::vector<Record> comma(LocalisationSetup const& L) {
        std::vector<Record> out;
        auto const& D = *L.D;
        for (ObjId d = 0; d < static_cast<ObjId>(D.num_objects()); ++d) {
          auto const& dn = D.object_name(d);
          auto        slice = [&](char const* kind, auto make) {
            Record r;
            r.id      = std::string("comma.") + kind + "." + dn;
            r.checked = 1;
            try {
              Slice I       = make();
              r.certificate = {{"objects", I.names}, {"morphisms", I.morphisms.size()}};
              r.detail      = std::to_string(I.size()) + " objects, "
                         + std::to_string(I.morphisms.size()) + " non-identity morphisms";
            } catch (BudgetExceeded const& e) {
              r.status  = Status::Unknown;
              r.witness = {dn};
              r.detail  = e.what();
            }
            out.push_back(std::move(r));
          };
          slice("I", [&] { return slice_I(L, d, _opt.budget); });
          slice("J", [&] { return slice_J(L, d, JVariant::UnderT, _opt.budget); });
        }
        return out;
      }

      std::vector<Record> category_connectivity() {
        auto it = _ws.categories.find(_opt.category);
        if (it == _ws.categories.end()) {
          throw InvalidInput("unknown category '" + _opt.category + "'");
        }
        Record r;
        r.id          = "connectivity." + _opt.category;
        r.checked     = 1;
        r.certificate = connectivity_json(*it->second, _opt.budget, r.status);
        if (r.status == Status::Unknown) {
          r.witness = {_opt.category};
          r.detail  = "pi1 undecided";
        }
        return {r};
      }

      std::vector<Record> slice_connectivity(LocalisationSetup const& L) {
        std::vector<Record> out;
        auto const& D = *L.D;
        for (ObjId d = 0; d < static_cast<ObjId>(D.num_objects()); ++d) {
          auto const& dn = D.object_name(d);
          Record      r;
          r.id      = "connectivity.I." + dn;
          r.checked = 1;
          try {
            Slice I       = slice_I(L, d, _opt.budget);
            r.certificate = connectivity_json(*I.category(), _opt.budget, r.status);
            if (r.status == Status::Unknown) {
              r.witness = {dn};
              r.detail  = "pi1 undecided";
            }
          } catch (BudgetExceeded const& e) {
            r.status  = Status::Unknown;
            r.witness = {dn};
            r.detail  = e.what();
          }
          out.push_back(std::move(r));
        }
        return out;
      }

      template <class Map>
      auto const& pick_aux(Map const& m, std::string const& name,
                           std::string const& setup, char const* kind) {
        for (auto const& [n, v] : m) {
          if ((name.empty() || n == name) && v.first == setup) {
            return v.second;
          }
        }
        throw InvalidInput(std::string("no ") + kind
                           + (name.empty() ? "" : " '" + name + "'") + " for setup "
                           + setup);
      }

      std::vector<Record> check(LocalisationSetup const& L) {
        auto const&                   h = _opt.hypothesis;
        auto const&                   b = _opt.budget;
        std::vector<HypothesisReport> reps;
        if (h == "t0") {
          reps = check_t0(L, b);
        } else if (h == "c2") {
          reps = check_c2(L, b);
        } else if (h == "tu0") {
          reps = check_tu0(L, b);
        } else if (h == "riou") {
          std::vector<Record> out;
          for (auto const& r : check_riou(L)) {
            out.push_back(from_report(r, r.id != "riou.iii"));
          }
          return out;
        } else if (h == "p3") {
          try {
            reps = check_p3(L, b.poset_bound, b);
          } catch (PreconditionViolation const& e) {
            return {precondition("p3", e.what())};
          }
        } else if (h == "referee") {
          reps = check_referee(L, b.poset_bound, b);
        } else if (h == "p1") {
          if (_opt.kselector.empty()) {
            reps = check_p1(L, nullptr, b);
          } else {
            auto K = dsl::make_kselector(
                L, pick_aux(_ws.kselectors, _opt.kselector, L.name, "kselector"));
            reps = check_p1(L, &K, b);
          }
        } else if (h == "p2") {
          reps = check_p2(L, b);
        } else if (h == "t1v") {
          reps = check_t1v(L, pick_aux(_ws.weak, _opt.weak, L.name, "weak replacement"),
                           b);
        } else if (h == "c1") {
          return c1(L);
        } else {
          throw InvalidInput("unknown hypothesis '" + h + "'");
        }
        std::vector<Record> out;
        for (auto const& r : reps) {
          out.push_back(from_report(r));
        }
        return out;
      }

      static Record precondition(std::string const& prefix, std::string const& what) {
        Record r;
        r.id      = prefix + ".precondition";
        r.status  = Status::Fails;
        r.checked = 1;
        r.detail  = what;
        return r;
      }

      std::vector<Record> c1(LocalisationSetup const& L) {
        std::vector<ObjId> objs;
        if (_opt.object.empty()) {
          for (ObjId c = 0; c < static_cast<ObjId>(L.C->num_objects()); ++c) {
            objs.push_back(c);
          }
        } else if (auto c = L.C->find_object(_opt.object)) {
          objs.push_back(*c);
        } else {
          throw InvalidInput("unknown object '" + _opt.object + "'");
        }
        std::vector<Record> out;
        for (ObjId c : objs) {
          try {
            for (auto const& r : check_c1(L, c, _opt.budget)) {
              auto rec = from_report(r);
              rec.id += "@" + L.C->object_name(c);
              out.push_back(std::move(rec));
            }
          } catch (PreconditionViolation const& e) {
            out.push_back(precondition("c1", e.what()));
            break;
          }
        }
        return out;
      }

      std::vector<Record> localize(LocalisationSetup const& L) {
        std::vector<Record> out;
        auto one = [&](char const* side, CategoryRef C, MorphClass const& S) {
          Record r;
          r.id      = std::string("localize.") + side;
          r.checked = 1;
          auto m    = localise(C, S, _opt.budget);
          if (m.model) {
            r.certificate = hom_table(*m.model->L);
            r.certificate["engine"] = m.model->engine;
            r.detail = std::to_string(m.model->L->num_morphisms()) + " morphisms";
          } else {
            r.status  = Status::Unknown;
            r.witness = {C->name()};
            r.detail  = m.reason;
          }
          out.push_back(std::move(r));
        };
        one("C", L.C, L.S);
        one("D", L.D, L.Sprime);
        return out;
      }

      std::vector<Record> equivalence(LocalisationSetup const& L) {
        std::vector<Record> out;
        Record              c;
        c.id      = "equivalence.certificate";
        c.checked = 1;
        try {
          auto cert = build_equivalence(L, _opt.budget);
          if (cert.certified()) {
            Json sec = Json::object();
            for (ObjId d = 0; d < static_cast<ObjId>(L.D->num_objects()); ++d) {
              sec[L.D->object_name(d)] = cert.I_obj[d].names[cert.section[d]];
            }
            c.certificate = {{"section", sec},
                             {"phi_choices", cert.phi_choices},
                             {"lemma_a", cert.lemma_a},
                             {"lemma_b", cert.lemma_b},
                             {"lemma_c", cert.lemma_c},
                             {"composition_rule", cert.formula_e11},
                             {"naturality", cert.naturality}};
          } else {
            c.status = Status::Unknown;
            c.detail = cert.reason;
          }
        } catch (PreconditionViolation const& e) {
          c.status = Status::Fails;
          c.detail = e.what();
        }
        out.push_back(std::move(c));
        Record o;
        o.id      = "equivalence.oracle";
        o.checked = 1;
        auto res  = equivalence_oracle(L, _opt.budget);
        o.status  = res.verdict == EquivalenceVerdict::Equivalence      ? Status::Holds
                    : res.verdict == EquivalenceVerdict::NotEquivalence ? Status::Fails
                                                                         : Status::Unknown;
        o.witness     = res.witness;
        o.detail      = res.reason;
        o.certificate = {{"verdict", to_string(res.verdict)}};
        out.push_back(std::move(o));
        return out;
      }

      std::vector<Record> kan(LocalisationSetup const& L) {
        Record r;
        r.id      = "kan.extension";
        r.checked = 1;
        try {
          auto cert = build_equivalence(L, _opt.budget);
          if (!cert.certified()) {
            r.status = Status::Unknown;
            r.detail = cert.reason;
            return {r};
          }
          FunctorData F = cert.MD.P;
          if (!_opt.functor.empty()) {
            auto it = _ws.functors.find(_opt.functor);
            if (it == _ws.functors.end()) {
              throw InvalidInput("unknown functor '" + _opt.functor + "'");
            }
            if (it->second.source != L.D) {
              throw InvalidInput("functor " + _opt.functor + " does not start at "
                                 + L.D->name());
            }
            F = it->second;
          }
          auto k  = kan_extend(L, cert, F);
          r.status = k.status == KanStatus::Ok             ? Status::Holds
                     : k.status == KanStatus::NotInverting ? Status::Fails
                                                           : Status::Unknown;
          r.witness     = k.witness;
          r.detail      = k.reason;
          r.certificate = {{"status", to_string(k.status)},
                           {"choices_checked", k.choices_checked},
                           {"squares_checked", k.squares_checked}};
        } catch (PreconditionViolation const& e) {
          r.status = Status::Fails;
          r.detail = e.what();
        }
        return {r};
      }

      std::vector<Record> envelope(LocalisationSetup const& L) {
        Record r;
        r.id      = "envelope.lift";
        r.checked = 1;
        try {
          auto e   = check_envelope_lift(L, _opt.budget.envelope_k, _opt.budget);
          r.status = e.status == EnvelopeStatus::CertifiedAtK ? Status::Holds
                     : e.status == EnvelopeStatus::Failed     ? Status::Fails
                                                              : Status::Unknown;
          r.witness     = e.witness;
          r.detail      = e.reason;
          r.certificate = {{"status", to_string(e.status)},
                           {"k", e.k},
                           {"inclusions_fully_faithful", e.inclusions_fully_faithful},
                           {"coproducts_checked", e.coproducts_checked},
                           {"hom_counts_checked", e.hom_counts_checked},
                           {"lift_squares_checked", e.lift_squares_checked},
                           {"oracle", to_string(e.oracle.verdict)}};
        } catch (PreconditionViolation const& e) {
          r.status = Status::Fails;
          r.detail = e.what();
        }
        return {r};
      }

      std::vector<Record> fuzz_audit() {
        auto strategy = parse_strategy(_opt.strategy);
        if (!strategy) {
          throw InvalidInput("unknown strategy '" + _opt.strategy + "'");
        }
        GenConfig cfg;
        cfg.seed          = _opt.seed;
        cfg.strategy      = *strategy;
        cfg.max_objects   = _opt.max_objects;
        cfg.max_morphisms = _opt.max_morphisms;
        if (cfg.max_objects <= 0 || cfg.max_morphisms < 0) {
          throw InvalidInput("generator bounds must be positive");
        }
        AuditOptions aopt;
        aopt.referee     = _opt.referee;
        aopt.poset_bound = _opt.budget.poset_bound;
        Fuzzer                                    fuzz(cfg);
        ImplicationAudit                          audit(aopt);
        std::map<std::string, LocalisationSetup> first_violation;
        for (std::size_t i = 0; i < _opt.count; ++i) {
          auto L   = fuzz.next_setup();
          auto hit = audit.add(audit_case(L, aopt, _opt.budget));
          for (auto const& name : hit) {
            first_violation.emplace(name, L);
          }
        }
        std::vector<Record> out;
        for (auto const& t : audit.report().tallies) {
          Record r;
          r.id       = "audit." + t.implication.name;
          r.checked  = t.antecedent_held;
          r.blocking = !t.implication.open;
          r.detail   = std::to_string(t.confirmed) + " confirmed, "
                     + std::to_string(t.excluded) + " excluded ("
                     + std::to_string(t.pi1_blamed) + " on pi1), "
                     + std::to_string(t.violations.size()) + " violations";
          if (!t.violations.empty()) {
            r.status  = Status::Fails;
            r.witness = t.violations;
            auto const& imp = t.implication;
            auto        fails = [&](LocalisationSetup const& M) {
              return violates(audit_case(M, aopt, _opt.budget), imp);
            };
            auto small = shrink(first_violation.at(imp.name), fails);
            r.certificate = {{"case", first_violation.at(imp.name).name},
                             {"bundle", dsl::print(dsl::setup_document(small))}};
          }
          out.push_back(std::move(r));
        }
        Record extra;
        extra.id       = "audit.t0_without_c2";
        extra.checked  = audit.report().cases;
        extra.blocking = false;
        extra.detail   = std::to_string(audit.report().t0_without_c2)
                       + " cases satisfy t0 but not c2";
        extra.witness  = audit.report().t0_without_c2_cases;
        out.push_back(std::move(extra));
        return out;
      }

      Options const&     _opt;
      std::string const& _input;
      dsl::Document      _doc;
      dsl::Workspace     _ws;
      std::string        _setup;
      Json               _export;
    };

    inline std::string command_line(Options const& opt) {
      return opt.command == "check" ? "check " + opt.hypothesis : opt.command;
    }

    inline Json header(Options const& opt, std::string const& input) {
      Json flags = {{"pi1_budget", opt.budget.pi1_cosets},
                    {"kb_budget", opt.budget.kb_rules},
                    {"poset_bound", opt.budget.poset_bound},
                    {"envelope_k", opt.budget.envelope_k}};
      if (opt.command == "fuzz-audit") {
        flags["seed"]          = opt.seed;
        flags["count"]         = opt.count;
        flags["strategy"]      = opt.strategy;
        flags["max_objects"]   = opt.max_objects;
        flags["max_morphisms"] = opt.max_morphisms;
        flags["referee"]       = opt.referee;
      }
      return {{"schema_version", kSchemaVersion},
              {"command", command_line(opt)},
              {"input", {{"digest", digest(input)}}},
              {"flags", flags}};
    }

  }  // namespace detail

  // Runs one command on the text of a document (ignored by fuzz-audit).
  inline Outcome run(Options const& opt, std::string const& input) {
    Outcome out;
    out.report = detail::header(opt, input);
    std::vector<detail::Record> records;
    detail::Runner              runner(opt, input);
    try {
      records = runner.run();
    } catch (InvalidInput const& e) {
      out.exit_code        = kInvalid;
      out.report["records"] = Json::array();
      out.report["error"]  = {{"message", e.what()}, {"line", e.line()},
                              {"column", e.column()}};
      out.report["summary"] = {{"exit_code", kInvalid}, {"verdict", "invalid input"}};
      return out;
    } catch (BudgetExceeded const& e) {
      detail::Record r;
      r.id     = detail::command_line(opt) + ".budget";
      r.status = Status::Unknown;
      r.detail = e.what();
      records  = {r};
    }
    if (!runner.setup_name().empty()) {
      out.report["input"]["setup"] = runner.setup_name();
    }
    if (opt.command == "export") {
      out.report["document"] = runner.exported();
    }
    std::stable_sort(records.begin(), records.end(),
                     [](auto const& a, auto const& b) { return a.id < b.id; });
    std::size_t holds = 0, fails = 0, unknown = 0;
    Json        arr = Json::array();
    for (auto const& r : records) {
      arr.push_back(detail::to_json(r));
      if (!r.blocking) {
        continue;
      }
      holds += r.status == Status::Holds;
      fails += r.status == Status::Fails;
      unknown += r.status == Status::Unknown;
    }
    out.exit_code = fails ? kFail : unknown ? kInconclusive : kPass;
    static char const* const verdicts[] = {"pass", "fail", "inconclusive"};
    out.report["records"] = arr;
    out.report["summary"] = {{"exit_code", out.exit_code},
                             {"verdict", verdicts[out.exit_code]},
                             {"holds", holds},
                             {"fails", fails},
                             {"unknown", unknown}};
    return out;
  }

}  // namespace locwb::cli
