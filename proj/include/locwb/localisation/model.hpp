#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/constructions.hpp"
#include "locwb/core/errors.hpp"
#include "locwb/core/functor.hpp"
#include "locwb/core/morph_class.hpp"
#include "locwb/core/setup.hpp"
#include "locwb/core/validation.hpp"
#include "locwb/localisation/fractions.hpp"
#include "locwb/localisation/rewriting.hpp"

namespace locwb {

  // Letters 0..m-1 are the morphisms of C (identity letters rewrite to the
  // empty word); further letters are formal inverses of non-identity
  // members of S.
  struct LocPresentation {
    CategoryRef       C;
    std::vector<bool> S;
    TypedPresentation typed;
    std::vector<int>  inverse_letter;  // by MorId, -1 when absent
    std::vector<MorId> letter_morphism;  // by letter
    std::vector<bool> letter_inverted;   // by letter
  };

  inline LocPresentation loc_presentation(CategoryRef C,
                                          std::vector<bool> const& S) {
    LocPresentation P;
    P.C            = C;
    P.S            = S;
    auto const& c  = *C;
    auto const  m  = static_cast<MorId>(c.num_morphisms());
    P.typed.objects = c.object_names();
    for (MorId f = 0; f < m; ++f) {
      P.typed.letters.push_back({c.morphism_name(f), c.src(f), c.dst(f)});
      P.letter_morphism.push_back(f);
      P.letter_inverted.push_back(false);
    }
    P.inverse_letter.assign(m, -1);
    for (MorId f = 0; f < m; ++f) {
      if (S[f] && !c.is_identity(f)) {
        P.inverse_letter[f] = static_cast<int>(P.typed.letters.size());
        P.typed.letters.push_back({c.morphism_name(f) + "^-1", c.dst(f), c.src(f)});
        P.letter_morphism.push_back(f);
        P.letter_inverted.push_back(true);
      }
    }
    auto letter_word = [&](MorId h) {
      return c.is_identity(h) ? Word{} : Word{h};
    };
    for (MorId f = 0; f < m; ++f) {
      if (c.is_identity(f)) {
        P.typed.relations.push_back({{f}, {}});
        continue;
      }
      for (MorId g : c.out(c.dst(f))) {
        if (!c.is_identity(g)) {
          P.typed.relations.push_back({{f, g}, letter_word(c.compose(g, f))});
        }
      }
      if (P.inverse_letter[f] >= 0) {
        P.typed.relations.push_back({{f, P.inverse_letter[f]}, {}});
        P.typed.relations.push_back({{P.inverse_letter[f], f}, {}});
      }
    }
    return P;
  }

  // A decided model of S^-1 C: the localisation as an explicit finite
  // category L with the quotient functor P and chosen inverses.
  struct LocModel {
    std::string engine;  // "fractions", "fractions-op" or "rewriting"
    CategoryRef C;
    std::vector<bool> S;
    CategoryRef L;
    FunctorData P;
    std::vector<MorId> inverse;  // by MorId of C: P(s)^-1, kNone outside S
    // A representative word per morphism of L, letters f (forward) and
    // m + f (inverse of f in S).
    std::vector<Word> representative;

    std::size_t letters_offset() const {
      return C->num_morphisms();
    }

    // Value of a word (letters as in `representative`) starting at x.
    MorId eval(Word const& w, ObjId x) const {
      MorId acc = L->identity(x);
      auto  m   = static_cast<int>(letters_offset());
      for (int a : w) {
        MorId step = a < m ? P.mor(a) : inverse[a - m];
        if (step == kNone || L->src(step) != L->dst(acc)) {
          throw PreconditionViolation("ill-typed word in localisation model");
        }
        acc = L->compose(step, acc);
      }
      return acc;
    }

    std::optional<MorId> invert(MorId u) const {
      return inverse_in(*L, u);
    }
  };

  struct ModelResult {
    std::optional<LocModel> model;
    std::string             reason;  // why no model was produced
    OreReport               ore;
    OreReport               ore_op;
    std::optional<RewriteSystem> rewriting;
  };

  namespace detail {

    inline LocModel model_from_fractions(FractionModel const& F,
                                         Budget const&        budget) {
      auto const& c = *F.category();
      auto const  n = static_cast<ObjId>(c.num_objects());
      auto const  m = static_cast<int>(c.num_morphisms());
      auto const& S = F.mask();

      CategoryBuilder b(c.name() + "[S^-1]");
      for (ObjId x = 0; x < n; ++x) {
        b.add_object(c.object_name(x));
      }
      // Builder id per (x, y, class).
      std::vector<std::vector<MorId>> ids(std::size_t(n) * n);
      std::vector<Word>               reps;
      for (ObjId x = 0; x < n; ++x) {
        for (ObjId y = 0; y < n; ++y) {
          auto const& cls = F.hom(x, y);
          ids[x * n + y].assign(cls.size(), kNone);
          for (std::size_t k = 0; k < cls.size(); ++k) {
            Span rep = cls[k].front();
            if (x == y
                && std::binary_search(cls[k].begin(), cls[k].end(),
                                      Span{c.identity(x), c.identity(x)})) {
              ids[x * n + y][k] = b.identity(x);
              continue;
            }
            if (b.num_morphisms() >= budget.max_morphisms) {
              throw BudgetExceeded("localisation model exceeds the morphism cap");
            }
            std::string name = c.is_identity(rep.s)
                                   ? c.morphism_name(rep.f)
                                   : c.morphism_name(rep.f) + "/"
                                         + c.morphism_name(rep.s);
            ids[x * n + y][k] = b.add_morphism(name, x, y);
          }
        }
      }
      reps.resize(b.num_morphisms());
      std::vector<Span> rep_of(b.num_morphisms());
      for (ObjId x = 0; x < n; ++x) {
        for (ObjId y = 0; y < n; ++y) {
          auto const& cls = F.hom(x, y);
          for (std::size_t k = 0; k < cls.size(); ++k) {
            MorId id   = ids[x * n + y][k];
            Span  rep  = cls[k].front();
            rep_of[id] = rep;
            Word w;
            if (!c.is_identity(rep.s)) {
              w.push_back(m + rep.s);
            }
            if (!c.is_identity(rep.f)) {
              w.push_back(rep.f);
            }
            reps[id] = std::move(w);
          }
        }
      }
      auto lookup = [&](Span sp) {
        ObjId x = c.dst(sp.s);
        ObjId y = c.dst(sp.f);
        int   k = F.class_of(x, y, sp);
        return ids[x * n + y][k];
      };
      auto const total = static_cast<MorId>(b.num_morphisms());
      for (MorId u = 0; u < total; ++u) {
        if (b.is_identity(u)) {
          continue;
        }
        for (MorId v = 0; v < total; ++v) {
          if (b.is_identity(v) || b.morphism_data(u).dst != b.morphism_data(v).src) {
            continue;
          }
          b.set_composite(v, u, lookup(F.compose(rep_of[v], rep_of[u])));
        }
      }
      auto built = b.build();
      LocModel M;
      M.engine = "fractions";
      M.C      = F.category();
      M.S      = S;
      // Rename through the built category (ids may be renumbered).
      std::vector<MorId> remap(total);
      for (MorId u = 0; u < total; ++u) {
        remap[u] = built.morphism_id(b.morphism_data(u).name);
      }
      M.representative.resize(total);
      for (MorId u = 0; u < total; ++u) {
        M.representative[remap[u]] = reps[u];
      }
      auto L   = std::make_shared<FinCategory const>(std::move(built));
      M.L      = L;
      M.P      = FunctorData{"P", M.C, L, {}, {}};
      for (ObjId x = 0; x < n; ++x) {
        M.P.omap.push_back(x);
      }
      M.inverse.assign(m, kNone);
      for (MorId f = 0; f < m; ++f) {
        M.P.mmap.push_back(remap[lookup({c.identity(c.src(f)), f})]);
        if (S[f]) {
          M.inverse[f] = remap[lookup({f, c.identity(c.src(f))})];
        }
      }
      return M;
    }

    inline LocModel model_from_rewriting(LocPresentation const& P,
                                         RewriteSystem const&   R,
                                         Budget const&          budget) {
      auto const& c = *P.C;
      auto const  n = static_cast<ObjId>(c.num_objects());
      auto const  m = static_cast<int>(c.num_morphisms());
      std::vector<std::vector<std::vector<Word>>> forms;
      std::size_t                                 total = 0;
      for (ObjId x = 0; x < n; ++x) {
        auto f = normal_forms_from(P.typed, R, x, budget.model_elements);
        if (!f) {
          throw BudgetExceeded("hom-set enumeration exceeds the element cap");
        }
        for (auto const& h : *f) {
          total += h.size();
        }
        forms.push_back(std::move(*f));
      }
      if (total > budget.max_morphisms || total > budget.model_elements) {
        throw BudgetExceeded("localisation model exceeds the morphism cap");
      }
      CategoryBuilder b(c.name() + "[S^-1]");
      for (ObjId x = 0; x < n; ++x) {
        b.add_object(c.object_name(x));
      }
      std::map<std::pair<ObjId, Word>, MorId> id_of;
      std::vector<Word>                       words;
      std::vector<ObjId>                      start;
      for (ObjId x = 0; x < n; ++x) {
        for (ObjId y = 0; y < n; ++y) {
          for (auto const& w : forms[x][y]) {
            MorId id = w.empty() ? b.identity(x)
                                 : b.add_morphism(render_word(P.typed, w, x), x, y);
            id_of[{x, w}] = id;
          }
        }
      }
      words.resize(b.num_morphisms());
      start.resize(b.num_morphisms());
      for (auto const& [key, id] : id_of) {
        words[id] = key.second;
        start[id] = key.first;
      }
      auto const cnt = static_cast<MorId>(b.num_morphisms());
      for (MorId u = 0; u < cnt; ++u) {
        if (b.is_identity(u)) {
          continue;
        }
        for (MorId v = 0; v < cnt; ++v) {
          if (b.is_identity(v) || b.morphism_data(u).dst != b.morphism_data(v).src) {
            continue;
          }
          Word w = words[u];
          w.insert(w.end(), words[v].begin(), words[v].end());
          b.set_composite(v, u, id_of.at({start[u], R.reduce(w)}));
        }
      }
      auto     built = b.build();
      LocModel M;
      M.engine = "rewriting";
      M.C      = P.C;
      M.S      = P.S;
      std::vector<MorId> remap(cnt);
      for (MorId u = 0; u < cnt; ++u) {
        remap[u] = built.morphism_id(b.morphism_data(u).name);
      }
      auto to_model_word = [&](Word const& w) {
        Word out;
        for (int a : w) {
          MorId f = P.letter_morphism[a];
          out.push_back(P.letter_inverted[a] ? m + f : f);
        }
        return out;
      };
      M.representative.resize(cnt);
      for (MorId u = 0; u < cnt; ++u) {
        M.representative[remap[u]] = to_model_word(words[u]);
      }
      auto L = std::make_shared<FinCategory const>(std::move(built));
      M.L    = L;
      M.P    = FunctorData{"P", M.C, L, {}, {}};
      for (ObjId x = 0; x < n; ++x) {
        M.P.omap.push_back(x);
      }
      M.inverse.assign(m, kNone);
      for (MorId f = 0; f < m; ++f) {
        M.P.mmap.push_back(remap[id_of.at({c.src(f), R.reduce(Word{f})})]);
        if (P.inverse_letter[f] >= 0) {
          M.inverse[f] =
              remap[id_of.at({c.dst(f), R.reduce(Word{P.inverse_letter[f]})})];
        } else if (P.S[f]) {
          M.inverse[f] = M.P.mmap[f];  // identities
        }
      }
      return M;
    }

    // Transports a model of (C^op, S) back to (C, S).
    inline LocModel unop_model(LocModel const& op, CategoryRef C) {
      LocModel M;
      M.engine = "fractions-op";
      M.C      = std::move(C);
      M.S      = op.S;
      M.L      = opposite_ref(op.L);
      M.P      = FunctorData{"P", M.C, M.L, op.P.omap, op.P.mmap};
      M.inverse = op.inverse;
      M.representative.clear();
      for (auto const& w : op.representative) {
        M.representative.emplace_back(w.rbegin(), w.rend());
      }
      return M;
    }

  }  // namespace detail

  // Which engine to use. Auto prefers fractions (either side) and falls
  // back to rewriting.
  enum class LocEngine { Auto, Fractions, Rewriting };

  inline ModelResult localise(CategoryRef C, std::vector<bool> const& S,
                              Budget const& budget = {},
                              LocEngine     engine = LocEngine::Auto) {
    ModelResult r;
    if (engine != LocEngine::Rewriting) {
      r.ore = ore_check(*C, S);
      try {
        if (r.ore.holds()) {
          r.model = detail::model_from_fractions(FractionModel(C, S), budget);
          return r;
        }
        auto Cop = opposite_ref(C);
        r.ore_op = ore_check(*Cop, S);
        if (r.ore_op.holds()) {
          auto op = detail::model_from_fractions(FractionModel(Cop, S), budget);
          r.model = detail::unop_model(op, C);
          return r;
        }
      } catch (BudgetExceeded const& e) {
        r.reason = e.what();
        if (engine == LocEngine::Fractions) {
          return r;
        }
      }
      if (engine == LocEngine::Fractions) {
        r.reason = "no calculus of fractions on either side";
        return r;
      }
    }
    auto P      = loc_presentation(C, S);
    r.rewriting = kb_complete(P.typed, budget);
    if (!r.rewriting->complete) {
      r.reason = "completion incomplete: " + r.rewriting->failure;
      return r;
    }
    try {
      r.model = detail::model_from_rewriting(P, *r.rewriting, budget);
    } catch (BudgetExceeded const& e) {
      r.reason = e.what();
    }
    return r;
  }

  inline ModelResult localise(CategoryRef C, MorphClass const& S,
                              Budget const& budget = {},
                              LocEngine     engine = LocEngine::Auto) {
    return localise(std::move(C), S.mask(), budget, engine);
  }

  // Morphisms of C becoming invertible in S^-1 C.
  struct SaturationResult {
    std::vector<bool> members;
    bool              exact = false;
  };

  inline SaturationResult saturation(CategoryRef C, std::vector<bool> const& S,
                                     Budget const& budget = {}) {
    SaturationResult r;
    auto             res = localise(C, S, budget);
    r.members            = S;
    if (!res.model) {
      // Lower approximation: S together with the isomorphisms of C.
      for (MorId f = 0; f < static_cast<MorId>(C->num_morphisms()); ++f) {
        if (inverse_in(*C, f)) {
          r.members[f] = true;
        }
      }
      return r;
    }
    auto const& M = *res.model;
    for (MorId f = 0; f < static_cast<MorId>(C->num_morphisms()); ++f) {
      r.members[f] = M.invert(M.P.mor(f)).has_value();
    }
    r.exact = true;
    return r;
  }

  // T-bar between decided models: letters map to Q(T f) or Q(T s)^-1.
  inline FunctorData induced_functor(LocalisationSetup const& L,
                                     LocModel const& MC, LocModel const& MD) {
    FunctorData F{"Tbar", MC.L, MD.L, L.T.omap, {}};
    auto const  m = static_cast<int>(MC.letters_offset());
    for (MorId u = 0; u < static_cast<MorId>(MC.L->num_morphisms()); ++u) {
      Word w;
      for (int a : MC.representative[u]) {
        w.push_back(a < m ? L.T.mor(a)
                          : static_cast<int>(MD.letters_offset()) + L.T.mor(a - m));
      }
      F.mmap.push_back(MD.eval(w, L.T.obj(MC.L->src(u))));
    }
    return F;
  }

  enum class EquivalenceVerdict { Equivalence, NotEquivalence, Undecided };

  inline char const* to_string(EquivalenceVerdict v) {
    switch (v) {
      case EquivalenceVerdict::Equivalence: return "Equivalence";
      case EquivalenceVerdict::NotEquivalence: return "NotEquivalence";
      case EquivalenceVerdict::Undecided: return "Undecided";
    }
    return "";
  }

  struct OracleResult {
    EquivalenceVerdict       verdict = EquivalenceVerdict::Undecided;
    std::string              reason;
    std::vector<std::string> witness;
  };

  // Direct check that T-bar is fully faithful and essentially surjective
  // on the computed models.
  inline OracleResult equivalence_oracle(LocalisationSetup const& L,
                                         Budget const& budget = {}) {
    OracleResult r;
    auto         mc = localise(L.C, L.S, budget);
    auto         md = localise(L.D, L.Sprime, budget);
    if (!mc.model || !md.model) {
      r.reason = mc.model ? md.reason : mc.reason;
      return r;
    }
    auto const& MC = *mc.model;
    auto const& MD = *md.model;
    auto        Tb = induced_functor(L, MC, MD);
    auto        vr = validate_functor(Tb);
    if (!vr.laws.pass()) {
      r.verdict = EquivalenceVerdict::NotEquivalence;
      r.reason  = "induced functor is not well defined";
      return r;
    }
    auto const n = static_cast<ObjId>(MC.L->num_objects());
    for (ObjId x = 0; x < n; ++x) {
      for (ObjId y = 0; y < n; ++y) {
        auto              hom = MC.L->hom(x, y);
        std::vector<bool> hit(MD.L->num_morphisms(), false);
        for (MorId u : hom) {
          if (hit[Tb.mor(u)]) {
            r.verdict = EquivalenceVerdict::NotEquivalence;
            r.reason  = "not faithful";
            r.witness = {MC.L->object_name(x), MC.L->object_name(y)};
            return r;
          }
          hit[Tb.mor(u)] = true;
        }
        if (hom.size() != MD.L->hom(Tb.obj(x), Tb.obj(y)).size()) {
          r.verdict = EquivalenceVerdict::NotEquivalence;
          r.reason  = "not full";
          r.witness = {MC.L->object_name(x), MC.L->object_name(y)};
          return r;
        }
      }
    }
    for (ObjId d = 0; d < static_cast<ObjId>(MD.L->num_objects()); ++d) {
      bool reached = false;
      for (ObjId x = 0; x < n && !reached; ++x) {
        for (MorId u : MD.L->hom(Tb.obj(x), d)) {
          if (MD.invert(u)) {
            reached = true;
            break;
          }
        }
      }
      if (!reached) {
        r.verdict = EquivalenceVerdict::NotEquivalence;
        r.reason  = "not essentially surjective";
        r.witness = {MD.L->object_name(d)};
        return r;
      }
    }
    r.verdict = EquivalenceVerdict::Equivalence;
    return r;
  }

}  // namespace locwb
