#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/errors.hpp"
#include "locwb/core/functor.hpp"
#include "locwb/core/morph_class.hpp"
#include "locwb/core/poset.hpp"
#include "locwb/core/setup.hpp"
#include "locwb/dsl/document.hpp"
#include "locwb/dsl/parser.hpp"
#include "locwb/hypotheses/sufficient.hpp"
#include "locwb/hypotheses/weak.hpp"
#include "locwb/localisation/rewriting.hpp"

namespace locwb::dsl {

  struct Workspace {
    std::map<std::string, CategoryRef>       categories;
    std::map<std::string, MorphClass>        classes;
    std::map<std::string, FunctorData>       functors;
    std::map<std::string, LocalisationSetup> setups;
    std::map<std::string, FinPoset>          posets;
    std::map<std::string, std::pair<std::string, WeakReplacement>> weak;  // setup, W
    std::map<std::string, std::pair<std::string, std::map<std::string, std::set<std::string>>>>
        kselectors;  // setup, d name -> chosen J_d object names
    std::vector<std::string> setup_order;  // declaration order
  };

  namespace detail {

    [[noreturn]] inline void error_at(Pos p, std::string const& what) {
      throw InvalidInput(what, p.line, p.column);
    }

    inline MorId resolve_morphism(FinCategory const& C, std::string const& n, Pos p) {
      auto f = C.find_morphism(n);
      if (!f) {
        error_at(p, "unknown morphism '" + n + "' in category " + C.name());
      }
      return *f;
    }

    // Name of the composite given by a word (first letter applied first),
    // in application order.
    inline std::string composite_name(TypedPresentation const& P, Word const& w) {
      std::string out;
      for (auto it = w.rbegin(); it != w.rend(); ++it) {
        out += (out.empty() ? "" : ".") + P.letters[*it].name;
      }
      return out;
    }

    inline CategoryRef load_category(CategoryDecl const& c, Budget const& budget) {
      CategoryBuilder b(c.name);
      for (auto const& o : c.objects) {
        try {
          b.add_object(o);
        } catch (InvalidInput const& e) {
          error_at(c.pos, e.what());
        }
      }
      for (auto const& m : c.morphisms) {
        try {
          auto s = b.find_object(m.src);
          auto t = b.find_object(m.dst);
          if (!s || !t) {
            error_at(m.pos, "unknown object '" + (s ? m.dst : m.src) + "'");
          }
          b.add_morphism(m.name, *s, *t);
        } catch (InvalidInput const& e) {
          if (e.line() != 0) {
            throw;
          }
          error_at(m.pos, e.what());
        }
      }
      auto mor = [&](std::string const& n, Pos p) {
        auto f = b.find_morphism(n);
        if (!f) {
          error_at(p, "unknown morphism '" + n + "'");
        }
        return *f;
      };
      std::map<std::pair<MorId, MorId>, MorId> table;
      for (auto const& k : c.composes) {
        MorId g = mor(k.g, k.pos), f = mor(k.f, k.pos), h = mor(k.h, k.pos);
        auto const& mg = b.morphism_data(g);
        auto const& mf = b.morphism_data(f);
        auto const& mh = b.morphism_data(h);
        if (mg.src != mf.dst) {
          error_at(k.pos, "'" + k.g + "' and '" + k.f + "' are not composable");
        }
        if (mh.src != mf.src || mh.dst != mg.dst) {
          error_at(k.pos, "'" + k.h + "' does not have the type of '" + k.g + " "
                              + k.f + "'");
        }
        auto [it, fresh] = table.emplace(std::make_pair(g, f), h);
        if (!fresh && it->second != h) {
          error_at(k.pos, "conflicting composites for '" + k.g + " " + k.f + "'");
        }
        if ((b.is_identity(g) && h != f) || (b.is_identity(f) && h != g)) {
          error_at(k.pos, "composite with an identity must be the other arrow");
        }
      }
      // Complete table: build directly (the validator judges the laws).
      auto const n     = static_cast<MorId>(b.num_morphisms());
      bool       whole = true;
      for (MorId f = 0; f < n && whole; ++f) {
        for (MorId g = 0; g < n && whole; ++g) {
          if (!b.is_identity(f) && !b.is_identity(g)
              && b.morphism_data(g).src == b.morphism_data(f).dst) {
            whole = table.count({g, f}) != 0;
          }
        }
      }
      if (whole) {
        for (auto const& [gf, h] : table) {
          if (!b.is_identity(gf.first) && !b.is_identity(gf.second)) {
            b.set_composite(gf.first, gf.second, h);
          }
        }
        return b.build_ref();
      }
      // Otherwise: the category presented by the declared arrows and
      // composites, by completion of the path rewriting system.
      TypedPresentation P;
      std::vector<int>  letter(n, -1);
      for (std::size_t x = 0; x < b.num_objects(); ++x) {
        P.objects.push_back(b.object_name(static_cast<ObjId>(x)));
      }
      for (MorId f = 0; f < n; ++f) {
        if (!b.is_identity(f)) {
          letter[f] = static_cast<int>(P.letters.size());
          auto const& m = b.morphism_data(f);
          P.letters.push_back({m.name, m.src, m.dst});
        }
      }
      for (auto const& [gf, h] : table) {
        if (b.is_identity(gf.first) || b.is_identity(gf.second)) {
          continue;
        }
        Word rhs = b.is_identity(h) ? Word{} : Word{letter[h]};
        P.relations.push_back({Word{letter[gf.second], letter[gf.first]}, rhs});
      }
      auto R = kb_complete(P, budget);
      if (!R.complete) {
        error_at(c.pos, "composition table of " + c.name + " does not close: "
                            + R.failure);
      }
      for (std::size_t a = 0; a < P.letters.size(); ++a) {
        Word w{static_cast<int>(a)};
        if (R.reduce(w) != w) {
          error_at(c.pos, "composition table of " + c.name + " identifies '"
                              + P.letters[a].name + "' with another arrow");
        }
      }
      CategoryBuilder out(c.name);
      for (auto const& o : P.objects) {
        out.add_object(o);
      }
      std::map<std::pair<ObjId, Word>, MorId> id_of;
      std::vector<std::pair<ObjId, Word>>     words;
      std::size_t                             total = 0;
      for (ObjId x = 0; x < static_cast<ObjId>(P.objects.size()); ++x) {
        auto forms = normal_forms_from(P, R, x, budget.model_elements);
        if (!forms) {
          error_at(c.pos, "composition table of " + c.name
                              + " does not close: too many composites");
        }
        for (ObjId y = 0; y < static_cast<ObjId>(forms->size()); ++y) {
          for (auto const& w : (*forms)[y]) {
            if (++total > budget.max_morphisms) {
              error_at(c.pos, "composition table of " + c.name
                                  + " does not close within the morphism cap");
            }
            MorId id = w.empty() ? out.identity(x)
                                 : out.add_morphism(composite_name(P, w), x, y);
            id_of[{x, w}] = id;
            words.resize(std::max<std::size_t>(words.size(), id + 1));
            words[id] = {x, w};
          }
        }
      }
      for (MorId u = 0; u < static_cast<MorId>(words.size()); ++u) {
        for (MorId v = 0; v < static_cast<MorId>(words.size()); ++v) {
          if (out.is_identity(u) || out.is_identity(v)
              || out.morphism_data(u).dst != out.morphism_data(v).src) {
            continue;
          }
          Word w = words[u].second;
          w.insert(w.end(), words[v].second.begin(), words[v].second.end());
          out.set_composite(v, u, id_of.at({words[u].first, R.reduce(w)}));
        }
      }
      return out.build_ref();
    }

    template <class Map>
    auto const& lookup(Map const& m, std::string const& name, char const* kind, Pos p) {
      auto it = m.find(name);
      if (it == m.end()) {
        error_at(p, std::string("unknown ") + kind + " '" + name + "'");
      }
      return it->second;
    }

  }  // namespace detail

  // Resolves every declaration. Throws InvalidInput with the position of
  // the offending declaration or statement.
  inline Workspace load(Document const& doc, Budget const& budget = {}) {
    Workspace ws;
    for (auto const& decl : doc.declarations) {
      if (auto const* c = std::get_if<CategoryDecl>(&decl)) {
        ws.categories[c->name] = detail::load_category(*c, budget);
      } else if (auto const* k = std::get_if<ClassDecl>(&decl)) {
        auto const&       C = detail::lookup(ws.categories, k->category, "category", k->pos);
        std::vector<bool> mask(C->num_morphisms(), false);
        for (ObjId x = 0; x < static_cast<ObjId>(C->num_objects()); ++x) {
          mask[C->identity(x)] = true;
        }
        for (auto const& m : k->members) {
          mask[detail::resolve_morphism(*C, m, k->pos)] = true;
        }
        ws.classes[k->name] = MorphClass(C, std::move(mask), k->name);
      } else if (auto const* f = std::get_if<FunctorDecl>(&decl)) {
        auto const& A = detail::lookup(ws.categories, f->source, "category", f->pos);
        auto const& B = detail::lookup(ws.categories, f->target, "category", f->pos);
        FunctorData F{f->name, A, B, std::vector<ObjId>(A->num_objects(), kNone),
                      std::vector<MorId>(A->num_morphisms(), kNone)};
        for (auto const& m : f->objects) {
          auto x = A->find_object(m.from);
          auto y = B->find_object(m.to);
          if (!x || !y) {
            detail::error_at(m.pos, "unknown object '" + (x ? m.to : m.from) + "'");
          }
          if (F.omap[*x] != kNone && F.omap[*x] != *y) {
            detail::error_at(m.pos, "object '" + m.from + "' mapped twice");
          }
          F.omap[*x] = *y;
        }
        for (ObjId x = 0; x < static_cast<ObjId>(A->num_objects()); ++x) {
          if (F.omap[x] == kNone) {
            detail::error_at(f->pos, "functor " + f->name + " leaves object '"
                                         + A->object_name(x) + "' unmapped");
          }
          F.mmap[A->identity(x)] = B->identity(F.omap[x]);
        }
        for (auto const& m : f->morphisms) {
          MorId u = detail::resolve_morphism(*A, m.from, m.pos);
          MorId v = detail::resolve_morphism(*B, m.to, m.pos);
          if (A->is_identity(u) ? F.mmap[u] != v
                                : (F.mmap[u] != kNone && F.mmap[u] != v)) {
            detail::error_at(m.pos, "morphism '" + m.from + "' mapped inconsistently");
          }
          F.mmap[u] = v;
        }
        for (MorId u = 0; u < static_cast<MorId>(A->num_morphisms()); ++u) {
          if (F.mmap[u] == kNone) {
            detail::error_at(f->pos, "functor " + f->name + " leaves morphism '"
                                         + A->morphism_name(u) + "' unmapped");
          }
        }
        ws.functors[f->name] = std::move(F);
      } else if (auto const* s = std::get_if<SetupDecl>(&decl)) {
        LocalisationSetup L;
        L.name = s->name;
        L.C    = detail::lookup(ws.categories, s->C, "category", s->pos);
        L.D    = detail::lookup(ws.categories, s->D, "category", s->pos);
        L.T    = detail::lookup(ws.functors, s->T, "functor", s->pos);
        if (L.T.source != L.C || L.T.target != L.D) {
          detail::error_at(s->pos, "functor " + s->T + " is not " + s->C + " -> " + s->D);
        }
        L.S = s->S ? detail::lookup(ws.classes, *s->S, "class", s->pos)
                   : MorphClass::identities(L.C, "S");
        L.Sprime = s->Sprime ? detail::lookup(ws.classes, *s->Sprime, "class", s->pos)
                             : MorphClass::identities(L.D, "Sprime");
        if (L.S.carrier() != L.C || L.Sprime.carrier() != L.D) {
          detail::error_at(s->pos, "class of setup " + s->name + " lives in the wrong category");
        }
        ws.setups[s->name] = std::move(L);
        ws.setup_order.push_back(s->name);
      } else if (auto const* p = std::get_if<PosetDecl>(&decl)) {
        std::vector<std::string>          elems;
        std::map<std::string, int>        index;
        std::vector<std::pair<int, int>>  rel;
        auto element = [&](std::string const& e) {
          auto [it, fresh] = index.emplace(e, static_cast<int>(elems.size()));
          if (fresh) {
            elems.push_back(e);
          }
          return it->second;
        };
        for (auto const& r : p->relations) {
          int a = element(r.lo);
          if (!r.hi.empty()) {
            rel.push_back({a, element(r.hi)});
          }
        }
        try {
          ws.posets[p->name] = FinPoset(p->name, elems, rel);
        } catch (InvalidInput const& e) {
          detail::error_at(p->pos, e.what());
        }
      } else if (auto const* w = std::get_if<WeakDecl>(&decl)) {
        auto const&     L = detail::lookup(ws.setups, w->setup, "setup", w->pos);
        WeakReplacement W;
        W.name = w->name;
        for (auto const& sel : w->selections) {
          int n = sel.kind == "obj" ? 0 : sel.kind == "arrow" ? 1 : 2;
          if (n == 0) {
            if (!L.D->find_object(sel.index[0])) {
              detail::error_at(sel.pos, "unknown object '" + sel.index[0] + "'");
            }
          } else {
            std::vector<MorId> fs;
            for (auto const& m : sel.index) {
              fs.push_back(detail::resolve_morphism(*L.D, m, sel.pos));
            }
            if (n == 2 && L.D->src(fs[0]) != L.D->dst(fs[1])) {
              detail::error_at(sel.pos, "pair is not composable");
            }
          }
          auto& slot = W.selections[{n, sel.index}];
          slot.insert(sel.members.begin(), sel.members.end());
        }
        ws.weak[w->name] = {w->setup, std::move(W)};
      } else if (auto const* k = std::get_if<KSelectorDecl>(&decl)) {
        auto const& L = detail::lookup(ws.setups, k->setup, "setup", k->pos);
        std::map<std::string, std::set<std::string>> chosen;
        for (auto const& sel : k->selections) {
          if (!L.D->find_object(sel.index[0])) {
            detail::error_at(sel.pos, "unknown object '" + sel.index[0] + "'");
          }
          chosen[sel.index[0]].insert(sel.members.begin(), sel.members.end());
        }
        ws.kselectors[k->name] = {k->setup, std::move(chosen)};
      }
    }
    return ws;
  }

  // Selector over the objects of J_d named in `chosen`.
  inline KSelector make_kselector(LocalisationSetup const& L,
                                  std::map<std::string, std::set<std::string>> chosen) {
    auto D = L.D;
    return [D, chosen = std::move(chosen)](ObjId d, Slice const& J, int j) {
      auto it = chosen.find(D->object_name(d));
      return it != chosen.end() && it->second.count(J.names[j]) != 0;
    };
  }

  inline Workspace load_text(std::string_view text, Budget const& budget = {}) {
    return load(parse(text), budget);
  }

  // ---- Documents from values ----------------------------------------------

  inline CategoryDecl category_decl(FinCategory const& C) {
    CategoryDecl c;
    c.name    = C.name();
    c.objects = C.object_names();
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      if (!C.is_identity(f)) {
        c.morphisms.push_back({C.morphism_name(f), C.object_name(C.src(f)),
                               C.object_name(C.dst(f)), {}});
      }
    }
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      if (C.is_identity(f)) {
        continue;
      }
      for (MorId g : C.out(C.dst(f))) {
        if (!C.is_identity(g) && C.compose(g, f) != kNone) {
          c.composes.push_back({C.morphism_name(g), C.morphism_name(f),
                                C.morphism_name(C.compose(g, f)), {}});
        }
      }
    }
    return c;
  }

  inline ClassDecl class_decl(MorphClass const& S, std::string name) {
    ClassDecl k;
    k.name     = std::move(name);
    k.category = S.carrier()->name();
    for (MorId f : S.members()) {
      if (!S.carrier()->is_identity(f)) {
        k.members.push_back(S.carrier()->morphism_name(f));
      }
    }
    return k;
  }

  inline FunctorDecl functor_decl(FunctorData const& F, std::string name) {
    FunctorDecl d;
    d.name   = std::move(name);
    d.source = F.source->name();
    d.target = F.target->name();
    for (ObjId x = 0; x < static_cast<ObjId>(F.source->num_objects()); ++x) {
      d.objects.push_back({F.source->object_name(x),
                           F.target->object_name(F.obj(x)), {}});
    }
    for (MorId f = 0; f < static_cast<MorId>(F.source->num_morphisms()); ++f) {
      if (!F.source->is_identity(f)) {
        d.morphisms.push_back({F.source->morphism_name(f),
                               F.target->morphism_name(F.mor(f)), {}});
      }
    }
    return d;
  }

  // A standalone document for one setup. The categories must have distinct
  // names; declarations are named after the setup.
  inline Document setup_document(LocalisationSetup const& L) {
    if (L.C->name() == L.D->name() && L.C != L.D) {
      throw PreconditionViolation("source and target categories share a name");
    }
    Document doc;
    doc.declarations.push_back(category_decl(*L.C));
    if (L.D != L.C) {
      doc.declarations.push_back(category_decl(*L.D));
    }
    std::string const tname = L.T.name.empty() ? "T" : L.T.name;
    std::string const sname = L.S.name().empty() ? "S" : L.S.name();
    std::string sp = L.Sprime.name().empty() ? "Sprime" : L.Sprime.name();
    if (sp == sname) {
      sp += "'";
    }
    doc.declarations.push_back(class_decl(L.S, sname));
    doc.declarations.push_back(class_decl(L.Sprime, sp));
    doc.declarations.push_back(functor_decl(L.T, tname));
    SetupDecl s;
    s.name   = L.name;
    s.C      = L.C->name();
    s.D      = L.D->name();
    s.T      = tname;
    s.S      = sname;
    s.Sprime = sp;
    doc.declarations.push_back(s);
    return doc;
  }

}  // namespace locwb::dsl
