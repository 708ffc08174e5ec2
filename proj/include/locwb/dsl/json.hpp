#pragma once

#include <json.hpp>

#include "locwb/dsl/document.hpp"

namespace locwb::dsl {

  using Json = nlohmann::ordered_json;

  namespace detail {

    inline Json selections_json(std::vector<SelectDecl> const& sel) {
      Json out = Json::array();
      for (auto const& s : sel) {
        out.push_back({{"kind", s.kind}, {"index", s.index}, {"members", s.members}});
      }
      return out;
    }

    struct JsonExporter {
      Json operator()(CategoryDecl const& c) const {
        Json mors = Json::array(), comps = Json::array();
        for (auto const& m : c.morphisms) {
          mors.push_back({{"name", m.name}, {"src", m.src}, {"dst", m.dst}});
        }
        for (auto const& k : c.composes) {
          comps.push_back({{"g", k.g}, {"f", k.f}, {"h", k.h}});
        }
        return {{"kind", "category"},    {"name", c.name},      {"objects", c.objects},
                {"morphisms", mors},     {"composes", comps}};
      }

      Json operator()(ClassDecl const& c) const {
        return {{"kind", "class"},
                {"name", c.name},
                {"category", c.category},
                {"members", c.members}};
      }

      Json operator()(FunctorDecl const& f) const {
        Json objs = Json::array(), mors = Json::array();
        for (auto const& m : f.objects) {
          objs.push_back({m.from, m.to});
        }
        for (auto const& m : f.morphisms) {
          mors.push_back({m.from, m.to});
        }
        return {{"kind", "functor"}, {"name", f.name},  {"source", f.source},
                {"target", f.target}, {"objects", objs}, {"morphisms", mors}};
      }

      Json operator()(SetupDecl const& s) const {
        Json j = {{"kind", "setup"}, {"name", s.name}, {"C", s.C}, {"D", s.D}, {"T", s.T}};
        j["S"]      = s.S ? Json(*s.S) : Json(nullptr);
        j["Sprime"] = s.Sprime ? Json(*s.Sprime) : Json(nullptr);
        return j;
      }

      Json operator()(PosetDecl const& p) const {
        Json rel = Json::array();
        for (auto const& r : p.relations) {
          rel.push_back(r.hi.empty() ? Json::array({r.lo}) : Json::array({r.lo, r.hi}));
        }
        return {{"kind", "poset"}, {"name", p.name}, {"relations", rel}};
      }

      Json operator()(WeakDecl const& w) const {
        return {{"kind", "weak"},
                {"name", w.name},
                {"setup", w.setup},
                {"selections", selections_json(w.selections)}};
      }

      Json operator()(KSelectorDecl const& k) const {
        return {{"kind", "kselector"},
                {"name", k.name},
                {"setup", k.setup},
                {"selections", selections_json(k.selections)}};
      }
    };

  }  // namespace detail

  // Tooling export: one object per declaration, in document order.
  inline Json to_json(Document const& doc) {
    Json decls = Json::array();
    for (auto const& d : doc.declarations) {
      decls.push_back(std::visit(detail::JsonExporter{}, d));
    }
    return {{"declarations", decls}};
  }

}  // namespace locwb::dsl
