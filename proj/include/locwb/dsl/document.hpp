#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace locwb::dsl {

  // Source position of a declaration or statement (1-based, 0 = none).
  // Positions take no part in equality.
  struct Pos {
    int line   = 0;
    int column = 0;
    bool operator==(Pos const&) const { return true; }
  };

  struct MorDecl {
    std::string name, src, dst;
    Pos         pos;
    bool operator==(MorDecl const&) const = default;
  };

  struct ComposeDecl {
    std::string g, f, h;  // g o f = h
    Pos         pos;
    bool operator==(ComposeDecl const&) const = default;
  };

  struct CategoryDecl {
    std::string              name;
    std::vector<std::string> objects;
    std::vector<MorDecl>     morphisms;
    std::vector<ComposeDecl> composes;
    Pos                      pos;
    bool operator==(CategoryDecl const&) const = default;
  };

  struct ClassDecl {
    std::string              name, category;
    std::vector<std::string> members;
    Pos                      pos;
    bool operator==(ClassDecl const&) const = default;
  };

  struct MapDecl {
    std::string from, to;
    Pos         pos;
    bool operator==(MapDecl const&) const = default;
  };

  struct FunctorDecl {
    std::string          name, source, target;
    std::vector<MapDecl> objects, morphisms;
    Pos                  pos;
    bool operator==(FunctorDecl const&) const = default;
  };

  struct SetupDecl {
    std::string                name, C, D, T;
    std::optional<std::string> S, Sprime;  // absent: identities
    Pos                        pos;
    bool operator==(SetupDecl const&) const = default;
  };

  struct RelationDecl {
    std::string lo, hi;  // hi empty: a bare element
    Pos         pos;
    bool operator==(RelationDecl const&) const = default;
  };

  struct PosetDecl {
    std::string               name;
    std::vector<RelationDecl> relations;
    Pos                       pos;
    bool operator==(PosetDecl const&) const = default;
  };

  // kind: "obj" (an object of D), "arrow" (an arrow) or "pair" (arrows
  // g f with g after f, as in compose).
  struct SelectDecl {
    std::string              kind;
    std::vector<std::string> index;
    std::vector<std::string> members;
    Pos                      pos;
    bool operator==(SelectDecl const&) const = default;
  };

  struct WeakDecl {
    std::string             name, setup;
    std::vector<SelectDecl> selections;
    Pos                     pos;
    bool operator==(WeakDecl const&) const = default;
  };

  // Per object of D, the chosen objects of J_d; objects without a line
  // choose nothing.
  struct KSelectorDecl {
    std::string             name, setup;
    std::vector<SelectDecl> selections;  // kind "obj"
    Pos                     pos;
    bool operator==(KSelectorDecl const&) const = default;
  };

  using Declaration = std::variant<CategoryDecl, ClassDecl, FunctorDecl, SetupDecl,
                                   PosetDecl, WeakDecl, KSelectorDecl>;

  struct Document {
    std::vector<Declaration> declarations;
    bool operator==(Document const&) const = default;
  };

  inline std::string const& declaration_name(Declaration const& d) {
    return std::visit([](auto const& x) -> std::string const& { return x.name; }, d);
  }

  inline char const* declaration_kind(Declaration const& d) {
    static char const* const kinds[] = {"category", "class", "functor", "setup",
                                        "poset",    "weak",  "kselector"};
    return kinds[d.index()];
  }

  // ---- Printing -------------------------------------------------------------

  inline bool is_identifier_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')
           || c == '_' || c == '\'' || c == '.' || c == '^' || c == '*';
  }

  inline std::string quote_name(std::string const& s) {
    bool plain = !s.empty();
    for (char c : s) {
      plain = plain && is_identifier_char(c);
    }
    if (plain) {
      return s;
    }
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') {
        out += '\\';
      }
      out += c;
    }
    return out + "\"";
  }

  namespace detail {

    inline std::string join_names(std::vector<std::string> const& v,
                                  char const* sep = ", ") {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? sep : "") + quote_name(v[i]);
      }
      return out;
    }

    inline void print_selections(std::string& out,
                                 std::vector<SelectDecl> const& sel) {
      for (auto const& s : sel) {
        out += "  " + s.kind + " " + join_names(s.index, " ") + ":";
        if (!s.members.empty()) {
          out += " " + join_names(s.members);
        }
        out += ";\n";
      }
    }

    struct Printer {
      std::string& out;

      void operator()(CategoryDecl const& c) const {
        out += "category " + quote_name(c.name) + " {\n";
        if (!c.objects.empty()) {
          out += "  objects: " + join_names(c.objects) + ";\n";
        }
        for (auto const& m : c.morphisms) {
          out += "  mor " + quote_name(m.name) + ": " + quote_name(m.src) + " -> "
                 + quote_name(m.dst) + ";\n";
        }
        for (auto const& k : c.composes) {
          out += "  compose " + quote_name(k.g) + " " + quote_name(k.f) + " = "
                 + quote_name(k.h) + ";\n";
        }
        out += "}\n";
      }

      void operator()(ClassDecl const& c) const {
        out += "class " + quote_name(c.name) + " in " + quote_name(c.category) + " {";
        for (auto const& m : c.members) {
          out += " " + quote_name(m) + ";";
        }
        out += " }\n";
      }

      void operator()(FunctorDecl const& f) const {
        out += "functor " + quote_name(f.name) + ": " + quote_name(f.source) + " -> "
               + quote_name(f.target) + " {\n";
        for (auto const& m : f.objects) {
          out += "  obj " + quote_name(m.from) + " -> " + quote_name(m.to) + ";\n";
        }
        for (auto const& m : f.morphisms) {
          out += "  mor " + quote_name(m.from) + " -> " + quote_name(m.to) + ";\n";
        }
        out += "}\n";
      }

      void operator()(SetupDecl const& s) const {
        out += "setup " + quote_name(s.name) + " {\n";
        out += "  C = " + quote_name(s.C) + ";\n";
        out += "  D = " + quote_name(s.D) + ";\n";
        out += "  T = " + quote_name(s.T) + ";\n";
        if (s.S) {
          out += "  S = " + quote_name(*s.S) + ";\n";
        }
        if (s.Sprime) {
          out += "  Sprime = " + quote_name(*s.Sprime) + ";\n";
        }
        out += "}\n";
      }

      void operator()(PosetDecl const& p) const {
        out += "poset " + quote_name(p.name) + " {";
        for (auto const& r : p.relations) {
          out += " " + quote_name(r.lo);
          if (!r.hi.empty()) {
            out += " < " + quote_name(r.hi);
          }
          out += ";";
        }
        out += " }\n";
      }

      void operator()(WeakDecl const& w) const {
        out += "weak " + quote_name(w.name) + " for " + quote_name(w.setup) + " {\n";
        print_selections(out, w.selections);
        out += "}\n";
      }

      void operator()(KSelectorDecl const& k) const {
        out += "kselector " + quote_name(k.name) + " for " + quote_name(k.setup)
               + " {\n";
        print_selections(out, k.selections);
        out += "}\n";
      }
    };

  }  // namespace detail

  // Canonical text: one blank line between declarations.
  inline std::string print(Document const& doc) {
    std::string out;
    for (std::size_t i = 0; i < doc.declarations.size(); ++i) {
      if (i) {
        out += "\n";
      }
      std::visit(detail::Printer{out}, doc.declarations[i]);
    }
    return out;
  }

}  // namespace locwb::dsl
