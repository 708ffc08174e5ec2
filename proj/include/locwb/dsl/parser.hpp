#pragma once

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "locwb/core/errors.hpp"
#include "locwb/dsl/document.hpp"

namespace locwb::dsl {

  struct Token {
    enum Kind { Name, Symbol, End } kind = End;
    std::string text;
    bool        quoted = false;
    Pos         pos;
  };

  inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int                line = 1, col = 1;
    std::size_t        i    = 0;
    auto advance = [&] {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    };
    while (i < src.size()) {
      char c = src[i];
      if (c == '#') {
        while (i < src.size() && src[i] != '\n') {
          advance();
        }
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
        continue;
      }
      Token t;
      t.pos = {line, col};
      if (c == '"') {
        t.kind   = Token::Name;
        t.quoted = true;
        advance();
        while (true) {
          if (i >= src.size() || src[i] == '\n') {
            throw InvalidInput("unterminated string", t.pos.line, t.pos.column);
          }
          if (src[i] == '"') {
            advance();
            break;
          }
          if (src[i] == '\\') {
            advance();
            if (i >= src.size()) {
              throw InvalidInput("unterminated string", t.pos.line, t.pos.column);
            }
          }
          t.text += src[i];
          advance();
        }
      } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
        t.kind = Token::Symbol;
        t.text = "->";
        advance();
        advance();
      } else if (std::string_view("{};:,=<").find(c) != std::string_view::npos) {
        t.kind = Token::Symbol;
        t.text = std::string(1, c);
        advance();
      } else if (is_identifier_char(c)) {
        t.kind = Token::Name;
        while (i < src.size() && is_identifier_char(src[i])) {
          t.text += src[i];
          advance();
        }
      } else {
        throw InvalidInput(std::string("unexpected character '") + c + "'", line, col);
      }
      out.push_back(std::move(t));
    }
    Token end;
    end.pos = {line, col};
    out.push_back(end);
    return out;
  }

  class Parser {
   public:
    explicit Parser(std::string_view src)
        : _tokens(tokenize(src)) {}

    Document parse() {
      Document doc;
      std::set<std::pair<std::size_t, std::string>> seen;
      while (peek().kind != Token::End) {
        auto decl = declaration();
        auto key  = std::make_pair(decl.index(), declaration_name(decl));
        if (!seen.insert(key).second) {
          Pos p = std::visit([](auto const& d) { return d.pos; }, decl);
          throw InvalidInput(std::string("duplicate ") + declaration_kind(decl) + " '"
                                 + key.second + "'",
                             p.line, p.column);
        }
        doc.declarations.push_back(std::move(decl));
      }
      return doc;
    }

   private:
    Token const& peek(std::size_t k = 0) const {
      return _tokens[std::min(_at + k, _tokens.size() - 1)];
    }

    Token const& next() {
      Token const& t = peek();
      if (_at < _tokens.size() - 1) {
        ++_at;
      }
      return t;
    }

    [[noreturn]] void fail(Token const& t, std::string const& expected) const {
      std::string found = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
      throw InvalidInput("syntax error: expected " + expected + ", found " + found,
                         t.pos.line, t.pos.column);
    }

    bool at_keyword(char const* kw) const {
      return peek().kind == Token::Name && !peek().quoted && peek().text == kw;
    }

    bool at_symbol(char const* s) const {
      return peek().kind == Token::Symbol && peek().text == s;
    }

    void keyword(char const* kw) {
      if (!at_keyword(kw)) {
        fail(peek(), std::string("'") + kw + "'");
      }
      next();
    }

    void symbol(char const* s) {
      if (!at_symbol(s)) {
        fail(peek(), std::string("'") + s + "'");
      }
      next();
    }

    std::string name() {
      if (peek().kind != Token::Name) {
        fail(peek(), "a name");
      }
      return next().text;
    }

    // ';' closes a statement; it may be left out before '}'.
    void end_statement() {
      if (at_symbol(";")) {
        next();
      } else if (!at_symbol("}")) {
        fail(peek(), "';'");
      }
    }

    std::vector<std::string> name_list() {
      std::vector<std::string> out{name()};
      while (at_symbol(",")) {
        next();
        out.push_back(name());
      }
      return out;
    }

    Declaration declaration() {
      Token const& t = peek();
      if (at_keyword("category")) {
        return category();
      }
      if (at_keyword("class")) {
        return class_decl();
      }
      if (at_keyword("functor")) {
        return functor();
      }
      if (at_keyword("setup")) {
        return setup();
      }
      if (at_keyword("poset")) {
        return poset();
      }
      if (at_keyword("weak")) {
        WeakDecl w;
        w.pos = t.pos;
        next();
        w.name = name();
        keyword("for");
        w.setup      = name();
        w.selections = selections(true);
        return w;
      }
      if (at_keyword("kselector")) {
        KSelectorDecl k;
        k.pos = t.pos;
        next();
        k.name = name();
        keyword("for");
        k.setup      = name();
        k.selections = selections(false);
        return k;
      }
      fail(t, "a declaration");
    }

    CategoryDecl category() {
      CategoryDecl c;
      c.pos = peek().pos;
      next();
      c.name = name();
      symbol("{");
      while (!at_symbol("}")) {
        Pos p = peek().pos;
        if (at_keyword("objects")) {
          next();
          symbol(":");
          for (auto& o : name_list()) {
            c.objects.push_back(std::move(o));
          }
        } else if (at_keyword("mor")) {
          next();
          MorDecl m;
          m.pos  = p;
          m.name = name();
          symbol(":");
          m.src = name();
          symbol("->");
          m.dst = name();
          c.morphisms.push_back(std::move(m));
        } else if (at_keyword("compose")) {
          next();
          ComposeDecl k;
          k.pos = p;
          k.g   = name();
          k.f   = name();
          symbol("=");
          k.h = name();
          c.composes.push_back(std::move(k));
        } else {
          fail(peek(), "'objects', 'mor', 'compose' or '}'");
        }
        end_statement();
      }
      next();
      return c;
    }

    ClassDecl class_decl() {
      ClassDecl c;
      c.pos = peek().pos;
      next();
      c.name = name();
      keyword("in");
      c.category = name();
      symbol("{");
      while (!at_symbol("}")) {
        c.members.push_back(name());
        end_statement();
      }
      next();
      return c;
    }

    FunctorDecl functor() {
      FunctorDecl f;
      f.pos = peek().pos;
      next();
      f.name = name();
      symbol(":");
      f.source = name();
      symbol("->");
      f.target = name();
      symbol("{");
      while (!at_symbol("}")) {
        bool obj = at_keyword("obj");
        if (!obj && !at_keyword("mor")) {
          fail(peek(), "'obj', 'mor' or '}'");
        }
        MapDecl m;
        m.pos = next().pos;
        m.from = name();
        symbol("->");
        m.to = name();
        (obj ? f.objects : f.morphisms).push_back(std::move(m));
        end_statement();
      }
      next();
      return f;
    }

    SetupDecl setup() {
      SetupDecl s;
      s.pos = peek().pos;
      next();
      s.name = name();
      symbol("{");
      std::set<std::string> fields;
      while (!at_symbol("}")) {
        Token field = peek();
        std::string key = name();
        if (!fields.insert(key).second) {
          throw InvalidInput("duplicate field '" + key + "'", field.pos.line,
                             field.pos.column);
        }
        symbol("=");
        std::string value = name();
        if (key == "C") {
          s.C = value;
        } else if (key == "D") {
          s.D = value;
        } else if (key == "T") {
          s.T = value;
        } else if (key == "S") {
          s.S = value;
        } else if (key == "Sprime") {
          s.Sprime = value;
        } else {
          throw InvalidInput("unknown setup field '" + key + "'", field.pos.line,
                             field.pos.column);
        }
        end_statement();
      }
      for (char const* req : {"C", "D", "T"}) {
        if (!fields.count(req)) {
          throw InvalidInput(std::string("setup '") + s.name + "' lacks field " + req,
                             peek().pos.line, peek().pos.column);
        }
      }
      next();
      return s;
    }

    PosetDecl poset() {
      PosetDecl p;
      p.pos = peek().pos;
      next();
      p.name = name();
      symbol("{");
      while (!at_symbol("}")) {
        RelationDecl r;
        r.pos = peek().pos;
        r.lo  = name();
        if (at_symbol("<")) {
          next();
          r.hi = name();
        }
        p.relations.push_back(std::move(r));
        end_statement();
      }
      next();
      return p;
    }

    std::vector<SelectDecl> selections(bool any_kind) {
      std::vector<SelectDecl> out;
      symbol("{");
      while (!at_symbol("}")) {
        SelectDecl s;
        s.pos = peek().pos;
        int arity = 0;
        if (at_keyword("obj")) {
          arity = 1;
        } else if (any_kind && at_keyword("arrow")) {
          arity = 1;
        } else if (any_kind && at_keyword("pair")) {
          arity = 2;
        } else {
          fail(peek(), any_kind ? "'obj', 'arrow', 'pair' or '}'" : "'obj' or '}'");
        }
        s.kind = next().text;
        for (int i = 0; i < arity; ++i) {
          s.index.push_back(name());
        }
        symbol(":");
        if (peek().kind == Token::Name) {
          s.members = name_list();
        }
        out.push_back(std::move(s));
        end_statement();
      }
      next();
      return out;
    }

    std::vector<Token> _tokens;
    std::size_t        _at = 0;
  };

  inline Document parse(std::string_view text) {
    return Parser(text).parse();
  }

}  // namespace locwb::dsl
