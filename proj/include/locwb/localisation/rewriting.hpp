#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/errors.hpp"

namespace locwb {

  // Words are letter sequences in path order: the first letter is applied
  // first.
  using Word = std::vector<int>;

  struct TypedLetter {
    std::string name;
    ObjId       src;
    ObjId       dst;
  };

  // Generators with source and target objects, and relations between
  // parallel typed words.
  struct TypedPresentation {
    std::vector<std::string>           objects;
    std::vector<TypedLetter>           letters;
    std::vector<std::pair<Word, Word>> relations;
  };

  // Shortlex on letter ids.
  inline bool shortlex_less(Word const& a, Word const& b) {
    if (a.size() != b.size()) {
      return a.size() < b.size();
    }
    return a < b;
  }

  inline bool is_typed(TypedPresentation const& P, Word const& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (P.letters[w[i]].dst != P.letters[w[i + 1]].src) {
        return false;
      }
    }
    return true;
  }

  inline std::string render_word(TypedPresentation const& P, Word const& w,
                                 ObjId at) {
    if (w.empty()) {
      return "id_" + P.objects[at];
    }
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) {
        out += ".";
      }
      out += P.letters[w[i]].name;
    }
    return out;
  }

  // A length-reducing (shortlex) rewriting system over the letters of a
  // typed presentation.
  class RewriteSystem {
   public:
    struct Rule {
      Word lhs;
      Word rhs;
      bool alive = true;
    };

    RewriteSystem() = default;
    explicit RewriteSystem(std::size_t letters) : _by_last(letters) {}

    bool complete = false;
    // Why completion stopped early, empty when complete.
    std::string failure;

    std::vector<std::pair<Word, Word>> rules() const {
      std::vector<std::pair<Word, Word>> out;
      for (auto const& r : _rules) {
        if (r.alive) {
          out.emplace_back(r.lhs, r.rhs);
        }
      }
      return out;
    }

    std::size_t size() const {
      std::size_t n = 0;
      for (auto const& r : _rules) {
        n += r.alive;
      }
      return n;
    }

    // Left-to-right reduction: letters move from the input onto the
    // output; whenever a left side appears as a suffix of the output it is
    // replaced and the right side is pushed back onto the input.
    Word reduce(Word const& w) const {
      Word out;
      Word in(w.rbegin(), w.rend());
      while (!in.empty()) {
        int a = in.back();
        in.pop_back();
        out.push_back(a);
        if (auto k = suffix_rule(out)) {
          auto const& r = _rules[*k];
          out.resize(out.size() - r.lhs.size());
          in.insert(in.end(), r.rhs.rbegin(), r.rhs.rend());
        }
      }
      return out;
    }

    // Some rule whose left side is a suffix of w.
    std::optional<std::size_t> suffix_rule(Word const& w) const {
      if (w.empty()) {
        return std::nullopt;
      }
      for (std::size_t k : _by_last[w.back()]) {
        auto const& r = _rules[k];
        if (r.alive && r.lhs.size() <= w.size()
            && std::equal(r.lhs.begin(), r.lhs.end(), w.end() - r.lhs.size())) {
          return k;
        }
      }
      return std::nullopt;
    }

    bool irreducible(Word const& w) const {
      return reduce(w) == w;
    }

    bool equal(Word const& a, Word const& b) const {
      return reduce(a) == reduce(b);
    }

    // Internal: used by completion.
    std::vector<Rule>& raw() {
      return _rules;
    }
    std::vector<Rule> const& raw() const {
      return _rules;
    }
    void index(std::size_t k) {
      _by_last[_rules[k].lhs.back()].push_back(k);
    }

   private:
    std::vector<Rule>                     _rules;
    std::vector<std::vector<std::size_t>> _by_last;
  };

  namespace detail {

    inline bool contains(Word const& hay, Word const& needle) {
      return std::search(hay.begin(), hay.end(), needle.begin(), needle.end())
             != hay.end();
    }

  }  // namespace detail

  // Knuth-Bendix completion for shortlex order. The system is complete
  // when every critical pair resolves; otherwise the partial system is
  // returned with `complete` unset and `failure` naming the exhausted
  // budget. Relations between typed words only produce typed rules, so
  // the untyped completion decides the word problem of the category.
  inline RewriteSystem kb_complete(TypedPresentation const& P,
                                   Budget const&            budget = {}) {
    RewriteSystem R(P.letters.size());
    auto&         rules = R.raw();
    bool          fail  = false;

    std::vector<std::pair<Word, Word>> pending;
    auto drain = [&]() {
      while (!pending.empty() && !fail) {
        auto [u, v] = std::move(pending.back());
        pending.pop_back();
        u = R.reduce(u);
        v = R.reduce(v);
        if (u == v) {
          continue;
        }
        if (shortlex_less(u, v)) {
          std::swap(u, v);
        }
        if (u.size() > budget.kb_word_length) {
          fail      = true;
          R.failure = "rule length exceeds the budget";
          return;
        }
        if (R.size() >= budget.kb_rules) {
          fail      = true;
          R.failure = "rule count exceeds the budget";
          return;
        }
        rules.push_back({u, v, true});
        std::size_t const k = rules.size() - 1;
        R.index(k);
        // Interreduce.
        for (std::size_t i = 0; i < k; ++i) {
          auto& r = rules[i];
          if (!r.alive) {
            continue;
          }
          if (detail::contains(r.lhs, u)) {
            r.alive = false;
            pending.emplace_back(r.lhs, r.rhs);
          } else if (detail::contains(r.rhs, u)) {
            r.rhs = R.reduce(r.rhs);
          }
        }
      }
    };

    for (auto const& [a, b] : P.relations) {
      pending.emplace_back(a, b);
    }
    drain();

    auto overlaps = [&](std::size_t a, std::size_t b) {
      // Suffix of lhs_a equals prefix of lhs_b.
      Word const la = rules[a].lhs;
      Word const ra = rules[a].rhs;
      Word const lb = rules[b].lhs;
      Word const rb = rules[b].rhs;
      for (std::size_t k = 1; k < std::min(la.size(), lb.size()) + 0; ++k) {
        if (!std::equal(la.end() - k, la.end(), lb.begin())) {
          continue;
        }
        Word left = ra;
        left.insert(left.end(), lb.begin() + k, lb.end());
        Word right(la.begin(), la.end() - k);
        right.insert(right.end(), rb.begin(), rb.end());
        pending.emplace_back(std::move(left), std::move(right));
      }
      // Overlaps of the full length (one lhs equal to a prefix/suffix of
      // the other) are removed by interreduction.
    };

    for (std::size_t i = 0; i < rules.size() && !fail; ++i) {
      for (std::size_t j = 0; j <= i && !fail; ++j) {
        if (!rules[i].alive) {
          break;
        }
        if (!rules[j].alive) {
          continue;
        }
        overlaps(i, j);
        if (i != j) {
          overlaps(j, i);
        }
        drain();
      }
    }
    R.complete = !fail;
    return R;
  }

  // Irreducible typed words starting at x, grouped by target object.
  // Returns nullopt if there are more than `cap` of them.
  inline std::optional<std::vector<std::vector<Word>>> normal_forms_from(
      TypedPresentation const& P, RewriteSystem const& R, ObjId x,
      std::size_t cap) {
    std::vector<std::vector<Word>> by_target(P.objects.size());
    std::vector<std::pair<Word, ObjId>> frontier{{Word{}, x}};
    by_target[x].push_back({});
    std::size_t count = 1;
    std::vector<std::vector<int>> out(P.objects.size());
    for (std::size_t a = 0; a < P.letters.size(); ++a) {
      out[P.letters[a].src].push_back(static_cast<int>(a));
    }
    while (!frontier.empty()) {
      std::vector<std::pair<Word, ObjId>> next;
      for (auto const& [w, at] : frontier) {
        for (int a : out[at]) {
          Word v = w;
          v.push_back(a);
          if (R.suffix_rule(v)) {
            continue;
          }
          if (++count > cap) {
            return std::nullopt;
          }
          ObjId t = P.letters[a].dst;
          by_target[t].push_back(v);
          next.emplace_back(std::move(v), t);
        }
      }
      frontier = std::move(next);
    }
    return by_target;
  }

}  // namespace locwb
