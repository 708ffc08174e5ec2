#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "locwb/core/errors.hpp"

namespace locwb {

  // Letters are +(k+1) for generator k and -(k+1) for its inverse.
  using GroupWord = std::vector<int>;

  struct GroupPresentation {
    std::vector<std::string> generators;
    std::vector<GroupWord>   relators;
  };

  inline GroupWord free_reduce(GroupWord const& w) {
    GroupWord r;
    for (int x : w) {
      if (!r.empty() && r.back() == -x) {
        r.pop_back();
      } else {
        r.push_back(x);
      }
    }
    return r;
  }

  inline GroupWord cyclic_reduce(GroupWord w) {
    w = free_reduce(w);
    std::size_t lo = 0;
    std::size_t hi = w.size();
    while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
      ++lo;
      --hi;
    }
    return GroupWord(w.begin() + lo, w.begin() + hi);
  }

  inline GroupWord invert_word(GroupWord const& w) {
    GroupWord r(w.rbegin(), w.rend());
    for (int& x : r) {
      x = -x;
    }
    return r;
  }

  // ---- Tietze simplification ----------------------------------------------

  struct TietzeOptions {
    std::size_t max_relator_length = 200;
  };

  // Removes trivial relators, kills generators equal to a length-one
  // relator and eliminates generators occurring exactly once in some
  // relator, as long as relators stay below the length cap. The resulting
  // presentation defines an isomorphic group.
  inline GroupPresentation tietze_simplify(GroupPresentation P,
                                           TietzeOptions const& opt = {}) {
    auto normalise = [](std::vector<GroupWord>& rels) {
      std::vector<GroupWord> out;
      for (auto& r : rels) {
        auto c = cyclic_reduce(r);
        if (!c.empty()) {
          out.push_back(std::move(c));
        }
      }
      std::sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
      });
      out.erase(std::unique(out.begin(), out.end()), out.end());
      rels = std::move(out);
    };

    // Substitutes generator g by the word `by` (letters of other gens).
    auto substitute = [](std::vector<GroupWord>& rels, int g,
                         GroupWord const& by) {
      GroupWord inv = invert_word(by);
      for (auto& r : rels) {
        GroupWord n;
        for (int x : r) {
          if (x == g + 1) {
            n.insert(n.end(), by.begin(), by.end());
          } else if (x == -(g + 1)) {
            n.insert(n.end(), inv.begin(), inv.end());
          } else {
            n.push_back(x);
          }
        }
        r = std::move(n);
      }
    };

    std::vector<bool> alive(P.generators.size(), true);
    normalise(P.relators);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 0; k < P.relators.size() && !changed; ++k) {
        auto const& r = P.relators[k];
        // Generator occurring exactly once in r.
        std::map<int, int> count;
        for (int x : r) {
          ++count[std::abs(x) - 1];
        }
        for (auto [g, c] : count) {
          if (c != 1) {
            continue;
          }
          // r = u g^e v  =>  g^e = u^-1 v^-1  =>  g = (v u)^-e.
          auto      pos = std::find_if(r.begin(), r.end(),
                                       [g = g](int x) { return std::abs(x) == g + 1; });
          int       e   = *pos > 0 ? 1 : -1;
          GroupWord u(r.begin(), pos);
          GroupWord v(pos + 1, r.end());
          GroupWord vu = v;
          vu.insert(vu.end(), u.begin(), u.end());
          GroupWord by = e > 0 ? invert_word(vu) : vu;
          by           = free_reduce(by);
          std::vector<GroupWord> rest;
          for (std::size_t l = 0; l < P.relators.size(); ++l) {
            if (l != k) {
              rest.push_back(P.relators[l]);
            }
          }
          auto trial = rest;
          substitute(trial, g, by);
          bool fits = true;
          for (auto& t : trial) {
            t    = cyclic_reduce(t);
            fits = fits && t.size() <= opt.max_relator_length;
          }
          if (!fits) {
            continue;
          }
          P.relators = std::move(trial);
          alive[g]   = false;
          normalise(P.relators);
          changed = true;
          break;
        }
      }
    }
    // Renumber surviving generators.
    std::vector<int>         renumber(P.generators.size(), -1);
    std::vector<std::string> gens;
    for (std::size_t g = 0; g < P.generators.size(); ++g) {
      if (alive[g]) {
        renumber[g] = static_cast<int>(gens.size());
        gens.push_back(P.generators[g]);
      }
    }
    for (auto& r : P.relators) {
      for (int& x : r) {
        int g = std::abs(x) - 1;
        x     = x > 0 ? renumber[g] + 1 : -(renumber[g] + 1);
      }
    }
    P.generators = std::move(gens);
    normalise(P.relators);
    return P;
  }

  // ---- Abelianisation ------------------------------------------------------

  // A homomorphism onto Z (modulus 0) or Z/n sending every relator to zero
  // and some generator to a nonzero class.
  struct AbelianCertificate {
    std::vector<std::int64_t> invariants;  // nontrivial invariant factors; 0 = Z
    std::int64_t              modulus = 0;
    std::vector<std::int64_t> images;      // per generator
  };

  namespace detail {

    inline bool mul_ok(std::int64_t a, std::int64_t b, std::int64_t& out) {
      return !__builtin_mul_overflow(a, b, &out);
    }

    inline bool add_ok(std::int64_t a, std::int64_t b, std::int64_t& out) {
      return !__builtin_add_overflow(a, b, &out);
    }

  }  // namespace detail

  // Smith normal form of the relator exponent-sum matrix with column
  // operations tracked. Returns nullopt on int64 overflow.
  struct SmithResult {
    std::vector<std::int64_t>              diagonal;  // length = #generators
    std::vector<std::vector<std::int64_t>> columns;   // Q, generators x generators
  };

  inline std::optional<SmithResult> smith_normal_form(
      std::vector<std::vector<std::int64_t>> M, std::size_t cols) {
    std::size_t const rows = M.size();
    std::vector<std::vector<std::int64_t>> Q(cols,
                                             std::vector<std::int64_t>(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) {
      Q[i][i] = 1;
    }
    bool overflow = false;
    // row_j -= q * row_i
    auto row_op = [&](std::size_t dst, std::size_t src, std::int64_t q) {
      for (std::size_t c = 0; c < cols; ++c) {
        std::int64_t t;
        if (!detail::mul_ok(q, M[src][c], t)
            || !detail::add_ok(M[dst][c], -t, M[dst][c])) {
          overflow = true;
        }
      }
    };
    auto col_op = [&](std::size_t dst, std::size_t src, std::int64_t q) {
      for (std::size_t r = 0; r < rows; ++r) {
        std::int64_t t;
        if (!detail::mul_ok(q, M[r][src], t)
            || !detail::add_ok(M[r][dst], -t, M[r][dst])) {
          overflow = true;
        }
      }
      for (std::size_t r = 0; r < cols; ++r) {
        std::int64_t t;
        if (!detail::mul_ok(q, Q[r][src], t)
            || !detail::add_ok(Q[r][dst], -t, Q[r][dst])) {
          overflow = true;
        }
      }
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
      for (auto& row : M) {
        std::swap(row[a], row[b]);
      }
      for (auto& row : Q) {
        std::swap(row[a], row[b]);
      }
    };

    std::size_t t = 0;
    for (; t < std::min(rows, cols) && !overflow; ++t) {
      // Pivot: smallest nonzero absolute value in the remaining block.
      while (!overflow) {
        std::size_t pr = rows, pc = cols;
        for (std::size_t r = t; r < rows; ++r) {
          for (std::size_t c = t; c < cols; ++c) {
            if (M[r][c] != 0
                && (pr == rows || std::llabs(M[r][c]) < std::llabs(M[pr][pc]))) {
              pr = r;
              pc = c;
            }
          }
        }
        if (pr == rows) {
          break;
        }
        std::swap(M[t], M[pr]);
        swap_cols(t, pc);
        bool clean = true;
        for (std::size_t r = t + 1; r < rows; ++r) {
          if (M[r][t] != 0) {
            row_op(r, t, M[r][t] / M[t][t]);
            clean = clean && M[r][t] == 0;
          }
        }
        for (std::size_t c = t + 1; c < cols; ++c) {
          if (M[t][c] != 0) {
            col_op(c, t, M[t][c] / M[t][t]);
            clean = clean && M[t][c] == 0;
          }
        }
        if (!clean) {
          continue;
        }
        // Divisibility condition on the remaining block.
        bool divides = true;
        for (std::size_t r = t + 1; r < rows && divides; ++r) {
          for (std::size_t c = t + 1; c < cols && divides; ++c) {
            if (M[r][c] % M[t][t] != 0) {
              divides = false;
              row_op(t, r, -1);  // row_t += row_r
            }
          }
        }
        if (divides) {
          break;
        }
      }
      if (t < rows && t < cols && M[t][t] == 0) {
        break;
      }
    }
    if (overflow) {
      return std::nullopt;
    }
    SmithResult result;
    result.diagonal.assign(cols, 0);
    for (std::size_t i = 0; i < std::min(rows, cols); ++i) {
      result.diagonal[i] = std::llabs(M[i][i]);
    }
    result.columns = std::move(Q);
    return result;
  }

  inline std::vector<std::vector<std::int64_t>> exponent_matrix(
      GroupPresentation const& P) {
    std::vector<std::vector<std::int64_t>> M;
    for (auto const& r : P.relators) {
      std::vector<std::int64_t> row(P.generators.size(), 0);
      for (int x : r) {
        row[std::abs(x) - 1] += x > 0 ? 1 : -1;
      }
      M.push_back(std::move(row));
    }
    return M;
  }

  // Nontrivial abelianisation certificate, or nullopt when the
  // abelianisation is trivial (or the computation overflowed; `overflow`
  // tells which).
  inline std::optional<AbelianCertificate> abelian_certificate(
      GroupPresentation const& P, bool* overflow = nullptr) {
    if (overflow) {
      *overflow = false;
    }
    auto const n = P.generators.size();
    if (n == 0) {
      return std::nullopt;
    }
    auto snf = smith_normal_form(exponent_matrix(P), n);
    if (!snf) {
      if (overflow) {
        *overflow = true;
      }
      return std::nullopt;
    }
    AbelianCertificate cert;
    std::optional<std::size_t> pick;
    for (std::size_t k = 0; k < n; ++k) {
      if (snf->diagonal[k] != 1) {
        cert.invariants.push_back(snf->diagonal[k]);
        if (!pick) {
          pick = k;
        }
      }
    }
    if (!pick) {
      return std::nullopt;
    }
    std::sort(cert.invariants.begin(), cert.invariants.end(),
              [](std::int64_t a, std::int64_t b) {
                // Torsion first in increasing order, free part (0) last.
                if ((a == 0) != (b == 0)) {
                  return b == 0;
                }
                return a < b;
              });
    cert.modulus = snf->diagonal[*pick];
    for (std::size_t g = 0; g < n; ++g) {
      std::int64_t x = snf->columns[g][*pick];
      if (cert.modulus > 0) {
        x = ((x % cert.modulus) + cert.modulus) % cert.modulus;
      }
      cert.images.push_back(x);
    }
    return cert;
  }

  inline bool verify_abelian_certificate(GroupPresentation const& P,
                                         AbelianCertificate const& cert) {
    if (cert.images.size() != P.generators.size()) {
      return false;
    }
    auto reduce = [&](std::int64_t x) {
      return cert.modulus > 0 ? ((x % cert.modulus) + cert.modulus) % cert.modulus
                              : x;
    };
    for (auto const& r : P.relators) {
      std::int64_t sum = 0;
      for (int x : r) {
        sum += (x > 0 ? 1 : -1) * cert.images[std::abs(x) - 1];
        sum = reduce(sum);
      }
      if (sum != 0) {
        return false;
      }
    }
    return std::any_of(cert.images.begin(), cert.images.end(),
                       [&](std::int64_t x) { return reduce(x) != 0; });
  }

  // ---- Coset enumeration ---------------------------------------------------

  // Permutation action of the generators on the cosets of the trivial
  // subgroup (the regular representation when complete).
  struct CosetTable {
    std::size_t                   index = 0;
    std::vector<std::vector<int>> action;  // per generator: coset -> coset
  };

  // HLT coset enumeration of the trivial subgroup. Returns nullopt when the
  // number of defined cosets would exceed max_cosets.
  inline std::optional<CosetTable> enumerate_cosets(GroupPresentation const& P,
                                                    std::size_t max_cosets) {
    int const ngen = static_cast<int>(P.generators.size());
    int const cols = 2 * ngen;
    auto      col  = [](int x) { return x > 0 ? 2 * (x - 1) : 2 * (-x - 1) + 1; };
    auto      inv  = [](int c) { return c ^ 1; };

    std::vector<std::vector<int>> table;
    std::vector<int>              forward;  // coincidence forwarding; self if alive
    auto new_coset = [&]() -> int {
      table.emplace_back(cols, -1);
      forward.push_back(static_cast<int>(forward.size()));
      return static_cast<int>(table.size()) - 1;
    };
    auto rep = [&](int c) {
      int r = c;
      while (forward[r] != r) {
        r = forward[r];
      }
      while (forward[c] != r) {
        int next   = forward[c];
        forward[c] = r;
        c          = next;
      }
      return r;
    };

    bool exceeded = false;
    auto define   = [&](int a, int x) {
      if (table.size() >= max_cosets) {
        exceeded = true;
        return;
      }
      int b           = new_coset();
      table[a][x]      = b;
      table[b][inv(x)] = a;
    };

    // Merge coset classes; queue-based coincidence processing.
    auto coincidence = [&](int a, int b) {
      std::vector<int> queue;
      auto             merge = [&](int x, int y) {
        x = rep(x);
        y = rep(y);
        if (x == y) {
          return;
        }
        if (y < x) {
          std::swap(x, y);
        }
        forward[y] = x;
        queue.push_back(y);
      };
      merge(a, b);
      for (std::size_t q = 0; q < queue.size(); ++q) {
        int y = queue[q];
        for (int c = 0; c < cols; ++c) {
          int z = table[y][c];
          if (z < 0) {
            continue;
          }
          // Remove the back edge from z.
          if (table[z][inv(c)] == y) {
            table[z][inv(c)] = -1;
          }
          int x1 = rep(y);
          int z1 = rep(z);
          if (table[x1][c] >= 0) {
            merge(z1, table[x1][c]);
          } else if (table[z1][inv(c)] >= 0) {
            merge(x1, table[z1][inv(c)]);
          } else {
            table[x1][c]       = z1;
            table[z1][inv(c)]  = x1;
          }
        }
      }
    };

    auto scan_and_fill = [&](int a, GroupWord const& w) {
      int const n = static_cast<int>(w.size());
      int       f = a;
      int       b = a;
      int       i = 0;
      int       j = n - 1;
      while (!exceeded) {
        while (i <= j && table[f][col(w[i])] >= 0) {
          f = table[f][col(w[i])];
          ++i;
        }
        if (i > j) {
          if (f != b) {
            coincidence(f, b);
          }
          return;
        }
        while (j >= i && table[b][inv(col(w[j]))] >= 0) {
          b = table[b][inv(col(w[j]))];
          --j;
        }
        if (j < i) {
          coincidence(f, b);
          return;
        }
        if (i == j) {
          table[f][col(w[i])]      = b;
          table[b][inv(col(w[i]))] = f;
          return;
        }
        define(f, col(w[i]));
      }
    };

    new_coset();
    for (int a = 0; a < static_cast<int>(table.size()) && !exceeded; ++a) {
      for (auto const& w : P.relators) {
        if (forward[a] != a || exceeded) {
          break;
        }
        scan_and_fill(a, w);
      }
      for (int c = 0; c < cols && !exceeded; ++c) {
        if (forward[a] == a && table[a][c] < 0) {
          define(a, c);
        }
      }
    }
    if (exceeded) {
      return std::nullopt;
    }
    // Compact the live cosets.
    std::vector<int> number(table.size(), -1);
    int              count = 0;
    for (std::size_t c = 0; c < table.size(); ++c) {
      if (forward[c] == static_cast<int>(c)) {
        number[c] = count++;
      }
    }
    CosetTable result;
    result.index = static_cast<std::size_t>(count);
    result.action.assign(ngen, std::vector<int>(count, -1));
    for (std::size_t c = 0; c < table.size(); ++c) {
      if (number[c] < 0) {
        continue;
      }
      for (int g = 0; g < ngen; ++g) {
        result.action[g][number[c]] = number[rep(table[c][2 * g])];
      }
    }
    return result;
  }

  // The permutation images must be bijections satisfying every relator.
  // When nontrivial they define a nontrivial homomorphism of the group.
  inline bool verify_permutation_action(GroupPresentation const&             P,
                                        std::vector<std::vector<int>> const& act,
                                        std::size_t                          n) {
    if (act.size() != P.generators.size()) {
      return false;
    }
    std::vector<std::vector<int>> inverse(act.size(), std::vector<int>(n, -1));
    for (std::size_t g = 0; g < act.size(); ++g) {
      if (act[g].size() != n) {
        return false;
      }
      for (std::size_t x = 0; x < n; ++x) {
        int y = act[g][x];
        if (y < 0 || static_cast<std::size_t>(y) >= n || inverse[g][y] >= 0) {
          return false;
        }
        inverse[g][y] = static_cast<int>(x);
      }
    }
    for (auto const& r : P.relators) {
      for (std::size_t x = 0; x < n; ++x) {
        int y = static_cast<int>(x);
        for (int l : r) {
          y = l > 0 ? act[l - 1][y] : inverse[-l - 1][y];
        }
        if (y != static_cast<int>(x)) {
          return false;
        }
      }
    }
    return true;
  }

  inline bool is_nontrivial_action(std::vector<std::vector<int>> const& act) {
    for (auto const& p : act) {
      for (std::size_t x = 0; x < p.size(); ++x) {
        if (p[x] != static_cast<int>(x)) {
          return true;
        }
      }
    }
    return false;
  }

  // Order of the permutation group generated by `act` (closure by BFS),
  // or cap + 1 when it exceeds cap.
  inline std::size_t permutation_group_order(
      std::vector<std::vector<int>> const& act, std::size_t n, std::size_t cap) {
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    std::vector<std::vector<int>> elems{id};
    std::map<std::vector<int>, int> seen{{id, 0}};
    for (std::size_t k = 0; k < elems.size(); ++k) {
      for (auto const& g : act) {
        std::vector<int> h(n);
        for (std::size_t x = 0; x < n; ++x) {
          h[x] = g[elems[k][x]];
        }
        if (seen.emplace(h, 0).second) {
          elems.push_back(h);
          if (elems.size() > cap) {
            return cap + 1;
          }
        }
      }
    }
    return elems.size();
  }

  // Searches for a nontrivial homomorphism into S_n (2 <= n <= max_degree)
  // whose image has order at most max_order.
  inline std::optional<std::vector<std::vector<int>>> find_quotient(
      GroupPresentation const& P, std::size_t max_degree, std::size_t max_order,
      std::size_t max_nodes, bool* budget_hit = nullptr) {
    std::size_t nodes = 0;
    if (budget_hit) {
      *budget_hit = false;
    }
    auto const ngen = P.generators.size();
    if (ngen == 0) {
      return std::nullopt;
    }
    for (std::size_t n = 2; n <= max_degree; ++n) {
      std::vector<std::vector<int>> perms;
      std::vector<int>              p(n);
      std::iota(p.begin(), p.end(), 0);
      do {
        perms.push_back(p);
      } while (std::next_permutation(p.begin(), p.end()));
      std::vector<std::vector<int>> act(ngen);
      std::optional<std::vector<std::vector<int>>> found;
      std::function<bool(std::size_t)> rec = [&](std::size_t g) -> bool {
        if (++nodes > max_nodes) {
          if (budget_hit) {
            *budget_hit = true;
          }
          return true;
        }
        if (g == ngen) {
          if (is_nontrivial_action(act) && verify_permutation_action(P, act, n)
              && permutation_group_order(act, n, max_order) <= max_order) {
            found = act;
            return true;
          }
          return false;
        }
        // Up to conjugacy the first generator can be taken as a canonical
        // cycle-type representative; we keep it simple and enumerate all.
        for (auto const& q : perms) {
          act[g] = q;
          // Prune with relators only involving assigned generators.
          bool ok = true;
          for (auto const& r : P.relators) {
            bool only = std::all_of(r.begin(), r.end(), [&](int l) {
              return static_cast<std::size_t>(std::abs(l) - 1) <= g;
            });
            if (!only) {
              continue;
            }
            std::vector<std::vector<int>> partial(act.begin(), act.begin() + g + 1);
            GroupPresentation             sub{std::vector<std::string>(g + 1), {r}};
            if (!verify_permutation_action(sub, partial, n)) {
              ok = false;
              break;
            }
          }
          if (ok && rec(g + 1)) {
            return true;
          }
        }
        return false;
      };
      rec(0);
      if (found) {
        return found;
      }
      if (budget_hit && *budget_hit) {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  // ---- Decision pipeline ---------------------------------------------------

  enum class Pi1Status { Trivial, Nontrivial, Unknown };

  inline char const* to_string(Pi1Status s) {
    switch (s) {
      case Pi1Status::Trivial: return "Trivial";
      case Pi1Status::Nontrivial: return "Nontrivial";
      case Pi1Status::Unknown: return "Unknown";
    }
    return "";
  }

  struct TrivialityVerdict {
    Pi1Status status = Pi1Status::Unknown;
    // Which stage decided: "tietze", "abelianisation", "cosets",
    // "quotient", or the budget that ran out.
    std::string                         stage;
    GroupPresentation                   simplified;
    std::optional<AbelianCertificate>   abelian;
    std::optional<CosetTable>           cosets;  // complete table
    std::optional<std::vector<std::vector<int>>> quotient;
  };

  inline TrivialityVerdict decide_triviality(GroupPresentation const& P,
                                             Budget const& budget = {}) {
    TrivialityVerdict v;
    v.simplified = tietze_simplify(P);
    auto const& Q = v.simplified;
    if (Q.generators.empty()) {
      v.status = Pi1Status::Trivial;
      v.stage  = "tietze";
      return v;
    }
    bool overflow = false;
    v.abelian     = abelian_certificate(Q, &overflow);
    if (v.abelian) {
      v.status = Pi1Status::Nontrivial;
      v.stage  = "abelianisation";
      return v;
    }
    auto table = enumerate_cosets(Q, budget.pi1_cosets);
    if (table) {
      v.cosets = table;
      v.status = table->index == 1 ? Pi1Status::Trivial : Pi1Status::Nontrivial;
      v.stage  = "cosets";
      return v;
    }
    bool hit = false;
    auto q   = find_quotient(Q, 5, budget.quotient_order, budget.quotient_nodes,
                             &hit);
    if (q) {
      v.quotient = q;
      v.status   = Pi1Status::Nontrivial;
      v.stage    = "quotient";
      return v;
    }
    v.status = Pi1Status::Unknown;
    v.stage  = overflow ? "abelianisation overflow; coset budget"
                        : "coset budget";
    return v;
  }

}  // namespace locwb
