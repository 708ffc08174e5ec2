// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "locwb/cli/run.hpp"
#include "locwb/connectivity/connectivity.hpp"
#include "locwb/core/standard.hpp"
#include "locwb/core/standard_setups.hpp"
#include "locwb/dsl/loader.hpp"
#include "locwb/envelope/envelope.hpp"
#include "locwb/fuzz/generate.hpp"
#include "locwb/hypotheses/audit.hpp"
#include "locwb/localisation/equivalence.hpp"

using namespace locwb;
namespace st = locwb::standard;
namespace fs = std::filesystem;

namespace {

  // Stream sizes.
  constexpr int         kAuditCases     = 10'000;
  constexpr int         kRefereeCases   = 1'000;
  constexpr int         kPi1Categories  = 400;
  constexpr std::size_t kMinPi1         = 200;
  constexpr std::size_t kMinModelCases  = 100;
  constexpr double      kMaxUnknownRate = 0.01;
  constexpr double      kAuditSeconds   = 600.0;

  using Clock = std::chrono::steady_clock;

  int failures = 0;

  void verdict(int n, bool ok, std::string const& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
  }

  std::string slurp(fs::path const& p) {
    std::ifstream      in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  GenConfig stream_config(std::uint64_t seed) {
    GenConfig cfg;
    cfg.seed          = seed;
    cfg.max_objects   = 5;
    cfg.max_morphisms = 10;
    return cfg;
  }

  // All setups declared in the fixture corpus that load.
  std::vector<LocalisationSetup> fixture_setups() {
    std::vector<LocalisationSetup> out;
    for (auto const& e : fs::directory_iterator(LOCWB_FIXTURE_DIR)) {
      if (e.path().extension() != ".loc") {
        continue;
      }
      auto ws = dsl::load_text(slurp(e.path()));
      for (auto const& name : ws.setup_order) {
        out.push_back(ws.setups.at(name));
      }
    }
    std::sort(out.begin(), out.end(),
              [](auto const& a, auto const& b) { return a.name < b.name; });
    return out;
  }

  // ---- Edge-path group oracle ----------------------------------------------

  // Columns: generator k is 2k, its inverse 2k + 1.
  struct EdgePathGroup {
    int                           generators = 0;
    std::vector<std::vector<int>> relators;
  };

  EdgePathGroup edge_path_group(FinCategory const& C, std::vector<int> const& comp) {
    EdgePathGroup G;
    std::map<MorId, int> gen;
    std::vector<bool>    inside(C.num_objects(), false);
    for (int x : comp) {
      inside[x] = true;
    }
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      if (inside[C.src(f)] && !C.is_identity(f)) {
        gen[f] = G.generators++;
      }
    }
    // Spanning tree by breadth-first search; tree arrows are set to 1.
    std::vector<bool> seen(C.num_objects(), false);
    std::vector<int>  queue{comp.front()};
    seen[comp.front()] = true;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      int x = queue[q];
      for (auto const& [f, k] : gen) {
        int other = C.src(f) == x ? C.dst(f) : (C.dst(f) == x ? C.src(f) : -1);
        if (other >= 0 && !seen[other]) {
          seen[other] = true;
          queue.push_back(other);
          G.relators.push_back({2 * k});
        }
      }
    }
    // Path f then g equals g o f.
    for (auto const& [f, kf] : gen) {
      for (auto const& [g, kg] : gen) {
        if (C.dst(f) != C.src(g)) {
          continue;
        }
        MorId            h = C.compose(g, f);
        std::vector<int> w{2 * kf, 2 * kg};
        if (!C.is_identity(h)) {
          w.push_back(2 * gen.at(h) + 1);
        }
        G.relators.push_back(w);
      }
    }
    return G;
  }

  // Coset enumeration over the trivial subgroup (relator-based, with
  // coincidence processing). Returns the group order, or 0 past `limit`.
  std::size_t group_order(EdgePathGroup const& G, std::size_t limit) {
    int const                     cols = 2 * G.generators;
    std::vector<std::vector<int>> table;
    std::vector<int>              parent;
    auto add_coset = [&] {
      table.emplace_back(cols, -1);
      parent.push_back(static_cast<int>(parent.size()));
      return static_cast<int>(parent.size()) - 1;
    };
    std::function<int(int)> rep = [&](int c) {
      while (parent[c] != c) {
        parent[c] = parent[parent[c]];
        c         = parent[c];
      }
      return c;
    };
    std::vector<int> queue;
    auto merge = [&](int a, int b) {
      a = rep(a);
      b = rep(b);
      if (a == b) {
        return;
      }
      if (a > b) {
        std::swap(a, b);
      }
      parent[b] = a;
      queue.push_back(b);
    };
    auto coincidence = [&](int a, int b) {
      queue.clear();
      merge(a, b);
      for (std::size_t i = 0; i < queue.size(); ++i) {
        int e = queue[i];
        for (int x = 0; x < cols; ++x) {
          int f = table[e][x];
          if (f < 0) {
            continue;
          }
          table[f][x ^ 1] = -1;
          int e1 = rep(e), f1 = rep(f);
          if (table[e1][x] >= 0) {
            merge(f1, table[e1][x]);
          } else if (table[f1][x ^ 1] >= 0) {
            merge(e1, table[f1][x ^ 1]);
          } else {
            table[e1][x]      = f1;
            table[f1][x ^ 1] = e1;
          }
        }
      }
    };
    bool overflow = false;
    auto define = [&](int c, int x) {
      if (table.size() >= limit) {
        overflow = true;
        return;
      }
      int n             = add_coset();
      table[c][x]       = n;
      table[n][x ^ 1]   = c;
    };
    auto scan_and_fill = [&](int c, std::vector<int> const& w) {
      int f = c, b = c;
      int i = 0, j = static_cast<int>(w.size()) - 1;
      while (!overflow) {
        while (i <= j && table[f][w[i]] >= 0) {
          f = table[f][w[i++]];
        }
        if (i > j) {
          if (f != b) {
            coincidence(f, b);
          }
          return;
        }
        while (j >= i && table[b][w[j] ^ 1] >= 0) {
          b = table[b][w[j--] ^ 1];
        }
        if (j < i) {
          coincidence(f, b);
          return;
        }
        if (i == j) {
          table[f][w[i]]     = b;
          table[b][w[i] ^ 1] = f;
          return;
        }
        define(f, w[i]);
      }
    };
    add_coset();
    for (int c = 0; c < static_cast<int>(table.size()) && !overflow; ++c) {
      for (auto const& r : G.relators) {
        if (rep(c) != c) {
          break;
        }
        scan_and_fill(c, r);
      }
      for (int x = 0; x < cols && rep(c) == c && !overflow; ++x) {
        if (table[c][x] < 0) {
          define(c, x);
        }
      }
    }
    if (overflow) {
      return 0;
    }
    std::size_t live = 0;
    for (int c = 0; c < static_cast<int>(table.size()); ++c) {
      live += rep(c) == c;
    }
    return live;
  }

  // Rank over Q of the abelianised relation matrix.
  std::size_t abelian_rank(EdgePathGroup const& G) {
    std::vector<std::vector<long long>> M;
    for (auto const& r : G.relators) {
      std::vector<long long> row(G.generators, 0);
      for (int x : r) {
        row[x / 2] += (x & 1) ? -1 : 1;
      }
      M.push_back(row);
    }
    std::size_t rank = 0;
    for (int col = 0; col < G.generators && rank < M.size(); ++col) {
      auto pivot = std::find_if(M.begin() + rank, M.end(),
                                [&](auto const& row) { return row[col] != 0; });
      if (pivot == M.end()) {
        continue;
      }
      std::iter_swap(M.begin() + rank, pivot);
      auto const& p = M[rank];
      for (std::size_t i = rank + 1; i < M.size(); ++i) {
        if (M[i][col] == 0) {
          continue;
        }
        long long a = p[col], b = M[i][col];
        long long g = 0;
        for (int k = 0; k < G.generators; ++k) {
          M[i][k] = a * M[i][k] - b * p[k];
          g       = std::gcd(g, M[i][k]);
        }
        if (g > 1) {
          for (auto& v : M[i]) {
            v /= g;
          }
        }
      }
      ++rank;
    }
    return rank;
  }

  Pi1Status oracle_pi1(FinCategory const& C, std::vector<int> const& comp) {
    auto G = edge_path_group(C, comp);
    if (auto n = group_order(G, 200'000)) {
      return n == 1 ? Pi1Status::Trivial : Pi1Status::Nontrivial;
    }
    if (abelian_rank(G) < static_cast<std::size_t>(G.generators)) {
      return Pi1Status::Nontrivial;
    }
    return Pi1Status::Unknown;
  }

  // ---- Independent recomputation of the transport words -------------------

  // Zig-zags are found depth-first here, so they generally differ from the
  // shortest ones the certificate uses.
  struct Transport {
    LocalisationSetup const&      L;
    EquivalenceCertificate const& cert;

    MorId gamma(ObjId d, int x, int y) const {
      auto const&                                     I = cert.I_obj[d];
      std::vector<std::vector<std::pair<int, int>>>   adj(I.size());
      for (std::size_t k = 0; k < I.morphisms.size(); ++k) {
        adj[I.morphisms[k].src].push_back({I.morphisms[k].dst, static_cast<int>(k) + 1});
        adj[I.morphisms[k].dst].push_back({I.morphisms[k].src, -static_cast<int>(k) - 1});
      }
      std::vector<int> via(I.size(), 0), prev(I.size(), -1), stack{x};
      prev[x] = x;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto it = adj[v].rbegin(); it != adj[v].rend(); ++it) {
          if (prev[it->first] < 0) {
            prev[it->first] = v;
            via[it->first]  = it->second;
            stack.push_back(it->first);
          }
        }
      }
      if (prev[y] < 0) {
        throw PreconditionViolation("slice not 0-connected");
      }
      std::vector<int> path;
      for (int v = y; v != x; v = prev[v]) {
        path.push_back(via[v]);
      }
      auto const& M   = cert.MC;
      MorId       acc = M.L->identity(I.objects[x].c.obj[0]);
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        auto const& m = I.morphisms[std::abs(*it) - 1];
        MorId u = *it > 0 ? M.P.mor(m.sigma[0]) : M.inverse[m.sigma[0]];
        acc     = M.L->compose(u, acc);
      }
      return acc;
    }

    MorId phi(MorId f, int c1, int c0, int g) const {
      auto const& C  = *L.C;
      auto const& D  = *L.D;
      auto const& o  = cert.I_arrow[f].objects[g];
      auto name = [&](int e) {
        return "(" + C.object_name(o.c.obj[e]) + "," + D.morphism_name(o.s[e]) + ")";
      };
      int   dg   = cert.I_obj[D.src(f)].find(name(0));
      int   rg   = cert.I_obj[D.dst(f)].find(name(1));
      auto  back = cert.MC.invert(gamma(D.dst(f), c1, rg));
      auto const& LC = *cert.MC.L;
      return LC.compose(*back, LC.compose(cert.MC.P.mor(o.c.arr[0]),
                                          gamma(D.src(f), c0, dg)));
    }
  };

  struct TransportTally {
    std::size_t checks = 0, failures = 0;
  };

  void check_transport(LocalisationSetup const& L, EquivalenceCertificate const& cert,
                       TransportTally& t) {
    Transport   T{L, cert};
    auto const& D  = *L.D;
    auto const& LC = *cert.MC.L;
    auto        ok = [&](bool b) {
      ++t.checks;
      t.failures += !b;
    };
    auto const nd = static_cast<ObjId>(D.num_objects());
    auto const nf = static_cast<MorId>(D.num_morphisms());
    auto size = [&](ObjId d) { return static_cast<int>(cert.I_obj[d].size()); };
    // Well-definedness: every g in I_f, every pair of chosen objects.
    for (MorId f = 0; f < nf; ++f) {
      int c0 = cert.section[D.src(f)], c1 = cert.section[D.dst(f)];
      for (int g = 0; g < static_cast<int>(cert.I_arrow[f].size()); ++g) {
        ok(T.phi(f, c1, c0, g) == cert.phi[f]);
        for (int e0 = 0; e0 < size(D.src(f)); ++e0) {
          for (int e1 = 0; e1 < size(D.dst(f)); ++e1) {
            ok(T.phi(f, e1, e0, g) == T.phi(f, e1, e0, 0));
          }
        }
      }
    }
    // Identity, cocycle and invertibility on S'.
    for (ObjId d = 0; d < nd; ++d) {
      for (int c = 0; c < size(d); ++c) {
        ok(T.phi(D.identity(d), c, c, 0)
           == LC.identity(cert.I_obj[d].objects[c].c.obj[0]));
      }
    }
    for (MorId f1 = 0; f1 < nf; ++f1) {
      for (MorId f2 : D.out(D.dst(f1))) {
        MorId f21 = D.compose(f2, f1);
        for (int c0 = 0; c0 < size(D.src(f1)); ++c0) {
          for (int c1 = 0; c1 < size(D.dst(f1)); ++c1) {
            for (int c2 = 0; c2 < size(D.dst(f2)); ++c2) {
              ok(LC.compose(T.phi(f2, c2, c1, 0), T.phi(f1, c1, c0, 0))
                 == T.phi(f21, c2, c0, 0));
            }
          }
        }
      }
      if (L.Sprime.contains(f1)) {
        for (int c0 = 0; c0 < size(D.src(f1)); ++c0) {
          for (int c1 = 0; c1 < size(D.dst(f1)); ++c1) {
            ok(cert.MC.invert(T.phi(f1, c1, c0, 0)).has_value());
          }
        }
      }
    }
  }

  // eta_d from every (c, s) in I_d, and its naturality squares.
  void check_kan(LocalisationSetup const& L, EquivalenceCertificate const& cert,
                 TransportTally& t) {
    auto const& F = cert.MD.P;
    auto        k = kan_extend(L, cert, F);
    auto        ok = [&](bool b) {
      ++t.checks;
      t.failures += !b;
    };
    ok(k.status == KanStatus::Ok);
    if (k.status != KanStatus::Ok) {
      return;
    }
    Transport   T{L, cert};
    auto const& C  = *L.C;
    auto const& D  = *L.D;
    auto const& E  = *F.target;
    auto const& LC = *cert.MC.L;
    for (ObjId d = 0; d < static_cast<ObjId>(D.num_objects()); ++d) {
      auto const& I = cert.I_obj[d];
      for (int x = 0; x < static_cast<int>(I.size()); ++x) {
        ObjId c    = I.objects[x].c.obj[0];
        MorId s    = I.objects[x].s[0];
        ObjId dc   = L.T.obj(c);
        int   idc  = cert.I_obj[dc].find("(" + C.object_name(c) + ","
                                         + D.morphism_name(D.identity(dc)) + ")");
        MorId unit = T.gamma(dc, idc, cert.section[dc]);
        MorId back = cert.Fbar.mor(cert.MD.inverse[s]);
        ok(E.compose(k.G.mor(LC.compose(back, unit)), F.mor(s)) == k.eta[d]);
      }
    }
    for (MorId f = 0; f < static_cast<MorId>(D.num_morphisms()); ++f) {
      ok(E.compose(k.eta[D.dst(f)], F.mor(f))
         == E.compose(k.RF.mor(cert.MD.P.mor(f)), k.eta[D.src(f)]));
    }
  }

  struct Certified {
    std::optional<EquivalenceCertificate> cert;
    OracleResult                          oracle;
  };

  Certified certify(LocalisationSetup const& L) {
    Certified r;
    try {
      auto cert = build_equivalence(L);
      if (cert.certified()) {
        r.cert   = std::move(cert);
        r.oracle = equivalence_oracle(L);
      }
    } catch (PreconditionViolation const&) {
    } catch (BudgetExceeded const&) {
    }
    return r;
  }

  // Hom-set sizes of both engines, when both decide.
  std::optional<bool> engines_agree(CategoryRef const& C, std::vector<bool> const& S) {
    auto fr = localise(C, S, {}, LocEngine::Fractions);
    if (!fr.model || !fr.ore.holds()) {
      return std::nullopt;
    }
    auto rw = localise(C, S, {}, LocEngine::Rewriting);
    if (!rw.model) {
      return std::nullopt;
    }
    auto const n = static_cast<ObjId>(C->num_objects());
    for (ObjId x = 0; x < n; ++x) {
      for (ObjId y = 0; y < n; ++y) {
        auto a = fr.model->L->hom(fr.model->P.obj(x), fr.model->P.obj(y)).size();
        auto b = rw.model->L->hom(rw.model->P.obj(x), rw.model->P.obj(y)).size();
        if (a != b) {
          return false;
        }
      }
    }
    return true;
  }

}  // namespace

int main() {
  auto const fixtures = fixture_setups();

  // Criteria 1, 2, 3, 5, 6, 7 share one pass over the audit stream.
  auto const      t_start = Clock::now();
  ImplicationAudit audit;
  Fuzzer           stream(stream_config(1));
  std::size_t      certified = 0, oracle_equiv = 0, oracle_undecided = 0;
  std::vector<std::string> disagree;
  TransportTally   transport, kan;
  std::size_t      kan_setups = 0;
  std::size_t      model_cases = 0, model_mismatch = 0;
  auto             certified_case = [&](LocalisationSetup const& L, Certified const& c) {
    ++certified;
    check_transport(L, *c.cert, transport);
    switch (c.oracle.verdict) {
      case EquivalenceVerdict::Equivalence: ++oracle_equiv; break;
      case EquivalenceVerdict::Undecided: ++oracle_undecided; break;
      case EquivalenceVerdict::NotEquivalence: disagree.push_back(L.name); break;
    }
  };
  for (int i = 0; i < kAuditCases; ++i) {
    auto L = stream.next_setup();
    auto a = audit_case(L);
    audit.add(a);
    if (a.status({"t0.0", "t0.1", "t0.2"}) == Status::Holds) {
      auto c = certify(L);
      if (c.cert) {
        certified_case(L, c);
        ++kan_setups;
        check_kan(L, *c.cert, kan);
      }
    }
    for (auto const& [C, S] : {std::pair{L.C, L.S.mask()}, std::pair{L.D, L.Sprime.mask()}}) {
      if (auto agree = engines_agree(C, S)) {
        ++model_cases;
        model_mismatch += !*agree;
      }
    }
  }
  double const audit_seconds =
      std::chrono::duration<double>(Clock::now() - t_start).count();
  auto const& rep = audit.report();

  {
    auto const* t  = rep.tally("riou=>t0");
    bool        ok = t && rep.cases >= kAuditCases && t->violations.empty()
              && t->pi1_blamed == 0 && audit_seconds <= kAuditSeconds;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "riou(i,ii,iv) => t0 over %zu setups: held %zu, confirmed %zu, "
                  "excluded %zu, pi1-blamed %zu, violations %zu, %.1fs",
                  rep.cases, t ? t->antecedent_held : 0, t ? t->confirmed : 0,
                  t ? t->excluded : 0, t ? t->pi1_blamed : 0,
                  t ? t->violations.size() : 0, audit_seconds);
    verdict(1, ok, buf);
  }
  {
    auto const* t  = rep.tally("c2=>t0.1,t0.2");
    bool        ok = t && t->violations.empty();
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "t0.0 + c2.1' => t0.1, t0.2: held %zu, confirmed %zu, excluded %zu, "
                  "violations %zu",
                  t ? t->antecedent_held : 0, t ? t->confirmed : 0,
                  t ? t->excluded : 0, t ? t->violations.size() : 0);
    verdict(2, ok, buf);
  }

  // Fixtures join criteria 3, 6 and 7.
  std::size_t fixture_certified = 0;
  for (auto const& L : fixtures) {
    auto c = certify(L);
    if (c.cert) {
      ++fixture_certified;
      certified_case(L, c);
      ++kan_setups;
      check_kan(L, *c.cert, kan);
    }
  }
  {
    auto non  = equivalence_oracle(st::non_example());
    bool ok   = disagree.empty() && oracle_undecided == 0 && certified > 0
              && non.verdict == EquivalenceVerdict::NotEquivalence;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%zu certified (%zu fixtures): oracle Equivalence %zu, Undecided %zu, "
                  "NotEquivalence %zu; non-example %s",
                  certified, fixture_certified, oracle_equiv, oracle_undecided,
                  disagree.size(), to_string(non.verdict));
    verdict(3, ok, buf);
  }

  {
    std::size_t compared = 0, unknown = 0, disagreements = 0, nontrivial = 0;
    auto        par      = connectivity(*st::par());
    bool par_ok = par.components.size() == 1
                  && par.components[0].verdict.status == Pi1Status::Nontrivial
                  && par.components[0].verdict.abelian
                  && par.components[0].verdict.abelian->invariants
                         == std::vector<std::int64_t>{0};
    bool ind_ok = true;
    for (int n = 1; n <= 5; ++n) {
      ind_ok = ind_ok && connectivity(*st::indiscrete(n)).one_connected();
    }
    GenConfig cfg = stream_config(4);
    Fuzzer    gen(cfg);
    for (int i = 0; i < kPi1Categories; ++i) {
      auto C = gen.next_category();
      for (auto const& comp : connectivity(*C).components) {
        ++compared;
        auto mine   = comp.verdict.status;
        auto theirs = oracle_pi1(*C, comp.objects);
        unknown += mine == Pi1Status::Unknown;
        nontrivial += mine == Pi1Status::Nontrivial;
        disagreements += mine != Pi1Status::Unknown && theirs != Pi1Status::Unknown
                         && mine != theirs;
      }
    }
    bool ok = par_ok && ind_ok && compared >= kMinPi1 && disagreements == 0
              && unknown <= kMaxUnknownRate * compared;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "Par nontrivial with Z: %s; Ind(1..5) trivial: %s; %zu components of "
                  "%d categories: %zu nontrivial, %zu unknown, %zu disagreements",
                  par_ok ? "yes" : "no", ind_ok ? "yes" : "no", compared,
                  kPi1Categories, nontrivial, unknown, disagreements);
    verdict(4, ok, buf);
  }

  {
    bool ok = model_cases >= kMinModelCases && model_mismatch == 0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "fractions vs rewriting on %zu localisations: %zu hom-size mismatches",
                  model_cases, model_mismatch);
    verdict(5, ok, buf);
  }
  {
    bool ok = certified > 0 && transport.failures == 0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "transport words over %zu certified setups: %zu equalities, %zu failures",
                  certified, transport.checks, transport.failures);
    verdict(6, ok, buf);
  }
  {
    bool ok = fixture_certified > 0 && kan.failures == 0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "Kan unit over %zu certified setups (%zu fixtures): %zu equalities, "
                  "%zu failures",
                  kan_setups, fixture_certified, kan.checks, kan.failures);
    verdict(7, ok, buf);
  }

  {
    std::vector<std::pair<std::string, LocalisationSetup>> cases;
    cases.emplace_back("RiouFix", st::riou_fix());
    for (auto const& L : fixtures) {
      if (L.name == "ArrowInv" || L.name == "PtInInd2") {
        cases.emplace_back(L.name, L);
      }
    }
    bool        ok = cases.size() == 3;
    std::string detail;
    for (auto const& [name, L] : cases) {
      for (std::size_t k : {2, 3}) {
        auto r    = check_envelope_lift(L, k);
        bool good = r.status == EnvelopeStatus::CertifiedAtK && r.inclusions_fully_faithful;
        ok        = ok && good;
        detail += name + "@" + std::to_string(k) + "=" + to_string(r.status)
                  + (r.inclusions_fully_faithful ? "/ff " : "/not-ff ");
      }
    }
    verdict(8, ok, detail);
  }

  {
    Fuzzer      gen(stream_config(9));
    std::size_t held = 0, slices = 0, trivial = 0, unknown = 0, nontrivial = 0;
    // Diagnostic only: hits re-checked with four-element shapes.
    std::size_t refuted4 = 0, unknown4 = 0;
    for (int i = 0; i < kRefereeCases; ++i) {
      auto L   = gen.next_setup();
      auto hyp = check_referee(L, 3).front();
      if (hyp.status != Status::Holds) {
        continue;
      }
      ++held;
      std::size_t before = nontrivial;
      for (ObjId d = 0; d < static_cast<ObjId>(L.D->num_objects()); ++d) {
        ++slices;
        try {
          auto c = connectivity(*slice_I(L, d).category());
          switch (c.components.front().verdict.status) {
            case Pi1Status::Trivial: ++trivial; break;
            case Pi1Status::Unknown: ++unknown; break;
            case Pi1Status::Nontrivial: ++nontrivial; break;
          }
        } catch (BudgetExceeded const&) {
          ++unknown;
        }
      }
      if (nontrivial > before) {
        auto h4 = check_referee(L, 4).front().status;
        refuted4 += h4 == Status::Fails;
        unknown4 += h4 == Status::Unknown;
      }
    }
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "%d setups, hypothesis held on %zu: %zu slices, %zu trivial, "
                  "%zu unknown, %zu nontrivial (hit setups at |E| <= 4: %zu refuted, "
                  "%zu unknown)",
                  kRefereeCases, held, slices, trivial, unknown, nontrivial, refuted4,
                  unknown4);
    verdict(9, nontrivial == 0 && held > 0, buf);
  }

  {
    std::size_t files = 0, mismatched = 0, reports = 0, nondeterministic = 0;
    for (auto const& e : fs::recursive_directory_iterator(LOCWB_FIXTURE_DIR)) {
      if (e.path().extension() != ".loc") {
        continue;
      }
      auto          text = slurp(e.path());
      dsl::Document doc;
      try {
        doc = dsl::parse(text);
      } catch (InvalidInput const&) {
        continue;
      }
      ++files;
      auto printed = dsl::print(doc);
      mismatched += !(dsl::parse(printed) == doc) || dsl::print(dsl::parse(printed)) != printed;
      for (auto const& cmd : {"validate", "localize", "equivalence", "comma", "export"}) {
        cli::Options opt;
        opt.command = cmd;
        if (std::string(cmd) != "validate" && std::string(cmd) != "export"
            && e.path().filename() == "hard_pi1.loc") {
          continue;
        }
        ++reports;
        nondeterministic += cli::run(opt, text).text() != cli::run(opt, text).text();
      }
    }
    cli::Options fuzz;
    fuzz.command = "fuzz-audit";
    fuzz.seed    = 3;
    fuzz.count   = 50;
    ++reports;
    nondeterministic += cli::run(fuzz, "").text() != cli::run(fuzz, "").text();
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%zu fixture files round-trip with %zu mismatches; %zu reports run twice, "
                  "%zu differ",
                  files, mismatched, reports, nondeterministic);
    verdict(10, files >= 10 && mismatched == 0 && nondeterministic == 0, buf);
  }

  return failures == 0 ? 0 : 1;
}
