#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "locwb/comma/slices.hpp"
#include "locwb/core/constructions.hpp"
#include "locwb/core/setup.hpp"
#include "locwb/hypotheses/t0.hpp"
#include "locwb/localisation/model.hpp"

namespace locwb {

  // One step of a zig-zag inside a slice: a morphism of the slice walked
  // along (forward) or against its direction.
  struct ZigZagStep {
    int  morphism;  // index into Slice::morphisms
    bool forward;
  };

  struct ZigZag {
    int                     from;
    int                     to;
    std::vector<ZigZagStep> steps;
  };

  enum class CertificateStatus { Certified, Unverified };

  inline char const* to_string(CertificateStatus s) {
    return s == CertificateStatus::Certified ? "Certified" : "Unverified";
  }

  struct EquivalenceCertificate {
    CertificateStatus status = CertificateStatus::Unverified;
    std::string       reason;

    LocModel MC;  // S^-1 C
    LocModel MD;  // S'^-1 D

    std::vector<Slice> I_obj;    // I_d by object of D
    std::vector<Slice> I_arrow;  // I_f by morphism of D
    std::vector<int>   section;  // d |-> index of (c_d, s_d) in I_d

    // phi_f(c_{d1}, c_{d0}) per morphism f of D, with the index in I_f of
    // the object g it was computed from.
    std::vector<int>   phi_source;
    std::vector<MorId> phi;

    FunctorData F;     // D -> S^-1 C
    FunctorData Fbar;  // S'^-1 D -> S^-1 C
    FunctorData Tbar;  // S^-1 C -> S'^-1 D
    std::vector<MorId> unit;    // per object c of C: c -> c_{T c}
    std::vector<MorId> counit;  // per object d of D: Q(s_d)

    // Equalities verified, per kind.
    std::size_t phi_choices   = 0;
    std::size_t lemma_a       = 0;
    std::size_t lemma_b       = 0;
    std::size_t lemma_c       = 0;
    std::size_t formula_e11   = 0;
    std::size_t naturality    = 0;

    bool certified() const {
      return status == CertificateStatus::Certified;
    }
  };

  // Zig-zag between two objects of a slice (breadth-first, so shortest).
  inline std::optional<ZigZag> zigzag(Slice const& I, int from, int to) {
    std::vector<std::vector<std::pair<int, ZigZagStep>>> adj(I.size());
    for (std::size_t k = 0; k < I.morphisms.size(); ++k) {
      auto const& m = I.morphisms[k];
      adj[m.src].push_back({m.dst, {static_cast<int>(k), true}});
      adj[m.dst].push_back({m.src, {static_cast<int>(k), false}});
    }
    std::vector<int>        prev(I.size(), -1);
    std::vector<ZigZagStep> via(I.size());
    std::vector<int>        queue{from};
    prev[from] = from;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      int x = queue[q];
      for (auto const& [y, step] : adj[x]) {
        if (prev[y] < 0) {
          prev[y] = x;
          via[y]  = step;
          queue.push_back(y);
        }
      }
    }
    if (prev[to] < 0) {
      return std::nullopt;
    }
    ZigZag z{from, to, {}};
    for (int y = to; y != from; y = prev[y]) {
      z.steps.push_back(via[y]);
    }
    std::reverse(z.steps.begin(), z.steps.end());
    return z;
  }

  namespace detail {

    // Value in S^-1 C of a zig-zag in a one-point-indexed slice: arrows of
    // I_d are members of S, so they become invertible.
    inline MorId eval_zigzag(LocModel const& M, Slice const& I,
                             ZigZag const& z) {
      ObjId at  = I.objects[z.from].c.obj[0];
      MorId acc = M.L->identity(at);
      for (auto const& step : z.steps) {
        MorId sigma = I.morphisms[step.morphism].sigma[0];
        MorId u     = step.forward ? M.P.mor(sigma) : M.inverse[sigma];
        if (u == kNone) {
          throw PreconditionViolation("slice arrow outside S");
        }
        acc = M.L->compose(u, acc);
      }
      return acc;
    }

    inline std::string slice_point_name(FinCategory const& C,
                                        FinCategory const& D, ObjId c,
                                        MorId s) {
      return "(" + C.object_name(c) + "," + D.morphism_name(s) + ")";
    }

  }  // namespace detail

  // The equivalence machinery over decided models; evaluation helpers are
  // exposed for tests and the Kan construction.
  class EquivalenceBuilder {
   public:
    EquivalenceBuilder(LocalisationSetup const& L,
                       EquivalenceCertificate const& cert)
        : _L(L), _cert(cert) {}

    // gamma_{x,y}: c_x -> c_y in S^-1 C for objects x, y of I_d.
    MorId gamma(ObjId d, int x, int y) const {
      auto const& I = _cert.I_obj[d];
      auto        z = zigzag(I, x, y);
      if (!z) {
        throw PreconditionViolation("slice is not 0-connected");
      }
      return detail::eval_zigzag(_cert.MC, I, *z);
    }

    MorId inverse(MorId u) const {
      auto v = _cert.MC.invert(u);
      if (!v) {
        throw PreconditionViolation("expected an invertible morphism");
      }
      return *v;
    }

    // phi_f(c1, c0, g) = gamma_{c1,rg}^-1 o g o gamma_{c0,dg}.
    MorId phi(MorId f, int c1, int c0, int g) const {
      auto const& C  = *_L.C;
      auto const& D  = *_L.D;
      auto const& M  = _cert.MC;
      auto const& If = _cert.I_arrow[f];
      auto const& o  = If.objects[g];
      ObjId       d0 = D.src(f);
      ObjId       d1 = D.dst(f);
      int dg = _cert.I_obj[d0].find(
          detail::slice_point_name(C, D, o.c.obj[0], o.s[0]));
      int rg = _cert.I_obj[d1].find(
          detail::slice_point_name(C, D, o.c.obj[1], o.s[1]));
      if (dg < 0 || rg < 0) {
        throw PreconditionViolation("face of an I_f object missing");
      }
      MorId into = gamma(d0, c0, dg);
      MorId back = inverse(gamma(d1, c1, rg));
      return M.L->compose(back, M.L->compose(M.P.mor(o.c.arr[0]), into));
    }

    MorId phi(MorId f, int c1, int c0) const {
      return phi(f, c1, c0, _cert.phi_source[f]);
    }

   private:
    LocalisationSetup const& _L;
    EquivalenceCertificate const& _cert;
  };

  struct EquivalenceOptions {
    // 0 picks the least object of each I_d; any other value picks a
    // seeded pseudo-random object instead.
    std::uint64_t choice_seed = 0;
    // Cap on the number of (c0, c1, c2) triples checked per composable
    // pair for the cocycle rule; beyond it only section objects are used.
    std::size_t cocycle_cap = 20'000;
  };

  inline EquivalenceCertificate build_equivalence(
      LocalisationSetup const& L, Budget const& budget = {},
      EquivalenceOptions const& opt = {}) {
    auto t0 = check_t0(L, budget);
    for (auto const& r : t0) {
      if (!r.holds()) {
        throw PreconditionViolation("hypothesis " + r.id + " is "
                                    + to_string(r.status));
      }
    }
    EquivalenceCertificate cert;
    auto                   mc = localise(L.C, L.S, budget);
    auto                   md = localise(L.D, L.Sprime, budget);
    if (!mc.model || !md.model) {
      cert.reason = "localisation undecided: "
                    + (mc.model ? md.reason : mc.reason);
      return cert;
    }
    cert.MC = std::move(*mc.model);
    cert.MD = std::move(*md.model);

    auto const& C  = *L.C;
    auto const& D  = *L.D;
    auto const& MC = cert.MC;
    auto const& MD = cert.MD;
    auto const  nd = static_cast<ObjId>(D.num_objects());
    auto const  md_ = static_cast<MorId>(D.num_morphisms());

    for (ObjId d = 0; d < nd; ++d) {
      cert.I_obj.push_back(slice_I(L, d, budget));
      auto const& I = cert.I_obj.back();
      int         pick = 0;
      if (opt.choice_seed != 0) {
        std::mt19937_64 rng(opt.choice_seed ^ (0x9e3779b97f4a7c15ULL * (d + 1)));
        pick = static_cast<int>(rng() % I.size());
      }
      cert.section.push_back(pick);
    }
    for (MorId f = 0; f < md_; ++f) {
      cert.I_arrow.push_back(slice_I(L, FinPoset::chain(1), arrow_diagram(D, f),
                                     budget));
      cert.phi_source.push_back(0);
    }

    EquivalenceBuilder B(L, cert);
    auto fail = [&](std::string why) {
      cert.status = CertificateStatus::Unverified;
      cert.reason = std::move(why);
      return cert;
    };
    auto const& LC = *MC.L;
    auto const& LD = *MD.L;

    // phi_f at the section objects, and independence of the choice of g.
    for (MorId f = 0; f < md_; ++f) {
      int   c0 = cert.section[D.src(f)];
      int   c1 = cert.section[D.dst(f)];
      MorId v  = B.phi(f, c1, c0, 0);
      cert.phi.push_back(v);
      for (int g = 1; g < static_cast<int>(cert.I_arrow[f].size()); ++g) {
        ++cert.phi_choices;
        if (B.phi(f, c1, c0, g) != v) {
          return fail("phi depends on the chosen object of I_" + D.morphism_name(f));
        }
      }
    }
    // Lemma a): phi_{1_d}(c, c) = 1_c.
    for (ObjId d = 0; d < nd; ++d) {
      MorId id = D.identity(d);
      for (int c = 0; c < static_cast<int>(cert.I_obj[d].size()); ++c) {
        ++cert.lemma_a;
        if (B.phi(id, c, c) != LC.identity(cert.I_obj[d].objects[c].c.obj[0])) {
          return fail("phi of the identity of " + D.object_name(d)
                      + " is not an identity");
        }
      }
    }
    // Lemma b): cocycle rule.
    for (MorId f1 = 0; f1 < md_; ++f1) {
      for (MorId f2 : D.out(D.dst(f1))) {
        MorId       f21 = D.compose(f2, f1);
        auto const& I0  = cert.I_obj[D.src(f1)];
        auto const& I1  = cert.I_obj[D.dst(f1)];
        auto const& I2  = cert.I_obj[D.dst(f2)];
        bool all = I0.size() * I1.size() * I2.size() <= opt.cocycle_cap;
        std::vector<int> r0, r1, r2;
        auto range = [&](Slice const& I, ObjId d, std::vector<int>& out) {
          if (all) {
            for (int x = 0; x < static_cast<int>(I.size()); ++x) {
              out.push_back(x);
            }
          } else {
            out.push_back(cert.section[d]);
          }
        };
        range(I0, D.src(f1), r0);
        range(I1, D.dst(f1), r1);
        range(I2, D.dst(f2), r2);
        for (int c0 : r0) {
          for (int c2 : r2) {
            MorId lhs = B.phi(f21, c2, c0);
            for (int c1 : r1) {
              ++cert.lemma_b;
              if (LC.compose(B.phi(f2, c2, c1), B.phi(f1, c1, c0)) != lhs) {
                return fail("cocycle rule fails for (" + D.morphism_name(f2)
                            + ", " + D.morphism_name(f1) + ")");
              }
            }
          }
        }
      }
    }
    // Lemma c): phi_f invertible for f in S'; formula (e11).
    for (MorId f = 0; f < md_; ++f) {
      ObjId d0 = D.src(f);
      ObjId d1 = D.dst(f);
      int   c0 = cert.section[d0];
      int   c1 = cert.section[d1];
      if (L.Sprime.contains(f)) {
        ++cert.lemma_c;
        if (!MC.invert(cert.phi[f])) {
          return fail("phi of " + D.morphism_name(f) + " is not invertible");
        }
      }
      for (int e0 = 0; e0 < static_cast<int>(cert.I_obj[d0].size()); ++e0) {
        for (int e1 = 0; e1 < static_cast<int>(cert.I_obj[d1].size()); ++e1) {
          ++cert.formula_e11;
          MorId rhs = LC.compose(
              B.inverse(B.gamma(d1, e1, c1)),
              LC.compose(cert.phi[f], B.gamma(d0, e0, c0)));
          if (B.phi(f, e1, e0) != rhs) {
            return fail("change-of-object formula fails for "
                        + D.morphism_name(f));
          }
        }
      }
    }

    // F: D -> S^-1 C.
    cert.F = FunctorData{"F", L.D, MC.L, {}, cert.phi};
    for (ObjId d = 0; d < nd; ++d) {
      cert.F.omap.push_back(cert.I_obj[d].objects[cert.section[d]].c.obj[0]);
    }
    if (!validate_functor(cert.F).laws.pass()) {
      return fail("F is not a functor");
    }
    // Fbar through representative words of S'^-1 D.
    auto const md_off = static_cast<int>(MD.letters_offset());
    cert.Fbar         = FunctorData{"Fbar", MD.L, MC.L, cert.F.omap, {}};
    for (MorId v = 0; v < static_cast<MorId>(LD.num_morphisms()); ++v) {
      MorId acc = LC.identity(cert.F.obj(LD.src(v)));
      for (int a : MD.representative[v]) {
        MorId step = a < md_off ? cert.F.mor(a) : MC.invert(cert.F.mor(a - md_off))
                                                      .value_or(kNone);
        if (step == kNone) {
          return fail("F does not invert " + D.morphism_name(a - md_off));
        }
        acc = LC.compose(step, acc);
      }
      cert.Fbar.mmap.push_back(acc);
    }
    if (!validate_functor(cert.Fbar).laws.pass()) {
      return fail("Fbar is not well defined");
    }
    for (MorId f = 0; f < md_; ++f) {
      if (cert.Fbar.mor(MD.P.mor(f)) != cert.F.mor(f)) {
        return fail("Fbar does not extend F at " + D.morphism_name(f));
      }
    }
    cert.Tbar = induced_functor(L, MC, MD);
    if (!validate_functor(cert.Tbar).laws.pass()) {
      return fail("Tbar is not well defined");
    }

    // Unit gamma_{(c, 1), (c_Tc, s_Tc)} and counit Q(s_d).
    for (ObjId c = 0; c < static_cast<ObjId>(C.num_objects()); ++c) {
      ObjId d = L.T.obj(c);
      int   x = cert.I_obj[d].find(
          detail::slice_point_name(C, D, c, D.identity(d)));
      if (x < 0) {
        return fail("identity object missing from I_" + D.object_name(d));
      }
      cert.unit.push_back(B.gamma(d, x, cert.section[d]));
    }
    for (ObjId d = 0; d < nd; ++d) {
      MorId s = cert.I_obj[d].objects[cert.section[d]].s[0];
      cert.counit.push_back(MD.P.mor(s));
    }
    auto FT = compose_functors(cert.Fbar, cert.Tbar);
    for (MorId u = 0; u < static_cast<MorId>(LC.num_morphisms()); ++u) {
      ++cert.naturality;
      if (LC.compose(cert.unit[LC.dst(u)], u)
          != LC.compose(FT.mor(u), cert.unit[LC.src(u)])) {
        return fail("unit not natural at " + LC.morphism_name(u));
      }
    }
    for (ObjId c = 0; c < static_cast<ObjId>(C.num_objects()); ++c) {
      if (!MC.invert(cert.unit[c])) {
        return fail("unit not invertible at " + C.object_name(c));
      }
    }
    auto TF = compose_functors(cert.Tbar, cert.Fbar);
    for (MorId v = 0; v < static_cast<MorId>(LD.num_morphisms()); ++v) {
      ++cert.naturality;
      if (LD.compose(cert.counit[LD.dst(v)], v)
          != LD.compose(TF.mor(v), cert.counit[LD.src(v)])) {
        return fail("counit not natural at " + LD.morphism_name(v));
      }
    }
    for (ObjId d = 0; d < nd; ++d) {
      if (!MD.invert(cert.counit[d])) {
        return fail("counit not invertible at " + D.object_name(d));
      }
    }
    cert.status = CertificateStatus::Certified;
    cert.reason.clear();
    return cert;
  }

  // The comparison isomorphism Fbar => Fbar' between certificates built
  // with different section choices: components gamma_{c_d, c'_d}.
  inline bool sections_naturally_isomorphic(LocalisationSetup const&      L,
                                            EquivalenceCertificate const& a,
                                            EquivalenceCertificate const& b) {
    if (!a.certified() || !b.certified()) {
      return false;
    }
    EquivalenceBuilder B(L, a);
    auto const&        LC = *a.MC.L;
    auto const&        LD = *a.MD.L;
    std::vector<MorId> theta;
    for (ObjId d = 0; d < static_cast<ObjId>(L.D->num_objects()); ++d) {
      theta.push_back(B.gamma(d, a.section[d], b.section[d]));
      if (!a.MC.invert(theta.back())) {
        return false;
      }
    }
    for (MorId v = 0; v < static_cast<MorId>(LD.num_morphisms()); ++v) {
      if (LC.compose(theta[LD.dst(v)], a.Fbar.mor(v))
          != LC.compose(b.Fbar.mor(v), theta[LD.src(v)])) {
        return false;
      }
    }
    return true;
  }

  // ---- Extension along T --------------------------------------------------

  enum class KanStatus { Ok, NotInverting, Unverified };

  inline char const* to_string(KanStatus s) {
    switch (s) {
      case KanStatus::Ok: return "Ok";
      case KanStatus::NotInverting: return "NotInverting";
      case KanStatus::Unverified: return "Unverified";
    }
    return "";
  }

  struct KanExtensionResult {
    KanStatus                status = KanStatus::Unverified;
    std::string              reason;
    std::vector<std::string> witness;
    FunctorData              G;   // S^-1 C -> E
    FunctorData              RF;  // S'^-1 D -> E
    std::vector<MorId>       eta;  // F(d) -> RF(d)
    std::size_t              choices_checked = 0;
    std::size_t              squares_checked = 0;
  };

  // RF := G Fbar and eta_d = G(Fbar(Q(s)^-1) o unit_c) o F(s) for (c, s) in
  // I_d, with G induced from F T when not supplied.
  inline KanExtensionResult kan_extend(LocalisationSetup const&      L,
                                       EquivalenceCertificate const& cert,
                                       FunctorData const&            F,
                                       FunctorData const*            G = nullptr) {
    KanExtensionResult r;
    if (!cert.certified()) {
      throw PreconditionViolation("kan_extend needs a certified equivalence");
    }
    if (F.source != L.D) {
      throw PreconditionViolation("kan_extend: F must start at D");
    }
    auto const& E  = *F.target;
    auto const& C  = *L.C;
    auto const& MC = cert.MC;
    auto const& MD = cert.MD;
    auto const& LC = *MC.L;
    for (MorId s : L.S.members()) {
      if (!inverse_in(E, F.mor(L.T.mor(s)))) {
        r.status  = KanStatus::NotInverting;
        r.reason  = "F T does not invert a member of S";
        r.witness = {C.morphism_name(s)};
        return r;
      }
    }
    if (G) {
      r.G = *G;
    } else {
      auto const m = static_cast<int>(MC.letters_offset());
      r.G          = FunctorData{"G", MC.L, F.target, {}, {}};
      for (ObjId c = 0; c < static_cast<ObjId>(C.num_objects()); ++c) {
        r.G.omap.push_back(F.obj(L.T.obj(c)));
      }
      for (MorId u = 0; u < static_cast<MorId>(LC.num_morphisms()); ++u) {
        MorId acc = E.identity(r.G.obj(LC.src(u)));
        for (int a : MC.representative[u]) {
          MorId step = a < m ? F.mor(L.T.mor(a))
                             : *inverse_in(E, F.mor(L.T.mor(a - m)));
          acc = E.compose(step, acc);
        }
        r.G.mmap.push_back(acc);
      }
    }
    if (!validate_functor(r.G).laws.pass()) {
      r.reason = "G is not a functor";
      return r;
    }
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      if (r.G.mor(MC.P.mor(f)) != F.mor(L.T.mor(f))) {
        r.reason = "G P differs from F T at " + C.morphism_name(f);
        return r;
      }
    }
    r.RF = compose_functors(r.G, cert.Fbar, "RF");
    auto const& D = *L.D;
    for (ObjId d = 0; d < static_cast<ObjId>(D.num_objects()); ++d) {
      auto const&          I = cert.I_obj[d];
      std::optional<MorId> first;
      for (auto const& o : I.objects) {
        ObjId c    = o.c.obj[0];
        MorId s    = o.s[0];
        MorId back = cert.Fbar.mor(MD.inverse[s]);
        MorId inC  = LC.compose(back, cert.unit[c]);
        MorId eta  = E.compose(r.G.mor(inC), F.mor(s));
        ++r.choices_checked;
        if (!first) {
          first = eta;
        } else if (*first != eta) {
          r.reason = "eta depends on the chosen object of I_" + D.object_name(d);
          return r;
        }
      }
      r.eta.push_back(*first);
    }
    for (MorId f = 0; f < static_cast<MorId>(D.num_morphisms()); ++f) {
      ++r.squares_checked;
      MorId lhs = E.compose(r.eta[D.dst(f)], F.mor(f));
      MorId rhs = E.compose(r.RF.mor(MD.P.mor(f)), r.eta[D.src(f)]);
      if (lhs != rhs) {
        r.reason = "eta not natural at " + D.morphism_name(f);
        return r;
      }
    }
    r.status = KanStatus::Ok;
    return r;
  }

}  // namespace locwb
