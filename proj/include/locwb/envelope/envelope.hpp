#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "locwb/core/category.hpp"
#include "locwb/core/errors.hpp"
#include "locwb/core/functor.hpp"
#include "locwb/core/morph_class.hpp"
#include "locwb/core/setup.hpp"
#include "locwb/localisation/equivalence.hpp"
#include "locwb/localisation/model.hpp"

namespace locwb {

  // Finite families of objects of C of length at most k; a morphism
  // (a_i)_{i<m} -> (b_j)_{j<n} is an index map f: m -> n with arrows
  // a_i -> b_{f(i)}. Families are ordered tuples.
  struct EnvelopeCategory {
    CategoryRef                     base;
    std::size_t                     k = 0;
    CategoryRef                     carrier;
    std::vector<std::vector<ObjId>> families;    // by ObjId of carrier
    std::vector<std::vector<int>>   index_maps;  // by MorId of carrier
    std::vector<std::vector<MorId>> components;  // by MorId of carrier
    FunctorData                     inclusion;   // C -> carrier, singletons

    std::optional<ObjId> find(std::vector<ObjId> const& family) const {
      auto it = _objects.find(family);
      if (it == _objects.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    std::optional<MorId> find_morphism(ObjId a, ObjId b,
                                       std::vector<int> const&   index,
                                       std::vector<MorId> const& comps) const {
      auto it = _morphisms.find({a, b, index, comps});
      if (it == _morphisms.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    // The concatenation a + b when its length is within the truncation.
    std::optional<ObjId> coproduct(ObjId a, ObjId b) const {
      auto fam = families[a];
      fam.insert(fam.end(), families[b].begin(), families[b].end());
      return find(fam);
    }

    // The injection of a (side 0) or b (side 1) into the concatenation.
    MorId injection(ObjId a, ObjId b, int side) const {
      ObjId ab   = *coproduct(a, b);
      ObjId from = side == 0 ? a : b;
      auto  m    = static_cast<int>(families[a].size());
      std::vector<int>   index;
      std::vector<MorId> comps;
      for (std::size_t i = 0; i < families[from].size(); ++i) {
        index.push_back(static_cast<int>(i) + (side == 0 ? 0 : m));
        comps.push_back(base->identity(families[from][i]));
      }
      return *find_morphism(from, ab, index, comps);
    }

    std::map<std::vector<ObjId>, ObjId> _objects;
    std::map<std::tuple<ObjId, ObjId, std::vector<int>, std::vector<MorId>>, MorId>
        _morphisms;
  };

  namespace detail {

    inline std::string family_name(FinCategory const& C,
                                   std::vector<ObjId> const& fam) {
      std::string s = "(";
      for (std::size_t i = 0; i < fam.size(); ++i) {
        s += (i ? "," : "") + C.object_name(fam[i]);
      }
      return s + ")";
    }

    inline void for_each_family(std::size_t n, std::size_t k,
                                std::function<void(std::vector<ObjId> const&)> const& f) {
      std::vector<ObjId> fam;
      std::function<void()> rec = [&] {
        f(fam);
        if (fam.size() == k) {
          return;
        }
        for (ObjId x = 0; x < static_cast<ObjId>(n); ++x) {
          fam.push_back(x);
          rec();
          fam.pop_back();
        }
      };
      rec();
    }

  }  // namespace detail

  inline EnvelopeCategory coproduct_envelope(CategoryRef const& C, std::size_t k,
                                             Budget const& budget = {}) {
    auto const&      c = *C;
    EnvelopeCategory E;
    E.base = C;
    E.k    = k;

    std::vector<std::vector<ObjId>> fams;
    detail::for_each_family(c.num_objects(), k,
                            [&](std::vector<ObjId> const& f) { fams.push_back(f); });
    std::sort(fams.begin(), fams.end(), [](auto const& a, auto const& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    CategoryBuilder    b(c.name() + "^II" + std::to_string(k));
    std::vector<ObjId> local;
    for (auto const& f : fams) {
      local.push_back(b.add_object(detail::family_name(c, f)));
    }

    struct Raw {
      ObjId              src, dst;
      std::vector<int>   index;
      std::vector<MorId> comps;
    };
    std::vector<Raw> raws;  // by builder morphism id
    std::map<std::tuple<ObjId, ObjId, std::vector<int>, std::vector<MorId>>, MorId>
        lookup;
    for (std::size_t x = 0; x < fams.size(); ++x) {
      for (std::size_t y = 0; y < fams.size(); ++y) {
        auto const& A = fams[x];
        auto const& B = fams[y];
        std::vector<int>   index(A.size(), 0);
        std::vector<MorId> comps(A.size(), kNone);
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (i == A.size()) {
            bool ident = x == y;
            for (std::size_t t = 0; t < A.size() && ident; ++t) {
              ident = index[t] == static_cast<int>(t) && c.is_identity(comps[t]);
            }
            MorId id;
            if (ident) {
              id = b.identity(local[x]);
            } else {
              std::string name = "{";
              for (std::size_t t = 0; t < A.size(); ++t) {
                name += (t ? "," : "") + std::to_string(t) + ">"
                        + std::to_string(index[t]) + ":"
                        + c.morphism_name(comps[t]);
              }
              name += "}" + b.object_name(local[x]) + "->"
                      + b.object_name(local[y]);
              id = b.add_morphism(name, local[x], local[y]);
              if (b.num_morphisms() > budget.max_morphisms) {
                throw BudgetExceeded("coproduct envelope exceeds the morphism cap");
              }
            }
            if (static_cast<std::size_t>(id) >= raws.size()) {
              raws.resize(id + 1);
            }
            raws[id] = {local[x], local[y], index, comps};
            lookup[{local[x], local[y], index, comps}] = id;
            return;
          }
          for (std::size_t j = 0; j < B.size(); ++j) {
            index[i] = static_cast<int>(j);
            for (MorId u : c.hom(A[i], B[j])) {
              comps[i] = u;
              rec(i + 1);
            }
          }
        };
        rec(0);
      }
    }
    // Composition, componentwise.
    std::vector<std::vector<MorId>> out(fams.size());
    for (MorId m = 0; m < static_cast<MorId>(raws.size()); ++m) {
      out[raws[m].src].push_back(m);
    }
    for (MorId f = 0; f < static_cast<MorId>(raws.size()); ++f) {
      auto const& F = raws[f];
      for (MorId g : out[F.dst]) {
        auto const&        G = raws[g];
        std::vector<int>   index(F.index.size());
        std::vector<MorId> comps(F.index.size());
        for (std::size_t i = 0; i < F.index.size(); ++i) {
          index[i] = G.index[F.index[i]];
          comps[i] = c.compose(G.comps[F.index[i]], F.comps[i]);
        }
        b.set_composite(g, f, lookup.at({F.src, G.dst, index, comps}));
      }
    }

    E.carrier     = b.build_ref();
    auto const& K = *E.carrier;
    E.families.resize(K.num_objects());
    for (std::size_t x = 0; x < fams.size(); ++x) {
      ObjId id       = K.object(b.object_name(local[x]));
      E.families[id] = fams[x];
      E._objects[fams[x]] = id;
    }
    E.index_maps.resize(K.num_morphisms());
    E.components.resize(K.num_morphisms());
    for (MorId m = 0; m < static_cast<MorId>(raws.size()); ++m) {
      auto const& R  = raws[m];
      auto const& md = b.morphism_data(m);
      MorId       id = K.morphism_id(md.name);
      ObjId       s  = K.object(b.object_name(R.src));
      ObjId       t  = K.object(b.object_name(R.dst));
      E.index_maps[id] = R.index;
      E.components[id] = R.comps;
      E._morphisms[{s, t, R.index, R.comps}] = id;
    }

    E.inclusion.name   = "I";
    E.inclusion.source = C;
    E.inclusion.target = E.carrier;
    for (ObjId x = 0; x < static_cast<ObjId>(c.num_objects()); ++x) {
      E.inclusion.omap.push_back(*E.find({x}));
    }
    for (MorId u = 0; u < static_cast<MorId>(c.num_morphisms()); ++u) {
      E.inclusion.mmap.push_back(*E.find_morphism(
          E.inclusion.omap[c.src(u)], E.inclusion.omap[c.dst(u)], {0}, {u}));
    }
    return E;
  }

  // Members: bijective index maps with every component in S.
  inline MorphClass envelope_class(EnvelopeCategory const& E,
                                   MorphClass const&       S) {
    std::vector<bool> mask(E.carrier->num_morphisms(), false);
    for (MorId m = 0; m < static_cast<MorId>(mask.size()); ++m) {
      auto const& idx = E.index_maps[m];
      auto const  n   = E.families[E.carrier->dst(m)].size();
      bool        ok  = idx.size() == n;
      std::vector<bool> seen(n, false);
      for (std::size_t i = 0; i < idx.size() && ok; ++i) {
        ok = !seen[idx[i]] && S.contains(E.components[m][i]);
        seen[idx[i]] = true;
      }
      mask[m] = ok;
    }
    return MorphClass(E.carrier, std::move(mask),
                      S.name().empty() ? "" : S.name() + "^II");
  }

  // T^II: families mapped pointwise.
  inline FunctorData envelope_functor(FunctorData const&      T,
                                      EnvelopeCategory const& EC,
                                      EnvelopeCategory const& ED) {
    FunctorData F;
    F.name   = T.name + "^II";
    F.source = EC.carrier;
    F.target = ED.carrier;
    for (auto const& fam : EC.families) {
      std::vector<ObjId> img;
      for (ObjId x : fam) {
        img.push_back(T.obj(x));
      }
      F.omap.push_back(*ED.find(img));
    }
    for (MorId m = 0; m < static_cast<MorId>(EC.index_maps.size()); ++m) {
      std::vector<MorId> comps;
      for (MorId u : EC.components[m]) {
        comps.push_back(T.mor(u));
      }
      F.mmap.push_back(*ED.find_morphism(F.omap[EC.carrier->src(m)],
                                         F.omap[EC.carrier->dst(m)],
                                         EC.index_maps[m], comps));
    }
    return F;
  }

  inline LocalisationSetup envelope_setup(LocalisationSetup const& L,
                                          EnvelopeCategory const&  EC,
                                          EnvelopeCategory const&  ED) {
    return {L.name + "^II" + std::to_string(EC.k), EC.carrier, ED.carrier,
            envelope_functor(L.T, EC, ED), envelope_class(EC, L.S),
            envelope_class(ED, L.Sprime)};
  }

  enum class EnvelopeStatus { CertifiedAtK, Failed, Undecided };

  inline char const* to_string(EnvelopeStatus s) {
    switch (s) {
      case EnvelopeStatus::CertifiedAtK: return "Certified-at-k";
      case EnvelopeStatus::Failed: return "Failed";
      case EnvelopeStatus::Undecided: return "Undecided";
    }
    return "";
  }

  struct EnvelopeLiftReport {
    EnvelopeStatus           status = EnvelopeStatus::Undecided;
    std::size_t              k      = 0;
    std::string              reason;
    std::vector<std::string> witness;
    bool                     inclusions_fully_faithful = false;
    std::size_t              coproducts_checked        = 0;
    std::size_t              hom_counts_checked        = 0;
    std::size_t              lift_squares_checked      = 0;
    OracleResult             oracle;
  };

  namespace detail {

    // Checks, in the localisation M of an envelope E whose base has the
    // localisation M0: the empty family is initial, concatenation with the
    // images of the injections is a coproduct, and hom-set sizes are those
    // of the envelope of M0.
    inline bool localised_envelope_shape(EnvelopeCategory const& E,
                                         LocModel const& M, LocModel const& M0,
                                         EnvelopeLiftReport& rep) {
      auto const& LE = *M.L;
      auto const& L0 = *M0.L;
      auto const  n  = static_cast<ObjId>(LE.num_objects());
      auto const  P  = [&](ObjId x) { return M.P.obj(x); };
      ObjId const empty = *E.find({});
      for (ObjId z = 0; z < n; ++z) {
        if (LE.hom(P(empty), z).size() != 1) {
          rep.reason  = "empty family not initial";
          rep.witness = {LE.object_name(z)};
          return false;
        }
      }
      auto const m = static_cast<ObjId>(E.families.size());
      for (ObjId a = 0; a < m; ++a) {
        for (ObjId b = 0; b < m; ++b) {
          auto ab = E.coproduct(a, b);
          if (!ab) {
            continue;
          }
          MorId ia = M.P.mor(E.injection(a, b, 0));
          MorId ib = M.P.mor(E.injection(a, b, 1));
          for (ObjId z = 0; z < n; ++z) {
            std::vector<std::pair<MorId, MorId>> seen;
            for (MorId u : LE.hom(P(*ab), z)) {
              seen.emplace_back(LE.compose(u, ia), LE.compose(u, ib));
            }
            std::sort(seen.begin(), seen.end());
            bool ok = std::adjacent_find(seen.begin(), seen.end()) == seen.end()
                      && seen.size()
                             == LE.hom(P(a), z).size() * LE.hom(P(b), z).size();
            ++rep.coproducts_checked;
            if (!ok) {
              rep.reason  = "concatenation is not a coproduct after localisation";
              rep.witness = {E.carrier->object_name(a), E.carrier->object_name(b),
                             LE.object_name(z)};
              return false;
            }
          }
        }
      }
      for (ObjId a = 0; a < m; ++a) {
        for (ObjId b = 0; b < m; ++b) {
          auto const& A = E.families[a];
          auto const& B = E.families[b];
          // Sum over index maps of the product of component hom sizes.
          std::size_t expected = 0;
          std::vector<int> idx(A.size(), 0);
          std::function<void(std::size_t, std::size_t)> rec =
              [&](std::size_t i, std::size_t acc) {
                if (i == A.size()) {
                  expected += acc;
                  return;
                }
                for (std::size_t j = 0; j < B.size(); ++j) {
                  rec(i + 1, acc * L0.hom(M0.P.obj(A[i]), M0.P.obj(B[j])).size());
                }
              };
          rec(0, 1);
          ++rep.hom_counts_checked;
          if (LE.hom(P(a), P(b)).size() != expected) {
            rep.reason  = "hom-set size differs from the envelope of the localisation";
            rep.witness = {E.carrier->object_name(a), E.carrier->object_name(b)};
            return false;
          }
        }
      }
      return true;
    }

    // The localised inclusion S^-1 C -> (S^II)^-1 C^II on a morphism given
    // by its representative word.
    inline MorId localised_inclusion(EnvelopeCategory const& E,
                                     LocModel const& M, LocModel const& M0,
                                     MorId w) {
      auto const m0 = static_cast<int>(M0.letters_offset());
      auto const m  = static_cast<int>(M.letters_offset());
      Word       img;
      for (int a : M0.representative[w]) {
        img.push_back(a < m0 ? E.inclusion.mor(a) : m + E.inclusion.mor(a - m0));
      }
      return M.eval(img, E.inclusion.obj(M0.L->src(w)));
    }

  }  // namespace detail

  // Lift of a certified equivalence to the coproduct envelopes truncated at
  // k: the inclusions are fully faithful, both localised envelopes have
  // the coproduct shape of the envelope of the localisation, the induced
  // functor restricts to T-bar on singletons, and the oracle accepts the
  // lifted setup. Throws PreconditionViolation unless the base setup is
  // certified.
  inline EnvelopeLiftReport check_envelope_lift(LocalisationSetup const& L,
                                                std::size_t              k,
                                                Budget const& budget = {}) {
    auto cert = build_equivalence(L, budget);
    if (!cert.certified()) {
      throw PreconditionViolation("base setup not certified: " + cert.reason);
    }
    EnvelopeLiftReport rep;
    rep.k = k;
    EnvelopeCategory EC, ED;
    try {
      EC = coproduct_envelope(L.C, k, budget);
      ED = coproduct_envelope(L.D, k, budget);
    } catch (BudgetExceeded const& e) {
      rep.reason = e.what();
      return rep;
    }
    rep.inclusions_fully_faithful = validate_functor(EC.inclusion).fully_faithful
                                    && validate_functor(ED.inclusion).fully_faithful;
    if (!rep.inclusions_fully_faithful) {
      rep.status = EnvelopeStatus::Failed;
      rep.reason = "inclusion not fully faithful";
      return rep;
    }
    auto LE = envelope_setup(L, EC, ED);
    auto mc = localise(LE.C, LE.S, budget);
    auto md = localise(LE.D, LE.Sprime, budget);
    if (!mc.model || !md.model) {
      rep.reason = "envelope localisation undecided: "
                   + (mc.model ? md.reason : mc.reason);
      return rep;
    }
    if (!detail::localised_envelope_shape(EC, *mc.model, cert.MC, rep)
        || !detail::localised_envelope_shape(ED, *md.model, cert.MD, rep)) {
      rep.status = EnvelopeStatus::Failed;
      return rep;
    }
    auto Tb = induced_functor(LE, *mc.model, *md.model);
    for (MorId w = 0; w < static_cast<MorId>(cert.MC.L->num_morphisms()); ++w) {
      MorId left  = Tb.mor(detail::localised_inclusion(EC, *mc.model, cert.MC, w));
      MorId right = detail::localised_inclusion(ED, *md.model, cert.MD,
                                                cert.Tbar.mor(w));
      ++rep.lift_squares_checked;
      if (left != right) {
        rep.status  = EnvelopeStatus::Failed;
        rep.reason  = "lifted functor differs from T-bar on singletons";
        rep.witness = {cert.MC.L->morphism_name(w)};
        return rep;
      }
    }
    rep.oracle = equivalence_oracle(LE, budget);
    switch (rep.oracle.verdict) {
      case EquivalenceVerdict::Equivalence:
        rep.status = EnvelopeStatus::CertifiedAtK;
        break;
      case EquivalenceVerdict::NotEquivalence:
        rep.status  = EnvelopeStatus::Failed;
        rep.reason  = "oracle: " + rep.oracle.reason;
        rep.witness = rep.oracle.witness;
        break;
      case EquivalenceVerdict::Undecided:
        rep.reason = "oracle undecided: " + rep.oracle.reason;
        break;
    }
    return rep;
  }

}  // namespace locwb
