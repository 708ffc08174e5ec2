#include <catch_amalgamated.hpp>

#include "locwb/core/constructions.hpp"
#include "locwb/core/standard.hpp"
#include "locwb/core/standard_setups.hpp"
#include "locwb/localisation/model.hpp"

using namespace locwb;
namespace st = locwb::standard;

namespace {

  std::vector<bool> mask_of(CategoryRef const& C,
                            std::vector<std::string> const& names) {
    std::vector<bool> seed(C->num_morphisms(), false);
    for (auto const& n : names) {
      seed[C->morphism_id(n)] = true;
    }
    return MorphClass::closure(C, seed).mask();
  }

  std::vector<std::size_t> hom_sizes(FinCategory const& L) {
    std::vector<std::size_t> out;
    for (ObjId x = 0; x < static_cast<ObjId>(L.num_objects()); ++x) {
      for (ObjId y = 0; y < static_cast<ObjId>(L.num_objects()); ++y) {
        out.push_back(L.hom(x, y).size());
      }
    }
    return out;
  }

}  // namespace

TEST_CASE("trivial class leaves the category unchanged", "[localisation]") {
  for (auto C : {st::arrow(), st::par(), st::span(), st::indiscrete(3)}) {
    auto S = MorphClass::identities(C).mask();
    for (auto engine : {LocEngine::Fractions, LocEngine::Rewriting}) {
      auto r = localise(C, S, {}, engine);
      REQUIRE(r.model);
      CHECK(hom_sizes(*r.model->L) == hom_sizes(*C));
      CHECK(validate_category(*r.model->L).pass());
      CHECK(validate_functor(r.model->P).pass());
    }
  }
}

TEST_CASE("inverting the arrow gives the contractible groupoid", "[localisation]") {
  auto A = st::arrow();
  auto S = MorphClass::all(A).mask();
  auto P = loc_presentation(A, S);
  auto R = kb_complete(P.typed);
  REQUIRE(R.complete);
  std::size_t words = 0;
  for (ObjId x = 0; x < 2; ++x) {
    auto nf = normal_forms_from(P.typed, R, x, 100);
    REQUIRE(nf);
    for (auto const& h : *nf) {
      CHECK(h.size() == 1);
      words += h.size();
    }
  }
  CHECK(words == 4);
  for (auto engine : {LocEngine::Fractions, LocEngine::Rewriting}) {
    auto r = localise(A, S, {}, engine);
    REQUIRE(r.model);
    CHECK(hom_sizes(*r.model->L) == std::vector<std::size_t>{1, 1, 1, 1});
    auto f = A->morphism_id("f");
    CHECK(r.model->L->compose(r.model->inverse[f], r.model->P.mor(f))
          == r.model->L->identity(0));
  }
}

TEST_CASE("free group from Par", "[localisation]") {
  auto C = st::par();
  auto S = MorphClass::all(C).mask();
  auto P = loc_presentation(C, S);
  auto R = kb_complete(P.typed);
  CHECK(R.complete);
  // Four cancellation rules plus the identity and composition rules.
  auto nf = normal_forms_from(P.typed, R, 0, 1000);
  CHECK_FALSE(nf);  // infinite
  auto r = localise(C, S);
  CHECK_FALSE(r.model);
  CHECK(r.rewriting);
  CHECK(r.rewriting->complete);
  // g^-1 f and f^-1 g are not equal; f f^-1 g = g.
  auto f  = C->morphism_id("f");
  auto g  = C->morphism_id("g");
  auto fi = P.inverse_letter[f];
  CHECK(R.equal({f, fi, g}, {g}));
  CHECK_FALSE(R.equal({f, P.inverse_letter[g]}, {}));
}

TEST_CASE("Ore conditions", "[localisation]") {
  auto Cs = st::cospan();
  // b -p-> a <-q- c with S = {q}.
  auto r = ore_check(*Cs, mask_of(Cs, {"q"}));
  CHECK_FALSE(r.ore);
  CHECK(r.ore_witness == std::vector<std::string>{"p", "q"});
  CHECK(ore_check(*Cs, MorphClass::identities(Cs).mask()).holds());
  auto I3 = st::indiscrete(3);
  CHECK(ore_check(*I3, MorphClass::all(I3).mask()).holds());
  auto Par = st::par();
  auto rp  = ore_check(*Par, mask_of(Par, {"f"}));
  CHECK_FALSE(rp.holds());
}

TEST_CASE("fraction hom-sets", "[localisation]") {
  auto A = st::arrow();
  FractionModel F(A, MorphClass::all(A).mask());
  for (ObjId x = 0; x < 2; ++x) {
    for (ObjId y = 0; y < 2; ++y) {
      CHECK(F.hom(x, y).size() == 1);
    }
  }
  auto Two = st::two_points();
  FractionModel G(Two, MorphClass::identities(Two).mask());
  CHECK(G.hom(0, 1).empty());
}

TEST_CASE("saturation", "[localisation]") {
  auto A = st::arrow();
  auto s = saturation(A, MorphClass::identities(A).mask());
  CHECK(s.exact);
  CHECK(s.members == MorphClass::identities(A).mask());
  auto t = saturation(A, MorphClass::all(A).mask());
  CHECK(t.members == std::vector<bool>(A->num_morphisms(), true));
  auto I3 = st::indiscrete(3);
  CHECK(saturation(I3, MorphClass::identities(I3).mask()).members
        == std::vector<bool>(I3->num_morphisms(), true));
  // Inverting the composite of 0 -> 1 -> 2 only.
  auto C3 = st::chain(2);
  auto u  = saturation(C3, mask_of(C3, {"0<=2"}));
  CHECK(u.exact);
  CHECK_FALSE(u.members[C3->morphism_id("0<=1")]);
}

TEST_CASE("models agree on small categories", "[localisation]") {
  std::vector<std::pair<CategoryRef, std::vector<bool>>> cases;
  for (auto const& E : posets_up_to_iso(3)) {
    auto C = st::from_poset(E);
    for (MorId f = 0; f < static_cast<MorId>(C->num_morphisms()); ++f) {
      std::vector<bool> seed(C->num_morphisms(), false);
      seed[f] = true;
      cases.emplace_back(C, MorphClass::closure(C, seed).mask());
    }
    cases.emplace_back(C, MorphClass::all(C).mask());
  }
  std::size_t compared = 0;
  for (auto const& [C, S] : cases) {
    auto rw = localise(C, S, {}, LocEngine::Rewriting);
    auto fr = localise(C, S, {}, LocEngine::Fractions);
    REQUIRE(rw.model);
    if (!fr.model) {
      continue;
    }
    ++compared;
    CHECK(hom_sizes(*rw.model->L) == hom_sizes(*fr.model->L));
    CHECK(validate_category(*fr.model->L).pass());
    CHECK(validate_functor(fr.model->P).pass());
    for (MorId u = 0; u < static_cast<MorId>(fr.model->L->num_morphisms());
         ++u) {
      CHECK(fr.model->eval(fr.model->representative[u], fr.model->L->src(u))
            == u);
    }
    for (MorId u = 0; u < static_cast<MorId>(rw.model->L->num_morphisms());
         ++u) {
      CHECK(rw.model->eval(rw.model->representative[u], rw.model->L->src(u))
            == u);
    }
  }
  CHECK(compared > 10);
}

TEST_CASE("equivalence oracle", "[localisation]") {
  CHECK(equivalence_oracle(st::riou_fix()).verdict
        == EquivalenceVerdict::Equivalence);
  auto r = equivalence_oracle(st::non_example());
  CHECK(r.verdict == EquivalenceVerdict::NotEquivalence);
  CHECK(r.reason == "not essentially surjective");
}

// ---- equivalence certificate ------------------------------------------------

#include "locwb/localisation/equivalence.hpp"

TEST_CASE("certificate for the fixed Riou setup", "[equivalence]") {
  auto L    = st::riou_fix();
  auto cert = build_equivalence(L);
  REQUIRE(cert.certified());
  CHECK(cert.F.obj(L.D->object("0")) == 0);
  CHECK(cert.F.obj(L.D->object("1")) == 0);
  CHECK(cert.MC.L->num_morphisms() == 1);
  CHECK(cert.MD.L->num_morphisms() == 4);
  CHECK(isomorphic(*cert.MD.L, *st::indiscrete(2)));
  CHECK(equivalence_oracle(L).verdict == EquivalenceVerdict::Equivalence);
}

TEST_CASE("certificate with T = Id and S = S'", "[equivalence]") {
  for (auto C : {st::arrow(), st::span(), st::square_lattice(), st::chain(3)}) {
    for (bool full : {false, true}) {
      auto S    = full ? MorphClass::all(C).mask() : MorphClass::identities(C).mask();
      auto L    = st::identity_setup(C, S);
      auto cert = build_equivalence(L);
      REQUIRE(cert.certified());
      for (ObjId c = 0; c < static_cast<ObjId>(C->num_objects()); ++c) {
        CHECK(cert.MC.invert(cert.unit[c]));
      }
      CHECK(equivalence_oracle(L).verdict == EquivalenceVerdict::Equivalence);
      EquivalenceOptions opt;
      opt.choice_seed = 77;
      auto other      = build_equivalence(L, {}, opt);
      REQUIRE(other.certified());
      CHECK(sections_naturally_isomorphic(L, cert, other));
    }
  }
}

TEST_CASE("certificate needs hypothesis (0)", "[equivalence]") {
  CHECK_THROWS_AS(build_equivalence(st::non_example()), PreconditionViolation);
}

TEST_CASE("extension along T", "[equivalence]") {
  auto L    = st::riou_fix();
  auto cert = build_equivalence(L);
  REQUIRE(cert.certified());
  // F = Q into the model of S'^-1 D: RF is isomorphic to the identity.
  auto F = cert.MD.P;
  auto k = kan_extend(L, cert, F);
  REQUIRE(k.status == KanStatus::Ok);
  for (ObjId d = 0; d < 2; ++d) {
    CHECK(cert.MD.invert(k.eta[d]));
  }
  // E = Pt: everything constant.
  auto pt = st::point();
  auto c  = constant_functor(L.D, pt, 0);
  auto kp = kan_extend(L, cert, c);
  CHECK(kp.status == KanStatus::Ok);
  // F failing to invert S.
  auto A   = st::arrow();
  auto LA  = st::identity_setup(A, MorphClass::all(A).mask());
  auto cA  = build_equivalence(LA);
  REQUIRE(cA.certified());
  auto bad = kan_extend(LA, cA, identity_functor(A));
  CHECK(bad.status == KanStatus::NotInverting);
  CHECK(bad.witness == std::vector<std::string>{"f"});
}
