#include <catch_amalgamated.hpp>

#include <set>

#include "locwb/comma/slices.hpp"
#include "locwb/connectivity/connectivity.hpp"
#include "locwb/core/constructions.hpp"
#include "locwb/core/standard.hpp"
#include "locwb/core/standard_setups.hpp"
#include "locwb/core/validation.hpp"

using namespace locwb;
namespace st = locwb::standard;

namespace {

  GroupPresentation group(std::size_t gens, std::vector<GroupWord> rels) {
    GroupPresentation P;
    for (std::size_t g = 0; g < gens; ++g) {
      P.generators.push_back(std::string(1, static_cast<char>('a' + g)));
    }
    P.relators = std::move(rels);
    return P;
  }

  // Brute-force count of commuting squares between arrows of C.
  std::size_t square_count(FinCategory const& C) {
    std::size_t n = 0;
    auto const  m = static_cast<MorId>(C.num_morphisms());
    for (MorId a = 0; a < m; ++a) {
      for (MorId b = 0; b < m; ++b) {
        for (MorId u : C.hom(C.src(a), C.src(b))) {
          for (MorId v : C.hom(C.dst(a), C.dst(b))) {
            n += C.compose(v, a) == C.compose(b, u);
          }
        }
      }
    }
    return n;
  }

  FunctorData inclusion_of(CategoryRef D, std::string const& object) {
    auto pt = st::point(object);
    return FunctorData{"incl", pt, D, {D->object(object)},
                       {D->identity(D->object(object))}};
  }

  // Generic functor between two slices from maps on decoded data.
  FunctorData slice_functor(
      Slice const& A, Slice const& B,
      std::function<std::string(SliceObject const&)> const&        objects,
      std::function<std::vector<MorId>(SliceMorphism const&)> const& sigma) {
    FunctorData F;
    F.source = A.category();
    F.target = B.category();
    for (auto const& o : A.objects) {
      int y = B.find(objects(o));
      REQUIRE(y >= 0);
      F.omap.push_back(y);
    }
    F.mmap.assign(A.category()->num_morphisms(), kNone);
    for (ObjId x = 0; x < static_cast<ObjId>(A.size()); ++x) {
      F.mmap[A.category()->identity(x)] = B.category()->identity(F.omap[x]);
    }
    for (std::size_t k = 0; k < A.morphisms.size(); ++k) {
      auto const& m   = A.morphisms[k];
      auto        sig = sigma(m);
      int         src = F.omap[m.src];
      int         dst = F.omap[m.dst];
      MorId       img;
      if (src == dst && B.identity_data(src, sig, {})) {
        img = B.category()->identity(src);
      } else {
        int l = B.find_morphism(src, dst, sig);
        REQUIRE(l >= 0);
        img = B.morphism_id(l);
      }
      F.mmap[A.morphism_id(static_cast<int>(k))] = img;
    }
    return F;
  }

}  // namespace

// ---- comma ----------------------------------------------------------------

TEST_CASE("comma of identities on the point is the point", "[comma]") {
  auto pt = st::point();
  auto id = identity_functor(pt);
  auto K  = comma(id, id);
  CHECK(K.carrier->num_objects() == 1);
  CHECK(K.carrier->num_morphisms() == 1);
  CHECK(validate_functor(K.proj_left).pass());
  CHECK(validate_functor(K.proj_right).pass());
}

TEST_CASE("arrow category as a comma of identities", "[comma]") {
  for (auto C : {st::arrow(), st::par(), st::span(), st::indiscrete(3),
                 st::square_lattice()}) {
    auto id = identity_functor(C);
    auto K  = comma(id, id);
    CHECK(K.carrier->num_objects() == C->num_morphisms());
    CHECK(K.carrier->num_morphisms() == square_count(*C));
    CHECK(validate_category(*K.carrier).pass());
    CHECK(validate_functor(K.proj_left).pass());
    CHECK(validate_functor(K.proj_right).pass());
    // Fibred objects are the identities.
    std::size_t fibred = 0;
    for (bool b : K.fibred) {
      fibred += b;
    }
    CHECK(fibred == C->num_objects());
  }
  auto A = st::arrow();
  auto K = comma(identity_functor(A), identity_functor(A));
  CHECK(K.carrier->num_objects() == 3);
}

TEST_CASE("under the terminal object of Arrow", "[comma]") {
  auto A = st::arrow();
  auto K = under(identity_functor(A), A->object("1"));
  REQUIRE(K.carrier->num_objects() == 1);
  CHECK(A->is_identity(K.object_decode[0].f));
}

TEST_CASE("comma objects decode to valid triples", "[comma]") {
  auto P = st::par();
  auto L = inclusion_of(P, "a");
  auto R = identity_functor(P);
  auto K = comma(L, R);
  for (ObjId x = 0; x < static_cast<ObjId>(K.carrier->num_objects()); ++x) {
    auto const& o = K.object_decode[x];
    CHECK(R.target->src(o.f) == L.obj(o.a));
    CHECK(R.target->dst(o.f) == R.obj(o.b));
    CHECK(K.carrier->object_name(x)
          == encode_comma_object(*L.source, *R.source, *R.target, o));
  }
  CHECK(K.carrier->num_objects() == 3);  // id_a, f, g
}

// G_* : F'/b -> F/G(b) with right inverse G^!, for F = Id_A, G: B -> A.
TEST_CASE("push-forward of over-categories has a right inverse", "[comma]") {
  struct Case {
    CategoryRef A;
    FunctorData G;
  };
  auto A1 = st::arrow();
  auto A2 = st::indiscrete(3);
  auto A3 = st::square_lattice();
  std::vector<Case> cases{
      {A1, inclusion_of(A1, "1")},
      {A2, identity_functor(A2)},
      {A3, inclusion_of(A3, "11")},
      {A3, inclusion_of(A3, "01")},
  };
  for (auto const& [A, G] : cases) {
    auto F = identity_functor(A);
    auto K = comma(F, G);  // F'/b lives over K with F' = proj_right
    for (ObjId b = 0; b < static_cast<ObjId>(G.source->num_objects()); ++b) {
      auto upper = over(K.proj_right, b);          // F'/b
      auto lower = over(F, G.obj(b));              // F/G(b)
      // G_*: ((a, b', h), u: b' -> b) |-> (a, G(u) h).
      auto gstar = [&](ObjId x) {
        auto const& o   = upper.object_decode[x];
        auto const& t   = K.object_decode[o.a];
        MorId       arr = A->compose(G.mor(o.f), t.f);
        return lower.carrier->object(
            encode_comma_object(*A, *lower.proj_right.target,
                                *A, CommaObject{t.a, 0, arr}));
      };
      // G^!: (a, h: a -> G b) |-> ((a, b, h), id_b).
      for (ObjId y = 0; y < static_cast<ObjId>(lower.carrier->num_objects());
           ++y) {
        auto const& o = lower.object_decode[y];
        ObjId k = K.carrier->object(encode_comma_object(
            *A, *G.source, *A, CommaObject{o.a, b, o.f}));
        ObjId x = upper.carrier->object(encode_comma_object(
            *K.carrier, *upper.proj_right.target, *G.source,
            CommaObject{k, 0, G.source->identity(b)}));
        CHECK(gstar(x) == y);
      }
    }
  }
}

// ---- slices ---------------------------------------------------------------

TEST_CASE("slices of the fixed Riou setup", "[slices]") {
  auto L  = st::riou_fix();
  auto I0 = slice_I(L, L.D->object("0"));
  REQUIRE(I0.size() == 1);
  CHECK(L.D->morphism_name(I0.objects[0].s[0]) == "f");
  CHECK(I0.morphisms.empty());
  auto I1 = slice_I(L, L.D->object("1"));
  REQUIRE(I1.size() == 1);
  CHECK(L.D->is_identity(I1.objects[0].s[0]));

  auto U1 = slice_I_underline(L, L.D->object("1"));
  std::set<std::string> names(U1.names.begin(), U1.names.end());
  CHECK(names.count("(<1>,[id_1],<1>,[id_1])") == 1);
  CHECK(names.count("(<0>,[f],<1>,[f])") == 1);

  auto Phi = phi_comparison(L, I0, slice_J(L, L.D->object("0"), JVariant::UnderD),
                            JVariant::UnderD);
  auto J0  = slice_J(L, L.D->object("0"), JVariant::UnderD);
  CHECK(J0.size() == 2);
  CHECK(J0.names[Phi.obj(0)] == "(1,f)");
  CHECK(validate_functor(Phi).pass());
}

TEST_CASE("empty slices when S' is trivial", "[slices]") {
  auto L = st::non_example();
  CHECK(slice_I(L, L.D->object("y")).empty());
  CHECK(slice_I(L, L.D->object("x")).size() == 1);
}

TEST_CASE("J slices", "[slices]") {
  auto A  = st::arrow();
  auto LA = st::identity_setup(A, MorphClass::all(A).mask());
  CHECK(slice_J(LA, A->object("0"), JVariant::UnderD).size() == 2);
  CHECK(slice_J(LA, A->object("1"), JVariant::UnderD).size() == 1);
  auto I2 = st::indiscrete(2);
  auto L2 = st::identity_setup(I2, MorphClass::all(I2).mask());
  for (ObjId d = 0; d < 2; ++d) {
    auto J = slice_J(L2, d, JVariant::UnderD);
    CHECK(J.size() == 2);
    CHECK(J.zero_connected());
  }
}

TEST_CASE("underline slice equals the plain slice for trivial S'", "[slices]") {
  auto A = st::square_lattice();
  auto L = st::identity_setup(A, MorphClass::identities(A).mask());
  for (ObjId d = 0; d < 4; ++d) {
    auto I = slice_I(L, d);
    auto U = slice_I_underline(L, d);
    CHECK(I.size() == U.size());
    CHECK(I.morphisms.size() == U.morphisms.size());
  }
}

TEST_CASE("slices against a brute-force comma oracle", "[slices]") {
  // For T = Id and S = S' = all, I_d is the under-category d \ C.
  for (auto C : {st::arrow(), st::par(), st::span(), st::indiscrete(3),
                 st::square_lattice()}) {
    auto L = st::identity_setup(C, MorphClass::all(C).mask());
    for (ObjId d = 0; d < static_cast<ObjId>(C->num_objects()); ++d) {
      auto I = slice_I(L, d);
      auto K = under(L.T, d);
      CHECK(I.size() == K.carrier->num_objects());
      CHECK(I.category()->num_morphisms() == K.carrier->num_morphisms());
      CHECK(isomorphic(*I.category(), *K.carrier));
      CHECK(validate_category(*I.category()).pass());
    }
  }
}

TEST_CASE("comparison functor for T = Id, S = S'", "[slices]") {
  auto C = st::par();
  std::vector<bool> mask(C->num_morphisms(), false);
  mask[C->morphism_id("f")] = true;
  auto L = st::identity_setup(C, MorphClass::closure(C, mask).mask());
  for (ObjId d = 0; d < 2; ++d) {
    auto I   = slice_I(L, d);
    auto J   = slice_J(L, d, JVariant::UnderD);
    auto Phi = phi_comparison(L, I, J, JVariant::UnderD);
    CHECK(validate_functor(Phi).pass());
    CHECK(validate_functor(Phi).faithful);
  }
}

TEST_CASE("chain slices are iterated commas under d\\T", "[slices]") {
  std::vector<LocalisationSetup> setups{st::riou_fix()};
  {
    auto A = st::square_lattice();
    std::vector<bool> mask(A->num_morphisms(), false);
    mask[A->morphism_id("00<=01")] = true;
    mask[A->morphism_id("10<=11")] = true;
    setups.push_back(st::identity_setup(A, MorphClass::closure(A, mask).mask()));
  }
  {
    // Ind(2) into Ind(3) on the first two objects, all classes full.
    auto C = st::indiscrete(2);
    auto D = st::indiscrete(3);
    FunctorData T{"incl", C, D, {0, 1}, {}};
    for (MorId f = 0; f < static_cast<MorId>(C->num_morphisms()); ++f) {
      T.mmap.push_back(D->morphism_id(C->morphism_name(f)));
    }
    setups.push_back({"IndIncl", C, D, T, MorphClass::all(C),
                      MorphClass::all(D)});
  }
  for (auto const& L : setups) {
    REQUIRE(validate_setup(L).pass());
    auto const& D  = *L.D;
    auto        E1 = FinPoset::chain(1);
    for (MorId f1 = 0; f1 < static_cast<MorId>(D.num_morphisms()); ++f1) {
      ObjId d0 = D.src(f1);
      ObjId d1 = D.dst(f1);
      auto  If = slice_I(L, E1, arrow_diagram(D, f1));
      auto  I0 = slice_I(L, d0);
      auto  I1 = slice_I(L, d1);
      auto  J0 = slice_J(L, d0, JVariant::UnderT);
      auto  J1 = slice_J(L, d1, JVariant::UnderT);
      auto  P0 = phi_comparison(L, I0, J0, JVariant::UnderT);
      auto  P1 = phi_comparison(L, I1, J1, JVariant::UnderT);
      // f1^*: J_{d1} -> J_{d0}, (c, s) |-> (c, s f1).
      auto pull = slice_functor(
          J1, J0,
          [&](SliceObject const& o) {
            return "(" + L.C->object_name(o.c.obj[0]) + ","
                   + D.morphism_name(D.compose(o.s[0], f1)) + ")";
          },
          [](SliceMorphism const& m) { return m.sigma; });
      auto K = comma(P0, compose_functors(pull, P1));
      CHECK(K.carrier->num_objects() == If.size());
      CHECK(K.carrier->num_morphisms() == If.category()->num_morphisms());
      CHECK(isomorphic(*K.carrier, *If.category()));
    }
  }
}

TEST_CASE("cofinality", "[slices]") {
  auto A = st::arrow();
  auto r0 = is_cofinal(inclusion_of(A, "0"));
  CHECK(r0.cofinal);
  auto r1 = is_cofinal(inclusion_of(A, "1"));
  CHECK_FALSE(r1.cofinal);
  REQUIRE(r1.first_failure);
  CHECK(A->object_name(*r1.first_failure) == "0");
  for (auto C : {st::par(), st::span(), st::indiscrete(3)}) {
    CHECK(is_cofinal(identity_functor(C)).cofinal);
  }
  // A cofinal functor induces a bijection on components.
  auto S = st::span();
  auto I = inclusion_of(S, "b");
  auto r = is_cofinal(I);
  CHECK_FALSE(r.cofinal);
}

// ---- connectivity ---------------------------------------------------------

TEST_CASE("components", "[connectivity]") {
  CHECK(pi0(*st::span()).size() == 1);
  CHECK(pi0(*st::two_points()).size() == 2);
  CHECK(pi0(*st::par()).size() == 1);
}

TEST_CASE("triviality engine on small presentations", "[connectivity]") {
  auto a = decide_triviality(group(1, {{1}}));
  CHECK(a.status == Pi1Status::Trivial);
  CHECK(verify_verdict(a));

  auto z = decide_triviality(group(1, {}));
  REQUIRE(z.status == Pi1Status::Nontrivial);
  REQUIRE(z.abelian);
  CHECK(z.abelian->invariants == std::vector<std::int64_t>{0});
  CHECK(verify_verdict(z));

  auto z2 = decide_triviality(group(2, {{1, 2, -1, -2}}));
  REQUIRE(z2.status == Pi1Status::Nontrivial);
  CHECK(z2.abelian->invariants == std::vector<std::int64_t>{0, 0});
  CHECK(verify_verdict(z2));

  auto c6 = decide_triviality(group(2, {{1, 1}, {2, 2, 2}, {1, 2, -1, -2}}));
  REQUIRE(c6.status == Pi1Status::Nontrivial);
  CHECK(c6.abelian->invariants == std::vector<std::int64_t>{6});
  CHECK(verify_verdict(c6));

  // a b a^-1 = b^2, b a b^-1 = a^2: a trivial group with no short proof.
  auto hard = group(2, {{1, 2, -1, -2, -2}, {2, 1, -2, -1, -1}});
  auto t    = decide_triviality(hard);
  CHECK(t.status == Pi1Status::Trivial);
  CHECK(verify_verdict(t));
  Budget tiny;
  tiny.pi1_cosets = 2;
  CHECK(decide_triviality(hard, tiny).status == Pi1Status::Unknown);
}

TEST_CASE("coset enumeration of finite groups", "[connectivity]") {
  // S3 = <a, b | a^2, b^3, (ab)^2>; perfect binary icosahedral-free cases.
  auto s3 = group(2, {{1, 1}, {2, 2, 2}, {1, 2, 1, 2}});
  auto t  = enumerate_cosets(s3, 1000);
  REQUIRE(t);
  CHECK(t->index == 6);
  CHECK(verify_permutation_action(s3, t->action, 6));
  // A5 = <a, b | a^2, b^3, (ab)^5> has trivial abelianisation.
  auto a5 = group(2, {{1, 1}, {2, 2, 2}, {1, 2, 1, 2, 1, 2, 1, 2, 1, 2}});
  CHECK_FALSE(abelian_certificate(a5));
  auto v = decide_triviality(a5);
  REQUIRE(v.status == Pi1Status::Nontrivial);
  CHECK(v.stage == "cosets");
  CHECK(v.cosets->index == 60);
  CHECK(verify_verdict(v));
  // With enumeration starved, the quotient search finds A5 only when the
  // accepted order admits it.
  Budget b;
  b.pi1_cosets = 10;
  CHECK(decide_triviality(a5, b).status == Pi1Status::Unknown);
  b.quotient_order = 60;
  auto q = decide_triviality(a5, b);
  REQUIRE(q.status == Pi1Status::Nontrivial);
  CHECK(q.stage == "quotient");
  CHECK(verify_verdict(q));
}

TEST_CASE("Tietze moves preserve the abelianisation", "[connectivity]") {
  auto P = group(3, {{1, 2, -3}, {3, 3}, {1, -2}});
  auto Q = tietze_simplify(P);
  CHECK(Q.generators.size() <= P.generators.size());
  auto cp = abelian_certificate(P);
  auto cq = abelian_certificate(Q);
  REQUIRE(cp);
  REQUIRE(cq);
  CHECK(cp->invariants == cq->invariants);
}

TEST_CASE("fundamental groups of small categories", "[connectivity]") {
  auto arrow = connectivity(*st::arrow());
  CHECK(arrow.one_connected());

  auto par = connectivity(*st::par());
  REQUIRE(par.zero_connected());
  auto const& v = par.components[0].verdict;
  REQUIRE(v.status == Pi1Status::Nontrivial);
  CHECK(v.abelian->invariants == std::vector<std::int64_t>{0});
  CHECK(par.components[0].presentation.generators.size() == 2);
  CHECK_FALSE(par.infinity);

  for (int n = 1; n <= 5; ++n) {
    auto r = connectivity(*st::indiscrete(n));
    CHECK(r.one_connected());
    CHECK(verify_verdict(r.components[0].verdict));
    CHECK(r.infinity == std::optional<std::string>("cofiltering"));
  }
  auto empty = connectivity(*CategoryBuilder("Empty").build_ref());
  CHECK_FALSE(empty.nonempty);
  CHECK_FALSE(empty.zero_connected());
}

TEST_CASE("initial or terminal objects give trivial pi_1", "[connectivity]") {
  std::vector<CategoryRef> cats{st::arrow(), st::span(), st::cospan(),
                                st::square_lattice(), st::chain(4)};
  for (auto const& E : posets_up_to_iso(4)) {
    cats.push_back(st::from_poset(E));
  }
  for (auto const& C : cats) {
    if (!initial_object(*C) && !terminal_object(*C)) {
      continue;
    }
    auto r = connectivity(*C);
    CHECK(r.one_connected());
    CHECK(r.infinity);
  }
}

TEST_CASE("the boundary of a square has pi_1 = Z", "[connectivity]") {
  // Poset 0 < a, b < 1 minus nothing is contractible; the crown
  // a, b < c, d (all four relations) is a circle.
  FinPoset crown("Crown", {"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  auto r = connectivity(*st::from_poset(crown));
  REQUIRE(r.zero_connected());
  auto const& v = r.components[0].verdict;
  REQUIRE(v.status == Pi1Status::Nontrivial);
  CHECK(v.abelian->invariants == std::vector<std::int64_t>{0});
  CHECK(verify_verdict(v));
}

TEST_CASE("filtering checks", "[connectivity]") {
  auto pt = filtering_check(*st::point());
  CHECK(pt.ordered);
  CHECK(pt.cofiltering);
  auto span = filtering_check(*st::span());
  CHECK(span.cofiltering);
  CHECK_FALSE(span.filtering);
  auto par = filtering_check(*st::par());
  CHECK_FALSE(par.ordered);
  CHECK_FALSE(par.cofiltering);
  CHECK_FALSE(par.filtering);
  CHECK(filtering_check(*st::indiscrete(2)).cofiltering);
}

TEST_CASE("pi_1 verdicts are invariant under relabelling", "[connectivity]") {
  // Relabel the crown by reversing object order.
  FinPoset a("A", {"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  FinPoset b("B", {"d", "c", "b", "a"}, {{3, 1}, {3, 0}, {2, 1}, {2, 0}});
  auto     va = connectivity(*st::from_poset(a)).components[0].verdict;
  auto     vb = connectivity(*st::from_poset(b)).components[0].verdict;
  CHECK(va.status == vb.status);
  REQUIRE(va.abelian);
  REQUIRE(vb.abelian);
  CHECK(va.abelian->invariants == vb.abelian->invariants);
}
