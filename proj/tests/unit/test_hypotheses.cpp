#include <catch_amalgamated.hpp>

#include "locwb/core/constructions.hpp"
#include "locwb/core/standard.hpp"
#include "locwb/core/standard_setups.hpp"
#include "locwb/hypotheses/audit.hpp"
#include "locwb/hypotheses/riou.hpp"
#include "locwb/hypotheses/sufficient.hpp"
#include "locwb/hypotheses/t0.hpp"
#include "locwb/hypotheses/under.hpp"
#include "locwb/hypotheses/weak.hpp"

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

  HypothesisReport const& get(std::vector<HypothesisReport> const& rs,
                              std::string const& id) {
    auto const* r = find_report(rs, id);
    REQUIRE(r != nullptr);
    return *r;
  }

  // Pt included in Arrow at the target, with the given class on Arrow.
  LocalisationSetup point_at_target(bool all) {
    auto C = st::point("1", "One");
    auto D = st::arrow();
    FunctorData T{"incl", C, D, {D->object("1")}, {D->identity(D->object("1"))}};
    return {"PtAtTarget", C, D, T, MorphClass::identities(C, "S"),
            all ? MorphClass::all(D, "Sprime") : MorphClass::identities(D, "Sprime")};
  }

  // Par collapsed onto Arrow: both parallel arrows go to f.
  LocalisationSetup collapsed_par() {
    auto C = st::par();
    auto D = st::arrow();
    FunctorData T;
    T.name   = "collapse";
    T.source = C;
    T.target = D;
    T.omap   = std::vector<ObjId>(C->num_objects());
    T.omap[C->object("a")] = D->object("0");
    T.omap[C->object("b")] = D->object("1");
    T.mmap.resize(C->num_morphisms());
    for (MorId u = 0; u < static_cast<MorId>(C->num_morphisms()); ++u) {
      T.mmap[u] = C->is_identity(u) ? D->identity(T.omap[C->src(u)])
                                    : D->morphism_id("f");
    }
    return {"CollapsedPar", C, D, T, MorphClass::identities(C, "S"),
            MorphClass::identities(D, "Sprime")};
  }

  // z -s-> a with f, g: a -> b and f s = g s = h.
  CategoryRef forked() {
    CategoryBuilder b("Fork");
    b.add_object("z");
    b.add_object("a");
    b.add_object("b");
    b.add_morphism("s", "z", "a");
    b.add_morphism("f", "a", "b");
    b.add_morphism("g", "a", "b");
    b.add_morphism("h", "z", "b");
    b.set_composite("f", "s", "h");
    b.set_composite("g", "s", "h");
    return b.build_ref();
  }

}  // namespace

TEST_CASE("t0 on the reference setups", "[hypotheses]") {
  auto rf = check_t0(st::riou_fix());
  for (auto const& r : rf) {
    CHECK(r.holds());
  }
  auto ne = check_t0(st::non_example());
  auto const& two = get(ne, "t0.2");
  REQUIRE(two.fails());
  CHECK(two.witness == std::vector<std::string>{"id_y", "id_y"});
  CHECK(get(ne, "t0.0").witness == std::vector<std::string>{"y"});
  CHECK(replay_grade(st::non_example(), "t0.0", get(ne, "t0.0").witness).status
        == Status::Fails);

  for (auto C : {st::par(), st::span(), st::chain(2), st::indiscrete(2)}) {
    auto L = st::identity_setup(C, MorphClass::identities(C).mask());
    for (auto const& r : check_t0(L)) {
      CHECK(r.holds());
    }
  }
}

TEST_CASE("c2 on meets, RiouFix and an empty I_d", "[hypotheses]") {
  auto lattice = st::square_lattice();
  auto L       = st::identity_setup(lattice, MorphClass::all(lattice).mask());
  for (auto const& r : check_c2(L)) {
    CHECK(r.holds());
  }
  auto rf = check_c2(st::riou_fix());
  CHECK(get(rf, "c2.1'").checked == 2);
  CHECK(get(rf, "c2.1'").holds());

  auto bad = check_c2_prime(point_at_target(false));
  REQUIRE(bad.fails());
  CHECK(bad.witness == std::vector<std::string>{"0"});
}

TEST_CASE("riou hypotheses", "[hypotheses]") {
  auto rf = check_riou(st::riou_fix());
  CHECK(get(rf, "riou.i").holds());
  CHECK(get(rf, "riou.ii").holds());
  CHECK(get(rf, "riou.iv").holds());
  CHECK(riou_status(rf) == Status::Holds);

  auto sp = st::span();
  auto ii = check_riou(st::identity_setup(sp, mask_of(sp, {"p"})));
  auto const& po = get(ii, "riou.ii");
  REQUIRE(po.fails());
  CHECK(po.witness == std::vector<std::string>{"p", "q"});
  CHECK(po.detail == "no pushout");

  auto ar = st::arrow();
  LocalisationSetup extra{"Extra", ar, ar, identity_functor(ar),
                          MorphClass::identities(ar), MorphClass::all(ar)};
  auto i = get(check_riou(extra), "riou.i");
  REQUIRE(i.fails());
  CHECK(i.witness == std::vector<std::string>{"f"});

  // (iii): S' = all of Arrow with C at the source only.
  auto C = st::point("0", "Zero");
  FunctorData T{"incl", C, ar, {ar->object("0")}, {ar->identity(ar->object("0"))}};
  LocalisationSetup src{"AtSource", C, ar, T, MorphClass::identities(C),
                        MorphClass::all(ar)};
  auto iii = get(check_riou(src), "riou.iii");
  REQUIRE(iii.fails());
  CHECK(iii.witness == std::vector<std::string>{"f"});
}

TEST_CASE("lifts to diagram categories", "[hypotheses]") {
  auto p3 = check_p3(st::riou_fix(), 2);
  for (auto const& r : p3) {
    INFO(r.id << " " << r.detail);
    CHECK(r.holds());
  }
  // Singleton shapes only: the lift is the base setup.
  auto one = check_p3(st::riou_fix(), 1);
  CHECK(get(one, "p3.a").holds());
  CHECK(get(one, "p3.a").checked == 3);
  CHECK_THROWS_AS(check_p3(st::non_example(), 2), PreconditionViolation);

  auto lifted = lift_setup(st::riou_fix(), FinPoset::chain(1));
  CHECK(validate_setup(lifted.setup).pass());
  CHECK(lifted.setup.D->num_objects() == 3);
}

TEST_CASE("bounded referee lemma", "[hypotheses]") {
  auto rf = check_referee(st::riou_fix(), 3);
  CHECK(get(rf, "referee.hyp").holds());
  CHECK(get(rf, "referee.pi1").holds());

  auto cp  = check_referee(collapsed_par(), 3);
  auto hyp = get(cp, "referee.hyp");
  REQUIRE(hyp.fails());
  CHECK(hyp.witness.at(0) == "Delta1");
  CHECK(hyp.witness.at(1) == "<0,1|f>");

  auto empty = CategoryBuilder("Empty").build_ref();
  LocalisationSetup none{"Empty", empty, empty, identity_functor(empty),
                         MorphClass::identities(empty), MorphClass::identities(empty)};
  for (auto const& r : check_referee(none, 3)) {
    CHECK(r.holds());
  }
}

TEST_CASE("cofiltering criteria", "[hypotheses]") {
  auto G  = st::indiscrete(3);
  auto p1 = check_p1(st::identity_setup(G, MorphClass::all(G).mask()));
  CHECK(get(p1, "p1.a1").holds());
  CHECK(get(p1, "p1.a2").holds());
  CHECK(get(p1, "p1.b1").holds());

  auto b1 = get(check_p1(collapsed_par()), "p1.b1");
  REQUIRE(b1.fails());
  CHECK(b1.witness == std::vector<std::string>{"f", "g", "id_0"});
  auto par = st::par();
  CHECK(get(check_p1(st::identity_setup(par, MorphClass::all(par).mask())),
            "p1.b1")
            .holds());

  KSelector everything = [](ObjId, Slice const&, int) { return true; };
  auto      c          = check_p1(point_at_target(false), &everything);
  auto      c1         = get(c, "p1.c1");
  REQUIRE(c1.fails());
  CHECK(c1.detail == "I_d/k empty");
  CHECK(get(c, "p1.b2").fails());

  // The identity setup on a meet lattice with all arrows marked satisfies
  // b) and c) with the default selector.
  auto lat = st::square_lattice();
  auto pl  = check_p1(st::identity_setup(lat, MorphClass::all(lat).mask()));
  for (auto const& r : pl) {
    INFO(r.id << " " << r.detail);
    if (r.id != "p1.c0") {
      CHECK(r.holds());
    }
  }
}

TEST_CASE("good position criteria", "[hypotheses]") {
  auto ch = st::chain(2);
  auto p  = check_p2(st::identity_setup(ch, MorphClass::all(ch).mask()));
  CHECK(get(p, "p2.d1").holds());

  auto rf = check_p2(st::riou_fix());
  for (auto const& r : rf) {
    INFO(r.id << " " << r.detail);
    CHECK(r.holds());
  }
  CHECK(p2_status(rf) == Status::Holds);

  auto fk = forked();
  auto d1 = get(check_p2(st::identity_setup(fk, MorphClass::all(fk).mask())),
                "p2.d1");
  REQUIRE(d1.fails());
  CHECK(d1.witness == std::vector<std::string>{"s", "f", "g"});
}

TEST_CASE("underline variant and the two-of-three condition", "[hypotheses]") {
  auto G   = st::indiscrete(3);
  auto iso = check_tu0(st::identity_setup(G, isomorphisms(G).mask()));
  CHECK(get(iso, "tu0.star").holds());

  auto ch   = st::chain(2);
  auto star = check_two_of_three(
      st::identity_setup(ch, mask_of(ch, {"1<=2", "0<=2"})));
  REQUIRE(star.fails());
  CHECK(star.witness == std::vector<std::string>{"1<=2", "0<=1"});

  for (auto const& r : check_tu0(st::riou_fix())) {
    CHECK(r.holds());
  }
}

TEST_CASE("weak replacements", "[hypotheses]") {
  auto            L = st::riou_fix();
  WeakReplacement full;
  auto            t1v = check_t1v(L, full);
  auto            t0  = check_t0(L);
  for (auto const& r : t1v) {
    INFO(r.id << " " << r.detail);
    CHECK(r.holds());
  }
  CHECK(get(t1v, "t1v.0").checked == get(t0, "t0.0").checked);
  CHECK(get(t1v, "t1v.2").checked == get(t0, "t0.2").checked);

  WeakReplacement no_unit;
  no_unit.selections[{1, {"id_0"}}] = {};
  auto u = get(check_t1v(L, no_unit), "t1v.unit");
  REQUIRE(u.fails());
  CHECK(u.witness == std::vector<std::string>{"0"});

  WeakReplacement unstable;
  unstable.selections[{0, {"0"}}] = {};
  auto res  = check_t1v(L, unstable);
  auto face = get(res, "t1v.face");
  REQUIRE(face.fails());
  CHECK(face.witness.at(1) == "d0");
  CHECK(get(res, "t1v.valid").fails());

  WeakReplacement typo;
  typo.selections[{0, {"0"}}] = {"(1,nope)"};
  CHECK(get(check_t1v(L, typo), "t1v.valid").fails());
}

TEST_CASE("under-category setups", "[hypotheses]") {
  auto rf = st::riou_fix();
  auto c  = check_c1(rf, rf.C->object("1"));
  for (auto const& r : c) {
    INFO(r.id << " " << r.detail);
    CHECK(r.holds());
  }

  auto lat = st::square_lattice();
  auto L   = st::identity_setup(lat, MorphClass::all(lat).mask());
  auto U   = under_setup(L, lat->object("00"));
  CHECK(validate_setup(U.setup).pass());
  CHECK(U.setup.C->num_objects() == 4);
  for (auto const& r : check_c1(L, lat->object("00"))) {
    INFO(r.id << " " << r.detail);
    CHECK(r.holds());
  }
  auto U01 = under_setup(L, lat->object("01"));
  CHECK(U01.setup.C->num_objects() == 2);

  CHECK_THROWS_AS(check_c1(collapsed_par(), 0), PreconditionViolation);
}

TEST_CASE("implication audit basics", "[hypotheses][audit]") {
  CHECK(implication_audit({}).violations() == 0);
  CHECK(implication_audit({}).cases == 0);

  auto rep = implication_audit({st::riou_fix()});
  auto t   = rep.tally("riou=>t0");
  REQUIRE(t != nullptr);
  CHECK(t->antecedent_held == 1);
  CHECK(t->confirmed == 1);

  std::vector<LocalisationSetup> stream{st::non_example(), collapsed_par(),
                                        point_at_target(true),
                                        point_at_target(false)};
  for (auto C : {st::chain(2), st::square_lattice(), st::span(), st::cospan()}) {
    stream.push_back(st::identity_setup(C, MorphClass::all(C).mask()));
    stream.push_back(st::identity_setup(C, MorphClass::identities(C).mask()));
  }
  AuditOptions opt;
  opt.referee = true;
  auto all    = implication_audit(stream, opt);
  CHECK(all.cases == stream.size());
  CHECK(all.violations() == 0);
}
