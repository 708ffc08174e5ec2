#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "locwb/cli/run.hpp"
#include "locwb/core/standard.hpp"
#include "locwb/core/standard_setups.hpp"
#include "locwb/dsl/json.hpp"
#include "locwb/dsl/loader.hpp"

using namespace locwb;
namespace st = locwb::standard;
namespace fs = std::filesystem;

namespace {

  std::string slurp(fs::path const& path) {
    std::ifstream      in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string fixture(std::string const& name) {
    return slurp(fs::path(LOCWB_FIXTURE_DIR) / name);
  }

  // Text without leading comment lines.
  std::string strip_header(std::string const& text) {
    std::istringstream in(text);
    std::string        line, out;
    bool               body = false;
    while (std::getline(in, line)) {
      body = body || line.empty() || line[0] != '#';
      if (body) {
        out += line + "\n";
      }
    }
    return out;
  }

  InvalidInput load_error(std::string const& text) {
    try {
      dsl::load_text(text);
    } catch (InvalidInput const& e) {
      return e;
    }
    FAIL("no error for: " << text);
    return InvalidInput("unreachable");
  }

  std::vector<std::string> names(FinCategory const& C) {
    std::vector<std::string> out;
    for (MorId f = 0; f < static_cast<MorId>(C.num_morphisms()); ++f) {
      out.push_back(C.morphism_name(f));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::string> member_names(MorphClass const& S) {
    std::vector<std::string> out;
    for (MorId f : S.members()) {
      out.push_back(S.carrier()->morphism_name(f));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  cli::Outcome run_cli(std::string command, std::string const& file,
                       std::string hypothesis = "") {
    cli::Options opt;
    opt.command    = std::move(command);
    opt.hypothesis = std::move(hypothesis);
    return cli::run(opt, file.empty() ? std::string() : fixture(file));
  }

}  // namespace

TEST_CASE("RiouFix source parses to the fixture setup", "[dsl]") {
  auto text = fixture("riou_fix.loc");
  auto ws   = dsl::load_text(text);
  REQUIRE(ws.setups.count("RiouFix"));
  auto const& L   = ws.setups.at("RiouFix");
  auto const  ref = st::riou_fix();
  CHECK(L.C->object_names() == ref.C->object_names());
  CHECK(L.D->object_names() == ref.D->object_names());
  CHECK(names(*L.C) == names(*ref.C));
  CHECK(names(*L.D) == names(*ref.D));
  CHECK(member_names(L.S) == member_names(ref.S));
  CHECK(member_names(L.Sprime) == member_names(ref.Sprime));
  CHECK(L.D->object_name(L.T.obj(0)) == ref.D->object_name(ref.T.obj(0)));
  // The fixture is the canonical print of the library setup.
  CHECK(dsl::print(dsl::setup_document(ref)) == strip_header(text));
  CHECK(dsl::print(dsl::parse(text)) == strip_header(text));
}

TEST_CASE("empty input", "[dsl]") {
  CHECK(dsl::parse("").declarations.empty());
  CHECK(dsl::parse("# only a comment\n\n").declarations.empty());
  CHECK(dsl::print(dsl::Document{}).empty());
}

TEST_CASE("non-composable compose is reported at its line", "[dsl]") {
  auto e = load_error(fixture("invalid/not_composable.loc"));
  CHECK(e.line() == 6);
  CHECK(e.column() == 3);
  CHECK(std::string(e.what()).find("not composable") != std::string::npos);
}

TEST_CASE("syntax errors carry positions", "[dsl]") {
  auto e = load_error(fixture("invalid/syntax.loc"));
  CHECK(e.line() == 3);
  CHECK(e.column() == 3);
  CHECK(load_error("category A { objects: a; } @").column() == 28);
  CHECK(load_error("category A {\n  objects: \"a\n}").line() == 2);
  CHECK(load_error("setup L { C = A; D = A; T = F; X = Y; }").column() == 32);
  CHECK(load_error("category A { }\ncategory A { }").line() == 2);
  CHECK(load_error("category A { objects: a }\nclass S in B { }").line() == 2);
}

TEST_CASE("reference errors", "[dsl]") {
  auto e = load_error(fixture("invalid/unresolved.loc"));
  CHECK(e.line() == 5);
  std::string cats = "category A { objects: a, b; mor f: a -> b; }\n";
  CHECK(load_error(cats + "functor F: A -> A { obj a -> a; }").line() == 2);
  CHECK(load_error(cats + "functor F: A -> A {\n obj a -> a;\n obj b -> c;\n}").line() == 4);
  CHECK(load_error(cats + "class S in A { g; }").line() == 2);
  CHECK(load_error("category A { objects: a; mor f: a -> z; }").column() == 26);
}

TEST_CASE("composition tables are saturated", "[dsl]") {
  auto ws   = dsl::load_text(fixture("presented.loc"));
  auto Path = ws.categories.at("Path");
  CHECK(Path->num_morphisms() == 6);
  REQUIRE(Path->find_morphism("g.f"));
  CHECK(Path->compose(Path->morphism_id("g"), Path->morphism_id("f"))
        == Path->morphism_id("g.f"));
  CHECK(ws.categories.at("Idem")->num_morphisms() == 2);
  CHECK(ws.posets.at("V").size() == 3);

  // A free loop never closes; h h f = h g = f and h h f = h f = g merge
  // two declared arrows.
  auto e = load_error("category Loop { objects: o; mor f: o -> o; }");
  CHECK(std::string(e.what()).find("does not close") != std::string::npos);
  auto inv = dsl::load_text(
      "category Z2 { objects: o; mor t: o -> o; compose t t = id_o; }");
  CHECK(inv.categories.at("Z2")->num_morphisms() == 2);
  auto merge = load_error(
      "category M { objects: a, b, c; mor f: a -> b; mor g: a -> b; mor h: b -> b;"
      " mor e: b -> c; compose h f = g; compose h g = f; compose h h = h; }");
  CHECK(std::string(merge.what()).find("identifies") != std::string::npos);
}

TEST_CASE("quoted names round-trip", "[dsl]") {
  CategoryBuilder b("odd name");
  auto            x = b.add_object("x \"1\"");
  auto            y = b.add_object("y\\2");
  b.add_morphism("f: x", x, y);
  auto          C = b.build_ref();
  dsl::Document d;
  d.declarations.push_back(dsl::category_decl(*C));
  auto text = dsl::print(d);
  CHECK(dsl::parse(text) == d);
  auto ws = dsl::load_text(text);
  CHECK(ws.categories.at("odd name")->object_names() == C->object_names());
}

TEST_CASE("fixture corpus round-trips", "[dsl]") {
  std::size_t files = 0;
  for (auto const& entry : fs::recursive_directory_iterator(LOCWB_FIXTURE_DIR)) {
    if (entry.path().extension() != ".loc") {
      continue;
    }
    auto text = slurp(entry.path());
    INFO(entry.path().string());
    dsl::Document doc;
    try {
      doc = dsl::parse(text);
    } catch (InvalidInput const&) {
      continue;  // the syntax-error fixture
    }
    ++files;
    auto printed = dsl::print(doc);
    CHECK(dsl::parse(printed) == doc);
    CHECK(dsl::print(dsl::parse(printed)) == printed);
  }
  CHECK(files >= 10);
}

TEST_CASE("documents export to JSON", "[dsl]") {
  auto j = dsl::to_json(dsl::parse(fixture("riou_annotated.loc")));
  auto const& decls = j.at("declarations");
  REQUIRE(decls.size() == 8);
  CHECK(decls[0].at("kind") == "category");
  CHECK(decls[5].at("kind") == "setup");
  CHECK(decls[5].at("T") == "incl");
  CHECK(decls[6].at("kind") == "weak");
  CHECK(decls[6].at("selections")[0].at("members")[0] == "(1,f)");
  CHECK(decls[7].at("kind") == "kselector");
}

TEST_CASE("check t0 on RiouFix", "[cli]") {
  auto out = run_cli("check", "riou_fix.loc", "t0");
  CHECK(out.exit_code == 0);
  auto const& recs = out.report.at("records");
  REQUIRE(recs.size() == 3);
  for (auto const& r : recs) {
    CHECK(r.at("status") == "Holds");
  }
  CHECK(out.report.at("schema_version") == cli::kSchemaVersion);
  CHECK(out.report.at("input").at("setup") == "RiouFix");
}

TEST_CASE("equivalence on the non-example", "[cli]") {
  auto out = run_cli("equivalence", "non_example.loc");
  CHECK(out.exit_code == 1);
  auto const& recs = out.report.at("records");
  REQUIRE(recs.size() == 2);
  CHECK(recs[1].at("id") == "equivalence.oracle");
  CHECK(recs[1].at("certificate").at("verdict") == "NotEquivalence");
  CHECK(recs[1].at("witness") == cli::Json::array({"y"}));
}

TEST_CASE("tiny pi1 budget on the hard fixture", "[cli]") {
  cli::Options opt;
  opt.command    = "check";
  opt.hypothesis = "t0";
  CHECK(cli::run(opt, fixture("hard_pi1.loc")).exit_code == 0);
  opt.budget.pi1_cosets = 3;
  auto out              = cli::run(opt, fixture("hard_pi1.loc"));
  CHECK(out.exit_code == 2);
  CHECK(out.report.at("records")[0].at("status") == "Unknown");
}

TEST_CASE("invalid input exits with 3", "[cli]") {
  auto out = run_cli("validate", "invalid/not_composable.loc");
  CHECK(out.exit_code == 3);
  CHECK(out.report.at("error").at("line") == 6);
  cli::Options opt;
  opt.command = "check";
  opt.hypothesis = "nonsense";
  CHECK(cli::run(opt, fixture("riou_fix.loc")).exit_code == 3);
  opt.hypothesis = "t0";
  opt.setup      = "Missing";
  CHECK(cli::run(opt, fixture("riou_fix.loc")).exit_code == 3);
}

TEST_CASE("reports are deterministic", "[cli]") {
  for (auto const& [cmd, file, hyp] :
       std::vector<std::tuple<std::string, std::string, std::string>>{
           {"check", "riou_fix.loc", "c2"},
           {"localize", "pt_in_ind2.loc", ""},
           {"equivalence", "arrow_inv.loc", ""},
           {"fuzz-audit", "", ""}}) {
    CHECK(run_cli(cmd, file, hyp).text() == run_cli(cmd, file, hyp).text());
  }
}

TEST_CASE("report witnesses replay", "[cli]") {
  auto text = fixture("non_example.loc");
  auto out  = run_cli("check", "non_example.loc", "t0");
  auto ws   = dsl::load_text(text);
  auto const& L = ws.setups.at("NonExample");
  std::size_t replayed = 0;
  for (auto const& r : out.report.at("records")) {
    if (r.at("status") == "Holds") {
      continue;
    }
    auto g = replay_grade(L, r.at("id"), r.at("witness").get<std::vector<std::string>>());
    CHECK(to_string(g.status) == r.at("status").get<std::string>());
    ++replayed;
  }
  CHECK(replayed > 0);
}
