#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "locwb/cli/run.hpp"

namespace {

  int emit(locwb::cli::Outcome const& out, std::string const& path) {
    if (path.empty()) {
      std::cout << out.text();
    } else {
      std::ofstream f(path, std::ios::binary);
      f << out.text();
    }
    return out.exit_code;
  }

}  // namespace

int main(int argc, char** argv) {
  using namespace locwb;
  cli::Options opt;
  std::string  file, output;

  CLI::App app{"Checks the hypotheses of localisation comparison theorems on finite categories"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub, bool needs_file) {
    if (needs_file) {
      sub->add_option("file", file, "Input document")->required();
    }
    sub->add_option("--setup", opt.setup, "Setup to use (default: the first one)");
    sub->add_option("--pi1-budget", opt.budget.pi1_cosets, "Coset cap for pi1 decisions")
        ->capture_default_str();
    sub->add_option("--kb-budget", opt.budget.kb_rules, "Rule cap for completion")
        ->capture_default_str();
    sub->add_option("--poset-bound", opt.budget.poset_bound,
                    "Largest poset shape for lifted checks")
        ->capture_default_str();
    sub->add_option("--envelope-k", opt.budget.envelope_k, "Envelope truncation")
        ->capture_default_str();
    sub->add_option("--seed", opt.seed, "Generator seed")->capture_default_str();
    sub->add_option("-o,--output", output, "Write the report here instead of stdout");
  };

  std::pair<char const*, char const*> const plain[] = {
      {"validate", "Check category laws, classes, functors and setups"},
      {"comma", "Connectivity of the slices I_d and J_d"},
      {"localize", "Decided models of both localisations"},
      {"equivalence", "Build the equivalence certificate and run the oracle"},
      {"envelope", "Lift the setup to the truncated coproduct envelope"},
      {"export", "Print the document as JSON"}};
  for (auto const& [name, about] : plain) {
    common(app.add_subcommand(name, about), true);
  }
  auto* conn = app.add_subcommand("connectivity", "Connectivity grade and pi1 verdicts");
  common(conn, true);
  conn->add_option("--category", opt.category, "Report on this category instead of slices");

  auto* check = app.add_subcommand("check", "Check one hypothesis family");
  check->add_option("hypothesis", opt.hypothesis,
                    "t0, c2, c1, riou, p3, referee, p1, p2, tu0 or t1v")
      ->required()
      ->check(CLI::IsMember({"t0", "c2", "c1", "riou", "p3", "referee", "p1", "p2", "tu0", "t1v"}));
  common(check, true);
  check->add_option("--object", opt.object, "c1: object of C (default: all)");
  check->add_option("--weak", opt.weak, "t1v: weak replacement block");
  check->add_option("--kselector", opt.kselector, "p1: selector block");

  auto* kan = app.add_subcommand("kan", "Extend a functor along the localisation");
  common(kan, true);
  kan->add_option("--functor", opt.functor, "Functor out of D to extend");

  auto* fuzz = app.add_subcommand("fuzz-audit", "Audit implications over a generated stream");
  common(fuzz, false);
  fuzz->add_option("--count", opt.count, "Number of setups")->capture_default_str();
  fuzz->add_option("--strategy", opt.strategy, "poset, dag-quotient, monoid-glue or mixed")
      ->capture_default_str();
  fuzz->add_option("--max-objects", opt.max_objects)->capture_default_str();
  fuzz->add_option("--max-morphisms", opt.max_morphisms)->capture_default_str();
  fuzz->add_flag("--referee", opt.referee, "Also audit the bounded referee lemma");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return cli::kInvalid;
  }
  opt.command = app.get_subcommands().front()->get_name();

  std::string text;
  if (!file.empty()) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      std::cerr << "cannot read " << file << "\n";
      return cli::kInvalid;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return emit(cli::run(opt, text), output);
}
