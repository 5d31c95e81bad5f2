// ckf: invariants of integer matrices, torus bundles and shifts of finite type.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ckf/cli.hpp"

namespace {

std::string read_source(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw ckf::ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ckf::IntMatrix load(const std::string& path) {
  try {
    return ckf::cli::parse_matrix(read_source(path));
  } catch (const ckf::ParseError& e) {
    throw ckf::ParseError((path == "-" ? std::string("<stdin>") : path) + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ckf::cli;

  CLI::App app{"Exact invariants of torus bundles, Cuntz-Krieger algebras and SFTs"};
  app.require_subcommand(1);

  std::string format_name = "text";
  std::size_t depth = 4;
  unsigned max_lag = 3;
  unsigned entry_bound = 6;
  std::string input = "-";
  std::string first;
  std::string second;

  app.add_option("--format", format_name, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json", "json-like"}));

  auto single = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input,--input,-i", input, "Matrix file, or - for stdin")
        ->capture_default_str();
    return sub;
  };
  auto pair = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("first", first, "First matrix file (or -)")->required();
    sub->add_option("second", second, "Second matrix file (or -)")->required();
    return sub;
  };

  auto* invariants = single("invariants", "Full invariant report for one matrix");
  auto* snf = single("snf", "Smith normal form U*A*V = D and the cokernel");
  auto* dilate = single("dilate", "Edge-shift dilation to a 0/1 matrix");
  auto* compare = pair("compare", "Compare the torus bundles of two GL_n(Z) monodromies");
  auto* se = pair("se-search", "Bounded search for a shift-equivalence witness");
  auto* conj = pair("conj-search", "Bounded GL_n(Z) conjugacy search");
  for (auto* sub : {compare, conj}) {
    sub->add_option("--depth", depth, "Conjugator word length bound")->capture_default_str();
  }
  se->add_option("--max-lag", max_lag, "Largest lag tried")->capture_default_str();
  se->add_option("--entry-bound", entry_bound, "Largest entry of R and S")
      ->capture_default_str();
  for (auto* sub : {invariants, snf, dilate, compare, se, conj}) {
    sub->add_option("--format", format_name, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json", "json-like"}));
  }

  CLI11_PARSE(app, argc, argv);

  CommandResult result;
  try {
    if (first == "-" && second == "-") {
      throw ckf::ParseError("stdin can supply only one of the two matrices");
    }
    const OutputFormat format = parse_format(format_name);
    if (invariants->parsed()) result = run_invariants(load(input), format);
    if (snf->parsed()) result = run_snf(load(input), format);
    if (dilate->parsed()) result = run_dilate(load(input), format);
    if (compare->parsed()) result = run_compare(load(first), load(second), depth, format);
    if (se->parsed()) {
      result = run_se_search(load(first), load(second), max_lag, entry_bound, format);
    }
    if (conj->parsed()) result = run_conj_search(load(first), load(second), depth, format);
  } catch (const ckf::Error& e) {
    result = {kExitError, "", std::string("error: ") + e.what() + "\n"};
  }
  std::cout << result.out;
  std::cerr << result.err;
  return result.exit_code;
}
