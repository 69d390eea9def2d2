#include <CLI11.hpp>

#include "seqiso/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sequential isomorphisms of finite-dimensional von Neumann algebras"};
  app.require_subcommand(1);
  seqiso::RunConfig rc;

  const std::pair<const char*, const char*> commands[] = {
      {"gen", "write a random spec and sequential isomorphism"},
      {"check", "run the lemma suite on a map"},
      {"extend", "build the linear extension of a map"},
      {"decompose", "decompose a map blindly"},
      {"selftest", "run the acceptance suite"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--spec", rc.spec_path, "algebra spec JSON");
    sub->add_option("--map", rc.map_path, "map descriptor JSON");
    sub->add_option("--out", rc.out_path, "report path (stdout when omitted)");
    sub->add_option("--seed", rc.seed, "master seed");
    sub->add_option("--trials", rc.trials, "samples per check");
    sub->add_option("--tol", rc.tol, "equality tolerance");
    sub->callback([&rc, name = std::string(name)] { rc.command = *seqiso::parse_command(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : seqiso::kExitUsage;
  }
  return seqiso::run(rc);
}
