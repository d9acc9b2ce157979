#include <iostream>

#include <CLI11.hpp>

#include "cosred/commands.hpp"

namespace {

void add_input_flags(CLI::App* cmd, cosred::cli::RunConfig& config) {
  cmd->add_option("--action", config.action, "action-spec JSON file or builtin fixture name");
  cmd->add_option("--fixture", config.fixture, "builtin fixture: s1-on-r2 or t2-on-r4");
  cmd->add_option("--poset", config.poset, "abstract isotropy poset JSON file");
  cmd->add_flag("--disconnected", config.disconnected, "Q/G is not connected (no density claims)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cosred::cli;
  CLI::App app{"Singular reduction of cosphere bundles at zero momentum"};
  app.require_subcommand(1);
  RunConfig config;

  auto* lattice = app.add_subcommand("lattice", "write isotropy and C-L stratification lattices as DOT");
  add_input_flags(lattice, config);
  lattice->add_option("--out", config.out, "output prefix (<out>.isotropy.dot, <out>.cl.dot)");

  auto* reduce = app.add_subcommand("reduce", "JSON report of contact and C-L stratifications");
  add_input_flags(reduce, config);
  reduce->add_option("--out", config.out, "output file");

  auto* verify = app.add_subcommand("verify", "sample the zero level and check reduced-space membership");
  add_input_flags(verify, config);
  verify->add_option("--seed", config.seed, "RNG seed (required)");
  verify->add_option("--count", config.count, "number of samples");
  verify->add_option("--tolerance", config.tolerance, "membership tolerance band");
  verify->add_option("--x-support", config.x_support, "planes where x may be nonzero, e.g. 1,2 or none");
  verify->add_option("--u-support", config.u_support, "planes where u may be nonzero");
  verify->add_option("--csv", config.csv, "write samples as CSV");
  verify->add_option("--out", config.out, "report file");

  auto* flow = app.add_subcommand("flow", "export a Reeb trajectory with conservation residuals as CSV");
  add_input_flags(flow, config);
  flow->add_option("--seed", config.seed, "seed for a sampled zero-level start");
  flow->add_option("--start", config.start, "start point x_1..x_2n,u_1..u_2n");
  flow->add_option("--t-end", config.t_end, "final time");
  flow->add_option("--step", config.step, "step size");
  flow->add_option("--method", config.method, "rk4 or exact");
  flow->add_option("--tolerance", config.tolerance, "zero-level tolerance for the start point");
  flow->add_option("--out", config.out, "output file");

  auto* examples = app.add_subcommand("examples", "reproduce both builtin examples and run all checks");
  examples->add_option("--seed", config.seed, "seed (default 7)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidInput;
  }

  try {
    if (lattice->parsed()) return cmd_lattice(config, std::cout);
    if (reduce->parsed()) return cmd_reduce(config, std::cout);
    if (verify->parsed()) return cmd_verify(config, std::cout);
    if (flow->parsed()) return cmd_flow(config, std::cout);
    if (examples->parsed()) return cmd_examples(config, std::cout);
  } catch (const cosred::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kInvalidInput;
}
