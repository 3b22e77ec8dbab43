#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdturing/cli.hpp"
#include "cdturing/config.hpp"
#include "cdturing/errors.hpp"

int main(int argc, char** argv) {
  using namespace cdturing;

  CLI::App app{"Cross-diffusion Turing laboratory for a two-prey one-predator "
               "system"};
  app.footer(exit_code_table() +
             "\nPresets ([model] preset = ...): paper-fig3, fig1, fig2, "
             "fig3-k17, fig3-k18, fig3-k19, fig3-k20");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  bool quiet = false;

  const std::pair<const char*, const char*> commands[] = {
      {"equilibrium", "Existence condition and the positive equilibrium"},
      {"ode", "Kinetic trajectory CSV and Lyapunov descent report"},
      {"dispersion", "Growth rate versus the swept cross-diffusion value"},
      {"threshold", "Turing threshold by bisection"},
      {"simulate", "2D simulation with snapshots and manifest"},
      {"sweep", "Bifurcation sweep CSV"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "Configuration file")
        ->required();
    sub->add_option("-o,--out", out_dir, "Output directory (overrides output.dir)");
    sub->add_option("-s,--set", overrides,
                    "Override, e.g. --set model.k32=1.8 (repeatable)");
    sub->add_flag("-q,--quiet", quiet, "No progress on stderr");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    if (!out_dir.empty()) overrides.push_back("output.dir=" + out_dir);
    const RunConfig cfg = parse_config(buf.str(), overrides);

    const auto* sub = app.get_subcommands().front();
    const auto cmd = subcommand_from_string(sub->get_name());
    std::ostringstream sink;
    dispatch(cfg, *cmd, std::cout, quiet ? static_cast<std::ostream&>(sink)
                                         : std::cerr);
  } catch (const std::exception& err) {
    std::cerr << error_line(err) << "\n";
    return exit_code_for(err);
  }
  return 0;
}
