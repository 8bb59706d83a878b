#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace surfspline::cli;

int main(int argc, char** argv) {
  CLI::App app{"Surface-spline interpolation and convergence laboratory"};
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::string out;
    long long seed = -1;
    std::vector<std::string> assignments;
  };
  std::map<std::string, Args> args;
  for (const std::string& name : command_names()) {
    Args& a = args[name];
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " command");
    sub->add_option("--config", a.config, "key=value config file");
    sub->add_option("--seed", a.seed, "generator seed");
    sub->add_option("--out", a.out, "output directory");
    sub->add_option("assignments", a.assignments, "key=value overrides");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  for (const std::string& name : command_names()) {
    if (!app.got_subcommand(name)) continue;
    const Args& a = args[name];
    try {
      Overrides o;
      o.config_path = a.config;
      for (const std::string& kv : a.assignments) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + kv + "'");
        o.assignments.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (a.seed >= 0) o.assignments.emplace_back("seed", std::to_string(a.seed));
      if (!a.out.empty()) {
        o.assignments.emplace_back("out", a.out);
        o.out_flag = true;
      }
      const RunConfig cfg = resolve_config(name, schema_for(name), o);
      return run_command(cfg, std::cout, std::cerr);
    } catch (const std::exception& e) {
      std::cerr << "error: config: " << e.what() << '\n';
      return kExitConfig;
    }
  }
  return kExitConfig;
}
