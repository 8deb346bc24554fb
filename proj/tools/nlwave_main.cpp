#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "nlwave/errors.hpp"
#include "nlwave/scenarios.hpp"

namespace {

using nlwave::scenarios::json;

struct Flags {
  std::string config_path;
  std::string out_dir;
  std::string kernel;
  std::optional<double> L, dt, T, c, gamma, tol;
  std::optional<int> N, p;
  std::optional<long long> seed;
};

void add_common_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "JSON config (a previous run's manifest.json also works)");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--kernel", flags.kernel,
                  "kernel as family:key=value,... e.g. sin:eta=1, exp, "
                  "mix:mu=0.1, dexp:eta1=1,eta2=1, tab:path=t.csv,r=2,c_bound=1");
  cmd->add_option("--L", flags.L, "domain half-length");
  cmd->add_option("--N", flags.N, "grid points (even)");
  cmd->add_option("--dt", flags.dt, "time step");
  cmd->add_option("--T", flags.T, "final time");
  cmd->add_option("--c", flags.c, "wave speed");
  cmd->add_option("--p", flags.p, "nonlinearity power in g(u)=u^p");
  cmd->add_option("--gamma", flags.gamma, "Petviashvili stabilization exponent");
  cmd->add_option("--tol", flags.tol, "residual stopping tolerance");
  cmd->add_option("--seed", flags.seed,
                  "reserved; recorded in the manifest, all scenarios are "
                  "deterministic");
}

json overrides_from_flags(const Flags& flags) {
  json j = json::object();
  if (!flags.kernel.empty()) {
    j["kernel"] = nlwave::scenarios::json::object();
    const auto cfg = nlwave::scenarios::parse_kernel_flag(flags.kernel);
    j["kernel"]["family"] = cfg.family;
    json params = json::object();
    for (const auto& [k, v] : cfg.params) params[k] = v;
    j["kernel"]["params"] = params;
    if (cfg.r) j["kernel"]["r"] = *cfg.r;
    if (cfg.c_bound) j["kernel"]["c_bound"] = *cfg.c_bound;
    if (!cfg.table_path.empty()) j["kernel"]["path"] = cfg.table_path;
  }
  if (flags.L) j["grid"]["L"] = *flags.L;
  if (flags.N) j["grid"]["N"] = *flags.N;
  if (flags.dt) j["time"]["dt"] = *flags.dt;
  if (flags.T) j["time"]["T"] = *flags.T;
  if (flags.c) j["solver"]["c"] = *flags.c;
  if (flags.p) j["solver"]["p"] = *flags.p;
  if (flags.gamma) j["solver"]["gamma"] = *flags.gamma;
  if (flags.tol) j["solver"]["tol"] = *flags.tol;
  if (!flags.out_dir.empty()) j["output"]["dir"] = flags.out_dir;
  if (flags.seed) j["seed"] = *flags.seed;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nlwave: pseudo-spectral solver for the nonlocal nonlinear wave "
      "equation u_tt = beta*(u+u^p)_xx with pluggable Fourier-symbol kernels"};
  app.require_subcommand(1);

  Flags flags;
  for (const auto& name : nlwave::scenarios::scenario_names()) {
    static const std::map<std::string, std::string> blurbs = {
        {"solitary", "construct a solitary wave by Petviashvili iteration"},
        {"evolve", "RK4 time evolution with energy diagnostics"},
        {"ampspeed", "amplitude vs speed sweep of solitary waves"},
        {"limit-ibq", "sin-modulated kernel limit study against the IBq wave"},
        {"limit-hbq", "rational-mix kernel limit study against the HBq wave"},
        {"blowup", "blow-up experiment with hypothesis checks"},
        {"gamma", "stabilization-exponent study of the iteration"},
        {"convergence", "spatial resolution study against a closed form"},
    };
    add_common_flags(app.add_subcommand(name, blurbs.at(name)), flags);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string scenario = app.get_subcommands().front()->get_name();
    json file_config = json::object();
    if (!flags.config_path.empty()) {
      std::ifstream in(flags.config_path);
      if (!in) {
        throw nlwave::ConfigError("cannot read config file " +
                                  flags.config_path);
      }
      try {
        in >> file_config;
      } catch (const std::exception& e) {
        throw nlwave::ConfigError("config file is not valid JSON: " +
                                  std::string(e.what()));
      }
    }
    const auto cfg = nlwave::scenarios::resolve_config(
        scenario, file_config, overrides_from_flags(flags));
    const auto outcome = nlwave::scenarios::run_scenario(cfg);
    if (outcome.exit_code != 0) {
      std::cerr << "error: " << outcome.status << ": scenario '" << scenario
                << "' did not reach its expected outcome\n";
    }
    return outcome.exit_code;
  } catch (const nlwave::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return e.kind() == nlwave::Error::Kind::Input ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: Unexpected: " << e.what() << "\n";
    return 1;
  }
}
