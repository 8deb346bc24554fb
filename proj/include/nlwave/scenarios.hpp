#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlwave/kernels.hpp"
#include "nlwave/types.hpp"

namespace nlwave::scenarios {

using json = nlohmann::json;

struct KernelConfig {
  std::string family;
  std::map<std::string, Real> params;
  std::optional<Real> r;
  std::optional<Real> c_bound;
  std::string table_path;  // tabulated only
};

/// Fully resolved scenario inputs: defaults, then config file, then flags.
struct ResolvedConfig {
  std::string scenario;
  std::optional<KernelConfig> kernel;

  Real half_length = 100.0;
  int n_points = 1024;
  Real dt = 0.01;
  Real t_end = 10.0;

  Real c = 1.08;
  int p = 2;
  Real gamma = 2.0;
  Real tol = 1e-10;
  int max_iter = 500;

  int sample_every = 100;
  Real blowup_threshold = 1e3;
  std::string initial_type = "petviashvili";  // petviashvili | reference | csv
  std::string initial_family = "ibq";         // for initial_type = reference
  std::string v_mode = "consistent";          // consistent | paper
  std::string initial_path;

  Real nu = 0.25;
  Real phi_scale = 1.0;
  Real psi_scale = 1.0;

  std::vector<Real> etas;
  std::vector<Real> mus;
  std::vector<Real> gammas;
  std::vector<Real> speeds;
  std::vector<int> n_values;
  std::string reference = "ibq";  // convergence study reference

  std::string out_dir = "out";
  std::optional<long long> seed;  // reserved, unused

  json to_json() const;
};

/// Parses "family:key=value,..." kernel flags, e.g. "sin:eta=1",
/// "dexp:eta1=1,eta2=1", "tab:path=table.csv,r=2,c_bound=1".
KernelConfig parse_kernel_flag(const std::string& flag);

KernelSpec make_kernel(const KernelConfig& cfg);

/// Validates and merges defaults <- config file <- flag overrides. Rejects
/// unknown keys anywhere. `file_config` may be a previous run's manifest (its
/// embedded resolved config is then used).
ResolvedConfig resolve_config(const std::string& scenario,
                              const json& file_config,
                              const json& flag_overrides);

struct RunOutcome {
  int exit_code = 0;
  std::string status = "ok";
};

/// Executes the scenario, emitting CSVs and manifest.json into cfg.out_dir.
RunOutcome run_scenario(const ResolvedConfig& cfg);

const std::vector<std::string>& scenario_names();

}  // namespace nlwave::scenarios
