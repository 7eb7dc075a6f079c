#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ffkg/error.hpp"

namespace ffkg::cli {

enum class Mode { two_branch, mu_zero };

/// Everything a command needs. Read from a flat `key = value` file and then
/// patched by command-line overrides.
struct RunConfig {
  double epsilon = 0.01;
  double kappa = 1.0;
  double lambda = 1.0;
  double rho = 1.0;
  double r = 0.9;
  double t_final = 1.0;
  double x_min = -4.0;
  double x_max = 4.0;
  double h_target = 0.1;
  /// 0 selects tau_factor * h^2 with the solved h.
  double tau_target = 0.0;
  double tau_factor = 1.0;
  Mode mode = Mode::two_branch;
  std::string profile = "gaussian";
  std::size_t reference_modes = 2048;
  double reference_dt = 1e-3;
  double kg_dt = 5e-4;
  bool strict = false;
  std::string output;
  /// unset: the single epsilon / h_target above; set but empty: no rows
  std::optional<std::vector<double>> epsilons;
  std::optional<std::vector<double>> h_targets;
  std::optional<long long> k_min;
  std::optional<long long> k_max;
  long long defect_stride = 1;
};

/// Applies one `key=value` assignment. Throws Error(InvalidArgument).
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);
void apply_override(RunConfig& cfg, std::string_view assignment);
/// Parses the text of a config file on top of cfg.
void parse_config_text(RunConfig& cfg, std::string_view text);
void load_config_file(RunConfig& cfg, const std::string& path);
/// Range and consistency checks on the finished config.
void validate(const RunConfig& cfg);

/// 0 success, 2 config error, 3 parameter-solve failure, 4 instability.
int exit_code_for(ErrorCode code) noexcept;

void cmd_params(const RunConfig& cfg, std::ostream& out);
void cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& log);
void cmd_converge(const RunConfig& cfg, std::ostream& out);
void cmd_stabmap(const RunConfig& cfg, std::ostream& out);
void cmd_defect(const RunConfig& cfg, std::ostream& out);

/// Full command-line entry point.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ffkg::cli
