#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "selfdual/builtins.hpp"
#include "selfdual/factorize.hpp"

namespace selfdual {

struct RunConfig {
  std::string command = "decompose";

  // Field source: a builtin name, or a field CSV plus a domain JSON.
  std::string builtin;
  BuiltinParams params;
  std::string field_path;
  std::string domain_path;
  std::optional<std::size_t> n;  // builtins default to 64

  double radius_margin = 0.05;
  std::optional<std::size_t> sphere_samples;
  std::optional<double> fd_step;
  std::optional<double> tol_reg;
  std::optional<double> uniqueness_step;
  std::string solver = "auto";
  double eps_p = 1e-6;
  std::size_t max_iters = 0;
  bool warm_start = true;
  std::uint64_t seed = 0;

  // verify / transport inputs
  std::string sigma_path;
  std::string kernel_path;

  // outputs; an empty report path writes to stdout
  std::string out_path;
  std::string plot_path;
  std::string atoms_prefix;
  std::string kernel_out_path;

  std::size_t cells() const { return n.value_or(64); }
  DecomposeConfig decompose_config() const;
};

const std::vector<std::string>& command_names();

// Keys are the long flag names with '-' replaced by '_'. Unknown keys, wrong
// types and out-of-range values raise InputError.
RunConfig config_from_json(const nlohmann::json& j, const std::string& command = "decompose");
nlohmann::json config_to_json(const RunConfig& cfg);

// argv-style arguments without the program name: <command> [flags].
// --config FILE supplies defaults; explicit flags win. Throws InputError on
// schema violations and IoError when a file cannot be read. Returns nullopt
// after printing help.
std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& out);

}  // namespace selfdual
