#include "selfdual/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

#include "selfdual/error.hpp"
#include "selfdual/io.hpp"

namespace selfdual {

using nlohmann::json;

namespace {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "builtin", "field",     "domain", "n",           "matrix",          "skew",
      "half_width", "radius_margin", "sphere_samples", "fd_step", "tol_reg",
      "uniqueness_step", "solver", "eps_p", "max_iters", "warm_start", "seed", "sigma", "kernel",
      "out", "plot", "atoms", "kernel_out"};
  return keys;
}

std::string text(const json& j, const char* key) {
  if (!j.is_string()) throw InputError(std::string(key) + ": expected a string");
  return j.get<std::string>();
}

std::uint64_t count(const json& j, const char* key) {
  if (!j.is_number_unsigned()) {
    throw InputError(std::string(key) + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

double number(const json& j, const char* key) {
  if (!j.is_number()) throw InputError(std::string(key) + ": expected a number");
  return j.get<double>();
}

double positive(const json& j, const char* key) {
  const double v = number(j, key);
  if (!(v > 0.0)) throw InputError(std::string(key) + " must be positive");
  return v;
}

}  // namespace

DecomposeConfig RunConfig::decompose_config() const {
  DecomposeConfig d;
  d.dual.choice = parse_dual_choice(solver);
  d.primal.eps = eps_p;
  d.primal.max_iters = max_iters;
  d.primal.warm_start = warm_start;
  d.radius_margin = radius_margin;
  d.sphere_samples = sphere_samples.value_or(0);
  d.fd_step = fd_step.value_or(0.0);
  d.tol_reg = tol_reg.value_or(0.0);
  d.uniqueness_step = uniqueness_step.value_or(0.0);
  d.seed = seed;
  return d;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"decompose", "dual",      "primal",
                                              "verify",    "transport", "gallery"};
  return names;
}

RunConfig config_from_json(const json& j, const std::string& command) {
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  const auto& keys = config_keys();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      throw InputError("config: unknown key '" + it.key() + "'");
    }
  }
  const auto& cmds = command_names();
  if (std::find(cmds.begin(), cmds.end(), command) == cmds.end()) {
    throw InputError("unknown command '" + command + "'");
  }

  RunConfig c;
  c.command = command;
  if (j.contains("builtin")) c.builtin = text(j["builtin"], "builtin");
  if (j.contains("field")) c.field_path = text(j["field"], "field");
  if (j.contains("domain")) c.domain_path = text(j["domain"], "domain");
  if (j.contains("n")) {
    c.n = count(j["n"], "n");
    if (*c.n < 1) throw InputError("n must be at least 1");
  }
  if (j.contains("matrix")) {
    const json& m = j["matrix"];
    if (!m.is_array() || m.size() != 4) throw InputError("matrix: expected 4 numbers");
    for (std::size_t k = 0; k < 4; ++k) c.params.matrix[k] = number(m[k], "matrix");
  }
  if (j.contains("skew")) c.params.skew = number(j["skew"], "skew");
  if (j.contains("half_width")) c.params.half_width = positive(j["half_width"], "half_width");
  if (j.contains("radius_margin")) {
    c.radius_margin = number(j["radius_margin"], "radius_margin");
    if (c.radius_margin < 0.0) throw InputError("radius_margin must be non-negative");
  }
  if (j.contains("sphere_samples")) {
    c.sphere_samples = count(j["sphere_samples"], "sphere_samples");
    if (*c.sphere_samples < 1) throw InputError("sphere_samples must be at least 1");
  }
  if (j.contains("fd_step")) c.fd_step = positive(j["fd_step"], "fd_step");
  if (j.contains("tol_reg")) c.tol_reg = positive(j["tol_reg"], "tol_reg");
  if (j.contains("uniqueness_step")) {
    c.uniqueness_step = positive(j["uniqueness_step"], "uniqueness_step");
  }
  if (j.contains("solver")) {
    c.solver = text(j["solver"], "solver");
    parse_dual_choice(c.solver);
  }
  if (j.contains("eps_p")) c.eps_p = positive(j["eps_p"], "eps_p");
  if (j.contains("max_iters")) c.max_iters = count(j["max_iters"], "max_iters");
  if (j.contains("warm_start")) {
    if (!j["warm_start"].is_boolean()) throw InputError("warm_start: expected true or false");
    c.warm_start = j["warm_start"].get<bool>();
  }
  if (j.contains("seed")) c.seed = count(j["seed"], "seed");
  if (j.contains("sigma")) c.sigma_path = text(j["sigma"], "sigma");
  if (j.contains("kernel")) c.kernel_path = text(j["kernel"], "kernel");
  if (j.contains("out")) c.out_path = text(j["out"], "out");
  if (j.contains("plot")) c.plot_path = text(j["plot"], "plot");
  if (j.contains("atoms")) c.atoms_prefix = text(j["atoms"], "atoms");
  if (j.contains("kernel_out")) c.kernel_out_path = text(j["kernel_out"], "kernel_out");

  if (!c.builtin.empty()) {
    const auto& names = builtin_names();
    if (std::find(names.begin(), names.end(), c.builtin) == names.end()) {
      throw InputError("unknown builtin '" + c.builtin + "'");
    }
    if (!c.field_path.empty()) throw InputError("give either builtin or field, not both");
  } else if (!c.field_path.empty()) {
    if (c.domain_path.empty()) throw InputError("field needs a domain file");
  } else if (command != "gallery") {
    throw InputError("no field source: give builtin or field + domain");
  }
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  if (!c.builtin.empty()) {
    j["builtin"] = c.builtin;
    j["n"] = c.cells();
    j["matrix"] = c.params.matrix;
    j["skew"] = c.params.skew;
    j["half_width"] = c.params.half_width;
  } else if (!c.field_path.empty()) {
    j["field"] = c.field_path;
    j["domain"] = c.domain_path;
    if (c.n) j["n"] = *c.n;
  }
  j["radius_margin"] = c.radius_margin;
  if (c.sphere_samples) j["sphere_samples"] = *c.sphere_samples;
  if (c.fd_step) j["fd_step"] = *c.fd_step;
  if (c.tol_reg) j["tol_reg"] = *c.tol_reg;
  if (c.uniqueness_step) j["uniqueness_step"] = *c.uniqueness_step;
  j["solver"] = c.solver;
  j["eps_p"] = c.eps_p;
  j["max_iters"] = c.max_iters;
  j["warm_start"] = c.warm_start;
  j["seed"] = c.seed;
  if (!c.sigma_path.empty()) j["sigma"] = c.sigma_path;
  if (!c.kernel_path.empty()) j["kernel"] = c.kernel_path;
  return j;
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Self-dual polar factorization of sampled vector fields"};
  app.set_help_flag("-h,--help");
  std::string command;
  std::string config_path;
  app.add_option("command", command, "decompose | dual | primal | verify | transport | gallery")
      ->required();
  app.add_option("--config", config_path, "JSON file with defaults for any flag");

  // Each flag lands in a JSON value keyed like the config file.
  std::vector<std::string> str_keys{"builtin", "field",  "domain", "solver", "sigma",
                                    "kernel",  "out",    "plot",   "atoms",  "kernel_out"};
  std::vector<std::string> num_keys{"skew",    "half_width",      "radius_margin",
                                    "fd_step", "tol_reg",         "uniqueness_step",
                                    "eps_p"};
  std::vector<std::string> int_keys{"n", "sphere_samples", "max_iters", "seed"};
  auto flag = [](std::string k) {
    std::replace(k.begin(), k.end(), '_', '-');
    return "--" + k;
  };
  std::vector<std::string> strs(str_keys.size());
  std::vector<double> nums(num_keys.size());
  std::vector<long long> ints(int_keys.size());
  for (std::size_t k = 0; k < str_keys.size(); ++k) app.add_option(flag(str_keys[k]), strs[k]);
  for (std::size_t k = 0; k < num_keys.size(); ++k) app.add_option(flag(num_keys[k]), nums[k]);
  for (std::size_t k = 0; k < int_keys.size(); ++k) app.add_option(flag(int_keys[k]), ints[k]);
  std::vector<double> matrix;
  auto* mopt = app.add_option("--matrix", matrix, "2x2 matrix, row-major")->expected(4);
  auto* cold = app.add_flag("--no-warm-start", "start the kernel descent from K = 0");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw InputError(e.what());
  }

  json j = json::object();
  if (!config_path.empty()) {
    try {
      j = json::parse(read_text_file(config_path));
    } catch (const json::parse_error& e) {
      throw InputError("config: " + std::string(e.what()));
    }
    if (!j.is_object()) throw InputError("config: expected a JSON object");
  }
  for (std::size_t k = 0; k < str_keys.size(); ++k) {
    if (app.count(flag(str_keys[k]))) j[str_keys[k]] = strs[k];
  }
  for (std::size_t k = 0; k < num_keys.size(); ++k) {
    if (app.count(flag(num_keys[k]))) j[num_keys[k]] = nums[k];
  }
  for (std::size_t k = 0; k < int_keys.size(); ++k) {
    if (!app.count(flag(int_keys[k]))) continue;
    if (ints[k] < 0) throw InputError(flag(int_keys[k]) + " must be non-negative");
    j[int_keys[k]] = static_cast<std::uint64_t>(ints[k]);
  }
  if (mopt->count()) j["matrix"] = matrix;
  if (cold->count()) j["warm_start"] = false;
  return config_from_json(j, command);
}

}  // namespace selfdual
