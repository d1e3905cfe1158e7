#include "selfdual/cli.hpp"

#include <cmath>
#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "selfdual/error.hpp"
#include "selfdual/io.hpp"
#include "selfdual/report.hpp"
#include "selfdual/transport.hpp"

namespace selfdual {

using nlohmann::json;

namespace {

struct Problem {
  std::optional<Builtin> builtin;
  DiscreteDomain dom;
  SampledField field;
};

Problem load_problem(const RunConfig& cfg) {
  if (!cfg.builtin.empty()) {
    Builtin b = builtin_field(cfg.builtin, cfg.cells(), cfg.params);
    DiscreteDomain dom = build_grid(b.grid);
    SampledField field = sample_field(dom, b.field);
    return {std::move(b), std::move(dom), std::move(field)};
  }
  DiscreteDomain dom = build_grid(read_grid_spec(cfg.domain_path));
  if (cfg.n && *cfg.n != dom.size()) {
    throw InputError("n = " + std::to_string(*cfg.n) + " but the domain has " +
                     std::to_string(dom.size()) + " cells");
  }
  SampledField field = read_field_csv(cfg.field_path, dom);
  return {std::nullopt, std::move(dom), std::move(field)};
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
  } else {
    write_text_file(cfg.out_path, text);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Involution load_involution(const std::string& path, std::size_t n) {
  Permutation p = read_permutation(path);
  if (p.size() != n) throw InputError("sigma has the wrong length for this domain");
  if (!compose_check(p)) throw InputError("sigma is not an involution");
  return Involution(std::move(p));
}

void write_atoms(const std::string& prefix, const DiscreteDomain& dom, const SampledField& field) {
  const PairMeasures m = build_pair_measures(dom, field);
  std::ostringstream mu, nu;
  write_atoms_csv(mu, m.mu);
  write_atoms_csv(nu, m.nu);
  write_text_file(prefix + "_mu.csv", mu.str());
  write_text_file(prefix + "_nu.csv", nu.str());
}

json stats(const ResidualStats& s) {
  return {{"median", s.median}, {"max", s.max}, {"values", s.values}};
}

int cmd_decompose(const RunConfig& cfg, std::ostream& out) {
  const Problem pb = load_problem(cfg);
  const Decomposition dec = decompose(pb.dom, pb.field, cfg.decompose_config());
  emit(cfg, serialize_report(dec.report, config_to_json(cfg)), out);
  if (!cfg.plot_path.empty()) {
    std::ostringstream csv;
    write_plot_csv(csv, pb.dom, pb.field, dec.report.sigma, dec.report.residual1.values);
    write_text_file(cfg.plot_path, csv.str());
  }
  if (!cfg.kernel_out_path.empty()) {
    write_text_file(cfg.kernel_out_path, dump(kernel_to_json(dec.primal.K)));
  }
  if (!cfg.atoms_prefix.empty()) write_atoms(cfg.atoms_prefix, pb.dom, pb.field);
  return dec.report.primal_converged ? 0 : 1;
}

int cmd_dual(const RunConfig& cfg, std::ostream& out) {
  const Problem pb = load_problem(cfg);
  const DualSolution sol = solve_dual(pb.dom, pb.field, cfg.decompose_config().dual);
  json j;
  j["D"] = sol.value;
  j["sigma"] = sol.sigma.map();
  j["fixed_points"] = sol.sigma.fixed_points();
  j["method"] = to_string(sol.method);
  j["optimality"] = to_string(sol.optimality);
  j["lp_bound"] = sol.bound ? json(*sol.bound) : json(nullptr);
  j["config"] = config_to_json(cfg);
  emit(cfg, dump(j), out);
  return 0;
}

int cmd_primal(const RunConfig& cfg, std::ostream& out) {
  const Problem pb = load_problem(cfg);
  PrimalConfig pc = cfg.decompose_config().primal;
  if (!cfg.sigma_path.empty()) pc.centre_on = load_involution(cfg.sigma_path, pb.dom.size());
  const PrimalSolution sol = minimize_primal(pb.dom, pb.field, pc);
  const RecoveredInvolution rec = recover_involution(sol.K, pb.dom, pb.field);
  json j;
  j["P"] = sol.value;
  j["lp_bound"] = sol.lp_bound;
  j["gap_vs_dual"] = sol.gap_vs_dual;
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  j["argmax"] = sol.argmax_map;
  j["recovered"] = {{"candidate", rec.candidate},
                    {"is_permutation", rec.is_permutation},
                    {"is_involution", rec.is_involution},
                    {"involution_fraction", rec.involution_fraction},
                    {"tight_pairs", rec.tight_pairs.size()},
                    {"sigma", rec.rounded.map()}};
  j["config"] = config_to_json(cfg);
  emit(cfg, dump(j), out);
  if (!cfg.kernel_out_path.empty()) {
    write_text_file(cfg.kernel_out_path, dump(kernel_to_json(sol.K)));
  }
  return sol.converged ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.sigma_path.empty() && cfg.kernel_path.empty()) {
    throw InputError("verify needs --sigma and/or --kernel");
  }
  const Problem pb = load_problem(cfg);
  const DiscreteDomain& dom = pb.dom;
  const std::size_t n = dom.size();

  // The kernel comes from the file, else from the builtin's closed-form H.
  std::optional<AntiSymmetricKernel> K;
  std::optional<PairRule> H;
  std::string source;
  if (!cfg.kernel_path.empty()) {
    K = read_kernel(cfg.kernel_path);
    if (K->size() != n) throw InputError("kernel has the wrong size for this domain");
    source = "kernel-file";
  } else if (pb.builtin && pb.builtin->hamiltonian) {
    H = *pb.builtin->hamiltonian;
    K = make_kernel(dom, *H);
    source = "closed-form";
  } else {
    throw InputError("no kernel: pass --kernel (this field has no closed-form Hamiltonian)");
  }

  const Involution sigma = cfg.sigma_path.empty()
                               ? recover_involution(*K, dom, pb.field).rounded
                               : load_involution(cfg.sigma_path, n);
  const WeakDualityCertificate cert = weak_duality(dom, pb.field, *K, sigma.permutation());

  const double R = ball_radius(dom, pb.field, cfg.radius_margin);
  const double h = cfg.fd_step.value_or(1e-4 * R);
  std::optional<RegularHamiltonian> hreg;
  if (!H) {
    const DualPointSet pset =
        make_dual_point_set(dom, pb.field, R, cfg.sphere_samples.value_or(0), cfg.seed);
    hreg.emplace(regularize(*K, dom, pset));
    H = hreg->rule();
  }
  const ResidualStats r1 = first_identity_check(dom, pb.field, *H, sigma.permutation(), h);
  const ResidualStats r2 = second_identity_check(dom, pb.field, *H, sigma.permutation(), h);

  double cmin = 0.0, cmax = 0.0, csum = 0.0;
  if (n > 0) {
    cmin = *std::min_element(cert.slack.begin(), cert.slack.end());
    cmax = *std::max_element(cert.slack.begin(), cert.slack.end());
  }
  for (double v : cert.slack) csum += v;
  json j;
  j["P"] = cert.primal;
  j["D"] = cert.dual;
  j["gap"] = cert.gap;
  j["sigma"] = sigma.map();
  j["cancellation"] = cert.cancellation;
  j["hamiltonian"] = source;
  j["complementarity"] = {{"min", cmin},
                          {"max", cmax},
                          {"sum", csum * dom.cell_measure()},
                          {"values", cert.slack}};
  j["residual1"] = stats(r1);
  j["residual2"] = stats(r2);
  j["tolerances"] = {{"fd_step", h}, {"radius", R}, {"mesh", dom.mesh()}};
  if (hreg) j["tolerances"]["covering_radius"] = hreg->dual_points().covering_radius();
  j["config"] = config_to_json(cfg);
  emit(cfg, dump(j), out);
  return 0;
}

int cmd_transport(const RunConfig& cfg, std::ostream& out) {
  const Problem pb = load_problem(cfg);
  const std::size_t n = pb.dom.size();
  Permutation s;
  if (cfg.sigma_path.empty()) {
    s = solve_dual(pb.dom, pb.field, cfg.decompose_config().dual).sigma.permutation();
  } else {
    s = read_permutation(cfg.sigma_path);
    if (s.size() != n) throw InputError("sigma has the wrong length for this domain");
  }
  const double cost = transport_cost(pb.dom, pb.field, s);
  const TransportMap map = parametrize_map(pb.dom, pb.field, s);
  const PairMeasures m = build_pair_measures(pb.dom, pb.field);
  json j;
  j["sigma"] = s.map();
  j["is_involution"] = compose_check(s);
  j["transport_cost"] = cost;
  if (compose_check(s)) {
    const Involution inv(s);
    const double dist = distance_objective(pb.dom, pb.field, inv);
    j["distance_objective"] = dist;
    j["dual_objective"] = dual_objective(pb.dom, pb.field, inv);
    j["identity_relative_error"] = std::abs(cost - dist) / std::max(1.0, std::abs(dist));
  } else {
    j["distance_objective"] = nullptr;
    j["dual_objective"] = nullptr;
    j["identity_relative_error"] = nullptr;
  }
  j["pushes_forward"] = map.pushes_forward;
  j["mass_mu"] = m.mu.total_mass();
  j["mass_nu"] = m.nu.total_mass();
  j["transpose_roundtrip"] = transpose(transpose(m.mu)) == m.mu;
  j["config"] = config_to_json(cfg);
  emit(cfg, dump(j), out);
  if (!cfg.atoms_prefix.empty()) write_atoms(cfg.atoms_prefix, pb.dom, pb.field);
  return 0;
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

int cmd_gallery(const RunConfig& cfg, std::ostream& out) {
  const std::vector<std::size_t> sizes{16, 32, 64};
  std::vector<std::string> names = builtin_names();
  if (!cfg.builtin.empty()) names = {cfg.builtin};
  bool converged = true;
  std::ostringstream os;
  os << std::left << std::setw(11) << "builtin" << std::setw(6) << "N" << std::setw(15) << "P"
     << std::setw(15) << "D" << std::setw(13) << "gap" << std::setw(13) << "res1_med"
     << std::setw(13) << "res2_med" << std::setw(8) << "fixed" << "uniqueness\n";
  std::ostringstream tent;
  for (const std::string& name : names) {
    for (std::size_t n : sizes) {
      RunConfig c = cfg;
      c.builtin = name;
      c.n = n;
      const Problem pb = load_problem(c);
      const Decomposition dec = decompose(pb.dom, pb.field, c.decompose_config());
      const DecompositionReport& r = dec.report;
      converged = converged && r.primal_converged;
      os << std::setw(11) << name << std::setw(6) << pb.dom.size() << std::setw(15)
         << fmt(r.P, 10) << std::setw(15) << fmt(r.D, 10) << std::setw(13) << fmt(r.gap, 3)
         << std::setw(13) << fmt(r.residual1.median, 3) << std::setw(13)
         << fmt(r.residual2.median, 3) << std::setw(8) << dec.dual.sigma.fixed_points()
         << r.uniqueness << '\n';
      if (name == "tent") {
        const std::size_t m = pb.dom.size();
        tent << "tent N=" << m
             << "  D(reflection)=" << fmt(dual_objective(pb.dom, pb.field, Involution::reversal(m)), 10)
             << "  D(half-shift)=" << fmt(dual_objective(pb.dom, pb.field, half_shift(m)), 10)
             << "  D(optimum)=" << fmt(r.D, 10) << '\n';
      }
    }
  }
  if (!tent.str().empty()) os << '\n' << tent.str();
  emit(cfg, os.str(), out);
  return converged ? 0 : 1;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "decompose") return cmd_decompose(cfg, out);
    if (cfg.command == "dual") return cmd_dual(cfg, out);
    if (cfg.command == "primal") return cmd_primal(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "transport") return cmd_transport(cfg, out);
    if (cfg.command == "gallery") return cmd_gallery(cfg, out);
    throw InputError("unknown command '" + cfg.command + "'");
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 4;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_config(args, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (!cfg) return 0;
  return run(*cfg, out, err);
}

}  // namespace selfdual
