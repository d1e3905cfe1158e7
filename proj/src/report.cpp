#include "selfdual/report.hpp"

#include <iomanip>
#include <ostream>

#include "selfdual/error.hpp"

namespace selfdual {

using nlohmann::json;

namespace {

json stats_json(const ResidualStats& s) {
  return {{"median", s.median}, {"max", s.max}, {"values", s.values}};
}

ResidualStats stats_from(const json& j) {
  ResidualStats s;
  s.median = j.at("median").get<double>();
  s.max = j.at("max").get<double>();
  s.values = j.at("values").get<std::vector<double>>();
  return s;
}

}  // namespace

json report_to_json(const DecompositionReport& r, const json& config) {
  json j;
  j["P"] = r.P;
  j["D"] = r.D;
  j["gap"] = r.gap;
  j["sigma"] = r.sigma;
  j["residual1"] = stats_json(r.residual1);
  j["residual2"] = stats_json(r.residual2);
  j["complementarity"] = {{"min", r.complementarity_min},
                          {"max", r.complementarity_max},
                          {"sum", r.complementarity_sum},
                          {"values", r.complementarity}};
  j["monotone"] = r.monotone;
  j["uniqueness"] = r.uniqueness;
  j["config"] = config;
  j["dual"] = {{"method", r.dual_method},
               {"optimality", r.dual_optimality},
               {"lp_bound", r.lp_bound ? json(*r.lp_bound) : json(nullptr)}};
  j["primal"] = {{"iterations", r.primal_iterations}, {"converged", r.primal_converged}};
  j["recovered"] = {{"sigma", r.recovered_sigma},
                    {"agrees", r.recovered_agrees},
                    {"involution_fraction", r.recovered_involution_fraction}};
  j["tolerances"] = {{"radius", r.radius},
                     {"covering_radius", r.covering_radius},
                     {"tol_reg", r.tol_reg},
                     {"fd_step", r.fd_step},
                     {"mesh", r.mesh},
                     {"eps_p", r.eps_p},
                     {"constant_c", r.constant_c},
                     {"regularization_excess", r.regularization_excess},
                     {"uniqueness_ratio", r.uniqueness_ratio}};
  return j;
}

ParsedReport report_from_json(const json& j) {
  ParsedReport out;
  DecompositionReport& r = out.report;
  try {
    r.P = j.at("P").get<double>();
    r.D = j.at("D").get<double>();
    r.gap = j.at("gap").get<double>();
    r.sigma = j.at("sigma").get<std::vector<std::size_t>>();
    r.residual1 = stats_from(j.at("residual1"));
    r.residual2 = stats_from(j.at("residual2"));
    const json& c = j.at("complementarity");
    r.complementarity_min = c.at("min").get<double>();
    r.complementarity_max = c.at("max").get<double>();
    r.complementarity_sum = c.at("sum").get<double>();
    r.complementarity = c.at("values").get<std::vector<double>>();
    r.monotone = j.at("monotone").get<std::string>();
    r.uniqueness = j.at("uniqueness").get<std::string>();
    out.config = j.at("config");
    const json& d = j.at("dual");
    r.dual_method = d.at("method").get<std::string>();
    r.dual_optimality = d.at("optimality").get<std::string>();
    if (!d.at("lp_bound").is_null()) r.lp_bound = d.at("lp_bound").get<double>();
    const json& p = j.at("primal");
    r.primal_iterations = p.at("iterations").get<std::size_t>();
    r.primal_converged = p.at("converged").get<bool>();
    const json& rec = j.at("recovered");
    r.recovered_sigma = rec.at("sigma").get<std::vector<std::size_t>>();
    r.recovered_agrees = rec.at("agrees").get<bool>();
    r.recovered_involution_fraction = rec.at("involution_fraction").get<double>();
    const json& t = j.at("tolerances");
    r.radius = t.at("radius").get<double>();
    r.covering_radius = t.at("covering_radius").get<double>();
    r.tol_reg = t.at("tol_reg").get<double>();
    r.fd_step = t.at("fd_step").get<double>();
    r.mesh = t.at("mesh").get<double>();
    r.eps_p = t.at("eps_p").get<double>();
    r.constant_c = t.at("constant_c").get<double>();
    r.regularization_excess = t.at("regularization_excess").get<double>();
    r.uniqueness_ratio = t.at("uniqueness_ratio").get<double>();
  } catch (const json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  return out;
}

std::string serialize_report(const DecompositionReport& r, const json& config) {
  return report_to_json(r, config).dump(2) + "\n";
}

ParsedReport parse_report(const std::string& text) {
  try {
    return report_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw InputError(std::string("report: ") + e.what());
  }
}

void write_plot_csv(std::ostream& out, const DiscreteDomain& dom, const SampledField& field,
                    const std::vector<std::size_t>& sigma, const std::vector<double>& residual1) {
  const std::size_t n = dom.size();
  const std::size_t d = dom.dim();
  if (field.size() != n || sigma.size() != n || residual1.size() != n) {
    throw InputError("plot dump: size mismatch");
  }
  for (std::size_t k = 0; k < d; ++k) out << 'x' << k << ',';
  for (std::size_t k = 0; k < d; ++k) out << 'u' << k << ',';
  for (std::size_t k = 0; k < d; ++k) out << "sx" << k << ',';
  out << "residual1\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < n; ++i) {
    for (double v : dom.point(i)) out << v << ',';
    for (double v : field[i]) out << v << ',';
    for (double v : dom.point(sigma[i])) out << v << ',';
    out << residual1[i] << '\n';
  }
}

}  // namespace selfdual
