#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "selfdual/factorize.hpp"

namespace selfdual {

// Stable keys: P, D, gap, sigma, residual1 {median, max, values}, residual2,
// complementarity {min, max, sum, values}, monotone, uniqueness, config, plus
// dual, primal, recovered and tolerances sections.
nlohmann::json report_to_json(const DecompositionReport& r, const nlohmann::json& config);

struct ParsedReport {
  DecompositionReport report;
  nlohmann::json config;
};

ParsedReport report_from_json(const nlohmann::json& j);

// Two-space indented JSON with a trailing newline; byte-stable for equal input.
std::string serialize_report(const DecompositionReport& r, const nlohmann::json& config);
ParsedReport parse_report(const std::string& text);

// One row per cell: x0..,u0..,sx0..,residual1.
void write_plot_csv(std::ostream& out, const DiscreteDomain& dom, const SampledField& field,
                    const std::vector<std::size_t>& sigma, const std::vector<double>& residual1);

}  // namespace selfdual
