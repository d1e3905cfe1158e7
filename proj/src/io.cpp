#include "selfdual/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "selfdual/error.hpp"

namespace selfdual {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& what) {
  if (!j.is_object()) throw InputError(what + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw InputError(what + ": unknown key '" + it.key() + "'");
  }
}

std::size_t as_count(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw InputError(what + ": expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

double as_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw InputError(what + ": expected a number");
  return j.get<double>();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  // The C locale parser keeps '.' as the decimal separator.
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double v = 0.0;
  in >> v;
  if (in.fail() || !in.eof()) throw InputError("field CSV: cannot parse number '" + s + "'");
  return v;
}

}  // namespace

GridSpec grid_spec_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "bounds", "cells"}, "domain spec");
  if (!j.contains("kind") || !j.contains("bounds") || !j.contains("cells")) {
    throw InputError("domain spec: 'kind', 'bounds' and 'cells' are required");
  }
  const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
  const json& bounds = j.at("bounds");
  const json& cells = j.at("cells");
  if (kind == "interval") {
    if (!bounds.is_array() || bounds.size() != 2) {
      throw InputError("domain spec: interval bounds must be [a, b]");
    }
    return GridSpec::interval(as_number(bounds[0], "bounds"), as_number(bounds[1], "bounds"),
                              as_count(cells, "cells"));
  }
  if (kind == "box") {
    if (!bounds.is_array() || !cells.is_array() || bounds.size() != cells.size() ||
        bounds.empty()) {
      throw InputError("domain spec: box needs per-axis bounds and cells");
    }
    std::vector<double> lo, hi;
    std::vector<std::size_t> n;
    for (std::size_t k = 0; k < bounds.size(); ++k) {
      if (!bounds[k].is_array() || bounds[k].size() != 2) {
        throw InputError("domain spec: box bounds must be [[a, b], ...]");
      }
      lo.push_back(as_number(bounds[k][0], "bounds"));
      hi.push_back(as_number(bounds[k][1], "bounds"));
      n.push_back(as_count(cells[k], "cells"));
    }
    return GridSpec::box(std::move(lo), std::move(hi), std::move(n));
  }
  if (kind == "symmetric-square" || kind == "symmetric-ball") {
    const double h = as_number(bounds, "bounds");
    const std::size_t n = as_count(cells, "cells");
    return kind == "symmetric-square" ? GridSpec::symmetric_square(h, n)
                                      : GridSpec::symmetric_ball(h, n);
  }
  throw InputError("domain spec: unknown kind '" + kind + "'");
}

json grid_spec_to_json(const GridSpec& spec) {
  switch (spec.kind) {
    case GridKind::Interval:
      return {{"kind", "interval"}, {"bounds", {spec.lower[0], spec.upper[0]}},
              {"cells", spec.cells[0]}};
    case GridKind::Box: {
      json b = json::array();
      for (std::size_t k = 0; k < spec.cells.size(); ++k) b.push_back({spec.lower[k], spec.upper[k]});
      return {{"kind", "box"}, {"bounds", b}, {"cells", spec.cells}};
    }
    case GridKind::SymmetricSquare:
      return {{"kind", "symmetric-square"}, {"bounds", spec.upper[0]}, {"cells", spec.cells[0]}};
    case GridKind::SymmetricBall:
      return {{"kind", "symmetric-ball"}, {"bounds", spec.upper[0]}, {"cells", spec.cells[0]}};
  }
  return {};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw IoError("cannot write '" + path + "'");
}

namespace {

json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

GridSpec read_grid_spec(const std::string& path) { return grid_spec_from_json(parse_json_file(path)); }

SampledField read_field_csv(std::istream& in, const DiscreteDomain& dom) {
  const std::size_t d = dom.dim();
  std::string line;
  if (!std::getline(in, line)) throw InputError("field CSV: missing header");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
  const auto header = split_csv_line(line);
  if (header.size() != 2 * d) {
    throw InputError("field CSV: expected " + std::to_string(2 * d) + " columns");
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (header[k] != "x" + std::to_string(k) || header[d + k] != "u" + std::to_string(k)) {
      throw InputError("field CSV: header must be x0,...,x{d-1},u0,...,u{d-1}");
    }
  }
  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2 * d) {
      throw InputError("field CSV: row " + std::to_string(row + 1) + " has wrong column count");
    }
    if (row >= dom.size()) throw InputError("field CSV: more rows than domain cells");
    for (std::size_t k = 0; k < d; ++k) {
      const double x = parse_double(cells[k]);
      if (std::abs(x - dom.point(row)[k]) > 1e-9 * std::max(1.0, std::abs(x))) {
        throw InputError("field CSV: row " + std::to_string(row + 1) +
                         " does not match the domain point");
      }
    }
    for (std::size_t k = 0; k < d; ++k) values.push_back(parse_double(cells[d + k]));
    ++row;
  }
  if (row != dom.size()) throw InputError("field CSV: fewer rows than domain cells");
  return SampledField(dom, PointSet(d, std::move(values)));
}

SampledField read_field_csv(const std::string& path, const DiscreteDomain& dom) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_field_csv(in, dom);
}

void write_field_csv(std::ostream& out, const DiscreteDomain& dom, const SampledField& field) {
  const std::size_t d = dom.dim();
  out.imbue(std::locale::classic());
  for (std::size_t k = 0; k < d; ++k) out << (k ? "," : "") << 'x' << k;
  for (std::size_t k = 0; k < d; ++k) out << ",u" << k;
  out << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) out << (k ? "," : "") << dom.point(i)[k];
    for (std::size_t k = 0; k < d; ++k) out << ',' << field[i][k];
    out << '\n';
  }
}

Permutation read_permutation(const std::string& path) {
  json j = parse_json_file(path);
  if (j.is_object()) {
    reject_unknown_keys(j, {"sigma"}, "sigma file");
    if (!j.contains("sigma")) throw InputError("sigma file: missing 'sigma'");
    j = j.at("sigma");
  }
  if (!j.is_array()) throw InputError("sigma file: expected an array of indices");
  std::vector<std::size_t> map;
  for (const auto& v : j) map.push_back(as_count(v, "sigma"));
  return Permutation(std::move(map));
}

json kernel_to_json(const AntiSymmetricKernel& K) {
  return {{"n", K.size()}, {"upper", K.upper()}};
}

AntiSymmetricKernel kernel_from_json(const json& j) {
  reject_unknown_keys(j, {"n", "upper", "K"}, "kernel file");
  if (j.contains("K")) {
    const json& rows = j.at("K");
    if (!rows.is_array()) throw InputError("kernel file: 'K' must be a matrix");
    const std::size_t n = rows.size();
    AntiSymmetricKernel K(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].is_array() || rows[i].size() != n) {
        throw InputError("kernel file: 'K' must be square");
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t jj = i + 1; jj < n; ++jj) {
        K.set(i, jj, 0.5 * (as_number(rows[i][jj], "K") - as_number(rows[jj][i], "K")));
      }
    }
    return K;
  }
  if (!j.contains("n") || !j.contains("upper")) {
    throw InputError("kernel file: expected {\"n\", \"upper\"} or {\"K\"}");
  }
  std::vector<double> upper;
  for (const auto& v : j.at("upper")) upper.push_back(as_number(v, "upper"));
  return AntiSymmetricKernel(as_count(j.at("n"), "n"), std::move(upper));
}

AntiSymmetricKernel read_kernel(const std::string& path) {
  return kernel_from_json(parse_json_file(path));
}

}  // namespace selfdual
