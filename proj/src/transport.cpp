#include "selfdual/transport.hpp"

#include <iomanip>
#include <limits>
#include <ostream>

#include "selfdual/error.hpp"

namespace selfdual {

double PairMeasure::total_mass() const {
  double sum = 0.0;
  for (const auto& a : atoms) sum += a.mass;
  return sum;
}

namespace {

Vec concat(VecView a, VecView b) {
  Vec out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void check_sizes(const DiscreteDomain& dom, const SampledField& field, std::size_t n) {
  if (field.size() != dom.size() || n != dom.size()) {
    throw InputError("size mismatch between domain, field and permutation");
  }
}

}  // namespace

PairMeasures build_pair_measures(const DiscreteDomain& dom, const SampledField& field) {
  check_sizes(dom, field, dom.size());
  PairMeasures out;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    out.mu.atoms.push_back({concat(dom.point(i), field[i]), dom.cell_measure()});
    out.nu.atoms.push_back({concat(field[i], dom.point(i)), dom.cell_measure()});
  }
  return out;
}

PairMeasure transpose(const PairMeasure& m) {
  PairMeasure out;
  for (const auto& a : m.atoms) {
    const std::size_t d = a.point.size() / 2;
    const VecView p(a.point);
    out.atoms.push_back({concat(p.subspan(d), p.first(d)), a.mass});
  }
  return out;
}

double transport_cost(const DiscreteDomain& dom, const SampledField& field, const Permutation& s) {
  check_sizes(dom, field, s.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < dom.size(); ++i) {
    sum += squared_distance(field[s[i]], dom.point(i)) + squared_distance(field[i], dom.point(s[i]));
  }
  return 0.5 * sum * dom.cell_measure();
}

TransportMap parametrize_map(const DiscreteDomain& dom, const SampledField& field,
                             const Permutation& s) {
  check_sizes(dom, field, s.size());
  const PairMeasures pm = build_pair_measures(dom, field);
  TransportMap out;
  std::vector<double> received(dom.size(), 0.0);
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const std::size_t j = s[i];
    out.image.push_back(j);
    out.images.push_back({concat(field[j], dom.point(j)), pm.mu.atoms[i].mass});
    received[j] += pm.mu.atoms[i].mass;
  }
  out.pushes_forward = true;
  for (std::size_t j = 0; j < dom.size(); ++j) {
    if (out.images[j].point != pm.nu.atoms[s[j]].point || received[j] != pm.nu.atoms[j].mass) {
      out.pushes_forward = false;
    }
  }
  return out;
}

void write_atoms_csv(std::ostream& out, const PairMeasure& m) {
  const std::size_t dim = m.atoms.empty() ? 0 : m.atoms.front().point.size();
  out.imbue(std::locale::classic());
  out << "mass";
  for (std::size_t k = 0; k < dim; ++k) out << ",p" << k;
  out << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& a : m.atoms) {
    out << a.mass;
    for (double v : a.point) out << ',' << v;
    out << '\n';
  }
}

}  // namespace selfdual
