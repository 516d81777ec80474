#include "tflux/population.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tflux/diagnostics.hpp"
#include "tflux/signal_io.hpp"

namespace tflux {

std::string_view to_string(PopulationMode m) {
  switch (m) {
    case PopulationMode::uniform: return "uniform";
    case PopulationMode::dipole: return "dipole";
    case PopulationMode::file: return "file";
  }
  return "unknown";
}

PopulationMode parse_population_mode(std::string_view name) {
  for (auto m : {PopulationMode::uniform, PopulationMode::dipole, PopulationMode::file}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown population mode '" + std::string(name) + "'");
}

Vec3 body_direction(const Fluxon& f) {
  const double s = std::sin(f.xi);
  return {s * std::cos(f.eta), s * std::sin(f.eta), std::cos(f.xi)};
}

namespace {

Fluxon from_direction(const Vec3& d, int polarity) {
  double eta = std::atan2(d.y, d.x);
  if (eta < 0.0) eta += 2.0 * pi;
  if (eta >= 2.0 * pi) eta = 0.0;
  return {std::acos(std::clamp(d.z, -1.0, 1.0)), eta, polarity};
}

// Orthonormal (e1, e2) completing the unit vector n.
std::pair<Vec3, Vec3> complete_basis(const Vec3& n) {
  const Vec3 helper = std::abs(n.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  const Vec3 e1 = normalized(cross(helper, n));
  return {e1, cross(n, e1)};
}

}  // namespace

Fluxon random_fluxon(UniformSource& u, int polarity) {
  const double c = 2.0 * u() - 1.0;
  const double eta = 2.0 * pi * u();
  return {std::acos(c), eta, polarity};
}

double net_flux_along(const FluxonPopulation& pop, const TransferCurve& curve, const Vec3& axis) {
  const Vec3 n = normalized(axis);
  double sum = 0.0;
  for (const auto& f : pop.fluxons) sum += f.polarity * curve(std::clamp(dot(body_direction(f), n), -1.0, 1.0));
  return 0.5 * sum;
}

FluxonPopulation generate_population(const PopulationSpec& spec, const TransferCurve& curve) {
  if (spec.mode == PopulationMode::file) {
    FluxonPopulation pop = read_fluxon_file(spec.file);
    pop.provenance = PopulationMode::file;
    return pop;
  }
  if (spec.n_pairs < 0) throw ConfigError("population: n_pairs must be non-negative");
  FluxonPopulation pop;
  pop.seed = spec.seed;
  pop.provenance = spec.mode;
  UniformSource u(spec.seed);

  const int bias_pairs = spec.mode == PopulationMode::dipole ? spec.bias_pairs : 0;
  if (bias_pairs < 0 || bias_pairs > spec.n_pairs) throw ConfigError("population: need 0 <= bias_pairs <= n_pairs");
  pop.fluxons.reserve(2 * static_cast<std::size_t>(spec.n_pairs));
  for (int i = 0; i < spec.n_pairs - bias_pairs; ++i) {
    pop.fluxons.push_back(random_fluxon(u, +1));
    pop.fluxons.push_back(random_fluxon(u, -1));
  }
  if (bias_pairs == 0) return pop;

  Vec3 axis;
  if (spec.bias_axis) {
    if (!(norm(*spec.bias_axis) > 0.0)) throw ConfigError("population: bias axis must be non-zero");
    axis = normalized(*spec.bias_axis);
  } else {
    axis = body_direction(random_fluxon(u, 1));
  }
  const double sign = spec.bias_flux < 0.0 ? -1.0 : 1.0;
  const double target = std::abs(spec.bias_flux);
  const Vec3 n = sign * axis;
  const auto [e1, e2] = complete_basis(n);

  // Fixed per-pair draws; the cap half-angle only rescales the polar offsets.
  struct Draw {
    double u_cap, phi, u_cap2, phi2;
  };
  std::vector<Draw> draws(bias_pairs);
  for (auto& d : draws) d = {u(), 2.0 * pi * u(), u(), 2.0 * pi * u()};

  auto place = [&](double cap) {
    std::vector<Fluxon> out;
    out.reserve(2 * draws.size());
    const double one_minus_c = 1.0 - std::cos(cap);
    for (const auto& d : draws) {
      for (int k = 0; k < 2; ++k) {
        const double ct = 1.0 - (k == 0 ? d.u_cap : d.u_cap2) * one_minus_c;
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        const double ph = k == 0 ? d.phi : d.phi2;
        const Vec3 dir = ct * n + st * (std::cos(ph) * e1 + std::sin(ph) * e2);
        out.push_back(k == 0 ? from_direction(dir, +1) : from_direction(-1.0 * dir, -1));
      }
    }
    return out;
  };
  auto net = [&](double cap) {
    FluxonPopulation p;
    p.fluxons = place(cap);
    return net_flux_along(p, curve, n);
  };

  double cap = 0.0;
  const double reachable = net(0.0);
  if (target > reachable) {
    warn("population: bias flux " + std::to_string(target) + " exceeds the reachable " + std::to_string(reachable) +
         " for " + std::to_string(bias_pairs) + " pairs; placing all biased fluxons on the axis");
  } else {
    double lo = 0.0, hi = pi;  // net flux decreases with the cap size
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (net(mid) > target ? lo : hi) = mid;
    }
    cap = 0.5 * (lo + hi);
  }
  auto biased = place(cap);
  pop.fluxons.insert(pop.fluxons.end(), biased.begin(), biased.end());
  return pop;
}

}  // namespace tflux
