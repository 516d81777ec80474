#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tflux/kinematics.hpp"
#include "tflux/transfer.hpp"
#include "tflux/vec3.hpp"

namespace tflux {

enum class PopulationMode { uniform, dipole, file };

std::string_view to_string(PopulationMode m);
PopulationMode parse_population_mode(std::string_view name);

struct FluxonPopulation {
  std::vector<Fluxon> fluxons;
  std::optional<std::uint64_t> seed;
  PopulationMode provenance = PopulationMode::uniform;

  std::size_t size() const { return fluxons.size(); }
  bool empty() const { return fluxons.empty(); }
};

struct PopulationSpec {
  PopulationMode mode = PopulationMode::uniform;
  /// Total fluxon/antifluxon pairs; in dipole mode this includes bias_pairs.
  int n_pairs = 0;
  std::uint64_t seed = 1;
  /// Dipole mode: pairs placed to produce the net flux, target in Phi_0.
  int bias_pairs = 0;
  double bias_flux = 0.0;
  /// Body-frame bias direction; drawn at random when absent.
  std::optional<Vec3> bias_axis;
  /// Fluxon file for file mode.
  std::string file;
};

/// Deterministic uniform doubles in [0, 1) from a 64-bit Mersenne twister;
/// independent of the standard library's distribution implementations.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Uniform direction on the sphere as body angles (xi, eta).
Fluxon random_fluxon(UniformSource& u, int polarity);

/// Builds a population. Uniform mode draws 2 n_pairs i.i.d. sphere-uniform
/// points with alternating polarity. Dipole mode draws n_pairs - bias_pairs
/// such pairs plus bias_pairs pairs with fluxons in a polar cap around the
/// bias axis and antifluxons in the opposite cap; the cap size is solved so
/// that net_flux_along(axis) meets bias_flux. An unreachable target is
/// reported by warning and the caps collapse onto the axis. File mode reads
/// spec.file. The curve supplies F_delta for the dipole solve.
FluxonPopulation generate_population(const PopulationSpec& spec, const TransferCurve& curve);

/// (1/2) sum_i p_i F(e_i . axis): the loop flux in Phi_0 when the loop
/// normal points along the body axis.
double net_flux_along(const FluxonPopulation& pop, const TransferCurve& curve, const Vec3& axis);

Vec3 body_direction(const Fluxon& f);

}  // namespace tflux
