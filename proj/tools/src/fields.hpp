#pragma once

#include "config.hpp"

#include "hwm/exact.hpp"
#include "hwm/grid.hpp"
#include "hwm/invariants.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace hwm::cli {

/// [grid] kind = torus | window, n, half_width.
GridPtr grid_from(const Config& cfg);

/// [soliton] m, velocity, chirality, zeros = re:im, ..., rotation_axis, rotation_angle.
BlaschkeSpec soliton_from(const Config& cfg);

/// Adds sum_k a_k cos(k s) + b_k sin(k s) with uniform coefficients in
/// [-amplitude/modes, amplitude/modes] to each component and renormalizes.
/// On a window s = x and the sum is damped by 1/(1 + x^2) so the tails keep
/// their limit.
SphereField perturbed(const SphereField& u, std::uint64_t seed, int modes, double amplitude);

struct InitialData {
    SphereField field;
    /// Exact solution through the same data, when one is known.
    std::optional<std::function<SphereField(double)>> exact;
};

/// [initial] type = soliton | circle_wave | periodic_orbit | constant, plus
/// m, velocity, value, perturbation_amplitude, perturbation_modes, seed.
/// `seed_override` (the --seed flag) wins over [initial] seed.
InitialData initial_from(const Config& cfg, const GridPtr& grid, std::optional<std::uint64_t> seed_override);

/// [invariants] base_point; defaults to (0,0,1) on a torus and to the value
/// at the left end of a window.
Vec3 base_point_from(const Config& cfg, const SphereField& u);

} // namespace hwm::cli
