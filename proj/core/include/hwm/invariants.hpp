#pragma once

#include "hwm/grid.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace hwm {

using Vec3 = std::array<double, 3>;

/// Far-field model used to add the part of a line integral outside [-L, L).
enum class TailModel {
    none,           ///< plain periodic quadrature (torus default)
    inverse_square, ///< integrand ~ A/x^2 beyond the window (window default)
};

TailModel default_tail_model(const Grid1D& grid);

/// 1/2 sum_j u_j . (|grad| u)_j dx
double energy(const SphereField& u);
/// Same value through Parseval, 1/2 sum_k |k| |u_k|^2 dx / n.
double energy_fourier(const SphereField& u);
/// (1/(4 pi)) double sum of |u(x) - u(y)|^2 / dist(x, y)^2 dx dy, with the
/// line kernel on windows and the periodized one, 1/(4 sin^2((x-y)/2)), on the
/// torus. The diagonal uses the limit |u'(x)|^2. O(n^2); meant for coarse grids.
double energy_double_integral(const SphereField& u);

struct SpinResult {
    Vec3 value{};
    double boundary_deviation = 0.0; ///< max |u - P| over the two outermost nodes
    bool principal_value = false;    ///< the tails decay too slowly for an L^1 integral
    std::optional<std::string> warning;
};

/// Throws DomainError if `base_point` is not a unit vector.
SpinResult total_spin(const SphereField& u, const Vec3& base_point, std::optional<TailModel> tail = std::nullopt);
double mass(const SphereField& u, const Vec3& base_point, std::optional<TailModel> tail = std::nullopt);

/// Integral of (u2 u1' - u1 u2')/(1 - u3) with the spectral derivative.
/// Throws DomainError naming the nodes where u3 > 1 - pole_margin.
double momentum(const SphereField& u, double pole_margin = 1e-6);

/// Integral of |u'| with the spectral derivative.
double curve_length(const SphereField& u);

struct InvariantRecord {
    double time = 0.0;
    double energy = 0.0;
    Vec3 spin{};
    double mass = 0.0;
    std::optional<double> momentum; ///< empty when the field reaches the pole
    double length = 0.0;
    Vec3 base_point{0.0, 0.0, 1.0};
    bool spin_principal_value = false;
};

InvariantRecord record(const SphereField& u, double time, const Vec3& base_point);

struct Drift {
    double max_abs = 0.0;
    double max_rel = 0.0; ///< relative to |initial|; equals max_abs when the initial value is 0
};

struct DriftReport {
    Drift energy, spin, mass, momentum, length;
    std::size_t samples = 0;
};

DriftReport drift_report(std::span<const InvariantRecord> records);

} // namespace hwm
