#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace hwm {

enum class GridKind { torus, window };

/// Uniform periodic grid.
///
/// Torus: nodes 2*pi*j/n on [0, 2*pi), integer wavenumbers.
/// Window: nodes -L + j*dx on [-L, L), wavenumbers k*pi/L.
/// Wavenumbers are stored in FFT order, k in [-n/2, n/2); index n/2 holds the
/// Nyquist mode -n/2. The forward transform is unnormalized, the inverse
/// carries the 1/n factor.
struct Grid1D {
    GridKind kind = GridKind::torus;
    std::size_t n = 0;
    double half_width = 0.0; ///< L for windows, pi for the torus
    std::vector<double> nodes;
    std::vector<double> wavenumbers;
    double dx = 0.0;

    double circumference() const { return dx * static_cast<double>(n); }
    /// Wavenumber spacing: 1 on the torus, pi/L on a window.
    double wavenumber_unit() const { return 3.14159265358979323846 / half_width; }
    /// Largest |wavenumber| present (the Nyquist mode).
    double k_max() const { return wavenumber_unit() * static_cast<double>(n / 2); }
};

using GridPtr = std::shared_ptr<const Grid1D>;

/// Throws DomainError unless n is a power of two >= 8 and L is given (and
/// positive) exactly when kind == window.
GridPtr make_grid(GridKind kind, std::size_t n, std::optional<double> half_width = std::nullopt);

bool same_grid(const Grid1D& a, const Grid1D& b);

class ScalarField {
public:
    ScalarField(GridPtr grid, std::vector<double> values);
    explicit ScalarField(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t j) const { return values_[j]; }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

using Components = std::array<std::vector<double>, 3>;

/// Unconstrained triple of real samples (tangent vectors, residuals, |grad| u).
class VectorField3 {
public:
    VectorField3(GridPtr grid, Components values);
    explicit VectorField3(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    const Components& components() const { return values_; }
    Components& components() { return values_; }
    std::span<const double> component(int c) const { return values_[static_cast<std::size_t>(c)]; }
    std::array<double, 3> at(std::size_t j) const { return {values_[0][j], values_[1][j], values_[2][j]}; }

    double sup_norm() const;

private:
    GridPtr grid_;
    Components values_;
};

/// Sphere-valued samples; |u(x_j)|^2 = 1 within `norm_tolerance` is checked on
/// construction.
class SphereField {
public:
    static constexpr double norm_tolerance = 1e-12;

    /// Throws DomainError if any node is off the unit sphere or non-finite.
    SphereField(GridPtr grid, Components values);

    /// Rescales every node to unit length first. Throws NumericalError on a
    /// (near-)vanishing vector.
    static SphereField normalized(GridPtr grid, Components values);

    const GridPtr& grid() const { return grid_; }
    const Grid1D& grid_ref() const { return *grid_; }
    std::size_t size() const { return values_[0].size(); }
    const Components& components() const { return values_; }
    std::span<const double> component(int c) const { return values_[static_cast<std::size_t>(c)]; }
    std::array<double, 3> at(std::size_t j) const { return {values_[0][j], values_[1][j], values_[2][j]}; }
    VectorField3 as_vector() const { return VectorField3(grid_, values_); }

    /// max_j | |u(x_j)| - 1 |
    double norm_defect() const;

private:
    GridPtr grid_;
    Components values_;
};

double sup_distance(const SphereField& a, const SphereField& b);

enum class Symbol {
    halfwave,   ///< |k|, Nyquist kept as |n/2|
    hilbert,    ///< -i sgn(k), sgn(0) = 0, Nyquist zeroed
    derivative, ///< i k, Nyquist zeroed
};

ScalarField apply_multiplier(const ScalarField& f, Symbol symbol);
VectorField3 apply_multiplier(const VectorField3& f, Symbol symbol);

/// Raw-span variant used by the hot paths; `out` may alias `in`.
void apply_multiplier(const Grid1D& grid, std::span<const double> in, std::span<double> out, Symbol symbol);

/// Pointwise u x |grad| u.
VectorField3 hwm_rhs(const SphereField& u);
/// Same on an unconstrained triple (used inside implicit stages).
void hwm_rhs(const Grid1D& grid, const Components& u, Components& out);

/// Sum_j f_j g_j dx.
double inner(const ScalarField& f, const ScalarField& g);

} // namespace hwm
