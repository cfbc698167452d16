#pragma once

#include "hwm/grid.hpp"

#include <Eigen/Core>

#include <complex>
#include <variant>
#include <vector>

namespace hwm {

using cplx = std::complex<double>;

/// Data of a Blaschke traveling-wave profile
///   Q(x) = R (a Re B(x), -chirality a Im B(x), -chirality v),  a = sqrt(1 - v^2),
/// with B the finite Blaschke product over `zeros`.
struct BlaschkeSpec {
    std::vector<cplx> zeros;
    double velocity = 0.0;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    int chirality = +1;

    /// Throws DomainError on Im z <= 0, non-orthogonal rotation or chirality
    /// other than +-1. Does not check |v|; profile builders do.
    void validate() const;
    std::size_t degree() const { return zeros.size(); }
};

/// Degree-m spec with every zero at i (the ground-state family).
BlaschkeSpec ground_state_spec(std::size_t m, double velocity = 0.0, int chirality = +1);

/// Product over k of (z - z_k)/(z - conj z_k). Throws DomainError at a pole.
cplx blaschke_product(const BlaschkeSpec& spec, cplx z);

/// Window grids are sampled directly; torus grids go through
/// stereographic_pullback. Throws DomainError for |v| >= 1.
SphereField blaschke_profile(const BlaschkeSpec& spec, const GridPtr& grid);

/// (1 - v^2) m pi.
double soliton_energy_expected(std::size_t m, double velocity);

/// theta -> Q(tan(theta/2)) with theta wrapped into (-pi, pi]; the node
/// theta = pi takes the limit B(infinity) = 1.
SphereField stereographic_pullback(const BlaschkeSpec& spec, const GridPtr& torus_grid);

/// Velocity with which the profile built from `spec` is transported by the
/// flow, i.e. u(t, x) = Q(x - c t) solves the equation for c = -v. See the
/// README for the sign discussion.
double propagation_velocity(const BlaschkeSpec& spec);

/// theta -> (a cos m(theta - v t), a sin m(theta - v t), -v) on the torus.
SphereField circle_wave(int m, double velocity, double t, const GridPtr& torus_grid);

/// Rotating rational field on a window:
///   (cos(t/sqrt2) g, sin(t/sqrt2) g, (x^4 - 1)/(x^4 + 1)),  g = 2x^2/(x^4 + 1).
SphereField periodic_orbit_field(double t, const GridPtr& window_grid);
double periodic_orbit_period();

/// x -> (a x + b)/(c x + d) with ad - bc = 1.
struct LineMobius {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    void validate() const;
    double operator()(double x) const { return (a * x + b) / (c * x + d); }
};

/// e^{i theta} -> e^{i alpha} (e^{i theta} - a) / (1 - conj(a) e^{i theta}), |a| < 1.
struct DiskMobius {
    double alpha = 0.0;
    cplx a{};
    void validate() const;
    double operator()(double theta) const;
};

using MobiusMap = std::variant<LineMobius, DiskMobius>;

struct MobiusOptions {
    double norm_tolerance = 1e-6;  ///< max ||interpolant| - 1| accepted before renormalizing
    double tail_tolerance = 1e-8;  ///< max relative coefficient in the top quarter of the spectrum
};

struct MobiusResult {
    SphereField field;
    double condition = 1.0;    ///< max |phi'| over the nodes
    double norm_defect = 0.0;  ///< before renormalization
};

/// Resamples u o phi on u's grid by trigonometric interpolation. Torus fields
/// take DiskMobius, window fields LineMobius. Throws NumericalError (with the
/// condition estimate in the message) when the result is not resolved.
MobiusResult mobius_reparam(const SphereField& u, const MobiusMap& phi, const MobiusOptions& options = {});

/// Evaluates the trigonometric interpolant of samples on `grid` at arbitrary
/// abscissae (periodic with the grid's circumference).
std::vector<double> trig_interpolate(const Grid1D& grid, std::span<const double> samples, std::span<const double> at);

/// Signed winding number of (u1, u2) around the origin along the periodic
/// grid, by discrete phase unwinding. For a Blaschke profile with R = I it is
/// -chirality * m.
int winding_number(const SphereField& u);

/// max_j |Q x |grad| Q + c dQ| for a profile transported with velocity c.
double profile_residual(const SphereField& q, double c);

} // namespace hwm
