#include "hwm/exact.hpp"

#include "hwm/error.hpp"
#include "fft.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>

namespace hwm {
namespace {

constexpr double pi = std::numbers::pi;

void require_subluminal(double v) {
    if (!(std::abs(v) < 1.0)) {
        std::ostringstream msg;
        msg << "no nonconstant profile for |v| >= 1 (v = " << v << ")";
        throw DomainError(msg.str());
    }
}

Components profile_from_product(const BlaschkeSpec& spec, const std::vector<cplx>& b) {
    const double a = std::sqrt(1.0 - spec.velocity * spec.velocity);
    const double chi = static_cast<double>(spec.chirality);
    Components out;
    for (auto& c : out) c.resize(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        const Eigen::Vector3d raw(a * b[j].real(), -chi * a * b[j].imag(), -chi * spec.velocity);
        const Eigen::Vector3d q = spec.rotation * raw;
        for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(c)][j] = q[c];
    }
    return out;
}

double wrap_angle(double theta) {
    // into (-pi, pi]
    double w = std::remainder(theta, 2.0 * pi);
    if (w <= -pi) w += 2.0 * pi;
    return w;
}

} // namespace

void BlaschkeSpec::validate() const {
    for (const auto& z : zeros)
        if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw DomainError("Blaschke zeros must lie in the open upper half-plane");
    if (!std::isfinite(velocity)) throw DomainError("velocity must be finite");
    if (chirality != 1 && chirality != -1) throw DomainError("chirality must be +1 or -1");
    const double defect = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).norm();
    if (!(defect <= 1e-12) || !(rotation.determinant() > 0.0))
        throw DomainError("rotation must be orthogonal with determinant +1");
}

BlaschkeSpec ground_state_spec(std::size_t m, double velocity, int chirality) {
    BlaschkeSpec spec;
    spec.zeros.assign(m, cplx{0.0, 1.0});
    spec.velocity = velocity;
    spec.chirality = chirality;
    return spec;
}

cplx blaschke_product(const BlaschkeSpec& spec, cplx z) {
    cplx b{1.0, 0.0};
    for (const auto& zk : spec.zeros) {
        const cplx den = z - std::conj(zk);
        if (std::abs(den) == 0.0) throw DomainError("blaschke_product evaluated at a pole");
        b *= (z - zk) / den;
    }
    return b;
}

SphereField blaschke_profile(const BlaschkeSpec& spec, const GridPtr& grid) {
    spec.validate();
    require_subluminal(spec.velocity);
    if (grid->kind == GridKind::torus) return stereographic_pullback(spec, grid);
    std::vector<cplx> b(grid->n);
    for (std::size_t j = 0; j < grid->n; ++j) b[j] = blaschke_product(spec, cplx{grid->nodes[j], 0.0});
    return SphereField::normalized(grid, profile_from_product(spec, b));
}

double soliton_energy_expected(std::size_t m, double velocity) {
    require_subluminal(velocity);
    return (1.0 - velocity * velocity) * static_cast<double>(m) * pi;
}

SphereField stereographic_pullback(const BlaschkeSpec& spec, const GridPtr& torus_grid) {
    spec.validate();
    require_subluminal(spec.velocity);
    if (torus_grid->kind != GridKind::torus) throw DomainError("stereographic_pullback needs a torus grid");
    std::vector<cplx> b(torus_grid->n);
    for (std::size_t j = 0; j < torus_grid->n; ++j) {
        const double theta = wrap_angle(torus_grid->nodes[j]);
        if (std::abs(theta - pi) < 1e-15) {
            b[j] = cplx{1.0, 0.0};
            continue;
        }
        const double x = std::tan(0.5 * theta);
        b[j] = blaschke_product(spec, cplx{x, 0.0});
    }
    // Rounding in the product can leave |B| off by a few ulps; renormalize.
    return SphereField::normalized(torus_grid, profile_from_product(spec, b));
}

double propagation_velocity(const BlaschkeSpec& spec) { return 0.0 - spec.velocity; } // no -0.0 for static data

SphereField circle_wave(int m, double velocity, double t, const GridPtr& torus_grid) {
    if (m < 1) throw DomainError("circle_wave needs m >= 1");
    require_subluminal(velocity);
    if (torus_grid->kind != GridKind::torus) throw DomainError("circle_wave needs a torus grid");
    const double a = std::sqrt(1.0 - velocity * velocity);
    Components out;
    for (auto& c : out) c.resize(torus_grid->n);
    for (std::size_t j = 0; j < torus_grid->n; ++j) {
        const double phase = static_cast<double>(m) * (torus_grid->nodes[j] - velocity * t);
        out[0][j] = a * std::cos(phase);
        out[1][j] = a * std::sin(phase);
        out[2][j] = -velocity;
    }
    return SphereField::normalized(torus_grid, std::move(out));
}

SphereField periodic_orbit_field(double t, const GridPtr& window_grid) {
    if (window_grid->kind != GridKind::window) throw DomainError("periodic_orbit_field needs a window grid");
    const double phase = t / std::numbers::sqrt2;
    const double cp = std::cos(phase), sp = std::sin(phase);
    Components out;
    for (auto& c : out) c.resize(window_grid->n);
    for (std::size_t j = 0; j < window_grid->n; ++j) {
        const double x = window_grid->nodes[j];
        const double x4 = x * x * x * x;
        const double g = 2.0 * x * x / (x4 + 1.0);
        out[0][j] = cp * g;
        out[1][j] = sp * g;
        out[2][j] = (x4 - 1.0) / (x4 + 1.0);
    }
    return SphereField::normalized(window_grid, std::move(out));
}

double periodic_orbit_period() { return 2.0 * pi * std::numbers::sqrt2; }

void LineMobius::validate() const {
    if (std::abs(a * d - b * c - 1.0) > 1e-12) throw DomainError("line Mobius map needs ad - bc = 1");
}

void DiskMobius::validate() const {
    if (!(std::abs(a) < 1.0)) throw DomainError("disk Mobius map needs |a| < 1");
}

double DiskMobius::operator()(double theta) const {
    const cplx z = std::polar(1.0, theta);
    const cplx w = std::polar(1.0, alpha) * (z - a) / (1.0 - std::conj(a) * z);
    return std::arg(w);
}

std::vector<double> trig_interpolate(const Grid1D& grid, std::span<const double> samples, std::span<const double> at) {
    const std::size_t n = grid.n;
    const std::size_t half = n / 2;
    std::vector<fft::cplx> spec(half + 1);
    fft::forward(samples, spec);
    const double origin = grid.kind == GridKind::torus ? 0.0 : -grid.half_width;
    const double unit = grid.wavenumber_unit();
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> out(at.size());
    for (std::size_t i = 0; i < at.size(); ++i) {
        const double s = (at[i] - origin) * unit;
        // Recurrence for e^{iks}; the drift over n/2 products is ~1e-13.
        const cplx step = std::polar(1.0, s);
        cplx rot{1.0, 0.0};
        double acc = spec[0].real();
        for (std::size_t k = 1; k < half; ++k) {
            rot *= step;
            acc += 2.0 * (spec[k] * rot).real();
        }
        acc += spec[half].real() * std::cos(static_cast<double>(half) * s);
        out[i] = acc * inv_n;
    }
    return out;
}

MobiusResult mobius_reparam(const SphereField& u, const MobiusMap& phi, const MobiusOptions& options) {
    const Grid1D& grid = u.grid_ref();
    const std::size_t n = grid.n;
    std::vector<double> mapped(n);
    double condition = 1.0;

    const bool identity = std::visit(
        [](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LineMobius>)
                return m.a == 1.0 && m.b == 0.0 && m.c == 0.0 && m.d == 1.0;
            else
                return m.alpha == 0.0 && m.a == cplx{};
        },
        phi);
    const bool kind_matches = (grid.kind == GridKind::torus) == std::holds_alternative<DiskMobius>(phi);
    if (identity && kind_matches) return MobiusResult{u, 1.0, 0.0};

    if (grid.kind == GridKind::torus) {
        const auto* disk = std::get_if<DiskMobius>(&phi);
        if (!disk) throw DomainError("torus fields take a disk Mobius map");
        disk->validate();
        const double r = std::abs(disk->a);
        for (std::size_t j = 0; j < n; ++j) {
            mapped[j] = disk->operator()(grid.nodes[j]);
            const cplx z = std::polar(1.0, grid.nodes[j]);
            condition = std::max(condition, (1.0 - r * r) / std::norm(1.0 - std::conj(disk->a) * z));
        }
    } else {
        const auto* line = std::get_if<LineMobius>(&phi);
        if (!line) throw DomainError("window fields take a line Mobius map");
        line->validate();
        for (std::size_t j = 0; j < n; ++j) {
            const double x = grid.nodes[j];
            const double den = line->c * x + line->d;
            if (den == 0.0) throw NumericalError("Mobius map sends node " + std::to_string(j) + " to infinity");
            mapped[j] = (*line)(x);
            condition = std::max(condition, 1.0 / (den * den));
            if (mapped[j] < -grid.half_width || mapped[j] > grid.half_width) {
                std::ostringstream msg;
                msg << "Mobius map sends node " << j << " outside the window (image " << mapped[j]
                    << "), condition estimate " << condition;
                throw NumericalError(msg.str());
            }
        }
    }

    Components values;
    for (std::size_t c = 0; c < 3; ++c) values[c] = trig_interpolate(grid, u.components()[c], mapped);

    double defect = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        defect = std::max(defect, std::abs(std::hypot(values[0][j], values[1][j], values[2][j]) - 1.0));

    // Resolution check on the resampled field: spectral content in the top quarter.
    double tail = 0.0, peak = 0.0;
    std::vector<fft::cplx> spec(n / 2 + 1);
    for (std::size_t c = 0; c < 3; ++c) {
        fft::forward(values[c], spec);
        for (std::size_t k = 0; k <= n / 2; ++k) {
            const double mag = std::abs(spec[k]);
            peak = std::max(peak, mag);
            if (k >= n / 4) tail = std::max(tail, mag);
        }
    }
    const double rel_tail = peak > 0.0 ? tail / peak : 0.0;
    if (defect > options.norm_tolerance || rel_tail > options.tail_tolerance) {
        std::ostringstream msg;
        msg << "Mobius resampling unresolved: norm defect " << defect << ", relative spectral tail " << rel_tail
            << ", condition estimate " << condition;
        throw NumericalError(msg.str());
    }
    return MobiusResult{SphereField::normalized(u.grid(), std::move(values)), condition, defect};
}

int winding_number(const SphereField& u) {
    const std::size_t n = u.size();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = (j + 1) % n;
        const cplx p{u.component(0)[j], u.component(1)[j]};
        const cplx q{u.component(0)[k], u.component(1)[k]};
        if (std::abs(p) < 1e-12 || std::abs(q) < 1e-12)
            throw DomainError("winding_number: horizontal component vanishes at node " + std::to_string(j));
        total += std::arg(q / p);
    }
    return static_cast<int>(std::lround(total / (2.0 * pi)));
}

double profile_residual(const SphereField& q, double c) {
    const Grid1D& grid = q.grid_ref();
    const VectorField3 rhs = hwm_rhs(q);
    double worst = 0.0;
    std::vector<double> dq(grid.n);
    Components res = rhs.components();
    for (std::size_t comp = 0; comp < 3; ++comp) {
        apply_multiplier(grid, q.components()[comp], dq, Symbol::derivative);
        for (std::size_t j = 0; j < grid.n; ++j) res[comp][j] += c * dq[j];
    }
    for (std::size_t j = 0; j < grid.n; ++j) worst = std::max(worst, std::hypot(res[0][j], res[1][j], res[2][j]));
    return worst;
}

} // namespace hwm
