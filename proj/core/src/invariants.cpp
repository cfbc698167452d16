#include "hwm/invariants.hpp"

#include "hwm/error.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace hwm {
namespace {

constexpr double pi = std::numbers::pi;

void require_unit(const Vec3& p) {
    const double r = std::hypot(p[0], p[1], p[2]);
    if (!(std::abs(r - 1.0) <= 1e-12)) throw DomainError("base point must lie on the unit sphere");
}

Components derivatives(const SphereField& u) {
    Components d;
    for (std::size_t c = 0; c < 3; ++c) {
        d[c].resize(u.size());
        apply_multiplier(u.grid_ref(), u.components()[c], d[c], Symbol::derivative);
    }
    return d;
}

// Sum of samples times dx, plus the far-field contribution of the tail model.
double line_integral(const Grid1D& grid, std::span<const double> f, TailModel tail) {
    double s = 0.0;
    for (double v : f) s += v;
    s *= grid.dx;
    if (tail == TailModel::inverse_square) {
        // integral_L^inf A/x^2 dx = A/L = L f(L); likewise on the left.
        s += grid.half_width * (f.front() + f.back());
    }
    return s;
}

} // namespace

TailModel default_tail_model(const Grid1D& grid) {
    return grid.kind == GridKind::window ? TailModel::inverse_square : TailModel::none;
}

double energy(const SphereField& u) {
    const Grid1D& grid = u.grid_ref();
    std::vector<double> hw(grid.n);
    double s = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        apply_multiplier(grid, u.components()[c], hw, Symbol::halfwave);
        for (std::size_t j = 0; j < grid.n; ++j) s += u.components()[c][j] * hw[j];
    }
    return 0.5 * s * grid.dx;
}

double energy_fourier(const SphereField& u) {
    const Grid1D& grid = u.grid_ref();
    const std::size_t half = grid.n / 2;
    std::vector<fft::cplx> spec(half + 1);
    double s = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        fft::forward(u.components()[c], spec);
        for (std::size_t k = 1; k <= half; ++k) {
            const double weight = k == half ? 1.0 : 2.0;
            s += weight * static_cast<double>(k) * std::norm(spec[k]);
        }
    }
    return 0.5 * s * grid.wavenumber_unit() * grid.dx / static_cast<double>(grid.n);
}

double energy_double_integral(const SphereField& u) {
    const Grid1D& grid = u.grid_ref();
    const std::size_t n = grid.n;
    const Components d = derivatives(u);
    const auto& v = u.components();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double diff = grid.nodes[i] - grid.nodes[j];
            double dist2;
            if (grid.kind == GridKind::torus) {
                const double sn = 2.0 * std::sin(0.5 * diff);
                dist2 = sn * sn;
            } else {
                dist2 = diff * diff;
            }
            const double a = v[0][i] - v[0][j], b = v[1][i] - v[1][j], c = v[2][i] - v[2][j];
            s += 2.0 * (a * a + b * b + c * c) / dist2;
        }
    }
    return s * grid.dx * grid.dx / (4.0 * pi);
}

SpinResult total_spin(const SphereField& u, const Vec3& base_point, std::optional<TailModel> tail) {
    require_unit(base_point);
    const Grid1D& grid = u.grid_ref();
    const TailModel model = tail.value_or(default_tail_model(grid));
    SpinResult out;
    std::vector<double> f(grid.n);
    for (std::size_t c = 0; c < 3; ++c) {
        for (std::size_t j = 0; j < grid.n; ++j) f[j] = u.components()[c][j] - base_point[c];
        // Plain periodic sums pair x_j with x_{n-j}, a symmetric (pv-like) truncation.
        out.value[c] = line_integral(grid, f, model);
    }
    if (grid.kind == GridKind::window) {
        for (std::size_t j : {std::size_t{0}, grid.n - 1}) {
            const auto p = u.at(j);
            out.boundary_deviation = std::max(
                out.boundary_deviation,
                std::hypot(p[0] - base_point[0], p[1] - base_point[1], p[2] - base_point[2]));
        }
        // An L^1 tail decays faster than 1/x; L |u - P| ~ const signals a 1/x tail.
        out.principal_value = grid.half_width * out.boundary_deviation >= 0.1;
        if (out.boundary_deviation > 0.1) {
            std::ostringstream msg;
            msg << "u - P does not decay at the window ends (deviation " << out.boundary_deviation << ")";
            out.warning = msg.str();
        }
    }
    return out;
}

double mass(const SphereField& u, const Vec3& base_point, std::optional<TailModel> tail) {
    require_unit(base_point);
    const Grid1D& grid = u.grid_ref();
    std::vector<double> f(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const auto p = u.at(j);
        const double a = p[0] - base_point[0], b = p[1] - base_point[1], c = p[2] - base_point[2];
        f[j] = a * a + b * b + c * c;
    }
    return line_integral(grid, f, tail.value_or(default_tail_model(grid)));
}

double momentum(const SphereField& u, double pole_margin) {
    const Grid1D& grid = u.grid_ref();
    std::vector<std::size_t> bad;
    for (std::size_t j = 0; j < grid.n; ++j)
        if (u.component(2)[j] > 1.0 - pole_margin) bad.push_back(j);
    if (!bad.empty()) {
        std::ostringstream msg;
        msg << "momentum integrand singular: u3 > 1 - " << pole_margin << " at " << bad.size() << " node(s):";
        for (std::size_t i = 0; i < std::min<std::size_t>(bad.size(), 8); ++i) msg << ' ' << bad[i];
        if (bad.size() > 8) msg << " ...";
        throw DomainError(msg.str());
    }
    std::vector<double> d1(grid.n), d2(grid.n);
    apply_multiplier(grid, u.component(0), d1, Symbol::derivative);
    apply_multiplier(grid, u.component(1), d2, Symbol::derivative);
    double s = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double u1 = u.component(0)[j], u2 = u.component(1)[j], u3 = u.component(2)[j];
        s += (u2 * d1[j] - u1 * d2[j]) / (1.0 - u3);
    }
    return s * grid.dx;
}

double curve_length(const SphereField& u) {
    const Components d = derivatives(u);
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += std::hypot(d[0][j], d[1][j], d[2][j]);
    return s * u.grid_ref().dx;
}

InvariantRecord record(const SphereField& u, double time, const Vec3& base_point) {
    InvariantRecord r;
    r.time = time;
    r.base_point = base_point;
    r.energy = energy(u);
    const SpinResult spin = total_spin(u, base_point);
    r.spin = spin.value;
    r.spin_principal_value = spin.principal_value;
    r.mass = mass(u, base_point);
    try {
        r.momentum = momentum(u);
    } catch (const DomainError&) {
        r.momentum.reset();
    }
    r.length = curve_length(u);
    return r;
}

DriftReport drift_report(std::span<const InvariantRecord> records) {
    DriftReport out;
    out.samples = records.size();
    if (records.empty()) return out;
    const InvariantRecord& first = records.front();
    auto update = [](Drift& d, double abs_dev, double reference) {
        d.max_abs = std::max(d.max_abs, abs_dev);
        const double rel = reference != 0.0 ? abs_dev / std::abs(reference) : abs_dev;
        d.max_rel = std::max(d.max_rel, rel);
    };
    const double spin0 = std::hypot(first.spin[0], first.spin[1], first.spin[2]);
    for (const auto& r : records) {
        update(out.energy, std::abs(r.energy - first.energy), first.energy);
        update(out.spin,
               std::hypot(r.spin[0] - first.spin[0], r.spin[1] - first.spin[1], r.spin[2] - first.spin[2]), spin0);
        update(out.mass, std::abs(r.mass - first.mass), first.mass);
        if (r.momentum && first.momentum)
            update(out.momentum, std::abs(*r.momentum - *first.momentum), *first.momentum);
        update(out.length, std::abs(r.length - first.length), first.length);
    }
    return out;
}

} // namespace hwm
