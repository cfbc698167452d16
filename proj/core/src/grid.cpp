#include "hwm/grid.hpp"

#include "hwm/error.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hwm {
namespace {

void require_size(const GridPtr& grid, std::size_t count, const char* what) {
    if (!grid) throw DomainError(std::string(what) + ": null grid");
    if (count != grid->n)
        throw DomainError(std::string(what) + ": " + std::to_string(count) + " samples on a grid of " +
                          std::to_string(grid->n));
}

} // namespace

GridPtr make_grid(GridKind kind, std::size_t n, std::optional<double> half_width) {
    if (n < 8 || (n & (n - 1)) != 0)
        throw DomainError("grid size must be a power of two >= 8, got " + std::to_string(n));
    auto g = std::make_shared<Grid1D>();
    g->kind = kind;
    g->n = n;
    if (kind == GridKind::torus) {
        if (half_width) throw DomainError("torus grids take no half width");
        g->half_width = std::numbers::pi;
    } else {
        if (!half_width) throw DomainError("window grids require a half width L");
        if (!(*half_width > 0.0) || !std::isfinite(*half_width))
            throw DomainError("window half width must be positive and finite");
        g->half_width = *half_width;
    }
    g->dx = 2.0 * g->half_width / static_cast<double>(n);
    const double origin = kind == GridKind::torus ? 0.0 : -g->half_width;
    const double unit = g->wavenumber_unit();
    g->nodes.resize(n);
    g->wavenumbers.resize(n);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t j = 0; j < n; ++j) {
        g->nodes[j] = origin + static_cast<double>(j) * g->dx;
        auto k = static_cast<std::ptrdiff_t>(j);
        if (k >= half) k -= static_cast<std::ptrdiff_t>(n);
        g->wavenumbers[j] = unit * static_cast<double>(k);
    }
    return g;
}

bool same_grid(const Grid1D& a, const Grid1D& b) {
    return a.kind == b.kind && a.n == b.n && a.half_width == b.half_width;
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    require_size(grid_, values_.size(), "ScalarField");
}

ScalarField::ScalarField(GridPtr grid) : grid_(std::move(grid)) {
    require_size(grid_, grid_ ? grid_->n : 0, "ScalarField");
    values_.assign(grid_->n, 0.0);
}

VectorField3::VectorField3(GridPtr grid, Components values) : grid_(std::move(grid)), values_(std::move(values)) {
    for (const auto& c : values_) require_size(grid_, c.size(), "VectorField3");
}

VectorField3::VectorField3(GridPtr grid) : grid_(std::move(grid)) {
    require_size(grid_, grid_ ? grid_->n : 0, "VectorField3");
    for (auto& c : values_) c.assign(grid_->n, 0.0);
}

double VectorField3::sup_norm() const {
    double best = 0.0;
    for (std::size_t j = 0; j < values_[0].size(); ++j)
        best = std::max(best, std::hypot(values_[0][j], values_[1][j], values_[2][j]));
    return best;
}

SphereField::SphereField(GridPtr grid, Components values) : grid_(std::move(grid)), values_(std::move(values)) {
    for (const auto& c : values_) require_size(grid_, c.size(), "SphereField");
    for (std::size_t j = 0; j < values_[0].size(); ++j) {
        const double sq = values_[0][j] * values_[0][j] + values_[1][j] * values_[1][j] + values_[2][j] * values_[2][j];
        if (!std::isfinite(sq) || std::abs(sq - 1.0) > norm_tolerance)
            throw DomainError("SphereField: |u|^2 = " + std::to_string(sq) + " at node " + std::to_string(j));
    }
}

SphereField SphereField::normalized(GridPtr grid, Components values) {
    for (std::size_t j = 0; j < values[0].size(); ++j) {
        const double r = std::hypot(values[0][j], values[1][j], values[2][j]);
        if (!(r > 1e-8) || !std::isfinite(r))
            throw NumericalError("cannot normalize: |u| = " + std::to_string(r) + " at node " + std::to_string(j));
        for (auto& c : values) c[j] /= r;
    }
    return SphereField(std::move(grid), std::move(values));
}

double SphereField::norm_defect() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < size(); ++j)
        worst = std::max(worst, std::abs(std::hypot(values_[0][j], values_[1][j], values_[2][j]) - 1.0));
    return worst;
}

double sup_distance(const SphereField& a, const SphereField& b) {
    if (!same_grid(a.grid_ref(), b.grid_ref())) throw DomainError("sup_distance: grid mismatch");
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const auto p = a.at(j);
        const auto q = b.at(j);
        worst = std::max(worst, std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]));
    }
    return worst;
}

void apply_multiplier(const Grid1D& grid, std::span<const double> in, std::span<double> out, Symbol symbol) {
    const std::size_t n = grid.n;
    const std::size_t half = n / 2;
    std::vector<fft::cplx> spec(half + 1);
    fft::forward(in, spec);
    const double unit = grid.wavenumber_unit();
    for (std::size_t k = 0; k <= half; ++k) {
        const double kappa = unit * static_cast<double>(k);
        switch (symbol) {
        case Symbol::halfwave:
            spec[k] *= kappa;
            break;
        case Symbol::hilbert:
            spec[k] = (k == 0 || k == half) ? fft::cplx{} : fft::cplx{spec[k].imag(), -spec[k].real()};
            break;
        case Symbol::derivative:
            spec[k] = k == half ? fft::cplx{} : fft::cplx{-kappa * spec[k].imag(), kappa * spec[k].real()};
            break;
        }
    }
    fft::inverse(spec, out);
}

ScalarField apply_multiplier(const ScalarField& f, Symbol symbol) {
    ScalarField out(f.grid());
    apply_multiplier(*f.grid(), f.values(), out.values(), symbol);
    return out;
}

VectorField3 apply_multiplier(const VectorField3& f, Symbol symbol) {
    VectorField3 out(f.grid());
    for (int c = 0; c < 3; ++c) apply_multiplier(*f.grid(), f.component(c), out.components()[c], symbol);
    return out;
}

void hwm_rhs(const Grid1D& grid, const Components& u, Components& out) {
    Components hw;
    for (std::size_t c = 0; c < 3; ++c) {
        hw[c].resize(grid.n);
        apply_multiplier(grid, u[c], hw[c], Symbol::halfwave);
        out[c].resize(grid.n);
    }
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double a0 = u[0][j], a1 = u[1][j], a2 = u[2][j];
        const double b0 = hw[0][j], b1 = hw[1][j], b2 = hw[2][j];
        out[0][j] = a1 * b2 - a2 * b1;
        out[1][j] = a2 * b0 - a0 * b2;
        out[2][j] = a0 * b1 - a1 * b0;
    }
}

VectorField3 hwm_rhs(const SphereField& u) {
    Components out;
    hwm_rhs(u.grid_ref(), u.components(), out);
    return VectorField3(u.grid(), std::move(out));
}

double inner(const ScalarField& f, const ScalarField& g) {
    if (!same_grid(*f.grid(), *g.grid())) throw DomainError("inner: grid mismatch");
    double s = 0.0;
    for (std::size_t j = 0; j < f.values().size(); ++j) s += f[j] * g[j];
    return s * f.grid()->dx;
}

} // namespace hwm
