#include "fields.hpp"

#include "hwm/error.hpp"

#include <Eigen/Geometry>

#include <boost/algorithm/string.hpp>

#include <cmath>
#include <random>

namespace hwm::cli {

GridPtr grid_from(const Config& cfg) {
    const std::string kind = cfg.text("grid", "kind", "torus");
    const long n = cfg.integer("grid", "n", 256);
    if (n <= 0) throw DomainError("[grid] n must be positive");
    if (kind == "torus") {
        if (cfg.has("grid", "half_width")) throw DomainError("[grid] half_width applies to window grids only");
        return make_grid(GridKind::torus, static_cast<std::size_t>(n));
    }
    if (kind == "window") return make_grid(GridKind::window, static_cast<std::size_t>(n), cfg.real("grid", "half_width", 100.0));
    throw DomainError("[grid] kind must be torus or window, got '" + kind + "'");
}

BlaschkeSpec soliton_from(const Config& cfg) {
    const long m = cfg.integer("soliton", "m", 1);
    if (m < 0) throw DomainError("[soliton] m must be non-negative");
    BlaschkeSpec spec = ground_state_spec(static_cast<std::size_t>(m), cfg.real("soliton", "velocity", 0.0),
                                          static_cast<int>(cfg.integer("soliton", "chirality", 1)));
    if (cfg.has("soliton", "zeros")) {
        if (cfg.has("soliton", "m")) throw DomainError("[soliton] give either m or zeros, not both");
        spec.zeros.clear();
        for (const auto& w : cfg.words("soliton", "zeros", {})) {
            std::vector<std::string> parts;
            boost::split(parts, w, boost::is_any_of(":"));
            if (parts.size() != 2) throw DomainError("[soliton] zeros entries look like re:im, got '" + w + "'");
            spec.zeros.emplace_back(std::stod(parts[0]), std::stod(parts[1]));
        }
    }
    if (cfg.has("soliton", "rotation_axis") || cfg.has("soliton", "rotation_angle")) {
        const auto axis = cfg.reals("soliton", "rotation_axis", {0.0, 0.0, 1.0});
        if (axis.size() != 3) throw DomainError("[soliton] rotation_axis needs three components");
        Eigen::Vector3d a(axis[0], axis[1], axis[2]);
        if (!(a.norm() > 0.0)) throw DomainError("[soliton] rotation_axis must be nonzero");
        spec.rotation = Eigen::AngleAxisd(cfg.real("soliton", "rotation_angle", 0.0), a.normalized()).toRotationMatrix();
    }
    spec.validate();
    return spec;
}

SphereField perturbed(const SphereField& u, std::uint64_t seed, int modes, double amplitude) {
    if (modes < 1) throw DomainError("perturbation_modes must be >= 1");
    std::mt19937_64 rng(seed);
    const double scale = amplitude / modes;
    std::uniform_real_distribution<double> coef(-scale, scale);
    const auto& g = u.grid_ref();
    Components c = u.components();
    for (auto& comp : c) {
        std::vector<double> a(static_cast<std::size_t>(modes)), b(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] = coef(rng);
            b[k] = coef(rng);
        }
        for (std::size_t j = 0; j < g.n; ++j) {
            const double s = g.nodes[j];
            double add = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) {
                const double ks = static_cast<double>(k + 1) * s;
                add += a[k] * std::cos(ks) + b[k] * std::sin(ks);
            }
            if (g.kind == GridKind::window) add /= 1.0 + s * s;
            comp[j] += add;
        }
    }
    return SphereField::normalized(u.grid(), std::move(c));
}

InitialData initial_from(const Config& cfg, const GridPtr& grid, std::optional<std::uint64_t> seed_override) {
    const std::string type = cfg.text("initial", "type", "soliton");
    std::optional<InitialData> data;
    if (type == "soliton") {
        const BlaschkeSpec spec = soliton_from(cfg);
        auto q = blaschke_profile(spec, grid);
        std::optional<std::function<SphereField(double)>> exact;
        if (spec.velocity == 0.0) exact = [q](double) { return q; };
        data = InitialData{std::move(q), std::move(exact)};
    } else if (type == "circle_wave") {
        if (grid->kind != GridKind::torus) throw DomainError("circle_wave data live on a torus grid");
        const int m = static_cast<int>(cfg.integer("initial", "m", 1));
        const double v = cfg.real("initial", "velocity", 0.0);
        data = InitialData{circle_wave(m, v, 0.0, grid), [m, v, grid](double t) { return circle_wave(m, v, t, grid); }};
    } else if (type == "periodic_orbit") {
        data = InitialData{periodic_orbit_field(0.0, grid), std::nullopt};
    } else if (type == "constant") {
        const auto v = cfg.reals("initial", "value", {0.0, 0.0, 1.0});
        if (v.size() != 3) throw DomainError("[initial] value needs three components");
        Components c;
        for (std::size_t i = 0; i < 3; ++i) c[i].assign(grid->n, v[i]);
        auto u = SphereField::normalized(grid, std::move(c));
        data = InitialData{u, [u](double) { return u; }};
    } else {
        throw DomainError("[initial] type must be soliton, circle_wave, periodic_orbit or constant, got '" + type + "'");
    }

    const double amplitude = cfg.real("initial", "perturbation_amplitude", 0.0);
    if (amplitude < 0.0) throw DomainError("[initial] perturbation_amplitude must be >= 0");
    if (amplitude > 0.0) {
        const auto seed = seed_override ? *seed_override
                                        : static_cast<std::uint64_t>(cfg.integer("initial", "seed", 0));
        const int modes = static_cast<int>(cfg.integer("initial", "perturbation_modes", 4));
        data = InitialData{perturbed(data->field, seed, modes, amplitude), std::nullopt};
    }
    return std::move(*data);
}

Vec3 base_point_from(const Config& cfg, const SphereField& u) {
    if (cfg.has("invariants", "base_point")) {
        const auto p = cfg.reals("invariants", "base_point", {});
        if (p.size() != 3) throw DomainError("[invariants] base_point needs three components");
        return {p[0], p[1], p[2]};
    }
    if (u.grid_ref().kind == GridKind::torus) return {0.0, 0.0, 1.0};
    return u.at(0);
}

} // namespace hwm::cli
