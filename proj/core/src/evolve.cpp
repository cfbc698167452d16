#include "hwm/evolve.hpp"

#include "hwm/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hwm {
namespace {

double sup_diff(const Components& a, const Components& b) {
    double worst = 0.0;
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t j = 0; j < a[c].size(); ++j) worst = std::max(worst, std::abs(a[c][j] - b[c][j]));
    return worst;
}

SphereField checked_sphere(const GridPtr& grid, Components values, const char* stepper) {
    try {
        return SphereField(grid, std::move(values));
    } catch (const DomainError& e) {
        throw NumericalError(std::string(stepper) + " left the sphere: " + e.what());
    }
}

} // namespace

void IntegratorConfig::validate(const Grid1D& grid) const {
    if (!(std::abs(dt) > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be nonzero and finite");
    if (!(fp_tolerance > 0.0)) throw DomainError("fp_tolerance must be positive");
    if (fp_max_iter < 1) throw DomainError("fp_max_iter must be >= 1");
    if (record_every < 1) throw DomainError("record_every must be >= 1");
    const double bound = 0.5 / grid.k_max();
    if (std::abs(dt) > bound) {
        std::ostringstream msg;
        msg << "dt = " << dt << " exceeds the fixed-point bound 0.5/k_max = " << bound;
        throw GuardError(msg.str());
    }
}

SphereField step_midpoint(const SphereField& u, double dt, const IntegratorConfig& cfg) {
    const Grid1D& grid = u.grid_ref();
    const Components& u0 = u.components();
    Components rhs, mid, next, prev;
    hwm_rhs(grid, u0, rhs);
    for (std::size_t c = 0; c < 3; ++c) {
        next[c].resize(grid.n);
        mid[c].resize(grid.n);
        for (std::size_t j = 0; j < grid.n; ++j) next[c][j] = u0[c][j] + dt * rhs[c][j];
    }
    double last_delta = 0.0, contraction = 0.0;
    for (int it = 0; it < cfg.fp_max_iter; ++it) {
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t j = 0; j < grid.n; ++j) mid[c][j] = 0.5 * (u0[c][j] + next[c][j]);
        hwm_rhs(grid, mid, rhs);
        prev = next;
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t j = 0; j < grid.n; ++j) next[c][j] = u0[c][j] + dt * rhs[c][j];
        const double delta = sup_diff(next, prev);
        if (it > 0 && last_delta > 0.0) contraction = delta / last_delta;
        last_delta = delta;
        if (delta <= cfg.fp_tolerance) return checked_sphere(u.grid(), std::move(next), "implicit midpoint");
    }
    std::ostringstream msg;
    msg << "implicit midpoint: no convergence in " << cfg.fp_max_iter << " iterations (last update " << last_delta
        << ", contraction estimate " << contraction << "); reduce dt";
    throw NumericalError(msg.str());
}

SphereField step_rk4_projected(const SphereField& u, double dt) {
    const Grid1D& grid = u.grid_ref();
    const Components& u0 = u.components();
    Components k1, k2, k3, k4, stage;
    auto make_stage = [&](const Components& k, double h) {
        for (std::size_t c = 0; c < 3; ++c) {
            stage[c].resize(grid.n);
            for (std::size_t j = 0; j < grid.n; ++j) stage[c][j] = u0[c][j] + h * k[c][j];
        }
    };
    hwm_rhs(grid, u0, k1);
    make_stage(k1, 0.5 * dt);
    hwm_rhs(grid, stage, k2);
    make_stage(k2, 0.5 * dt);
    hwm_rhs(grid, stage, k3);
    make_stage(k3, dt);
    hwm_rhs(grid, stage, k4);
    Components out;
    for (std::size_t c = 0; c < 3; ++c) {
        out[c].resize(grid.n);
        for (std::size_t j = 0; j < grid.n; ++j)
            out[c][j] = u0[c][j] + dt / 6.0 * (k1[c][j] + 2.0 * k2[c][j] + 2.0 * k3[c][j] + k4[c][j]);
    }
    return SphereField::normalized(u.grid(), std::move(out));
}

Trajectory evolve(const SphereField& u0, double t_end, const IntegratorConfig& cfg, const Vec3& base_point) {
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be positive");
    if (!(cfg.dt > 0.0)) throw DomainError("evolve needs dt > 0");
    cfg.validate(u0.grid_ref());

    Trajectory traj;
    traj.grid = u0.grid();
    auto take = [&](double t, const SphereField& u) {
        traj.snapshots.push_back({t, u});
        traj.records.push_back(record(u, t, base_point));
    };
    take(0.0, u0);

    const auto steps = static_cast<long>(std::ceil(t_end / cfg.dt * (1.0 - 1e-12)));
    SphereField u = u0;
    for (long k = 1; k <= steps; ++k) {
        const double t_prev = static_cast<double>(k - 1) * cfg.dt;
        const double t = k == steps ? t_end : static_cast<double>(k) * cfg.dt;
        const double h = t - t_prev;
        try {
            u = cfg.scheme == Scheme::implicit_midpoint ? step_midpoint(u, h, cfg) : step_rk4_projected(u, h);
        } catch (const NumericalError& e) {
            traj.complete = false;
            std::ostringstream msg;
            msg << "step " << k << " (t = " << t_prev << "): " << e.what();
            traj.failure = msg.str();
            return traj;
        }
        if (k % cfg.record_every == 0 || k == steps) take(t, u);
    }
    return traj;
}

DriftReport drift_report(const Trajectory& traj, const Vec3& base_point) {
    std::vector<InvariantRecord> records;
    records.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) records.push_back(record(s.field, s.time, base_point));
    return drift_report(records);
}

} // namespace hwm
