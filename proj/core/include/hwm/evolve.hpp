#pragma once

#include "hwm/grid.hpp"
#include "hwm/invariants.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hwm {

enum class Scheme { implicit_midpoint, rk4_projected };

struct IntegratorConfig {
    Scheme scheme = Scheme::implicit_midpoint;
    double dt = 1e-3;
    double fp_tolerance = 1e-13;
    int fp_max_iter = 100;
    int record_every = 1;

    /// Throws DomainError on non-positive parameters and GuardError when
    /// dt > 0.5 / k_max (the fixed-point contraction bound) for `grid`.
    /// Negative dt is accepted for backward steps.
    void validate(const Grid1D& grid) const;
};

/// One implicit midpoint step solved by fixed-point iteration (Euler
/// predictor, stop when the sup-norm update is <= fp_tolerance). The result
/// is validated, never renormalized. Throws NumericalError with the observed
/// contraction factor on non-convergence.
SphereField step_midpoint(const SphereField& u, double dt, const IntegratorConfig& cfg);

/// Classical RK4 stage followed by pointwise projection onto the sphere.
SphereField step_rk4_projected(const SphereField& u, double dt);

struct Snapshot {
    double time = 0.0;
    SphereField field;
};

struct Trajectory {
    GridPtr grid;
    std::vector<Snapshot> snapshots;
    std::vector<InvariantRecord> records; ///< one per snapshot
    bool complete = true;
    std::optional<std::string> failure;
};

/// Steps from t = 0 to t_end (the last step is shortened to land on t_end).
/// Snapshots are taken at t = 0, every `record_every` steps, and at t_end.
/// Stepper errors stop the run; the partial trajectory is returned with
/// complete = false.
Trajectory evolve(const SphereField& u0, double t_end, const IntegratorConfig& cfg,
                  const Vec3& base_point = {0.0, 0.0, 1.0});

/// Re-evaluates all invariants on every snapshot against `base_point`.
DriftReport drift_report(const Trajectory& traj, const Vec3& base_point);

} // namespace hwm
