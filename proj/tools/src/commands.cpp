#include "commands.hpp"

#include "fields.hpp"

#include "hwm/error.hpp"
#include "hwm/evolve.hpp"
#include "hwm/exact.hpp"
#include "hwm/invariants.hpp"
#include "hwm/lax.hpp"
#include "hwm/linspec.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace hwm::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string> grid_keys{"kind", "n", "half_width"};
const std::set<std::string> soliton_keys{"m", "velocity", "chirality", "zeros", "rotation_axis", "rotation_angle"};
const std::set<std::string> initial_keys{"type", "m", "velocity", "value", "perturbation_amplitude",
                                         "perturbation_modes", "seed"};
const std::set<std::string> integrator_keys{"scheme", "dt", "t_end", "record_every", "fp_tolerance", "fp_max_iter"};
const std::set<std::string> invariant_keys{"base_point"};

std::string numbered(const char* stem, std::size_t i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%05zu.%s", stem, i, ext);
    return buf;
}

std::string snapshot_csv(const SphereField& u) {
    CsvTable t({"x", "u1", "u2", "u3"});
    const auto& g = u.grid_ref();
    for (std::size_t j = 0; j < g.n; ++j) {
        const auto v = u.at(j);
        t.add_row({g.nodes[j], v[0], v[1], v[2]});
    }
    return t.str();
}

CsvTable invariant_table() { return CsvTable({"t", "E", "S1", "S2", "S3", "M", "P", "length"}); }

void add_record(CsvTable& t, const InvariantRecord& r) {
    t.add_row({r.time, r.energy, r.spin[0], r.spin[1], r.spin[2], r.mass, r.momentum.value_or(nan), r.length});
}

json drift_json(const Drift& d) { return {{"max_abs", d.max_abs}, {"max_rel", d.max_rel}}; }

json drift_report_json(const DriftReport& d) {
    return {{"samples", d.samples},   {"energy", drift_json(d.energy)}, {"spin", drift_json(d.spin)},
            {"mass", drift_json(d.mass)}, {"momentum", drift_json(d.momentum)}, {"length", drift_json(d.length)}};
}

IntegratorConfig integrator_from(const Config& cfg) {
    IntegratorConfig ic;
    const std::string scheme = cfg.text("integrator", "scheme", "midpoint");
    if (scheme == "midpoint")
        ic.scheme = Scheme::implicit_midpoint;
    else if (scheme == "rk4")
        ic.scheme = Scheme::rk4_projected;
    else
        throw DomainError("[integrator] scheme must be midpoint or rk4, got '" + scheme + "'");
    ic.dt = cfg.real("integrator", "dt", ic.dt);
    ic.fp_tolerance = cfg.real("integrator", "fp_tolerance", ic.fp_tolerance);
    ic.fp_max_iter = static_cast<int>(cfg.integer("integrator", "fp_max_iter", ic.fp_max_iter));
    ic.record_every = static_cast<int>(cfg.integer("integrator", "record_every", ic.record_every));
    return ic;
}

void write_failure(OutputDir& out, const Trajectory& traj) {
    out.write_json("failure.json", {{"complete", false},
                                    {"message", traj.failure.value_or("unknown failure")},
                                    {"last_time", traj.snapshots.empty() ? 0.0 : traj.snapshots.back().time}});
}

// ---------------------------------------------------------------- soliton

int run_soliton(RunContext& ctx) {
    const auto grid = grid_from(ctx.config);
    const BlaschkeSpec spec = soliton_from(ctx.config);
    const SphereField q = blaschke_profile(spec, grid);
    const Vec3 base = base_point_from(ctx.config, q);
    const double c = propagation_velocity(spec);

    ctx.out.write("snapshot.csv", snapshot_csv(q));
    CsvTable inv = invariant_table();
    add_record(inv, record(q, 0.0, base));
    ctx.out.write("invariants.csv", inv.str());
    ctx.out.write_json("residual.json", {{"degree", spec.degree()},
                                         {"velocity", spec.velocity},
                                         {"propagation_velocity", c},
                                         {"grid", grid->kind == GridKind::torus ? "torus" : "window"},
                                         {"n", grid->n},
                                         {"profile_residual", profile_residual(q, c)},
                                         {"energy", energy(q)},
                                         {"energy_expected", soliton_energy_expected(spec.degree(), spec.velocity)},
                                         {"winding_number", winding_number(q)}});
    return ok;
}

// ----------------------------------------------------------------- evolve

int run_evolve(RunContext& ctx) {
    const auto grid = grid_from(ctx.config);
    const InitialData init = initial_from(ctx.config, grid, ctx.seed);
    const IntegratorConfig ic = integrator_from(ctx.config);
    ic.validate(*grid);
    const double t_end = ctx.config.real("integrator", "t_end", 1.0);
    if (!(t_end > 0.0)) throw DomainError("[integrator] t_end must be positive");
    const Vec3 base = base_point_from(ctx.config, init.field);

    const Trajectory traj = evolve(init.field, t_end, ic, base);
    const auto every = static_cast<std::size_t>(ctx.config.integer("output", "snapshot_every", 1));
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
        if ((every > 0 && i % every == 0) || i + 1 == traj.snapshots.size())
            ctx.out.write(numbered("snapshot", i, "csv"), snapshot_csv(traj.snapshots[i].field));
    CsvTable inv = invariant_table();
    for (const auto& r : traj.records) add_record(inv, r);
    ctx.out.write("invariants.csv", inv.str());
    ctx.out.write_json("drift.json", drift_report_json(drift_report(traj.records)));

    if (!traj.complete) {
        write_failure(ctx.out, traj);
        return numerical;
    }
    if (init.exact) {
        const auto& last = traj.snapshots.back();
        ctx.out.write_json("final_error.json",
                           {{"t", last.time}, {"sup_error", sup_distance(last.field, (*init.exact)(last.time))}});
    }
    return ok;
}

// -------------------------------------------------------------------- lax

json schatten_json(double t, const SchattenReport& r, std::size_t sigma_head) {
    json j{{"t", t},
           {"p", r.p},
           {"norms", r.norms},
           {"quasi_norm", r.quasi_norm},
           {"rank", r.rank},
           {"threshold", r.threshold},
           {"tau_rel", r.tau_rel},
           {"gap", r.gap ? json(*r.gap) : json(nullptr)},
           {"partial", r.partial},
           {"sigma1_zero", r.sigma1_zero},
           {"frobenius", r.frobenius},
           {"monotone_in_p", r.monotone_in_p}};
    const auto k = std::min(sigma_head, r.sigma.size());
    j["sigma"] = std::vector<double>(r.sigma.begin(), r.sigma.begin() + static_cast<std::ptrdiff_t>(k));
    return j;
}

int run_lax(RunContext& ctx) {
    const auto& cfg = ctx.config;
    const auto grid = grid_from(cfg);
    const InitialData init = initial_from(cfg, grid, ctx.seed);
    const std::string default_backend = grid->kind == GridKind::torus ? "torus_fourier" : "window_kernel";
    const std::string backend_name = cfg.text("lax", "backend", default_backend);
    LaxBackend backend;
    if (backend_name == "window_kernel")
        backend = LaxBackend::window_kernel;
    else if (backend_name == "torus_fourier")
        backend = LaxBackend::torus_fourier;
    else
        throw DomainError("[lax] backend must be window_kernel or torus_fourier");
    const int mode_cut = static_cast<int>(cfg.integer("lax", "mode_cut", static_cast<long>(grid->n / 8)));
    const auto p_list = cfg.reals("lax", "p", {1.0, 2.0, 4.0});
    SchattenOptions so;
    so.tau_rel = cfg.real("lax", "tau_rel", so.tau_rel);
    so.dense_limit = static_cast<std::size_t>(cfg.integer("lax", "dense_limit", static_cast<long>(so.dense_limit)));
    so.subspace = static_cast<std::size_t>(cfg.integer("lax", "subspace", static_cast<long>(so.subspace)));
    so.power_iterations = static_cast<int>(cfg.integer("lax", "power_iterations", so.power_iterations));
    const auto rank_every = static_cast<std::size_t>(cfg.integer("lax", "rank_every", 1));
    const auto sigma_head = static_cast<std::size_t>(cfg.integer("lax", "sigma_head", 16));
    if (rank_every < 1) throw DomainError("[lax] rank_every must be >= 1");

    auto build = [&](const SphereField& u) {
        return backend == LaxBackend::window_kernel ? lax_L_window(u) : lax_L_fourier(u, mode_cut);
    };

    const double t_end = cfg.real("integrator", "t_end", 0.0);
    Trajectory traj{grid, {{0.0, init.field}}, {}, true, std::nullopt};
    if (t_end > 0.0) {
        const IntegratorConfig ic = integrator_from(cfg);
        ic.validate(*grid);
        traj = evolve(init.field, t_end, ic, base_point_from(cfg, init.field));
    }

    json reports = json::array();
    CsvTable ranks({"t", "rank", "sigma1", "sigma_rank", "sigma_next", "gap", "frobenius"});
    CsvTable norms([&] {
        std::vector<std::string> h{"t"};
        for (double p : p_list) h.push_back("p=" + format_real(p));
        return h;
    }());
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        if (i % rank_every != 0 && i + 1 != traj.snapshots.size()) continue;
        const auto& s = traj.snapshots[i];
        const SchattenReport r = schatten(build(s.field), p_list, so);
        reports.push_back(schatten_json(s.time, r, sigma_head));
        auto at = [&](std::size_t k) { return k < r.sigma.size() ? r.sigma[k] : nan; };
        ranks.add_row({s.time, static_cast<double>(r.rank), at(0), r.rank > 0 ? at(r.rank - 1) : nan, at(r.rank),
                       r.gap.value_or(nan), r.frobenius});
        std::vector<double> row{s.time};
        row.insert(row.end(), r.norms.begin(), r.norms.end());
        norms.add_row(row);
    }
    ctx.out.write_json("schatten.json", {{"backend", backend_name},
                                         {"mode_cut", backend == LaxBackend::torus_fourier ? mode_cut : 0},
                                         {"snapshots", reports}});
    ctx.out.write("rank.csv", ranks.str());
    ctx.out.write("schatten.csv", norms.str());

    if (!traj.complete) {
        write_failure(ctx.out, traj);
        return numerical;
    }
    if (const auto dt_fd = cfg.optional_real("lax", "dt_fd")) {
        LaxResidualOptions ro;
        ro.mode_cut = mode_cut;
        ro.max_centers = static_cast<std::size_t>(cfg.integer("lax", "residual_centers", static_cast<long>(ro.max_centers)));
        CsvTable res({"t", "residual", "l_norm"});
        for (const auto& pt : lax_residual_series(traj, backend, *dt_fd, ro)) res.add_row({pt.time, pt.residual, pt.l_norm});
        ctx.out.write("lax_residual.csv", res.str());
    }
    return ok;
}

// --------------------------------------------------------------- spectrum

json spectral_json(const SpectralReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"value", e.value},
                           {"cluster", e.cluster},
                           {"tail_fraction", e.tail_fraction},
                           {"class", to_string(e.decay)}});
    return {{"operator", to_string(r.which)},
            {"m", r.m},
            {"n", r.n},
            {"half_width", r.half_width},
            {"continuum_edge", r.continuum_edge},
            {"near_zero_tol", r.near_zero_tol},
            {"tail_fraction", r.tail_fraction},
            {"tail_threshold", r.tail_threshold},
            {"bound_count", r.bound_count},
            {"near_zero_bound", r.near_zero_bound},
            {"near_zero_nonbound", r.near_zero_nonbound},
            {"negative_bound_below_tol", r.negative_bound_below_tol},
            {"embedded_candidates", r.embedded_candidates},
            {"embedded_band_upper", r.embedded_band_upper},
            {"min_cluster_gap", r.min_cluster_gap},
            {"bound_values", r.bound_values()},
            {"entries", entries}};
}

json jacobi_json(const JacobiAgreement& a, int m, int cutoff) {
    auto matches = [](const std::vector<JacobiMatch>& ms) {
        json out = json::array();
        for (const auto& x : ms)
            out.push_back({{"operator_value", x.operator_value},
                           {"jacobi_re", x.jacobi_value.real()},
                           {"jacobi_im", x.jacobi_value.imag()},
                           {"distance", x.distance}});
        return out;
    };
    json eig = json::array();
    for (const auto& z : a.eigenvalues) eig.push_back({z.real(), z.imag()});
    return {{"m", m},
            {"cutoff", cutoff},
            {"closest_to_zero", a.closest_to_zero},
            {"real_below_edge", a.real_below_edge},
            {"matches", matches(a.matches)},
            {"matches_doubled", matches(a.matches_doubled)},
            {"doubling_shift", a.doubling_shift},
            {"eigenvalues", eig}};
}

int run_spectrum(RunContext& ctx) {
    const auto& cfg = ctx.config;
    const auto grid = grid_from(cfg);
    if (grid->kind != GridKind::window) throw DomainError("spectrum needs [grid] kind = window");
    ClassifyOptions co;
    co.near_zero_tol = cfg.optional_real("spectrum", "near_zero_tol");
    co.tail_fraction = cfg.real("spectrum", "tail_fraction", co.tail_fraction);
    co.min_n = static_cast<std::size_t>(cfg.integer("spectrum", "min_n", static_cast<long>(co.min_n)));
    const int jacobi_cutoff = static_cast<int>(cfg.integer("spectrum", "jacobi_cutoff", 0));
    const auto ops = cfg.words("spectrum", "operators", {"Lplus", "Lminus"});
    const auto degrees = cfg.reals("spectrum", "degrees", {1.0});

    // Validate everything before the first (expensive) solve.
    if (grid->n < co.min_n)
        throw GuardError("spectrum needs n >= " + std::to_string(co.min_n) + ", got " + std::to_string(grid->n));
    for (const auto& op : ops)
        if (op != "Lplus" && op != "Lminus") throw DomainError("[spectrum] operators are Lplus and Lminus, got '" + op + "'");
    for (double d : degrees)
        if (d < 1 || d != std::floor(d)) throw DomainError("[spectrum] degrees must be positive integers");

    for (double d : degrees) {
        const int m = static_cast<int>(d);
        for (const auto& op : ops) {
            const LinOpDisc disc = op == "Lplus" ? assemble_Lplus(m, grid) : assemble_Lminus(m, grid);
            const SpectralReport rep = classify_spectrum(disc, co);
            ctx.out.write_json("spectrum_" + op + "_m" + std::to_string(m) + ".json", spectral_json(rep));
            if (op == "Lplus" && jacobi_cutoff > 0)
                ctx.out.write_json("jacobi_m" + std::to_string(m) + ".json",
                                   jacobi_json(jacobi_crosscheck(m, jacobi_cutoff, rep), m, jacobi_cutoff));
        }
    }
    return ok;
}

} // namespace

const std::vector<Command>& commands() {
    static const std::vector<Command> all{
        {"soliton", "Blaschke traveling-wave profile with invariants and profile residual",
         {{"grid", grid_keys}, {"soliton", soliton_keys}, {"invariants", invariant_keys}}, &run_soliton},
        {"evolve", "Time integration with snapshots, invariant series and drift report",
         {{"grid", grid_keys},
          {"initial", initial_keys},
          {"soliton", soliton_keys},
          {"integrator", integrator_keys},
          {"invariants", invariant_keys},
          {"output", {"snapshot_every"}}},
         &run_evolve},
        {"lax", "Schatten norms, numerical rank trace and Lax residual",
         {{"grid", grid_keys},
          {"initial", initial_keys},
          {"soliton", soliton_keys},
          {"integrator", integrator_keys},
          {"invariants", invariant_keys},
          {"lax",
           {"backend", "mode_cut", "p", "tau_rel", "dense_limit", "subspace", "power_iterations", "rank_every",
            "sigma_head", "dt_fd", "residual_centers"}}},
         &run_lax},
        {"spectrum", "Classified spectra of the linearized operators",
         {{"grid", grid_keys},
          {"spectrum", {"operators", "degrees", "near_zero_tol", "tail_fraction", "min_n", "jacobi_cutoff"}}},
         &run_spectrum},
    };
    return all;
}

const Command* find_command(const std::string& name) {
    for (const auto& c : commands())
        if (c.name == name) return &c;
    return nullptr;
}

} // namespace hwm::cli
