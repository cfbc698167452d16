#include "hwm/linspec.hpp"

#include "hwm/error.hpp"
#include "dense.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hwm {
namespace {

constexpr double pi = std::numbers::pi;

void require_window(const GridPtr& grid, int m) {
    if (!grid || grid->kind != GridKind::window) throw DomainError("linearized operators live on a window grid");
    if (m < 1) throw DomainError("linearized operators need m >= 1");
}

} // namespace

std::string to_string(LinearizedOp op) { return op == LinearizedOp::Lplus ? "Lplus" : "Lminus"; }

std::string to_string(DecayClass c) {
    switch (c) {
    case DecayClass::bound: return "bound";
    case DecayClass::resonance_like: return "resonance-like";
    case DecayClass::continuum_artifact: return "continuum-artifact";
    }
    return "unknown";
}

double LinOpDisc::symmetry_defect() const { return (matrix - matrix.transpose()).cwiseAbs().maxCoeff(); }

LinOpDisc assemble_Lplus(int m, const GridPtr& window_grid) {
    require_window(window_grid, m);
    LinOpDisc op;
    op.which = LinearizedOp::Lplus;
    op.m = m;
    op.grid = window_grid;
    op.matrix = dense::halfwave_matrix(*window_grid);
    for (std::size_t j = 0; j < window_grid->n; ++j) {
        const double x = window_grid->nodes[j];
        op.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) -= 2.0 * m / (1.0 + x * x);
    }
    return op;
}

Eigen::MatrixXd assemble_R(int m, const GridPtr& window_grid) {
    require_window(window_grid, m);
    const Grid1D& grid = *window_grid;
    const auto n = static_cast<Eigen::Index>(grid.n);
    // Q_m = (Re B^m, Im B^m, 0) up to the chirality sign, which |Q(x) - Q(y)| ignores.
    std::vector<std::complex<double>> q(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const std::complex<double> x{grid.nodes[j], 0.0};
        q[j] = std::pow((x - std::complex<double>{0.0, 1.0}) / (x + std::complex<double>{0.0, 1.0}), m);
    }
    const double scale = grid.dx / (2.0 * pi);
    Eigen::MatrixXd r(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        const auto bs = static_cast<std::size_t>(b);
        const double xb = grid.nodes[bs];
        const double qd = 2.0 * m / (1.0 + xb * xb);
        r(b, b) = scale * qd * qd;
        for (Eigen::Index a = b + 1; a < n; ++a) {
            const auto as = static_cast<std::size_t>(a);
            const double d = grid.nodes[as] - xb;
            const double v = scale * std::norm(q[as] - q[bs]) / (d * d);
            r(a, b) = v;
            r(b, a) = v;
        }
    }
    return r;
}

LinOpDisc assemble_Lminus(int m, const GridPtr& window_grid) {
    LinOpDisc op = assemble_Lplus(m, window_grid);
    op.which = LinearizedOp::Lminus;
    op.matrix += assemble_R(m, window_grid);
    return op;
}

std::vector<double> SpectralReport::bound_values() const {
    std::vector<double> out;
    for (const auto& e : entries)
        if (e.decay == DecayClass::bound) out.push_back(e.value);
    return out;
}

SpectralReport classify_spectrum(const LinOpDisc& op, const ClassifyOptions& options) {
    const Grid1D& grid = *op.grid;
    if (grid.n < options.min_n) {
        std::ostringstream msg;
        msg << "classify_spectrum: n = " << grid.n << " is below the resolution guard " << options.min_n;
        throw GuardError(msg.str());
    }
    if (!(options.tail_fraction > 0.0 && options.tail_fraction < 1.0))
        throw DomainError("tail_fraction must lie in (0, 1)");

    SpectralReport rep;
    rep.which = op.which;
    rep.m = op.m;
    rep.n = grid.n;
    rep.half_width = grid.half_width;
    rep.continuum_edge = pi / (2.0 * grid.half_width);
    rep.near_zero_tol = options.near_zero_tol.value_or(5e-3 * 200.0 / grid.half_width);
    rep.tail_fraction = options.tail_fraction;
    rep.tail_threshold = 0.5 * options.tail_fraction;
    rep.embedded_band_upper = 0.5 * grid.k_max();
    const double tol = rep.near_zero_tol;

    Eigen::MatrixXd vecs = op.matrix;
    const Eigen::VectorXd w = dense::symmetric_eigensystem(vecs);
    const auto n = static_cast<Eigen::Index>(grid.n);

    std::vector<Eigen::Index> tail_rows;
    for (Eigen::Index j = 0; j < n; ++j)
        if (std::abs(grid.nodes[static_cast<std::size_t>(j)]) >= (1.0 - options.tail_fraction) * grid.half_width)
            tail_rows.push_back(j);
    auto tail_mass = [&](const Eigen::MatrixXd& v) {
        Eigen::MatrixXd t(static_cast<Eigen::Index>(tail_rows.size()), v.cols());
        for (std::size_t r = 0; r < tail_rows.size(); ++r) t.row(static_cast<Eigen::Index>(r)) = v.row(tail_rows[r]);
        return Eigen::MatrixXd(t.transpose() * t);
    };

    // Eigenvalues come back ascending; clusters are runs with consecutive gap <= tol.
    Eigen::Index count = 0;
    while (count < n && w[count] < rep.continuum_edge) ++count;
    std::size_t cluster_id = 0;
    for (Eigen::Index start = 0; start < count;) {
        Eigen::Index stop = start + 1;
        while (stop < count && w[stop] - w[stop - 1] <= tol) ++stop;
        const Eigen::Index size = stop - start;
        const Eigen::MatrixXd v = vecs.middleCols(start, size);
        const Eigen::VectorXd vals = w.segment(start, size);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tail_eig(tail_mass(v));
        const Eigen::MatrixXd& y = tail_eig.eigenvectors();
        std::vector<SpectralEntry> local;
        for (Eigen::Index i = 0; i < size; ++i) {
            SpectralEntry e;
            e.cluster = cluster_id;
            e.tail_fraction = std::max(0.0, tail_eig.eigenvalues()[i]);
            e.value = (y.col(i).array().square() * vals.array()).sum();
            if (e.tail_fraction < rep.tail_threshold)
                e.decay = DecayClass::bound;
            else if (std::abs(e.value) <= tol)
                e.decay = DecayClass::resonance_like;
            else
                e.decay = DecayClass::continuum_artifact;
            local.push_back(e);
        }
        std::sort(local.begin(), local.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
        rep.entries.insert(rep.entries.end(), local.begin(), local.end());
        ++cluster_id;
        start = stop;
    }

    for (const auto& e : rep.entries) {
        const bool near_zero = std::abs(e.value) <= tol;
        if (e.decay == DecayClass::bound) {
            ++rep.bound_count;
            if (near_zero) ++rep.near_zero_bound;
            if (e.value < -tol) ++rep.negative_bound_below_tol;
        } else if (near_zero) {
            ++rep.near_zero_nonbound;
        }
    }
    const auto bound = rep.bound_values();
    rep.min_cluster_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < bound.size(); ++i) rep.min_cluster_gap = std::min(rep.min_cluster_gap, bound[i] - bound[i - 1]);
    if (bound.size() < 2) rep.min_cluster_gap = 0.0;

    // Resolved band above the near-zero window: every eigenvector should spread
    // into the tails. The Nyquist end of the lattice spectrum is excluded.
    std::vector<Eigen::Index> band;
    for (Eigen::Index i = 0; i < n; ++i)
        if (w[i] > 10.0 * tol && w[i] <= rep.embedded_band_upper) band.push_back(i);
    if (!band.empty()) {
        Eigen::MatrixXd v(n, static_cast<Eigen::Index>(band.size()));
        for (std::size_t c = 0; c < band.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = vecs.col(band[c]);
        Eigen::VectorXd masses = Eigen::VectorXd::Zero(v.cols());
        for (Eigen::Index r : tail_rows) masses += v.row(r).transpose().array().square().matrix();
        for (Eigen::Index c = 0; c < masses.size(); ++c)
            if (masses[c] < rep.tail_threshold) ++rep.embedded_candidates;
    }
    return rep;
}

std::complex<double> JacobiDisc::s(int j) const {
    if (j == 1) return {0.0, -0.5};
    if (j == -1) return {0.0, 0.5};
    return {};
}

JacobiDisc jacobi_matrix(int m, int cutoff) {
    if (m < 1) throw DomainError("jacobi_matrix needs m >= 1");
    if (cutoff < m) throw DomainError("jacobi_matrix: cutoff K must be >= m");
    JacobiDisc j;
    j.m = m;
    j.cutoff = cutoff;
    const int dim = 2 * cutoff + 1;
    j.matrix = Eigen::MatrixXcd::Zero(dim, dim);
    for (int b = 0; b < dim; ++b)
        for (int a = 0; a < dim; ++a) {
            const int k = a - cutoff, l = b - cutoff;
            const std::complex<double> factor = (k == l ? 1.0 : 0.0) - j.s(k - l);
            j.matrix(a, b) = factor * static_cast<double>(std::abs(l) - m);
        }
    return j;
}

namespace {

std::vector<std::complex<double>> jacobi_spectrum(int m, int cutoff) {
    const JacobiDisc j = jacobi_matrix(m, cutoff);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(j.matrix, false);
    if (solver.info() != Eigen::Success) throw NumericalError("Jacobi eigensolve failed");
    std::vector<std::complex<double>> out(solver.eigenvalues().data(),
                                          solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.real() < b.real(); });
    return out;
}

std::vector<JacobiMatch> match(const std::vector<double>& targets, const std::vector<std::complex<double>>& spectrum) {
    std::vector<JacobiMatch> out;
    for (double t : targets) {
        JacobiMatch best{t, {}, std::numeric_limits<double>::infinity()};
        for (const auto& z : spectrum) {
            const double d = std::abs(z - t);
            if (d < best.distance) best = {t, z, d};
        }
        out.push_back(best);
    }
    return out;
}

} // namespace

JacobiAgreement jacobi_crosscheck(int m, int cutoff, const SpectralReport& report) {
    JacobiAgreement out;
    out.eigenvalues = jacobi_spectrum(m, cutoff);
    const auto doubled = jacobi_spectrum(m, 2 * cutoff);
    out.closest_to_zero = std::numeric_limits<double>::infinity();
    for (const auto& z : out.eigenvalues) {
        out.closest_to_zero = std::min(out.closest_to_zero, std::abs(z));
        if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z)) && z.real() < report.continuum_edge)
            out.real_below_edge.push_back(z.real());
    }
    const auto bound = report.bound_values();
    out.matches = match(bound, out.eigenvalues);
    out.matches_doubled = match(bound, doubled);
    for (std::size_t i = 0; i < out.matches.size(); ++i)
        out.doubling_shift =
            std::max(out.doubling_shift, std::abs(out.matches[i].jacobi_value - out.matches_doubled[i].jacobi_value));
    return out;
}

} // namespace hwm
