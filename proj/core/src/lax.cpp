#include "hwm/lax.hpp"

#include "hwm/error.hpp"
#include "dense.hpp"
#include "fft.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace hwm {
namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};
constexpr double pi = std::numbers::pi;

int sgn(int k) { return (k > 0) - (k < 0); }

// Normalized coefficients (1/n) sum_j u_j e^{-i k theta_j} for |k| <= kmax;
// zero for |k| >= n/2. Index k + kmax.
std::array<std::vector<cplx>, 3> fourier_coefficients(const SphereField& u, int kmax) {
    const std::size_t n = u.size();
    const int half = static_cast<int>(n / 2);
    std::vector<cplx> spec(n / 2 + 1);
    std::array<std::vector<cplx>, 3> out;
    for (std::size_t c = 0; c < 3; ++c) {
        fft::forward(u.components()[c], spec);
        out[c].assign(static_cast<std::size_t>(2 * kmax + 1), cplx{});
        for (int k = -kmax; k <= kmax; ++k) {
            if (std::abs(k) >= half) continue;
            const cplx v = k >= 0 ? spec[static_cast<std::size_t>(k)] : std::conj(spec[static_cast<std::size_t>(-k)]);
            out[c][static_cast<std::size_t>(k + kmax)] = v / static_cast<double>(n);
        }
    }
    return out;
}

bool constant_component(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

// Spin-major dense form of sum_j sigma_j (x) A_j; empty A_j count as zero.
template <class Block>
Eigen::MatrixXcd assemble_pauli(const std::array<Block, 3>& a, Eigen::Index basis) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * basis, 2 * basis);
    auto tl = out.topLeftCorner(basis, basis);
    auto tr = out.topRightCorner(basis, basis);
    auto bl = out.bottomLeftCorner(basis, basis);
    auto br = out.bottomRightCorner(basis, basis);
    if (a[0].size() != 0) {
        tr += a[0].template cast<cplx>();
        bl += a[0].template cast<cplx>();
    }
    if (a[1].size() != 0) {
        tr -= I * a[1].template cast<cplx>();
        bl += I * a[1].template cast<cplx>();
    }
    if (a[2].size() != 0) {
        tl += a[2].template cast<cplx>();
        br -= a[2].template cast<cplx>();
    }
    return out;
}

Eigen::MatrixXcd real_times(const Eigen::MatrixXd& c, const Eigen::MatrixXcd& x) {
    const Eigen::MatrixXd re = x.real();
    const Eigen::MatrixXd im = x.imag();
    Eigen::MatrixXcd out(c.rows(), x.cols());
    out.real() = c * re;
    out.imag() = c * im;
    return out;
}

void require_torus(const SphereField& u, const char* what) {
    if (u.grid_ref().kind != GridKind::torus) throw DomainError(std::string(what) + ": torus field required");
}

void require_mode_cut(const SphereField& u, int mode_cut) {
    if (mode_cut < 1) throw DomainError("mode cut must be >= 1");
    if (static_cast<std::size_t>(mode_cut) > u.size() / 2)
        throw DomainError("mode cut " + std::to_string(mode_cut) + " exceeds n/2 = " + std::to_string(u.size() / 2) +
                          " (unresolved coefficients)");
}

// Fourier-basis block of sum_j sigma_j (x) A_j with A_j(a, b) = w(n_a, n_b) * U_j(n_a - n_b).
template <class Weight>
std::array<Eigen::MatrixXcd, 3> fourier_blocks(const SphereField& u, int mode_cut, Weight weight) {
    const auto coeff = fourier_coefficients(u, 2 * mode_cut);
    const int dim = 2 * mode_cut + 1;
    std::array<Eigen::MatrixXcd, 3> blocks;
    for (std::size_t c = 0; c < 3; ++c) {
        blocks[c] = Eigen::MatrixXcd::Zero(dim, dim);
        for (int b = 0; b < dim; ++b)
            for (int a = 0; a < dim; ++a) {
                const int na = a - mode_cut, nb = b - mode_cut;
                const cplx w = weight(na, nb);
                if (w != cplx{}) blocks[c](a, b) = w * coeff[c][static_cast<std::size_t>(na - nb + 2 * mode_cut)];
            }
    }
    return blocks;
}

} // namespace

Eigen::Matrix2cd pauli_matrix(const Vec3& u) {
    Eigen::Matrix2cd m;
    m << cplx{u[2], 0.0}, cplx{u[0], -u[1]}, cplx{u[0], u[1]}, cplx{-u[2], 0.0};
    return m;
}

PauliField pauli_field(const SphereField& u) {
    PauliField p;
    p.grid = u.grid();
    p.values.reserve(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) p.values.push_back(pauli_matrix(u.at(j)));
    return p;
}

double PauliField::hermiticity_defect() const {
    double worst = 0.0;
    for (const auto& m : values) worst = std::max(worst, (m - m.adjoint()).cwiseAbs().maxCoeff());
    return worst;
}

double PauliField::trace_defect() const {
    double worst = 0.0;
    for (const auto& m : values) worst = std::max(worst, std::abs(m.trace()));
    return worst;
}

double PauliField::involution_defect() const {
    double worst = 0.0;
    for (const auto& m : values) worst = std::max(worst, (m * m - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff());
    return worst;
}

LaxMatrix::LaxMatrix(LaxBackend backend, GridPtr grid, std::size_t basis_size)
    : backend_(backend), grid_(std::move(grid)), basis_(basis_size) {}

bool LaxMatrix::block_empty(int j) const {
    const auto k = static_cast<std::size_t>(j);
    return is_real() ? real_[k].size() == 0 : complex_[k].size() == 0;
}

void LaxMatrix::set_block(int j, Eigen::MatrixXd block) {
    if (!is_real()) throw DomainError("real block on a complex Lax matrix");
    real_[static_cast<std::size_t>(j)] = std::move(block);
}

void LaxMatrix::set_block(int j, Eigen::MatrixXcd block) {
    if (is_real()) throw DomainError("complex block on a real Lax matrix");
    complex_[static_cast<std::size_t>(j)] = std::move(block);
}

Eigen::MatrixXcd LaxMatrix::dense() const {
    const auto b = static_cast<Eigen::Index>(basis_);
    return is_real() ? assemble_pauli(real_, b) : assemble_pauli(complex_, b);
}

Eigen::MatrixXcd LaxMatrix::apply(const Eigen::MatrixXcd& x) const {
    const auto b = static_cast<Eigen::Index>(basis_);
    const Eigen::MatrixXcd up = x.topRows(b);
    const Eigen::MatrixXcd dn = x.bottomRows(b);
    Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(2 * b, x.cols());
    auto times = [&](int j, const Eigen::MatrixXcd& v) -> Eigen::MatrixXcd {
        const auto k = static_cast<std::size_t>(j);
        return is_real() ? real_times(real_[k], v) : Eigen::MatrixXcd(complex_[k] * v);
    };
    if (!block_empty(0)) {
        y.topRows(b) += times(0, dn);
        y.bottomRows(b) += times(0, up);
    }
    if (!block_empty(1)) {
        y.topRows(b) -= I * times(1, dn);
        y.bottomRows(b) += I * times(1, up);
    }
    if (!block_empty(2)) {
        y.topRows(b) += times(2, up);
        y.bottomRows(b) -= times(2, dn);
    }
    return y;
}

double LaxMatrix::frobenius_norm() const {
    // tr(sigma_i sigma_j) = 2 delta_ij
    double s = 0.0;
    for (int j = 0; j < 3; ++j) {
        if (block_empty(j)) continue;
        s += is_real() ? real_block(j).squaredNorm() : complex_block(j).squaredNorm();
    }
    return std::sqrt(2.0 * s);
}

double LaxMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
        if (block_empty(j)) continue;
        worst = std::max(worst, is_real() ? (real_block(j) - real_block(j).transpose()).cwiseAbs().maxCoeff()
                                          : (complex_block(j) - complex_block(j).adjoint()).cwiseAbs().maxCoeff());
    }
    return worst;
}

bool LaxMatrix::all_finite() const {
    for (int j = 0; j < 3; ++j) {
        if (block_empty(j)) continue;
        if (is_real() ? !real_block(j).allFinite() : !complex_block(j).allFinite()) return false;
    }
    return true;
}

bool LaxMatrix::is_zero() const {
    for (int j = 0; j < 3; ++j) {
        if (block_empty(j)) continue;
        if (is_real() ? !real_block(j).isZero(0.0) : !complex_block(j).isZero(0.0)) return false;
    }
    return true;
}

LaxMatrix lax_L_window(const SphereField& u) {
    const Grid1D& grid = u.grid_ref();
    if (grid.kind != GridKind::window) throw DomainError("lax_L_window: window field required (use lax_L_fourier)");
    const auto n = static_cast<Eigen::Index>(grid.n);
    const double scale = grid.dx / pi;
    LaxMatrix l(LaxBackend::window_kernel, u.grid(), grid.n);
    std::vector<double> deriv(grid.n);
    for (int c = 0; c < 3; ++c) {
        const auto v = u.component(c);
        if (constant_component(v)) continue;
        apply_multiplier(grid, v, deriv, Symbol::derivative);
        Eigen::MatrixXd k(n, n);
        for (Eigen::Index b = 0; b < n; ++b) {
            const auto bs = static_cast<std::size_t>(b);
            k(b, b) = scale * deriv[bs];
            for (Eigen::Index a = b + 1; a < n; ++a) {
                const auto as = static_cast<std::size_t>(a);
                const double val = scale * (v[as] - v[bs]) / (grid.nodes[as] - grid.nodes[bs]);
                k(a, b) = val;
                k(b, a) = val;
            }
        }
        l.set_block(c, std::move(k));
    }
    return l;
}

LaxMatrix lax_L_fourier(const SphereField& u, int mode_cut) {
    require_torus(u, "lax_L_fourier");
    require_mode_cut(u, mode_cut);
    auto blocks = fourier_blocks(u, mode_cut, [](int na, int nb) { return -I * static_cast<double>(sgn(na) - sgn(nb)); });
    LaxMatrix l(LaxBackend::torus_fourier, u.grid(), static_cast<std::size_t>(2 * mode_cut + 1));
    l.set_mode_cut(mode_cut);
    for (int c = 0; c < 3; ++c)
        if (!constant_component(u.component(c))) l.set_block(c, std::move(blocks[static_cast<std::size_t>(c)]));
    return l;
}

Eigen::MatrixXcd lax_B(const SphereField& u, LaxBackend backend, int mode_cut) {
    if (backend == LaxBackend::torus_fourier) {
        require_torus(u, "lax_B");
        require_mode_cut(u, mode_cut);
        const auto blocks = fourier_blocks(u, mode_cut, [](int na, int nb) {
            return 0.5 * I * static_cast<double>(std::abs(na - nb) - std::abs(na) - std::abs(nb));
        });
        return assemble_pauli(blocks, 2 * mode_cut + 1);
    }
    const Grid1D& grid = u.grid_ref();
    if (grid.kind != GridKind::window) throw DomainError("lax_B: window backend needs a window field");
    if (grid.n > 2048) throw GuardError("lax_B: dense window form limited to n <= 2048");
    const Eigen::MatrixXd d = dense::halfwave_matrix(grid);
    const auto n = static_cast<Eigen::Index>(grid.n);
    std::array<Eigen::MatrixXcd, 3> blocks;
    std::vector<double> hw(grid.n);
    for (int c = 0; c < 3; ++c) {
        const auto v = u.component(c);
        apply_multiplier(grid, v, hw, Symbol::halfwave);
        const Eigen::Map<const Eigen::VectorXd> uv(v.data(), n);
        Eigen::MatrixXd s = uv.asDiagonal() * d + d * uv.asDiagonal();
        s.diagonal() -= Eigen::Map<const Eigen::VectorXd>(hw.data(), n);
        blocks[static_cast<std::size_t>(c)] = (-0.5 * I) * s.cast<cplx>();
    }
    return assemble_pauli(blocks, n);
}

namespace {

// Leading eigenvalues of a Hermitian operator by randomized subspace iteration
// with a final Rayleigh-Ritz step. Returns |lambda| in descending order.
std::vector<double> randomized_sigma(const LaxMatrix& l, const SchattenOptions& options) {
    const auto dim = static_cast<Eigen::Index>(l.dim());
    const auto k = std::min<Eigen::Index>(static_cast<Eigen::Index>(options.subspace), dim);
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd y(dim, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) y(i, j) = cplx{gauss(rng), gauss(rng)};
    auto orthonormalize = [&](const Eigen::MatrixXcd& m) -> Eigen::MatrixXcd {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
        return qr.householderQ() * Eigen::MatrixXcd::Identity(dim, k);
    };
    Eigen::MatrixXcd q = orthonormalize(y);
    for (int it = 0; it < options.power_iterations; ++it) q = orthonormalize(l.apply(q));
    const Eigen::MatrixXcd lq = l.apply(q);
    Eigen::MatrixXcd t = q.adjoint() * lq;
    t = 0.5 * (t + t.adjoint()).eval();
    const Eigen::VectorXd w = dense::hermitian_eigenvalues(t);
    std::vector<double> sigma(static_cast<std::size_t>(w.size()));
    for (Eigen::Index i = 0; i < w.size(); ++i) sigma[static_cast<std::size_t>(i)] = std::abs(w[i]);
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    return sigma;
}

} // namespace

SchattenReport schatten(const LaxMatrix& l, std::span<const double> p_list, const SchattenOptions& options) {
    if (!l.all_finite()) throw DomainError("schatten: non-finite matrix entries");
    for (double p : p_list)
        if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("schatten: p must be positive and finite");

    SchattenReport rep;
    rep.tau_rel = options.tau_rel;
    rep.frobenius = l.frobenius_norm();
    if (l.is_zero()) {
        rep.sigma.assign(l.dim(), 0.0);
    } else if (l.dim() <= options.dense_limit) {
        Eigen::MatrixXcd a = l.dense();
        const Eigen::VectorXd w = dense::hermitian_eigenvalues(a);
        rep.sigma.resize(static_cast<std::size_t>(w.size()));
        for (Eigen::Index i = 0; i < w.size(); ++i) rep.sigma[static_cast<std::size_t>(i)] = std::abs(w[i]);
        std::sort(rep.sigma.begin(), rep.sigma.end(), std::greater<>());
    } else {
        rep.sigma = randomized_sigma(l, options);
        rep.partial = true;
    }

    const double s1 = rep.sigma.empty() ? 0.0 : rep.sigma.front();
    rep.sigma1_zero = s1 == 0.0;
    rep.threshold = options.tau_rel * s1;
    if (!rep.sigma1_zero)
        rep.rank = static_cast<std::size_t>(std::count_if(rep.sigma.begin(), rep.sigma.end(),
                                                          [&](double s) { return s > rep.threshold; }));
    if (rep.rank > 0 && rep.rank < rep.sigma.size() && rep.sigma[rep.rank] > 0.0)
        rep.gap = rep.sigma[rep.rank - 1] / rep.sigma[rep.rank];

    for (double p : p_list) {
        double norm;
        if (p == 2.0) {
            norm = rep.frobenius;
        } else if (rep.sigma1_zero) {
            norm = 0.0;
        } else {
            // Scale by sigma_1 to keep sigma^p in range for large or small p.
            double s = 0.0;
            for (double sv : rep.sigma) s += std::pow(sv / s1, p);
            norm = s1 * std::pow(s, 1.0 / p);
        }
        rep.p.push_back(p);
        rep.norms.push_back(norm);
        rep.quasi_norm.push_back(p < 1.0);
    }
    for (std::size_t i = 0; i < rep.p.size(); ++i)
        for (std::size_t j = 0; j < rep.p.size(); ++j)
            if (rep.p[i] < rep.p[j] && rep.norms[i] < rep.norms[j] * (1.0 - 1e-12)) rep.monotone_in_p = false;
    return rep;
}

SchattenReport numerical_rank(const LaxMatrix& l, double tau_rel, SchattenOptions options) {
    if (!(tau_rel > 0.0) || !(tau_rel < 1.0)) throw DomainError("tau_rel must lie in (0, 1)");
    options.tau_rel = tau_rel;
    return schatten(l, {}, options);
}

std::vector<LaxResidualPoint> lax_residual_series(const Trajectory& traj, LaxBackend backend, double dt_fd,
                                                  const LaxResidualOptions& options) {
    const auto& snaps = traj.snapshots;
    if (snaps.size() < 3) throw DomainError("lax_residual needs at least 3 snapshots");
    if (!(dt_fd > 0.0)) throw DomainError("dt_fd must be positive");
    const double spacing = snaps[1].time - snaps[0].time;
    const double ratio = dt_fd / spacing;
    const auto stride = static_cast<std::size_t>(std::lround(ratio));
    if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-6 * ratio) {
        std::ostringstream msg;
        msg << "dt_fd = " << dt_fd << " is not a multiple of the snapshot spacing " << spacing;
        throw DomainError(msg.str());
    }
    if (snaps.size() < 2 * stride + 1) throw DomainError("trajectory too short for dt_fd");

    const int n_over_8 = static_cast<int>(traj.grid->n / 8);
    const int cut = options.mode_cut > 0 ? options.mode_cut : n_over_8;
    const int extended = std::min(2 * cut, static_cast<int>(traj.grid->n / 2));

    // Centers whose neighbours sit exactly dt_fd away.
    std::vector<std::size_t> valid;
    for (std::size_t i = stride; i + stride < snaps.size(); ++i) {
        const double span = snaps[i + stride].time - snaps[i - stride].time;
        if (std::abs(span - 2.0 * dt_fd) <= 1e-9 * dt_fd) valid.push_back(i);
    }
    if (valid.empty()) throw DomainError("no snapshot triple spaced by dt_fd");
    std::vector<std::size_t> centers;
    const std::size_t want = std::max<std::size_t>(1, std::min(options.max_centers, valid.size()));
    for (std::size_t c = 0; c < want; ++c) {
        const std::size_t pos = want == 1 ? valid.size() / 2 : c * (valid.size() - 1) / (want - 1);
        if (centers.empty() || centers.back() != valid[pos]) centers.push_back(valid[pos]);
    }

    auto dense_l = [&](const SphereField& u, int modes) {
        return backend == LaxBackend::torus_fourier ? lax_L_fourier(u, modes).dense() : lax_L_window(u).dense();
    };

    std::vector<LaxResidualPoint> out;
    for (std::size_t i : centers) {
        const auto& lo = snaps[i - stride];
        const auto& mid = snaps[i];
        const auto& hi = snaps[i + stride];
        const Eigen::MatrixXcd dl = (dense_l(hi.field, cut) - dense_l(lo.field, cut)) / (hi.time - lo.time);
        Eigen::MatrixXcd comm;
        Eigen::MatrixXcd l_mid;
        if (backend == LaxBackend::torus_fourier) {
            const Eigen::MatrixXcd b = lax_B(mid.field, backend, extended);
            const Eigen::MatrixXcd l = dense_l(mid.field, extended);
            const Eigen::MatrixXcd full = b * l - l * b;
            // Restrict modes |n| <= cut inside each spin block.
            const Eigen::Index big = 2 * extended + 1, small = 2 * cut + 1, off = extended - cut;
            comm.resize(2 * small, 2 * small);
            for (int s = 0; s < 2; ++s)
                for (int r = 0; r < 2; ++r)
                    comm.block(s * small, r * small, small, small) = full.block(s * big + off, r * big + off, small, small);
            l_mid = dense_l(mid.field, cut);
        } else {
            const Eigen::MatrixXcd b = lax_B(mid.field, backend);
            l_mid = dense_l(mid.field, cut);
            comm = b * l_mid - l_mid * b;
        }
        const double lnorm = l_mid.norm();
        const double res = (dl - comm).norm();
        out.push_back({mid.time, lnorm > 0.0 ? res / lnorm : res, lnorm});
    }
    return out;
}

double lax_residual(const Trajectory& traj, LaxBackend backend, double dt_fd, const LaxResidualOptions& options) {
    double worst = 0.0;
    for (const auto& p : lax_residual_series(traj, backend, dt_fd, options)) worst = std::max(worst, p.residual);
    return worst;
}

} // namespace hwm
