#pragma once

#include "hwm/evolve.hpp"
#include "hwm/grid.hpp"
#include "hwm/invariants.hpp"

#include <Eigen/Core>

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace hwm {

/// U(x_j) = u(x_j) . sigma at every node.
struct PauliField {
    GridPtr grid;
    std::vector<Eigen::Matrix2cd> values;

    /// max_j of ||U - U^*||, |tr U| and ||U^2 - 1|| (entrywise max norms).
    double hermiticity_defect() const;
    double trace_defect() const;
    double involution_defect() const;
};

Eigen::Matrix2cd pauli_matrix(const Vec3& u);
PauliField pauli_field(const SphereField& u);

enum class LaxBackend { window_kernel, torus_fourier };

/// Operator sum_j sigma_j (x) C_j on C^2 (x) C^B, stored by its component
/// blocks C_j (B x B). Dense forms use spin-major ordering: row s*B + a is
/// spin s at basis index a (node or Fourier mode), so the 2x2 block of basis
/// pair (a, b) sits at rows {a, B + a} and columns {b, B + b}.
///
/// Window blocks are real symmetric and kept real; an all-zero block (constant
/// component) is stored empty.
class LaxMatrix {
public:
    LaxMatrix(LaxBackend backend, GridPtr grid, std::size_t basis_size);

    LaxBackend backend() const { return backend_; }
    const GridPtr& grid() const { return grid_; }
    std::size_t basis_size() const { return basis_; }
    std::size_t dim() const { return 2 * basis_; }
    /// Fourier backend: modes -mode_cut..mode_cut. Zero for the window backend.
    int mode_cut() const { return mode_cut_; }

    bool is_real() const { return backend_ == LaxBackend::window_kernel; }
    const Eigen::MatrixXd& real_block(int j) const { return real_[static_cast<std::size_t>(j)]; }
    const Eigen::MatrixXcd& complex_block(int j) const { return complex_[static_cast<std::size_t>(j)]; }
    bool block_empty(int j) const;

    void set_block(int j, Eigen::MatrixXd block);
    void set_block(int j, Eigen::MatrixXcd block);
    void set_mode_cut(int n) { mode_cut_ = n; }

    Eigen::MatrixXcd dense() const;
    /// y = L x for a block of spin-major vectors (dim x k).
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& x) const;

    double frobenius_norm() const;
    /// max |C_j - C_j^*| over entries and components.
    double hermiticity_defect() const;
    bool all_finite() const;
    bool is_zero() const;

private:
    LaxBackend backend_;
    GridPtr grid_;
    std::size_t basis_;
    int mode_cut_ = 0;
    std::array<Eigen::MatrixXd, 3> real_;
    std::array<Eigen::MatrixXcd, 3> complex_;
};

/// Kernel (1/pi)(U(x) - U(y))/(x - y) dx on the window nodes; diagonal
/// (1/pi) U'(x) dx with the spectral derivative. Throws DomainError on a
/// torus field.
LaxMatrix lax_L_window(const SphereField& u);

/// Blocks -i (sgn n - sgn m) U_{n-m} for |n|, |m| <= mode_cut, with U_k the
/// normalized Fourier coefficients (zero for |k| >= n/2). Throws DomainError on
/// a window field or mode_cut > n/2.
LaxMatrix lax_L_fourier(const SphereField& u, int mode_cut);

/// B_u = -(i/2)(U |grad| + |grad| U) + (i/2)(|grad| U), dense, same basis and
/// ordering as the matching L backend. The window form is limited to n <= 2048.
Eigen::MatrixXcd lax_B(const SphereField& u, LaxBackend backend, int mode_cut = 0);

struct SchattenOptions {
    std::size_t dense_limit = 2048; ///< dims above this use the randomized partial spectrum
    std::size_t subspace = 32;      ///< randomized subspace size
    int power_iterations = 6;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    double tau_rel = 1e-8;          ///< rank threshold relative to sigma_1
};

struct SchattenReport {
    std::vector<double> sigma;       ///< descending; complete unless `partial`
    std::vector<double> p;
    std::vector<double> norms;
    std::vector<bool> quasi_norm;    ///< p < 1
    std::size_t rank = 0;
    double threshold = 0.0;          ///< tau_rel * sigma_1
    double tau_rel = 0.0;
    std::optional<double> gap;       ///< sigma_rank / sigma_{rank+1} when both exist and are nonzero
    bool partial = false;            ///< only the leading singular values were computed
    bool sigma1_zero = false;
    double frobenius = 0.0;          ///< exact, (sum sigma^2)^{1/2}
    bool monotone_in_p = true;       ///< norms non-increasing in p (up to 1e-12 relative)
};

/// Singular values of the Hermitian L are |eigenvalues|. p = 2 always comes
/// from the exact Frobenius norm. For partial spectra the other norms are
/// sums over the computed values (lower bounds). Throws DomainError on
/// non-finite entries or p <= 0.
SchattenReport schatten(const LaxMatrix& l, std::span<const double> p_list, const SchattenOptions& options = {});

/// Rank part of `schatten` with no norms requested.
SchattenReport numerical_rank(const LaxMatrix& l, double tau_rel = 1e-8, SchattenOptions options = {});

struct LaxResidualPoint {
    double time = 0.0;
    double residual = 0.0;       ///< ||dL/dt - [B, L]||_F / ||L||_F
    double l_norm = 0.0;
};

struct LaxResidualOptions {
    int mode_cut = 0;            ///< Fourier backend; 0 selects n/8
    std::size_t max_centers = 11;
};

/// Central difference of L over +-dt_fd around sampled snapshots compared
/// with the commutator [B, L] at the center. The Fourier commutator is formed
/// on an extended mode range 2 * mode_cut and restricted back. Throws
/// DomainError with fewer than 3 snapshots or when dt_fd is not a multiple of
/// the snapshot spacing.
std::vector<LaxResidualPoint> lax_residual_series(const Trajectory& traj, LaxBackend backend, double dt_fd,
                                                  const LaxResidualOptions& options = {});
double lax_residual(const Trajectory& traj, LaxBackend backend, double dt_fd, const LaxResidualOptions& options = {});

} // namespace hwm
