#pragma once

#include "hwm/grid.hpp"

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace hwm {

enum class LinearizedOp { Lplus, Lminus };

std::string to_string(LinearizedOp op);

/// Dense discretization of L+ = |grad| - 2m/(1 + x^2) or L- = L+ + R on a window.
struct LinOpDisc {
    LinearizedOp which = LinearizedOp::Lplus;
    int m = 1;
    GridPtr grid;
    Eigen::MatrixXd matrix;

    double symmetry_defect() const;
};

/// Circulant |grad| matrix plus the diagonal potential. Throws DomainError on
/// a torus grid or m < 1.
LinOpDisc assemble_Lplus(int m, const GridPtr& window_grid);

/// (1/(2 pi)) |Q_m(x) - Q_m(y)|^2 / (x - y)^2 dx with the diagonal limit
/// (1/(2 pi)) (2m/(1 + x^2))^2 dx; Q_m the degree-m ground state.
Eigen::MatrixXd assemble_R(int m, const GridPtr& window_grid);

LinOpDisc assemble_Lminus(int m, const GridPtr& window_grid);

enum class DecayClass { bound, resonance_like, continuum_artifact };

std::string to_string(DecayClass c);

struct SpectralEntry {
    double value = 0.0;       ///< eigenvalue (Rayleigh quotient after cluster localization)
    std::size_t cluster = 0;
    double tail_fraction = 0.0;
    DecayClass decay = DecayClass::continuum_artifact;
};

struct SpectralReport {
    LinearizedOp which = LinearizedOp::Lplus;
    int m = 1;
    std::size_t n = 0;
    double half_width = 0.0;
    double continuum_edge = 0.0;
    double near_zero_tol = 0.0;
    double tail_fraction = 0.0;    ///< outer fraction of the window used for the statistic
    double tail_threshold = 0.0;   ///< 0.5 * uniform baseline
    std::vector<SpectralEntry> entries; ///< all eigenvalues below the edge, ascending
    std::size_t bound_count = 0;
    std::size_t near_zero_bound = 0;       ///< bound entries with |value| <= near_zero_tol
    std::size_t near_zero_nonbound = 0;
    std::size_t negative_bound_below_tol = 0; ///< bound entries with value < -near_zero_tol
    std::size_t embedded_candidates = 0;   ///< eigenvalues in (10 tol, k_max/2] with tail below threshold
    double embedded_band_upper = 0.0;
    double min_cluster_gap = 0.0;          ///< smallest gap between consecutive clusters of bound entries

    std::vector<double> bound_values() const;
};

struct ClassifyOptions {
    std::optional<double> near_zero_tol; ///< default 5e-3 * 200 / L
    double tail_fraction = 0.25;
    std::size_t min_n = 2048;
};

/// Full dense eigensolve and decay classification. Eigenvalues below the edge
/// pi/(2L) are clustered (consecutive gap <= near_zero_tol); within a cluster
/// the tail-mass projector is diagonalized and each localized vector is
/// labelled bound (tail mass < threshold), resonance_like (not bound, |value|
/// <= tol) or continuum_artifact. Throws GuardError when n < min_n.
SpectralReport classify_spectrum(const LinOpDisc& op, const ClassifyOptions& options = {});

/// J_{kl} = (delta_kl - s_{k-l}) (|l| - m) for |k|, |l| <= K, s_{+-1} = +-i/2.
struct JacobiDisc {
    int m = 1;
    int cutoff = 0;
    Eigen::MatrixXcd matrix;

    std::complex<double> s(int j) const;
};

/// Throws DomainError if K < m.
JacobiDisc jacobi_matrix(int m, int cutoff);

struct JacobiMatch {
    double operator_value = 0.0;
    std::complex<double> jacobi_value;
    double distance = 0.0;
};

struct JacobiAgreement {
    std::vector<std::complex<double>> eigenvalues;  ///< J(K) spectrum, sorted by real part
    std::vector<double> real_below_edge;            ///< real J eigenvalues below the report's edge
    std::vector<JacobiMatch> matches;               ///< nearest J(K) eigenvalue per bound value
    std::vector<JacobiMatch> matches_doubled;       ///< same with J(2K)
    double doubling_shift = 0.0;                    ///< max |match(K) - match(2K)|
    double closest_to_zero = 0.0;                   ///< min |lambda| over J(K)
};

JacobiAgreement jacobi_crosscheck(int m, int cutoff, const SpectralReport& report);

} // namespace hwm
