#include "dense.hpp"

#include "hwm/error.hpp"

#include <complex>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <string>
#include <vector>

namespace hwm::dense {
namespace {

void check(lapack_int info, const char* routine) {
    if (info != 0) throw NumericalError(std::string(routine) + " failed, info = " + std::to_string(info));
}

Eigen::VectorXd syevd(Eigen::MatrixXd& a, char job) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, job, 'L', n, a.data(), n, w.data()), "dsyevd");
    return w;
}

} // namespace

Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd& a) { return syevd(a, 'N'); }

Eigen::VectorXd symmetric_eigensystem(Eigen::MatrixXd& a) { return syevd(a, 'V'); }

Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd& a) {
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    check(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data()), "zheevd");
    return w;
}

Eigen::MatrixXd halfwave_matrix(const Grid1D& grid) {
    const auto n = static_cast<Eigen::Index>(grid.n);
    std::vector<double> delta(grid.n, 0.0), column(grid.n);
    delta[0] = 1.0;
    apply_multiplier(grid, delta, column, Symbol::halfwave);
    // The symbol is even; remove FFT rounding asymmetry so the matrix is exactly symmetric.
    for (std::size_t k = 1; k < grid.n / 2; ++k) column[k] = column[grid.n - k] = 0.5 * (column[k] + column[grid.n - k]);
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index a = 0; a < n; ++a) d(a, b) = column[static_cast<std::size_t>((a - b + n) % n)];
    return d;
}

} // namespace hwm::dense
