#pragma once

#include "hwm/grid.hpp"

#include <Eigen/Core>

namespace hwm::dense {

/// Eigenvalues (ascending) of a real symmetric matrix; `a` is overwritten.
Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd& a);

/// Eigenvalues (ascending); `a` is overwritten by the orthonormal eigenvectors.
Eigen::VectorXd symmetric_eigensystem(Eigen::MatrixXd& a);

/// Eigenvalues (ascending) of a complex Hermitian matrix; `a` is overwritten.
Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd& a);

/// Dense circulant matrix of |grad| on the grid: column b is |grad| applied to
/// the unit vector e_b.
Eigen::MatrixXd halfwave_matrix(const Grid1D& grid);

} // namespace hwm::dense
