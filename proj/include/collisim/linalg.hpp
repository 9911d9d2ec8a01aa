#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace collisim {

using cdouble = std::complex<double>;

// Row-major storage is the interchange convention for all modules.
using Matrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using StateVec = Eigen::VectorXcd;

bool is_hermitian(const Matrix& a, double tol = 1e-12);

/// Kronecker product, dims (ra*rb) x (ca*cb).
Matrix kron(const Matrix& a, const Matrix& b);

/// Flat offsets of the kept and traced subsystem index groups for a tensor
/// product space with the given per-subsystem dimensions. Shared between
/// density-matrix and pure-state partial traces.
struct SubsystemSplit {
    std::vector<long> kept_offsets;
    std::vector<long> traced_offsets;
    long kept_dim = 1;
};
SubsystemSplit split_subsystems(const std::vector<int>& dims, const std::vector<int>& keep);

/// Reduced density operator over the kept subsystems (index arithmetic over
/// subsystem strides, no permutation matrices).
Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims, const std::vector<int>& keep);

struct EigResult {
    Eigen::VectorXd values;  // real, sorted descending
    Matrix vectors;          // columns are eigenvectors, same order
};

/// Eigendecomposition of a Hermitian matrix; throws if the input deviates
/// from Hermiticity by more than hermitian_tol.
EigResult eig_hermitian(const Matrix& a, double hermitian_tol = 1e-10);

/// Hermitian square root of a PSD matrix. Eigenvalues in [-1e-10, 0) are
/// clamped to 0 (roundoff from repeated small products); below -1e-8 the
/// input is rejected as not PSD.
Matrix sqrt_psd(const Matrix& a);

/// Tr[rho^2], real part.
double purity(const Matrix& rho);

}  // namespace collisim
