#include "collisim/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace collisim {

bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

SubsystemSplit split_subsystems(const std::vector<int>& dims, const std::vector<int>& keep) {
    const int n = static_cast<int>(dims.size());
    if (keep.empty()) throw std::invalid_argument("split_subsystems: keep set is empty");
    std::vector<bool> kept(n, false);
    for (int k : keep) {
        if (k < 0 || k >= n) throw std::out_of_range("split_subsystems: subsystem index out of range");
        kept[k] = true;
    }
    std::vector<long> strides(n, 1);
    for (int i = n - 2; i >= 0; --i) strides[i] = strides[i + 1] * dims[i + 1];

    SubsystemSplit split;
    split.kept_offsets = {0};
    split.traced_offsets = {0};
    // Kept offsets must enumerate in the order of the `keep` list so that the
    // reduced operator's subsystem ordering follows the caller's request.
    for (int k : keep) {
        std::vector<long> next;
        next.reserve(split.kept_offsets.size() * dims[k]);
        for (long base : split.kept_offsets)
            for (int d = 0; d < dims[k]; ++d) next.push_back(base + d * strides[k]);
        split.kept_offsets.swap(next);
        split.kept_dim *= dims[k];
    }
    for (int i = 0; i < n; ++i) {
        if (kept[i]) continue;
        std::vector<long> next;
        next.reserve(split.traced_offsets.size() * dims[i]);
        for (long base : split.traced_offsets)
            for (int d = 0; d < dims[i]; ++d) next.push_back(base + d * strides[i]);
        split.traced_offsets.swap(next);
    }
    return split;
}

Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims, const std::vector<int>& keep) {
    long total = 1;
    for (int d : dims) total *= d;
    if (rho.rows() != rho.cols() || rho.rows() != total)
        throw std::invalid_argument("partial_trace: operator dimension does not match subsystem dims");

    const SubsystemSplit split = split_subsystems(dims, keep);
    const long K = split.kept_dim;
    Matrix out = Matrix::Zero(K, K);
    for (long r : split.traced_offsets)
        for (long p = 0; p < K; ++p)
            for (long q = 0; q < K; ++q)
                out(p, q) += rho(split.kept_offsets[p] + r, split.kept_offsets[q] + r);
    return out;
}

EigResult eig_hermitian(const Matrix& a, double hermitian_tol) {
    if (!is_hermitian(a, hermitian_tol))
        throw std::invalid_argument("eig_hermitian: input is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eig_hermitian: eigensolver failed to converge");

    const Eigen::Index n = a.rows();
    EigResult res;
    res.values.resize(n);
    res.vectors.resize(n, n);
    // Eigen returns ascending order; flip to descending.
    for (Eigen::Index i = 0; i < n; ++i) {
        res.values(i) = solver.eigenvalues()(n - 1 - i);
        res.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return res;
}

Matrix sqrt_psd(const Matrix& a) {
    EigResult eig = eig_hermitian(a);
    const Eigen::Index n = a.rows();
    Eigen::VectorXd roots(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double lam = eig.values(i);
        if (lam < -1e-8)
            throw std::invalid_argument("sqrt_psd: input has eigenvalue below -1e-8, not PSD");
        roots(i) = lam > 0.0 ? std::sqrt(lam) : 0.0;
    }
    return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

double purity(const Matrix& rho) {
    return (rho * rho).trace().real();
}

}  // namespace collisim
