#include "collisim/pauli.hpp"

#include <cmath>
#include <stdexcept>

namespace collisim {

HermitianBasis build_basis(int d) {
    if (d < 2) throw std::invalid_argument("build_basis: dimension must be >= 2");

    HermitianBasis basis;
    basis.dim = d;
    basis.elements.reserve(static_cast<std::size_t>(d) * d);
    basis.elements.push_back(Matrix::Identity(d, d));

    const double off_scale = std::sqrt(d / 2.0);
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            Matrix sym = Matrix::Zero(d, d);
            sym(j, k) = off_scale;
            sym(k, j) = off_scale;
            basis.elements.push_back(sym);

            Matrix anti = Matrix::Zero(d, d);
            anti(j, k) = cdouble(0.0, -off_scale);
            anti(k, j) = cdouble(0.0, off_scale);
            basis.elements.push_back(anti);
        }
    }
    for (int l = 1; l < d; ++l) {
        Matrix diag = Matrix::Zero(d, d);
        const double scale = std::sqrt(static_cast<double>(d) / (l * (l + 1.0)));
        for (int m = 0; m < l; ++m) diag(m, m) = scale;
        diag(l, l) = -scale * l;
        basis.elements.push_back(diag);
    }
    return basis;
}

PauliCoefficients decompose(const Matrix& rho, int mu, int nu) {
    const long L = static_cast<long>(mu) * nu;
    if (rho.rows() != L || rho.cols() != L)
        throw std::invalid_argument("decompose: operator dimension does not match mu*nu");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-8)
        throw std::invalid_argument("decompose: input trace differs from 1");

    const HermitianBasis bs = build_basis(mu);
    const HermitianBasis be = build_basis(nu);
    PauliCoefficients coeffs;
    coeffs.mu = mu;
    coeffs.nu = nu;
    coeffs.c.resize(static_cast<std::size_t>(L) * L);
    for (int a = 0; a < mu * mu; ++a) {
        for (int b = 0; b < nu * nu; ++b) {
            const Matrix op = kron(bs.elements[a], be.elements[b]);
            // Tr[rho * op] with both factors Hermitian is real up to roundoff.
            coeffs.at(a, b) = (rho * op).trace().real() / static_cast<double>(L);
        }
    }
    return coeffs;
}

Matrix reconstruct(const PauliCoefficients& coeffs) {
    const long L = static_cast<long>(coeffs.mu) * coeffs.nu;
    const HermitianBasis bs = build_basis(coeffs.mu);
    const HermitianBasis be = build_basis(coeffs.nu);
    Matrix rho = Matrix::Zero(L, L);
    for (int a = 0; a < coeffs.mu * coeffs.mu; ++a)
        for (int b = 0; b < coeffs.nu * coeffs.nu; ++b)
            rho += coeffs.at(a, b) * kron(bs.elements[a], be.elements[b]);
    return rho;
}

PurityPair purity_from_coeffs(const PauliCoefficients& coeffs) {
    const double L = static_cast<double>(coeffs.mu) * coeffs.nu;
    PurityPair p;
    for (double v : coeffs.c) p.joint += v * v;
    p.joint *= L;
    for (int a = 0; a < coeffs.mu * coeffs.mu; ++a) p.system += coeffs.at(a, 0) * coeffs.at(a, 0);
    p.system *= L * coeffs.nu;
    return p;
}

}  // namespace collisim
