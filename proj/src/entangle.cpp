#include "collisim/entangle.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace collisim {

namespace {

Matrix spin_flip_yy() {
    // sigma_y x sigma_y in the computational basis.
    Matrix yy = Matrix::Zero(4, 4);
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    return yy;
}

double clamp_tangle(double t) {
    if (t < 0.0) {
        if (t < -1e-8)
            std::fprintf(stderr, "collisim: clamping negative tangle %.3e to 0\n", t);
        return 0.0;
    }
    return t < 1.0 ? t : 1.0;
}

}  // namespace

double concurrence(const Matrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw std::invalid_argument("concurrence: expected a 4x4 two-qubit density matrix");
    static const Matrix yy = spin_flip_yy();
    const Matrix rho_tilde = yy * rho.conjugate() * yy;
    const Matrix s = sqrt_psd(rho);  // rejects non-PSD input
    const Matrix inner = s * rho_tilde * s;
    const EigResult eig = eig_hermitian(inner, 1e-8);
    // alpha_k = sqrt of the inner eigenvalues. Roundoff leaves residues of
    // order eps around zero that the square root would blow up to 1e-8, so
    // floor relative to the leading eigenvalue.
    const double floor = 1e-14 * std::max(eig.values(0), 0.0);
    double c = 0.0;
    for (int k = 0; k < 4; ++k) {
        double lam = eig.values(k);
        if (lam < -1e-8)
            throw std::invalid_argument("concurrence: spin-flipped product not PSD");
        lam = lam > floor ? lam : 0.0;
        c += (k == 0 ? 1.0 : -1.0) * std::sqrt(lam);
    }
    return c > 0.0 ? c : 0.0;
}

double tangle(const Matrix& rho) {
    const double c = concurrence(rho);
    return clamp_tangle(c * c);
}

double tangle_vs_rest(const ChainState& state, int subsystem) {
    const std::vector<int> dims = state.dims();
    if (subsystem < 0 || subsystem >= static_cast<int>(dims.size()))
        throw std::out_of_range("tangle_vs_rest: subsystem index out of range");
    if (dims[subsystem] != 2)
        throw std::invalid_argument("tangle_vs_rest: 4*det formula is qubit-specific");
    const Matrix rho = state.reduced_density({subsystem});
    return clamp_tangle(4.0 * rho.determinant().real());
}

TangleRecord multipartite_tangle(const ChainState& state) {
    if (state.system_dim() != 2 || state.env_dim() != 2)
        throw std::invalid_argument("multipartite_tangle: qubit chains only");
    if (state.collisions() < 1)
        throw std::invalid_argument("multipartite_tangle: at least one collision required");

    TangleRecord rec;
    rec.step = state.collisions();
    rec.pairwise.reserve(rec.step);
    double pair_sum = 0.0;
    for (int j = 1; j <= rec.step; ++j) {
        const double t = tangle(state.reduced_density({0, j}));
        rec.pairwise.push_back(t);
        pair_sum += t;
    }
    rec.tau_chain = tangle_vs_rest(state, 0);
    rec.tau_multi = rec.tau_chain - pair_sum;
    return rec;
}

}  // namespace collisim
