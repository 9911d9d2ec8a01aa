#pragma once

#include <vector>

#include "collisim/linalg.hpp"

namespace collisim {

/// Hermitian operator basis for a qudit of dimension d: the d^2 generalized
/// Gell-Mann matrices (symmetric, antisymmetric, diagonal families) rescaled
/// so that Tr[B_a B_b] = d * delta_ab, with element 0 the identity. For d=2
/// this is exactly {I, sigma_x, sigma_y, sigma_z}.
struct HermitianBasis {
    int dim = 0;
    std::vector<Matrix> elements;
};

HermitianBasis build_basis(int d);

/// Real coefficients of a two-qudit density operator in the product basis
/// B_a (system, dim mu) x B_b (environment, dim nu). Layout is system-major:
/// c[a * nu^2 + b].
struct PauliCoefficients {
    int mu = 0;
    int nu = 0;
    std::vector<double> c;

    double& at(int a, int b) { return c[static_cast<std::size_t>(a) * nu * nu + b]; }
    double at(int a, int b) const { return c[static_cast<std::size_t>(a) * nu * nu + b]; }
};

/// c[a,b] = Tr[rho (B_a x B_b)] / (mu*nu). Rejects inputs whose trace
/// deviates from 1 by more than 1e-8.
PauliCoefficients decompose(const Matrix& rho, int mu, int nu);

Matrix reconstruct(const PauliCoefficients& coeffs);

struct PurityPair {
    double joint = 0.0;   // mu*nu * sum of all c^2
    double system = 0.0;  // mu*nu^2 * sum over c[a,0]^2
};
PurityPair purity_from_coeffs(const PauliCoefficients& coeffs);

}  // namespace collisim
