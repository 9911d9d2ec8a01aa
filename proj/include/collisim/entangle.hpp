#pragma once

#include <vector>

#include "collisim/collision.hpp"
#include "collisim/linalg.hpp"

namespace collisim {

/// Wootters concurrence of a two-qubit density matrix in the computational
/// (sigma_z x sigma_z eigen-) basis: C = max{0, a1-a2-a3-a4} with a_k the
/// descending eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)), where
/// rho~ = (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y). The Hermitian
/// route shares the spectrum of rho * rho~ and needs no general eigensolver.
double concurrence(const Matrix& rho);

/// Tangle tau = C^2, clamped to [0, 1].
double tangle(const Matrix& rho);

/// One-vs-rest tangle 4*det(rho_i) of a qubit marginal of a pure joint
/// state; equals 2 - 2*Tr[rho_i^2].
double tangle_vs_rest(const ChainState& state, int subsystem);

struct TangleRecord {
    int step = 0;
    std::vector<double> pairwise;  // tau_{0|j}, j = 1..step
    double tau_chain = 0.0;
    double tau_multi = 0.0;        // tau_chain - sum(pairwise)
};

/// All pairwise tangles with the system qubit, the system-vs-chain tangle,
/// and the residual multipartite tangle. Qubit chains only.
TangleRecord multipartite_tangle(const ChainState& state);

}  // namespace collisim
