#pragma once

#include <cstddef>
#include <vector>

#include "collisim/haar.hpp"
#include "collisim/linalg.hpp"

namespace collisim {

/// Refreshed-environment mode: the system qudit collides with a single
/// ancilla that is reset to eta after every collision. Valid for purity
/// dynamics; not for chain entanglement.
struct RefreshedConfig {
    int mu = 2;
    int nu = 2;
    Matrix eta;  // nu x nu density operator, may be mixed
    int steps = 0;
    RngStream rng{0, 0};
};

/// One collision: Tr_E[U (rho_s x eta) U^dagger] for a fresh Haar U(mu*nu).
Matrix collide_refreshed(const Matrix& rho_s, const Matrix& eta, RngStream& rng);

/// Purity trajectory P(0..steps); P(0) = Tr[rho0^2].
std::vector<double> run_refreshed_trajectory(RefreshedConfig& config, const Matrix& rho0);

/// Pure-state density operator with the given purity for a qubit ancilla:
/// diag(q, 1-q) with q = (1 + sqrt(2p-1))/2. Only nu=2 is supported for
/// mixed ancillas.
Matrix qubit_eta_with_purity(double p);

/// Full-chain mode: the joint pure state of the system qudit and every
/// environment qudit collided so far. Amplitude layout has the system as the
/// most significant index and qudits appended at the least significant end.
class ChainState {
  public:
    /// system and eta must be normalized pure-state vectors.
    ChainState(const StateVec& system, const StateVec& eta, std::size_t amp_cap = std::size_t{1} << 20);

    /// Appends a fresh environment qudit in state eta and applies a Haar
    /// unitary to (system, new qudit). Throws if the amplitude count would
    /// exceed the configured cap.
    void collide(RngStream& rng);

    int collisions() const { return collisions_; }
    int system_dim() const { return mu_; }
    int env_dim() const { return nu_; }
    const std::vector<cdouble>& amplitudes() const { return amps_; }
    std::vector<int> dims() const;
    double norm() const;

    Matrix reduced_density(const std::vector<int>& keep) const;
    double system_purity() const;

  private:
    std::vector<cdouble> amps_;
    StateVec eta_;
    int mu_;
    int nu_;
    int collisions_ = 0;
    std::size_t amp_cap_;
};

}  // namespace collisim
