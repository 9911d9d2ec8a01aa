#include "collisim/collision.hpp"

#include <cmath>
#include <stdexcept>

namespace collisim {

namespace {

void check_density(const Matrix& rho, const char* what) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument(std::string(what) + ": not square");
    if (!is_hermitian(rho, 1e-10)) throw std::invalid_argument(std::string(what) + ": not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8)
        throw std::invalid_argument(std::string(what) + ": trace differs from 1");
}

}  // namespace

Matrix collide_refreshed(const Matrix& rho_s, const Matrix& eta, RngStream& rng) {
    check_density(rho_s, "collide_refreshed: system state");
    check_density(eta, "collide_refreshed: environment state");
    const int mu = static_cast<int>(rho_s.rows());
    const int nu = static_cast<int>(eta.rows());
    const Matrix u = haar_unitary(mu * nu, rng);
    const Matrix evolved = u * kron(rho_s, eta) * u.adjoint();
    return partial_trace(evolved, {mu, nu}, {0});
}

std::vector<double> run_refreshed_trajectory(RefreshedConfig& config, const Matrix& rho0) {
    std::vector<double> series;
    series.reserve(config.steps + 1);
    Matrix rho = rho0;
    series.push_back(purity(rho));
    for (int t = 0; t < config.steps; ++t) {
        rho = collide_refreshed(rho, config.eta, config.rng);
        series.push_back(purity(rho));
    }
    return series;
}

Matrix qubit_eta_with_purity(double p) {
    if (p < 0.5 || p > 1.0)
        throw std::invalid_argument("qubit_eta_with_purity: purity must lie in [1/2, 1]");
    const double q = 0.5 * (1.0 + std::sqrt(2.0 * p - 1.0));
    Matrix eta = Matrix::Zero(2, 2);
    eta(0, 0) = q;
    eta(1, 1) = 1.0 - q;
    return eta;
}

ChainState::ChainState(const StateVec& system, const StateVec& eta, std::size_t amp_cap)
    : eta_(eta),
      mu_(static_cast<int>(system.size())),
      nu_(static_cast<int>(eta.size())),
      amp_cap_(amp_cap) {
    if (mu_ < 2 || nu_ < 2) throw std::invalid_argument("ChainState: qudit dimensions must be >= 2");
    if (std::abs(system.norm() - 1.0) > 1e-10 || std::abs(eta.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("ChainState: states must be normalized");
    amps_.assign(system.data(), system.data() + mu_);
}

std::vector<int> ChainState::dims() const {
    std::vector<int> d(1 + collisions_, nu_);
    d[0] = mu_;
    return d;
}

double ChainState::norm() const {
    double s = 0.0;
    for (const cdouble& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

void ChainState::collide(RngStream& rng) {
    const std::size_t new_size = amps_.size() * nu_;
    if (new_size > amp_cap_)
        throw std::length_error("ChainState::collide: amplitude cap exceeded");

    // Append the fresh qudit at the least significant index position.
    std::vector<cdouble> next(new_size);
    for (std::size_t i = 0; i < amps_.size(); ++i)
        for (int k = 0; k < nu_; ++k) next[i * nu_ + k] = amps_[i] * eta_(k);
    amps_.swap(next);
    ++collisions_;

    // Two-qudit Haar unitary on (system, newest qudit) by stride iteration:
    // flat index = a * stride_a + m * nu + b, with m running over the
    // untouched middle qudits.
    const Matrix u = haar_unitary(mu_ * nu_, rng);
    const long stride_a = static_cast<long>(amps_.size()) / mu_;
    const long middle = stride_a / nu_;
    const int L = mu_ * nu_;
    std::vector<cdouble> in(L), out(L);
    for (long m = 0; m < middle; ++m) {
        const long base = m * nu_;
        for (int a = 0; a < mu_; ++a)
            for (int b = 0; b < nu_; ++b) in[a * nu_ + b] = amps_[a * stride_a + base + b];
        for (int r = 0; r < L; ++r) {
            cdouble acc = 0.0;
            for (int c = 0; c < L; ++c) acc += u(r, c) * in[c];
            out[r] = acc;
        }
        for (int a = 0; a < mu_; ++a)
            for (int b = 0; b < nu_; ++b) amps_[a * stride_a + base + b] = out[a * nu_ + b];
    }
}

Matrix ChainState::reduced_density(const std::vector<int>& keep) const {
    const SubsystemSplit split = split_subsystems(dims(), keep);
    const long K = split.kept_dim;
    Matrix rho = Matrix::Zero(K, K);
    std::vector<cdouble> vals(K);
    for (long r : split.traced_offsets) {
        for (long p = 0; p < K; ++p) vals[p] = amps_[split.kept_offsets[p] + r];
        for (long p = 0; p < K; ++p)
            for (long q = 0; q < K; ++q) rho(p, q) += vals[p] * std::conj(vals[q]);
    }
    return rho;
}

double ChainState::system_purity() const {
    return purity(reduced_density({0}));
}

}  // namespace collisim
