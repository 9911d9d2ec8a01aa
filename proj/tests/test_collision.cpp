#include <doctest.h>

#include <cmath>

#include "collisim/collision.hpp"
#include "collisim/theory.hpp"

using namespace collisim;

namespace {

Matrix pure_ground(int d) {
    Matrix rho = Matrix::Zero(d, d);
    rho(0, 0) = 1.0;
    return rho;
}

StateVec ground_vec(int d) {
    StateVec v = StateVec::Zero(d);
    v(0) = 1.0;
    return v;
}

}  // namespace

TEST_CASE("collide_refreshed preserves unit trace per draw") {
    RngStream rng(1, 0);
    Matrix rho = pure_ground(2);
    const Matrix eta = pure_ground(2);
    for (int i = 0; i < 20; ++i) {
        rho = collide_refreshed(rho, eta, rng);
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
        CHECK(is_hermitian(rho, 1e-10));
    }
}

TEST_CASE("collide_refreshed rejects invalid density matrices") {
    RngStream rng(1, 0);
    CHECK_THROWS_AS(collide_refreshed(Matrix::Identity(2, 2), pure_ground(2), rng),
                    std::invalid_argument);
}

TEST_CASE("joint purity before tracing factorizes as P(t-1) * P_eta") {
    // Unitarity means Tr[(U (rho x eta) U+)^2] = P(rho) * P(eta) exactly.
    RngStream rng(2, 0);
    const Matrix eta = qubit_eta_with_purity(0.7);
    Matrix rho = pure_ground(2);
    for (int i = 0; i < 5; ++i) {
        const double p_before = purity(rho);
        const Matrix u = haar_unitary(4, rng);
        const Matrix joint = u * kron(rho, eta) * u.adjoint();
        CHECK(purity(joint) == doctest::Approx(p_before * 0.7).epsilon(1e-10));
        rho = partial_trace(joint, {2, 2}, {0});
    }
}

TEST_CASE("single-collision ensemble mean purity reaches the Lubkin value") {
    const int n = 10000;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
        RngStream rng(3, k);
        const Matrix rho = collide_refreshed(pure_ground(2), pure_ground(2), rng);
        acc += purity(rho);
    }
    CHECK(acc / n == doctest::Approx(0.8).epsilon(0.0125));  // 4/5 +- 0.01
}

TEST_CASE("mixed-eta ensemble mean follows the qubit recursion") {
    const double p_eta = 0.5;  // eta = I/2
    const int n = 4000, steps = 3;
    std::vector<double> mean(steps + 1, 0.0), sq(steps + 1, 0.0);
    for (int k = 0; k < n; ++k) {
        RefreshedConfig cfg{2, 2, 0.5 * Matrix::Identity(2, 2), steps, RngStream(4, k)};
        const std::vector<double> series = run_refreshed_trajectory(cfg, pure_ground(2));
        for (int t = 0; t <= steps; ++t) {
            mean[t] += series[t];
            sq[t] += series[t] * series[t];
        }
    }
    const std::vector<double> analytic = refreshed_series(2, 2, p_eta, 1.0, steps);
    for (int t = 1; t <= steps; ++t) {
        mean[t] /= n;
        const double var = sq[t] / n - mean[t] * mean[t];
        const double sigma = std::sqrt(var / n);
        CHECK(std::abs(mean[t] - analytic[t]) < 3.0 * sigma + 1e-9);
    }
}

TEST_CASE("refreshed trajectory with zero steps returns only the initial purity") {
    RefreshedConfig cfg{2, 2, pure_ground(2), 0, RngStream(5, 0)};
    const Matrix rho0 = 0.5 * Matrix::Identity(2, 2);
    const std::vector<double> series = run_refreshed_trajectory(cfg, rho0);
    REQUIRE(series.size() == 1);
    CHECK(series[0] == doctest::Approx(0.5));
}

TEST_CASE("chain norm is preserved across collisions") {
    RngStream rng(6, 0);
    ChainState state(ground_vec(2), ground_vec(2));
    for (int t = 0; t < 10; ++t) state.collide(rng);
    CHECK(std::abs(state.norm() - 1.0) < 1e-9);
    CHECK(state.collisions() == 10);
}

TEST_CASE("chain amplitude cap guard") {
    RngStream rng(7, 0);
    ChainState state(ground_vec(2), ground_vec(2), /*amp_cap=*/16);
    state.collide(rng);
    state.collide(rng);
    state.collide(rng);  // 16 amplitudes, at the cap
    CHECK_THROWS_AS(state.collide(rng), std::length_error);
}

TEST_CASE("one collision yields the two-qubit random-state purity on average") {
    const int n = 4000;
    double acc = 0.0, acc_sq = 0.0;
    for (int k = 0; k < n; ++k) {
        RngStream rng(8, k);
        ChainState state(ground_vec(2), ground_vec(2));
        state.collide(rng);
        const double p = state.system_purity();
        acc += p;
        acc_sq += p * p;
    }
    const double mean = acc / n;
    const double sigma = std::sqrt((acc_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - 0.8) < 3.0 * sigma);
}

TEST_CASE("chain-mode and refreshed-mode purities agree in ensemble mean") {
    const int n = 3000, steps = 4;
    std::vector<double> chain_mean(steps, 0.0), chain_sq(steps, 0.0), refresh_mean(steps, 0.0);
    for (int k = 0; k < n; ++k) {
        RngStream rng(9, k);
        ChainState state(ground_vec(2), ground_vec(2));
        for (int t = 0; t < steps; ++t) {
            state.collide(rng);
            const double p = state.system_purity();
            chain_mean[t] += p;
            chain_sq[t] += p * p;
        }
        RefreshedConfig cfg{2, 2, pure_ground(2), steps, RngStream(10, k)};
        const std::vector<double> series = run_refreshed_trajectory(cfg, pure_ground(2));
        for (int t = 0; t < steps; ++t) refresh_mean[t] += series[t + 1];
    }
    for (int t = 0; t < steps; ++t) {
        chain_mean[t] /= n;
        refresh_mean[t] /= n;
        const double var = chain_sq[t] / n - chain_mean[t] * chain_mean[t];
        const double sigma = std::sqrt(2.0 * var / n);  // both sides are Monte Carlo
        CHECK(std::abs(chain_mean[t] - refresh_mean[t]) < 3.0 * sigma);
    }
}

TEST_CASE("reduced_density matches refreshed marginals for a qutrit environment") {
    RngStream rng(11, 0);
    ChainState state(ground_vec(2), ground_vec(3));
    state.collide(rng);
    state.collide(rng);
    const Matrix rho0 = state.reduced_density({0});
    CHECK(std::abs(rho0.trace().real() - 1.0) < 1e-10);
    CHECK(is_hermitian(rho0, 1e-10));
    CHECK_THROWS_AS(state.reduced_density({5}), std::out_of_range);
}

TEST_CASE("qubit_eta_with_purity hits the requested purity") {
    for (double p : {0.5, 0.75, 1.0}) {
        const Matrix eta = qubit_eta_with_purity(p);
        CHECK(purity(eta) == doctest::Approx(p).epsilon(1e-12));
        CHECK(std::abs(eta.trace().real() - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(qubit_eta_with_purity(0.4), std::invalid_argument);
}
