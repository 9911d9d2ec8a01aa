#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "collisim/collision.hpp"
#include "collisim/stats.hpp"
#include "collisim/theory.hpp"

using namespace collisim;

namespace {

Matrix pure_ground(int d) {
    Matrix rho = Matrix::Zero(d, d);
    rho(0, 0) = 1.0;
    return rho;
}

struct ThreadEnvGuard {
    explicit ThreadEnvGuard(const char* value) { setenv("COLLISIM_THREADS", value, 1); }
    ~ThreadEnvGuard() { unsetenv("COLLISIM_THREADS"); }
};

}  // namespace

TEST_CASE("histogram covers all samples and clamps edge values") {
    const std::vector<double> values = {0.5, 0.75, 1.0, 0.999, 0.5};
    const Histogram h = make_histogram(values, 0.5, 1.0);
    CHECK(h.total() == 5);
    CHECK(h.counts.front() == 2);
    CHECK(h.counts.back() == 2);  // 1.0 and 0.999 land in the last bin
}

TEST_CASE("purity ensemble tracks the analytic series within Monte Carlo error") {
    const int steps = 5, n = 3000;
    const EnsembleSeries s = run_purity_ensemble(2, 2, steps, n, 123, pure_ground(2));
    const std::vector<double> analytic = refreshed_series(2, 2, 1.0, 1.0, steps);
    REQUIRE(s.mean.size() == static_cast<std::size_t>(steps + 1));
    for (int t = 0; t <= steps; ++t) {
        const double sigma = s.stddev[t] / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(s.mean[t] - analytic[t]) < 3.0 * sigma + 1e-9);
        CHECK(s.histograms[t].total() == n);
        CHECK(s.stddev[t] >= 0.0);
    }
}

TEST_CASE("degenerate single-trajectory zero-step ensemble") {
    const EnsembleSeries s = run_purity_ensemble(2, 2, 0, 1, 1, pure_ground(2));
    REQUIRE(s.mean.size() == 1);
    CHECK(s.mean[0] == doctest::Approx(1.0));
    CHECK(s.stddev[0] == 0.0);
    CHECK_THROWS_AS(run_purity_ensemble(2, 2, 1, 0, 1, pure_ground(2)), std::invalid_argument);
}

TEST_CASE("ensemble output is identical across worker thread counts") {
    EnsembleSeries one, four;
    {
        ThreadEnvGuard guard("1");
        one = run_purity_ensemble(2, 2, 4, 300, 77, pure_ground(2));
    }
    {
        ThreadEnvGuard guard("4");
        four = run_purity_ensemble(2, 2, 4, 300, 77, pure_ground(2));
    }
    for (std::size_t t = 0; t < one.mean.size(); ++t) {
        CHECK(one.mean[t] == four.mean[t]);  // bitwise
        CHECK(one.stddev[t] == four.stddev[t]);
        CHECK(one.histograms[t].counts == four.histograms[t].counts);
    }
}

TEST_CASE("Lubkin reference sampler moments") {
    const SampleStats ref = sample_lubkin_reference(2, 4, 20000, 5);
    CHECK(std::abs(ref.mean - 2.0 / 3.0) < 0.003);
    CHECK(std::abs(ref.stddev - 0.1005) < 0.003);

    const SampleStats qubits = sample_lubkin_reference(2, 2, 20000, 6);
    CHECK(std::abs(qubits.mean - 0.8) < 0.003);
    // Plain Scott & Caves, no effective-dimension substitution.
    const double predicted = std::sqrt(purity_variance(2, 2));
    const double sigma = predicted / std::sqrt(2.0 * 20000.0);
    CHECK(std::abs(qubits.stddev - predicted) < 3.0 * sigma + 0.002);
}

TEST_CASE("table1 single-row mode") {
    const std::vector<Table1Row> rows = table1_comparison(9, 2000, std::pair{2, 2});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].predicted_std == doctest::Approx(0.1005).epsilon(1e-3));
    CHECK(std::abs(rows[0].simulated_std - rows[0].predicted_std) < 0.01);
}

TEST_CASE("tangle ensemble means are consistent with purity theory at t=1") {
    const TangleEnsemble ens = run_tangle_ensemble(3, 2000, 11);
    REQUIRE(ens.fresh_pair_mean.size() == 3);
    CHECK(std::abs(ens.fresh_pair_mean[0] - 0.4) < 0.02);
    CHECK(std::abs(ens.multi_mean[0]) < 1e-7);
    // tau_chain mean tracks 2 - 2P(t).
    const std::vector<double> p = refreshed_series(2, 2, 1.0, 1.0, 3);
    for (int t = 1; t <= 3; ++t)
        CHECK(std::abs(ens.chain_mean[t - 1] - (2.0 - 2.0 * p[t])) < 0.03);
    CHECK_THROWS_AS(run_tangle_ensemble(25, 1, 1), std::length_error);
}

TEST_CASE("exponential fit recovers exact synthetic parameters") {
    std::vector<double> ts, ys;
    for (int t = 0; t < 10; ++t) {
        ts.push_back(t);
        ys.push_back(0.5 * std::exp(-0.9 * t) + 0.666);
    }
    const FitResult fit = fit_exponential(ts, ys);
    CHECK(fit.amplitude == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(fit.rate == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(fit.offset == doctest::Approx(0.666).epsilon(1e-6));
    CHECK(fit.rms_residual < 1e-8);
}

TEST_CASE("exponential fit of the analytic purity series is exact") {
    const std::vector<double> p = refreshed_series(2, 2, 1.0, 1.0, 9);
    std::vector<double> ts;
    for (int t = 0; t < 10; ++t) ts.push_back(t);
    const FitResult fit = fit_exponential(ts, p);
    CHECK(fit.amplitude == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(fit.rate == doctest::Approx(std::log(2.5)).epsilon(1e-9));
    CHECK(fit.offset == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("exponential fit tolerates noise") {
    RngStream rng(31, 0);
    std::vector<double> ts, ys;
    for (int t = 0; t < 20; ++t) {
        ts.push_back(t * 0.5);
        ys.push_back(0.8 * std::exp(-0.7 * t * 0.5) + 0.2 + 0.005 * rng.normal());
    }
    const FitResult fit = fit_exponential(ts, ys);
    CHECK(fit.amplitude == doctest::Approx(0.8).epsilon(0.05));
    CHECK(fit.rate == doctest::Approx(0.7).epsilon(0.05));
    CHECK(fit.offset == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("fixed-offset fit is a log-linear regression") {
    std::vector<double> ts, ys;
    for (int t = 1; t <= 8; ++t) {
        ts.push_back(t);
        ys.push_back(-1.5 * std::exp(-0.85 * t) + 0.47);
    }
    const FitResult fit = fit_exponential(ts, ys, 0.47);
    CHECK(fit.amplitude == doctest::Approx(-1.5).epsilon(1e-9));
    CHECK(fit.rate == doctest::Approx(0.85).epsilon(1e-9));
    CHECK(fit.offset == doctest::Approx(0.47));
}

TEST_CASE("fit input validation") {
    const std::vector<double> short_ts = {0, 1, 2}, short_ys = {1, 2, 3};
    CHECK_THROWS_AS(fit_exponential(short_ts, short_ys), std::invalid_argument);
    const std::vector<double> ts = {0, 1, 2, 3}, flat = {1, 1, 1, 1};
    CHECK_THROWS_AS(fit_exponential(ts, flat), std::invalid_argument);
}

TEST_CASE("KS test separates distinct distributions and accepts identical ones") {
    RngStream rng(41, 0);
    std::vector<double> a(5000), b(5000), shifted(5000);
    for (int i = 0; i < 5000; ++i) {
        a[i] = rng.normal();
        b[i] = rng.normal();
        shifted[i] = rng.normal() + 0.2;
    }
    CHECK(ks_two_sample(a, b).p_value > 0.01);
    CHECK(ks_two_sample(a, shifted).p_value < 0.001);
}
