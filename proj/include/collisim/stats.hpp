#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "collisim/linalg.hpp"

namespace collisim {

/// Worker count for trajectory fan-out: COLLISIM_THREADS, 0 or unset = auto.
/// Results are reduced in trajectory-index order, so the thread count never
/// affects output values.
int worker_threads();

/// Runs fn(0..n-1), partitioned across worker_threads() threads.
void parallel_for(int n, const std::function<void(int)>& fn);

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<long long> counts;  // 50 uniform bins

    long long total() const;
};

Histogram make_histogram(std::span<const double> values, double lo, double hi, int bins = 50);

struct EnsembleSeries {
    std::vector<int> steps;
    std::vector<double> mean;
    std::vector<double> stddev;
    int n_traj = 0;
    std::vector<Histogram> histograms;          // one per step
    std::vector<std::vector<double>> samples;   // per step, per trajectory
};

/// Ensemble of refreshed-mode purity trajectories, pure |0> system start.
/// Trajectory k draws from RngStream(seed, k).
EnsembleSeries run_purity_ensemble(int mu, int nu, int steps, int n_traj, std::uint64_t seed,
                                   const Matrix& eta);

struct SampleStats {
    double mean = 0.0;
    double stddev = 0.0;
    Histogram histogram;
    std::vector<double> samples;
};

/// Marginal purity of Haar-random pure states on mu x nu_env (normalized
/// Ginibre vectors), the Lubkin/Scott-Caves reference distribution.
SampleStats sample_lubkin_reference(int mu, int nu_env, int n_samples, std::uint64_t seed);

struct Table1Row {
    int mu = 0;
    int nu = 0;
    double predicted_std = 0.0;
    double simulated_std = 0.0;
};

/// Steady-state purity spread for the six (mu, nu) pairs (or one pair if
/// given): predicted from the effective-dimension Scott & Caves formula,
/// simulated from ensembles run for ceil(6/lambda) collisions.
std::vector<Table1Row> table1_comparison(std::uint64_t seed, int n_traj,
                                         std::optional<std::pair<int, int>> only = std::nullopt);

struct TangleEnsemble {
    int steps = 0;
    int n_traj = 0;
    std::vector<std::vector<double>> pairwise_mean;  // [t-1][j-1], j = 1..t
    std::vector<double> chain_mean;                  // [t-1]
    std::vector<double> multi_mean;                  // [t-1]
    std::vector<double> fresh_pair_mean;             // tau_{0|t}(t), [t-1]
};

/// Chain-mode qubit ensemble with per-step tangle means.
TangleEnsemble run_tangle_ensemble(int steps, int n_traj, std::uint64_t seed);

struct FitResult {
    double amplitude = 0.0;  // A in y = A*exp(-lambda*t) + B
    double rate = 0.0;       // lambda
    double offset = 0.0;     // B
    double rms_residual = 0.0;
};

/// Least-squares fit of y = A*exp(-lambda*t) + B. Free-offset fits use
/// Gauss-Newton with Levenberg damping; with fix_offset the problem is
/// linear in log(y - B).
FitResult fit_exponential(std::span<const double> ts, std::span<const double> ys,
                          std::optional<double> fix_offset = std::nullopt);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace collisim
