#include "collisim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "collisim/collision.hpp"
#include "collisim/entangle.hpp"
#include "collisim/theory.hpp"

namespace collisim {

namespace {

// Stream-id offsets keep the ensembles spawned by one command statistically
// independent of each other under a shared seed.
constexpr std::uint64_t kLubkinStreamBase = std::uint64_t{1} << 32;

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
};

Moments moments(std::span<const double> xs) {
    Moments m;
    if (xs.empty()) return m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.stddev = std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0));
    }
    return m;
}

}  // namespace

int worker_threads() {
    const char* env = std::getenv("COLLISIM_THREADS");
    long n = 0;
    if (env && *env) n = std::strtol(env, nullptr, 10);
    if (n <= 0) n = static_cast<long>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return static_cast<int>(n);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(worker_threads(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

long long Histogram::total() const {
    long long s = 0;
    for (long long c : counts) s += c;
    return s;
}

Histogram make_histogram(std::span<const double> values, double lo, double hi, int bins) {
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(bins, 0);
    const double width = (hi - lo) / bins;
    for (double v : values) {
        int b = static_cast<int>(std::floor((v - lo) / width));
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[b];
    }
    return h;
}

EnsembleSeries run_purity_ensemble(int mu, int nu, int steps, int n_traj, std::uint64_t seed,
                                   const Matrix& eta) {
    if (n_traj < 1) throw std::invalid_argument("run_purity_ensemble: need at least one trajectory");

    Matrix rho0 = Matrix::Zero(mu, mu);
    rho0(0, 0) = 1.0;

    std::vector<std::vector<double>> per_traj(n_traj);
    parallel_for(n_traj, [&](int k) {
        RefreshedConfig cfg{mu, nu, eta, steps, RngStream(seed, static_cast<std::uint64_t>(k))};
        per_traj[k] = run_refreshed_trajectory(cfg, rho0);
    });

    EnsembleSeries series;
    series.n_traj = n_traj;
    for (int t = 0; t <= steps; ++t) {
        std::vector<double> at_step(n_traj);
        for (int k = 0; k < n_traj; ++k) at_step[k] = per_traj[k][t];
        const Moments m = moments(at_step);
        series.steps.push_back(t);
        series.mean.push_back(m.mean);
        series.stddev.push_back(m.stddev);
        series.histograms.push_back(make_histogram(at_step, 1.0 / mu, 1.0));
        series.samples.push_back(std::move(at_step));
    }
    return series;
}

SampleStats sample_lubkin_reference(int mu, int nu_env, int n_samples, std::uint64_t seed) {
    if (mu < 2 || nu_env < 2)
        throw std::invalid_argument("sample_lubkin_reference: dimensions must be >= 2");
    if (n_samples < 1) throw std::invalid_argument("sample_lubkin_reference: need samples");

    SampleStats stats;
    stats.samples.resize(n_samples);
    const int dim = mu * nu_env;
    parallel_for(n_samples, [&](int k) {
        RngStream rng(seed, kLubkinStreamBase + static_cast<std::uint64_t>(k));
        StateVec psi(dim);
        for (int i = 0; i < dim; ++i) psi(i) = cdouble(rng.normal(), rng.normal());
        psi.normalize();
        // System marginal purity straight from the amplitudes.
        Matrix rho = Matrix::Zero(mu, mu);
        for (int p = 0; p < mu; ++p)
            for (int q = 0; q < mu; ++q)
                for (int e = 0; e < nu_env; ++e)
                    rho(p, q) += psi(p * nu_env + e) * std::conj(psi(q * nu_env + e));
        stats.samples[k] = purity(rho);
    });
    const Moments m = moments(stats.samples);
    stats.mean = m.mean;
    stats.stddev = m.stddev;
    stats.histogram = make_histogram(stats.samples, 1.0 / mu, 1.0);
    return stats;
}

std::vector<Table1Row> table1_comparison(std::uint64_t seed, int n_traj,
                                         std::optional<std::pair<int, int>> only) {
    static const std::vector<std::pair<int, int>> all_rows = {
        {2, 2}, {2, 3}, {3, 2}, {4, 2}, {2, 4}, {3, 3}};
    std::vector<std::pair<int, int>> rows = only ? std::vector{*only} : all_rows;

    std::vector<Table1Row> table;
    for (auto [mu, nu] : rows) {
        const int steps = static_cast<int>(std::ceil(6.0 / decay_rate(mu, nu).lambda));
        Matrix eta = Matrix::Zero(nu, nu);
        eta(0, 0) = 1.0;
        const EnsembleSeries series = run_purity_ensemble(mu, nu, steps, n_traj, seed, eta);
        Table1Row row;
        row.mu = mu;
        row.nu = nu;
        row.predicted_std = std::sqrt(purity_variance(mu, mu * nu));
        row.simulated_std = series.stddev.back();
        table.push_back(row);
    }
    return table;
}

TangleEnsemble run_tangle_ensemble(int steps, int n_traj, std::uint64_t seed) {
    if (steps < 1 || n_traj < 1)
        throw std::invalid_argument("run_tangle_ensemble: need steps >= 1 and trajectories >= 1");

    if ((std::size_t{2} << steps) > (std::size_t{1} << 20))
        throw std::length_error("run_tangle_ensemble: step count exceeds the chain-mode cap");
    StateVec zero2(2);
    zero2 << 1.0, 0.0;

    // Per-trajectory flat records: for each t, [pairwise(1..t), chain, multi].
    const std::size_t rec_len = static_cast<std::size_t>(steps) * (steps + 1) / 2 + 2 * steps;
    std::vector<std::vector<double>> per_traj(n_traj);
    parallel_for(n_traj, [&](int k) {
        RngStream rng(seed, static_cast<std::uint64_t>(k));
        ChainState state(zero2, zero2);
        std::vector<double>& rec = per_traj[k];
        rec.reserve(rec_len);
        for (int t = 1; t <= steps; ++t) {
            state.collide(rng);
            const TangleRecord r = multipartite_tangle(state);
            rec.insert(rec.end(), r.pairwise.begin(), r.pairwise.end());
            rec.push_back(r.tau_chain);
            rec.push_back(r.tau_multi);
        }
    });

    TangleEnsemble out;
    out.steps = steps;
    out.n_traj = n_traj;
    out.pairwise_mean.assign(steps, {});
    out.chain_mean.assign(steps, 0.0);
    out.multi_mean.assign(steps, 0.0);
    std::size_t off = 0;
    for (int t = 1; t <= steps; ++t) {
        out.pairwise_mean[t - 1].assign(t, 0.0);
        for (int k = 0; k < n_traj; ++k) {
            const std::vector<double>& rec = per_traj[k];
            for (int j = 0; j < t; ++j) out.pairwise_mean[t - 1][j] += rec[off + j];
            out.chain_mean[t - 1] += rec[off + t];
            out.multi_mean[t - 1] += rec[off + t + 1];
        }
        for (int j = 0; j < t; ++j) out.pairwise_mean[t - 1][j] /= n_traj;
        out.chain_mean[t - 1] /= n_traj;
        out.multi_mean[t - 1] /= n_traj;
        out.fresh_pair_mean.push_back(out.pairwise_mean[t - 1][t - 1]);
        off += static_cast<std::size_t>(t) + 2;
    }
    return out;
}

FitResult fit_exponential(std::span<const double> ts, std::span<const double> ys,
                          std::optional<double> fix_offset) {
    const std::size_t n = ts.size();
    if (n < 4 || ys.size() != n)
        throw std::invalid_argument("fit_exponential: need at least 4 matched points");
    if (*std::max_element(ys.begin(), ys.end()) - *std::min_element(ys.begin(), ys.end()) < 1e-15)
        throw std::invalid_argument("fit_exponential: constant data");

    auto rms = [&](double a, double lam, double b) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ys[i] - (a * std::exp(-lam * ts[i]) + b);
            ss += r * r;
        }
        return std::sqrt(ss / n);
    };

    if (fix_offset) {
        // Linear regression of log|y - B| against t.
        const double b = *fix_offset;
        const double sign = (ys[0] - b) >= 0.0 ? 1.0 : -1.0;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t used = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = sign * (ys[i] - b);
            if (d <= 0.0) continue;
            const double ly = std::log(d);
            sx += ts[i];
            sy += ly;
            sxx += ts[i] * ts[i];
            sxy += ts[i] * ly;
            ++used;
        }
        if (used < 2) throw std::runtime_error("fit_exponential: offset-fixed data not one-signed");
        const double denom = used * sxx - sx * sx;
        const double slope = (used * sxy - sx * sy) / denom;
        const double inter = (sy - slope * sx) / used;
        FitResult fit;
        fit.rate = -slope;
        fit.amplitude = sign * std::exp(inter);
        fit.offset = b;
        fit.rms_residual = rms(fit.amplitude, fit.rate, fit.offset);
        return fit;
    }

    // Initial guess per the free-offset scheme: B = last sample, lambda from
    // the log-slope of first differences, A to match the first sample.
    double b = ys[n - 1];
    double lam = 0.5;
    {
        const double d0 = ys[1] - ys[0];
        const double d1 = ys[2] - ys[1];
        if (d0 * d1 > 0.0 && std::abs(d1) < std::abs(d0) && ts[1] != ts[0])
            lam = std::log(std::abs(d0) / std::abs(d1)) / (ts[2] - ts[1]);
        if (!(lam > 1e-6)) lam = 0.5;
    }
    double a = (ys[0] - b) / std::exp(-lam * ts[0]);
    if (a == 0.0) a = ys[0] - b + 1e-6;

    double damping = 1e-3;
    double prev_ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (a * std::exp(-lam * ts[i]) + b);
        prev_ss += r * r;
    }
    const int max_iter = 200;
    for (int iter = 0; iter < max_iter; ++iter) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-lam * ts[i]);
            const double r = ys[i] - (a * e + b);
            Eigen::Vector3d j(e, -a * ts[i] * e, 1.0);  // d(model)/d(a, lam, b)
            jtj += j * j.transpose();
            jtr += j * r;
        }
        Eigen::Matrix3d damped = jtj;
        damped.diagonal() += damping * jtj.diagonal();
        const Eigen::Vector3d delta = damped.ldlt().solve(jtr);

        const double na = a + delta(0), nlam = lam + delta(1), nb = b + delta(2);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ys[i] - (na * std::exp(-nlam * ts[i]) + nb);
            ss += r * r;
        }
        if (ss <= prev_ss) {
            a = na;
            lam = nlam;
            b = nb;
            prev_ss = ss;
            damping = std::max(damping * 0.5, 1e-12);
            if (delta.cwiseAbs().maxCoeff() < 1e-12) break;
        } else {
            damping *= 4.0;
            if (damping > 1e12) {
                std::ostringstream msg;
                msg << "fit_exponential: no convergence (iter " << iter << ", damping " << damping
                    << ", rss " << prev_ss << ")";
                throw std::runtime_error(msg.str());
            }
        }
        if (iter == max_iter - 1 && damping > 1e6) {
            std::ostringstream msg;
            msg << "fit_exponential: iteration cap reached without convergence (rss " << prev_ss
                << ")";
            throw std::runtime_error(msg.str());
        }
    }

    FitResult fit;
    fit.amplitude = a;
    fit.rate = lam;
    fit.offset = b;
    fit.rms_residual = rms(a, lam, b);
    return fit;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    double d = 0.0;
    std::size_t i = 0, j = 0;
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    while (i < sa.size() && j < sb.size()) {
        if (sa[i] <= sb[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }

    const double ne = std::sqrt(na * nb / (na + nb));
    const double lambda = (ne + 0.12 + 0.11 / ne) * d;
    double p = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        p += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    KsResult res;
    res.statistic = d;
    res.p_value = std::clamp(2.0 * p, 0.0, 1.0);
    return res;
}

}  // namespace collisim
