#include "collisim/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace collisim {

MarkovMatrix build_markov(int mu, int nu) {
    if (mu < 2 || nu < 2) throw std::invalid_argument("build_markov: dimensions must be >= 2");
    const int L = mu * nu;
    const int n = L * L;
    MarkovMatrix m;
    m.L = L;
    m.entries = Eigen::MatrixXd::Constant(n, n, 1.0 / (n - 1));
    m.entries.col(0).setZero();
    m.entries.row(0).setZero();
    m.entries(0, 0) = 1.0;
    return m;
}

std::vector<double> markov_evolve(const std::vector<double>& c2, const MarkovMatrix& m, int steps) {
    const Eigen::Index n = m.entries.rows();
    if (static_cast<Eigen::Index>(c2.size()) != n)
        throw std::invalid_argument("markov_evolve: coefficient vector length does not match matrix");
    Eigen::RowVectorXd v = Eigen::Map<const Eigen::RowVectorXd>(c2.data(), n);
    for (int s = 0; s < steps; ++s) v = v * m.entries;
    return {v.data(), v.data() + n};
}

double equilibrium_purity_map(double p_se, int mu, int nu) {
    const double L = static_cast<double>(mu) * nu;
    if (p_se < 1.0 / L - 1e-12 || p_se > 1.0 + 1e-12)
        throw std::invalid_argument("equilibrium_purity_map: joint purity out of range [1/(mu*nu), 1]");
    return 1.0 / mu + (mu * mu - 1.0) / (mu * (L * L - 1.0)) * (L * p_se - 1.0);
}

std::vector<double> refreshed_series(int mu, int nu, double p_eta, double p0, int steps) {
    if (p0 < 1.0 / mu - 1e-12 || p0 > 1.0 + 1e-12)
        throw std::invalid_argument("refreshed_series: initial purity out of range");
    if (p_eta < 1.0 / nu - 1e-12 || p_eta > 1.0 + 1e-12)
        throw std::invalid_argument("refreshed_series: ancilla purity out of range");
    const bool mixed = p_eta < 1.0 - 1e-12;
    if (mixed && (mu != 2 || nu != 2))
        throw std::invalid_argument(
            "refreshed_series: mixed ancilla is only supported for mu=nu=2");

    std::vector<double> series;
    series.reserve(steps + 1);
    series.push_back(p0);
    double p = p0;
    for (int t = 0; t < steps; ++t) {
        if (mu == 2 && nu == 2) {
            p = 0.5 + 0.1 * (4.0 * p * p_eta - 1.0);
        } else {
            p = equilibrium_purity_map(p, mu, nu);
        }
        series.push_back(p);
    }
    return series;
}

double steady_state_purity(int mu, int nu) {
    return lubkin_purity(mu, mu * nu);
}

double lubkin_purity(int mu, int nu_env) {
    return (mu + nu_env) / (static_cast<double>(mu) * nu_env + 1.0);
}

DecayRate decay_rate(int mu, int nu) {
    DecayRate r;
    const double L = static_cast<double>(mu) * nu;
    r.alpha = nu * (mu * mu - 1.0) / (L * L - 1.0);
    r.lambda = -std::log(r.alpha);
    return r;
}

double purity_variance(int mu, int nu_env) {
    if (mu < 2 || nu_env < 2) throw std::invalid_argument("purity_variance: dimensions must be >= 2");
    const double m = mu, n = nu_env, mn = m * n;
    return 2.0 * (m * m - 1.0) * (n * n - 1.0) / ((mn + 3.0) * (mn + 2.0) * (mn + 1.0) * (mn + 1.0));
}

}  // namespace collisim
