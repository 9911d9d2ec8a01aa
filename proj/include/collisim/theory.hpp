#pragma once

#include <vector>

#include <Eigen/Dense>

namespace collisim {

/// Ensemble-averaged evolution of the squared basis coefficients under one
/// Haar collision: row 0 is (1,0,...,0), every other row uniformly mixes the
/// remaining components with weight 1/(L^2-1), L = mu*nu.
struct MarkovMatrix {
    int L = 0;                  // product dimension mu*nu
    Eigen::MatrixXd entries;    // (L^2) x (L^2), row-stochastic
};

MarkovMatrix build_markov(int mu, int nu);

/// c2(t+1) = c2(t) * M, applied `steps` times (row-vector convention).
std::vector<double> markov_evolve(const std::vector<double>& c2, const MarkovMatrix& m, int steps);

/// System purity of the Markov equilibrium state with joint purity p_se:
/// 1/mu + (mu^2-1)/(mu*(L^2-1)) * (L*p_se - 1).
double equilibrium_purity_map(double p_se, int mu, int nu);

/// Deterministic ensemble-mean purity recursion, P(0) = p0. Mixed ancilla
/// (p_eta < 1) is supported only for mu = nu = 2; the qudit recursion is
/// derived for pure ancillas only.
std::vector<double> refreshed_series(int mu, int nu, double p_eta, double p0, int steps);

/// (mu + mu*nu) / (mu*mu*nu + 1): the pure-ancilla steady state, equal to
/// the Lubkin purity with effective environment dimension mu*nu.
double steady_state_purity(int mu, int nu);

/// Lubkin mean marginal purity (a+b)/(ab+1) of a Haar-random bipartite pure
/// state on dimensions a x b.
double lubkin_purity(int mu, int nu_env);

struct DecayRate {
    double alpha = 0.0;   // per-collision contraction of P(t) - P(inf)
    double lambda = 0.0;  // -ln(alpha), nats per collision
};
DecayRate decay_rate(int mu, int nu);

/// Scott & Caves variance of the marginal purity of a Haar-random pure state
/// on mu x nu_env. Pass nu_env = mu*nu for the collision-model steady state.
double purity_variance(int mu, int nu_env);

}  // namespace collisim
