#pragma once

#include <vector>

#include "rankdyn/bart.hpp"
#include "rankdyn/rankings.hpp"

namespace rankdyn {

/// Exact filtering, prediction, and smoothing for the scalar-lag dynamic
/// model with a fixed forest mean, for a single ranker and small N.
///
/// The forest splits only on the own lagged score, so it is a step function
/// with cells C_1..C_K. Conditional on the cell tuple of z_{t-1}, the state
/// transition is Gaussian with a known mean vector, which makes every
/// filtered and smoothed law a finite mixture of constrained normals. Cell
/// tuple masses are propagated with box integrals
///   J_t[k][m] = int_{box_k cap A_t} prod_i phi(z_i - mu~_{m_i}) dz,
/// where A_t is the order region of the observed ranking, evaluated by
/// masked tensor-grid quadrature on [-8, 8]. The pre-sample masses are
/// products of 1D normal CDF differences and are exact.
///
/// Slices are 1-based (slice t is panel time t-1); slice 0 is the
/// pre-sample state z_0 ~ N(z0_mean, I).
class ExactOracle {
public:
    /// `grid_points` of 0 picks 401 per axis for N <= 2 and 121 for N = 3.
    /// Throws ConfigError for N > 3 or a forest splitting off dimension 0.
    ExactOracle(const Forest& forest, const std::vector<Ranking>& taus,
                  const std::vector<double>& z0_mean, int grid_points = 0);

    int N() const { return N_; }
    int T() const { return T_; }
    int n_cells() const { return K_; }
    int n_tuples() const { return KT_; }

    /// Mean vector mu~_k of the transition out of lag tuple k.
    std::vector<double> tuple_mean(int k) const;
    /// Cell index of each coordinate of lag tuple k.
    std::vector<int> tuple_cells(int k) const;
    int tuple_of_point(const std::vector<double>& z) const;

    /// Unnormalized joint masses q_{k,t} = P(z_t in box_k, tau_{1:t}),
    /// t = 0..T (t = 0 has no ranking constraint).
    const std::vector<double>& filter_mass(int t) const;
    /// Backward function values rho_t(k) = P(tau_{t+1:T} | z_t in box_k),
    /// t = 1..T; constant on cell tuples.
    const std::vector<double>& backward(int t) const;

    /// Mixture weights over lag tuples for slice t in 1..T. Component k of
    /// the filtered mixture is N(mu~_k, I) restricted to A_t; the smoothed
    /// component is additionally tilted by rho_t.
    std::vector<double> filter_weights(int t) const;
    std::vector<double> smoothing_weights(int t) const;

    /// Normalized joint densities at a point, each computed two ways: from
    /// the weighted mixture components, and directly from the unnormalized
    /// masses. The two routes must agree.
    double filter_density_mixture(int t, const std::vector<double>& z) const;
    double filter_density_direct(int t, const std::vector<double>& z) const;
    double smoothing_density_mixture(int t, const std::vector<double>& z) const;
    double smoothing_density_direct(int t, const std::vector<double>& z) const;

    /// Per-item marginal probabilities over histogram bins [edges_b,
    /// edges_{b+1}), plus mass outside the edges folded into the end bins.
    std::vector<double> filter_marginal_hist(int t, int item,
                                             const std::vector<double>& edges) const;
    std::vector<double> smoothing_marginal_hist(int t, int item,
                                                const std::vector<double>& edges) const;

    /// One-step-ahead predictive of z_{T+1}: unconstrained normal mixture
    /// with weights proportional to q_{., T}.
    std::vector<double> predictive_weights() const;
    /// P(rank(z_{T+1}) = r | tau_{1:T}) by grid quadrature.
    double predictive_rank_probability(const Ranking& r) const;

private:
    double component_normalizer(int t, int k) const;      // n_{k,t}
    double smoothing_normalizer(int t, int k) const;      // m_{k,t}
    bool in_order_region(const std::vector<double>& z, const Ranking& tau) const;
    double transition_density(int m, const std::vector<double>& z) const;
    std::vector<double> marginal_hist(int t, int item, const std::vector<double>& edges,
                                      bool smoothed) const;

    int N_, T_, K_, KT_, G_;
    double delta_;
    // per-axis grids, staggered by sub-spacing offsets so no two axes share
    // a value (exact ties would fall out of every strict order region)
    std::vector<std::vector<double>> grid_;
    std::vector<PartitionCell> cells_;
    std::vector<Ranking> taus_;
    std::vector<double> z0_mean_;
    std::vector<std::vector<double>> J_;   // per slice 1..T, KT x KT [k][m]
    std::vector<std::vector<double>> q_;   // per slice 0..T
    std::vector<std::vector<double>> rho_; // per slice 1..T
};

/// Free-function conveniences over ExactOracle.
std::vector<double> exact_filter_oracle(const Forest& forest, const std::vector<Ranking>& taus,
                                        const std::vector<double>& z0_mean, int t, int item,
                                        const std::vector<double>& edges);
std::vector<double> exact_smoothing_oracle(const Forest& forest,
                                           const std::vector<Ranking>& taus,
                                           const std::vector<double>& z0_mean, int t, int item,
                                           const std::vector<double>& edges);
/// Predictive mixture weights and per-tuple means for z_{T+1}.
void predictive_mixture_oracle(const Forest& forest, const std::vector<Ranking>& taus,
                               const std::vector<double>& z0_mean,
                               std::vector<double>& weights,
                               std::vector<std::vector<double>>& means);

} // namespace rankdyn
