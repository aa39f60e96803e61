#include "rankdyn/oracles.hpp"

#include <cmath>

#include "rankdyn/errors.hpp"
#include "rankdyn/rng.hpp"

namespace rankdyn {

namespace {

const double kTwoPi = 6.283185307179586476925286766559;

inline double normal_pdf(double r)
{
    return std::exp(-0.5 * r * r) / std::sqrt(kTwoPi);
}

inline double normalize(std::vector<double>& w)
{
    double s = 0.0;
    for (double v : w)
        s += v;
    if (s <= 0.0)
        throw InternalError("oracle: degenerate weight vector");
    for (double& v : w)
        v /= s;
    return s;
}

} // namespace

ExactOracle::ExactOracle(const Forest& forest, const std::vector<Ranking>& taus,
                             const std::vector<double>& z0_mean, int grid_points)
    : taus_(taus), z0_mean_(z0_mean)
{
    if (taus_.empty())
        throw ConfigError("oracle: needs at least one ranking");
    N_ = taus_[0].size();
    T_ = static_cast<int>(taus_.size());
    for (const Ranking& tau : taus_)
        if (tau.size() != N_)
            throw ConfigError("oracle: inconsistent ranking sizes");
    if (static_cast<int>(z0_mean_.size()) != N_)
        throw ConfigError("oracle: z0_mean has wrong length");
    if (N_ > 3)
        throw ConfigError("oracle: exact tables limited to N <= 3");

    cells_ = induced_partition(forest, 0);
    K_ = static_cast<int>(cells_.size());
    KT_ = 1;
    for (int i = 0; i < N_; ++i)
        KT_ *= K_;

    G_ = grid_points > 0 ? grid_points : (N_ <= 2 ? 401 : 121);
    delta_ = 16.0 / G_;
    grid_.assign(N_, std::vector<double>(G_));
    for (int i = 0; i < N_; ++i)
        for (int g = 0; g < G_; ++g)
            grid_[i][g] = -8.0 + (g + (i + 0.5) / N_) * delta_;

    // 1D transition density of each cell's mean, tabulated per axis
    std::vector<std::vector<std::vector<double>>> dens(
        N_, std::vector<std::vector<double>>(K_, std::vector<double>(G_)));
    for (int i = 0; i < N_; ++i)
        for (int c = 0; c < K_; ++c)
            for (int g = 0; g < G_; ++g)
                dens[i][c][g] = normal_pdf(grid_[i][g] - cells_[c].mu_sum);

    // grid-point cell lookup per axis
    std::vector<std::vector<int>> cell_of_grid(N_, std::vector<int>(G_, -1));
    for (int i = 0; i < N_; ++i)
        for (int g = 0; g < G_; ++g)
            for (int c = 0; c < K_; ++c)
                if (cells_[c].contains(grid_[i][g])) {
                    cell_of_grid[i][g] = c;
                    break;
                }

    double vol = 1.0;
    for (int i = 0; i < N_; ++i)
        vol *= delta_;

    J_.assign(T_, std::vector<double>(static_cast<size_t>(KT_) * KT_, 0.0));
    std::vector<int> gi(N_, 0);
    std::vector<double> prod(KT_);
    for (int t = 1; t <= T_; ++t) {
        std::vector<double>& J = J_[t - 1];
        const Ranking& tau = taus_[t - 1];
        std::fill(gi.begin(), gi.end(), 0);
        for (;;) {
            bool ordered = true;
            for (int r = 1; r < N_ && ordered; ++r) {
                int a = tau.item_at(r), b = tau.item_at(r + 1);
                ordered = grid_[a][gi[a]] < grid_[b][gi[b]];
            }
            if (ordered) {
                int k = 0, pw = 1;
                for (int i = 0; i < N_; ++i) {
                    k += cell_of_grid[i][gi[i]] * pw;
                    pw *= K_;
                }
                for (int m = 0; m < KT_; ++m) {
                    double w = 1.0;
                    int mm = m;
                    for (int i = 0; i < N_; ++i) {
                        w *= dens[i][mm % K_][gi[i]];
                        mm /= K_;
                    }
                    J[static_cast<size_t>(k) * KT_ + m] += w;
                }
            }
            int axis = 0;
            while (axis < N_ && ++gi[axis] == G_)
                gi[axis++] = 0;
            if (axis == N_)
                break;
        }
        for (double& v : J)
            v *= vol;
    }

    // pre-sample masses: exact products of normal CDF differences
    q_.assign(T_ + 1, std::vector<double>(KT_, 0.0));
    for (int m = 0; m < KT_; ++m) {
        double p = 1.0;
        int mm = m;
        for (int i = 0; i < N_; ++i) {
            const PartitionCell& c = cells_[mm % K_];
            mm /= K_;
            double hi = std::isinf(c.hi) ? 1.0 : normal_cdf(c.hi - z0_mean_[i]);
            double lo = std::isinf(c.lo) ? 0.0 : normal_cdf(c.lo - z0_mean_[i]);
            p *= hi - lo;
        }
        q_[0][m] = p;
    }
    for (int t = 1; t <= T_; ++t) {
        const std::vector<double>& J = J_[t - 1];
        for (int k = 0; k < KT_; ++k) {
            double s = 0.0;
            for (int m = 0; m < KT_; ++m)
                s += q_[t - 1][m] * J[static_cast<size_t>(k) * KT_ + m];
            q_[t][k] = s;
        }
    }

    rho_.assign(T_ + 1, std::vector<double>(KT_, 1.0));
    for (int t = T_ - 1; t >= 1; --t) {
        const std::vector<double>& J = J_[t]; // slice t+1 table
        for (int k = 0; k < KT_; ++k) {
            double s = 0.0;
            for (int m = 0; m < KT_; ++m)
                s += rho_[t + 1][m] * J[static_cast<size_t>(m) * KT_ + k];
            rho_[t][k] = s;
        }
    }
}

std::vector<int> ExactOracle::tuple_cells(int k) const
{
    std::vector<int> c(N_);
    for (int i = 0; i < N_; ++i) {
        c[i] = k % K_;
        k /= K_;
    }
    return c;
}

std::vector<double> ExactOracle::tuple_mean(int k) const
{
    std::vector<double> m(N_);
    for (int i = 0; i < N_; ++i) {
        m[i] = cells_[k % K_].mu_sum;
        k /= K_;
    }
    return m;
}

int ExactOracle::tuple_of_point(const std::vector<double>& z) const
{
    int k = 0, pw = 1;
    for (int i = 0; i < N_; ++i) {
        int c = -1;
        for (int cc = 0; cc < K_; ++cc)
            if (cells_[cc].contains(z[i])) {
                c = cc;
                break;
            }
        if (c < 0)
            throw InternalError("oracle: point escapes the partition");
        k += c * pw;
        pw *= K_;
    }
    return k;
}

const std::vector<double>& ExactOracle::filter_mass(int t) const
{
    if (t < 0 || t > T_)
        throw ConfigError("oracle: slice out of range");
    return q_[t];
}

const std::vector<double>& ExactOracle::backward(int t) const
{
    if (t < 1 || t > T_)
        throw ConfigError("oracle: slice out of range");
    return rho_[t];
}

bool ExactOracle::in_order_region(const std::vector<double>& z, const Ranking& tau) const
{
    for (int r = 1; r < N_; ++r)
        if (!(z[tau.item_at(r)] < z[tau.item_at(r + 1)]))
            return false;
    return true;
}

double ExactOracle::transition_density(int m, const std::vector<double>& z) const
{
    double p = 1.0;
    for (int i = 0; i < N_; ++i) {
        p *= normal_pdf(z[i] - cells_[m % K_].mu_sum);
        m /= K_;
    }
    return p;
}

double ExactOracle::component_normalizer(int t, int k) const
{
    const std::vector<double>& J = J_[t - 1];
    double s = 0.0;
    for (int k2 = 0; k2 < KT_; ++k2)
        s += J[static_cast<size_t>(k2) * KT_ + k];
    return s;
}

double ExactOracle::smoothing_normalizer(int t, int k) const
{
    const std::vector<double>& J = J_[t - 1];
    double s = 0.0;
    for (int m = 0; m < KT_; ++m)
        s += rho_[t][m] * J[static_cast<size_t>(m) * KT_ + k];
    return s;
}

std::vector<double> ExactOracle::filter_weights(int t) const
{
    if (t < 1 || t > T_)
        throw ConfigError("oracle: slice out of range");
    std::vector<double> w(KT_);
    for (int k = 0; k < KT_; ++k)
        w[k] = q_[t - 1][k] * component_normalizer(t, k);
    normalize(w);
    return w;
}

std::vector<double> ExactOracle::smoothing_weights(int t) const
{
    if (t < 1 || t > T_)
        throw ConfigError("oracle: slice out of range");
    std::vector<double> w(KT_);
    for (int k = 0; k < KT_; ++k)
        w[k] = q_[t - 1][k] * smoothing_normalizer(t, k);
    normalize(w);
    return w;
}

double ExactOracle::filter_density_mixture(int t, const std::vector<double>& z) const
{
    if (!in_order_region(z, taus_[t - 1]))
        return 0.0;
    std::vector<double> w = filter_weights(t);
    double d = 0.0;
    for (int k = 0; k < KT_; ++k) {
        if (w[k] <= 0.0)
            continue;
        d += w[k] * transition_density(k, z) / component_normalizer(t, k);
    }
    return d;
}

double ExactOracle::filter_density_direct(int t, const std::vector<double>& z) const
{
    if (t < 1 || t > T_)
        throw ConfigError("oracle: slice out of range");
    if (!in_order_region(z, taus_[t - 1]))
        return 0.0;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < KT_; ++k) {
        num += q_[t - 1][k] * transition_density(k, z);
        den += q_[t][k];
    }
    return num / den;
}

double ExactOracle::smoothing_density_mixture(int t, const std::vector<double>& z) const
{
    if (!in_order_region(z, taus_[t - 1]))
        return 0.0;
    std::vector<double> w = smoothing_weights(t);
    double tilt = rho_[t][tuple_of_point(z)];
    double d = 0.0;
    for (int k = 0; k < KT_; ++k) {
        if (w[k] <= 0.0)
            continue;
        d += w[k] * transition_density(k, z) * tilt / smoothing_normalizer(t, k);
    }
    return d;
}

double ExactOracle::smoothing_density_direct(int t, const std::vector<double>& z) const
{
    if (t < 1 || t > T_)
        throw ConfigError("oracle: slice out of range");
    if (!in_order_region(z, taus_[t - 1]))
        return 0.0;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < KT_; ++k) {
        num += q_[t - 1][k] * transition_density(k, z);
        den += q_[t - 1][k] * smoothing_normalizer(t, k);
    }
    return num * rho_[t][tuple_of_point(z)] / den;
}

std::vector<double> ExactOracle::marginal_hist(int t, int item,
                                                 const std::vector<double>& edges,
                                                 bool smoothed) const
{
    if (t < 1 || t > T_)
        throw ConfigError("oracle: slice out of range");
    if (item < 0 || item >= N_)
        throw ConfigError("oracle: item out of range");
    if (edges.size() < 2)
        throw ConfigError("oracle: need at least two bin edges");
    const int B = static_cast<int>(edges.size()) - 1;
    const Ranking& tau = taus_[t - 1];

    // overlap fractions of each grid cell with the bins along the item
    // axis (summing point masses into bins directly aliases: a bin holds a
    // fractional number of grid cells)
    std::vector<std::vector<std::pair<int, double>>> bin_frac(G_);
    for (int g = 0; g < G_; ++g) {
        double lo = grid_[item][g] - 0.5 * delta_, hi = lo + delta_;
        if (hi <= edges.front()) {
            bin_frac[g].emplace_back(0, 1.0);
            continue;
        }
        if (lo >= edges.back()) {
            bin_frac[g].emplace_back(B - 1, 1.0);
            continue;
        }
        if (lo < edges.front())
            bin_frac[g].emplace_back(0, (edges.front() - lo) / delta_);
        if (hi > edges.back())
            bin_frac[g].emplace_back(B - 1, (hi - edges.back()) / delta_);
        for (int b = 0; b < B; ++b) {
            double ov = std::min(hi, edges[b + 1]) - std::max(lo, edges[b]);
            if (ov > 0.0)
                bin_frac[g].emplace_back(b, ov / delta_);
        }
    }

    std::vector<double> hist(B, 0.0);
    std::vector<int> gi(N_, 0);
    std::vector<double> z(N_);
    for (;;) {
        for (int i = 0; i < N_; ++i)
            z[i] = grid_[i][gi[i]];
        if (in_order_region(z, tau)) {
            double v = 0.0;
            for (int k = 0; k < KT_; ++k)
                v += q_[t - 1][k] * transition_density(k, z);
            if (smoothed)
                v *= rho_[t][tuple_of_point(z)];
            for (const auto& [b, frac] : bin_frac[gi[item]])
                hist[b] += v * frac;
        }
        int axis = 0;
        while (axis < N_ && ++gi[axis] == G_)
            gi[axis++] = 0;
        if (axis == N_)
            break;
    }
    normalize(hist);
    return hist;
}

std::vector<double> ExactOracle::filter_marginal_hist(int t, int item,
                                                        const std::vector<double>& edges) const
{
    return marginal_hist(t, item, edges, false);
}

std::vector<double> ExactOracle::smoothing_marginal_hist(
    int t, int item, const std::vector<double>& edges) const
{
    return marginal_hist(t, item, edges, true);
}

std::vector<double> ExactOracle::predictive_weights() const
{
    std::vector<double> w = q_[T_];
    normalize(w);
    return w;
}

double ExactOracle::predictive_rank_probability(const Ranking& r) const
{
    if (r.size() != N_)
        throw ConfigError("oracle: ranking size mismatch");
    std::vector<double> w = predictive_weights();
    double vol = 1.0;
    for (int i = 0; i < N_; ++i)
        vol *= delta_;

    double p = 0.0;
    std::vector<int> gi(N_, 0);
    std::vector<double> z(N_);
    for (;;) {
        for (int i = 0; i < N_; ++i)
            z[i] = grid_[i][gi[i]];
        if (in_order_region(z, r)) {
            double v = 0.0;
            for (int k = 0; k < KT_; ++k)
                v += w[k] * transition_density(k, z);
            p += v;
        }
        int axis = 0;
        while (axis < N_ && ++gi[axis] == G_)
            gi[axis++] = 0;
        if (axis == N_)
            break;
    }
    return p * vol;
}

std::vector<double> exact_filter_oracle(const Forest& forest, const std::vector<Ranking>& taus,
                                        const std::vector<double>& z0_mean, int t, int item,
                                        const std::vector<double>& edges)
{
    ExactOracle oracle(forest, taus, z0_mean);
    return oracle.filter_marginal_hist(t, item, edges);
}

std::vector<double> exact_smoothing_oracle(const Forest& forest,
                                           const std::vector<Ranking>& taus,
                                           const std::vector<double>& z0_mean, int t, int item,
                                           const std::vector<double>& edges)
{
    ExactOracle oracle(forest, taus, z0_mean);
    return oracle.smoothing_marginal_hist(t, item, edges);
}

void predictive_mixture_oracle(const Forest& forest, const std::vector<Ranking>& taus,
                               const std::vector<double>& z0_mean,
                               std::vector<double>& weights,
                               std::vector<std::vector<double>>& means)
{
    ExactOracle oracle(forest, taus, z0_mean);
    weights = oracle.predictive_weights();
    means.clear();
    means.reserve(oracle.n_tuples());
    for (int k = 0; k < oracle.n_tuples(); ++k)
        means.push_back(oracle.tuple_mean(k));
}

} // namespace rankdyn
