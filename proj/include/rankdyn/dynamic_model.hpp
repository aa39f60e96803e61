#pragma once

#include <cstdint>
#include <vector>

#include "rankdyn/archive.hpp"
#include "rankdyn/mean_model.hpp"
#include "rankdyn/rankings.hpp"
#include "rankdyn/rng.hpp"

namespace rankdyn {

/// Autoregressive Thurstone samplers: latent scores follow
/// z_t = f(X_t) + eps with X_t carrying the lagged latent score, optional
/// exogenous covariates, and optionally the lagged observed rank.
struct DynamicModelConfig {
    int n_burnin = 1000;
    int n_draws = 1000;
    int thin = 1;
    BartPrior prior;                  // prior.S defaults to 25 for ARROBART
    std::uint64_t seed = 0;
    std::vector<double> z_prior_mean; // initial-state prior mean; empty = zeros

    /// own_scalar_lag: item i's mean depends on its own lagged score
    /// z_{ij,t-1} (scalar-partition reading). full_vector_lag: the whole
    /// lagged vector z_{j,t-1} enters the covariate row.
    enum LagInput { own_scalar_lag, full_vector_lag } lag_input = own_scalar_lag;
    bool exogenous = false;   // include the panel's covariate blocks
    bool lagged_rank = false; // include tau_{ij,t-1} as a covariate
    enum Kind { bart, linear } kind = bart;

    DynamicModelConfig() { prior.S = 25; }
};

/// Latent scores over slices t = 0..T (slice 0 is the pre-sample state;
/// slice t corresponds to panel time t-1).
struct LatentState {
    int N = 0, M = 0, T = 0;
    std::vector<double> z; // ((t * M) + j) * N + i

    LatentState() = default;
    LatentState(int N_, int M_, int T_)
        : N(N_), M(M_), T(T_), z(static_cast<size_t>(T_ + 1) * M_ * N_, 0.0)
    {
    }
    double& at(int t, int j, int i) { return z[(static_cast<size_t>(t) * M + j) * N + i]; }
    double at(int t, int j, int i) const { return z[(static_cast<size_t>(t) * M + j) * N + i]; }
};

/// Covariate-row assembly for the dynamic design. Rows exist for slices
/// t = t_first()..T; with the lagged-rank covariate the first slice has no
/// design row (its lagged rank does not exist) and is tied to the prior.
class DynamicDesign {
public:
    DynamicDesign(const RankingPanel& panel, const DynamicModelConfig& config);

    int dim() const { return dim_; }
    int t_first() const { return t_first_; }
    int n_rows() const { return n_rows_; }
    int row_index(int i, int j, int t) const
    {
        return ((t - t_first_) * M_ + j) * N_ + i;
    }
    /// Fills the covariate row for observation (i, j, slice t) from the
    /// current latent state.
    void fill_row(int i, int j, int t, const LatentState& z, double* out) const;
    /// Rebuilds the full row-major matrix (lag columns move every sweep).
    void fill_matrix(const LatentState& z, std::vector<double>& X) const;

private:
    const RankingPanel& panel_;
    DynamicModelConfig::LagInput lag_;
    bool exogenous_, lagged_rank_;
    int N_, M_, T_, dim_, t_first_, n_rows_;
};

/// One Metropolis-within-Gibbs pass over the latent path, forward in time.
/// The proposal at each site is the measurement-and-constraint truncated
/// normal; the acceptance ratio is the t+1 transition factor (unity at
/// t = T). The pre-sample slice is proposed from its prior.
void sample_latent_path(LatentState& state, const MeanModel& model, const RankingPanel& panel,
                        const DynamicModelConfig& config, Rng& rng);
/// Same pass with a fixed forest as the mean function.
void sample_latent_path(LatentState& state, const Forest& forest, const RankingPanel& panel,
                        const DynamicModelConfig& config, Rng& rng);

PosteriorArchive dynamic_fit(const RankingPanel& panel, const DynamicModelConfig& config);
PosteriorArchive arrobart_fit(const RankingPanel& panel, const DynamicModelConfig& config);

struct ForecastResult {
    int N = 0, M = 0;
    /// P(item i gets rank r) per ranker: [j][i][r], each j-slice doubly
    /// stochastic up to Monte Carlo error.
    std::vector<double> rank_prob;
    std::vector<Ranking> point;       // rank of mean predictive scores, per ranker
    std::vector<double> mean_scores;  // [j][i]

    double prob(int j, int i, int r) const
    {
        return rank_prob[(static_cast<size_t>(j) * N + i) * N + (r - 1)];
    }
};

/// Posterior predictive of z_{T+1} pushed through rank_of_scores.
/// `panel` supplies covariates at the forecast period when it extends past
/// the fitted window (otherwise the last fitted period's are reused).
ForecastResult forecast_one_step(const PosteriorArchive& archive, const RankingPanel& panel,
                                 const DynamicModelConfig& config, int n_sims_per_draw,
                                 Rng& rng);

} // namespace rankdyn
