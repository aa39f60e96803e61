#pragma once

#include <cstdint>

#include "rankdyn/archive.hpp"
#include "rankdyn/bart.hpp"
#include "rankdyn/rankings.hpp"
#include "rankdyn/rng.hpp"

namespace rankdyn {

/// Cross-sectional Thurstone samplers: ROBART (BART latent mean) and the
/// ROLinear baseline. A panel with T > 1 is treated as independent
/// cross-sections; the lagged-rank variant adds tau_{t-1} as a covariate
/// and models cells from the second period on.
struct StaticModelConfig {
    int n_burnin = 1000;
    int n_draws = 1000;
    int thin = 1;
    BartPrior prior;       // prior.S defaults to 50 for ROBART
    std::uint64_t seed = 0;
    enum Kind { robart, rolinear } kind = robart;
    bool lagged_rank = false;
};

/// One Gibbs scan of the latent scores for every modeled (ranker, time)
/// cell: each z_ij is an exact truncated-normal draw between the scores of
/// its rank neighbors. Layout of z and means: ((t - t0) * M + j) * N + i.
void sample_latent_scores_static(std::vector<double>& z, const std::vector<double>& means,
                                 const RankingPanel& panel, int t0, Rng& rng);

PosteriorArchive robart_fit(const RankingPanel& panel, const StaticModelConfig& config);
PosteriorArchive rolinear_fit(const RankingPanel& panel, const StaticModelConfig& config);
PosteriorArchive static_fit(const RankingPanel& panel, const StaticModelConfig& config);

/// Rank of the posterior-mean item scores, averaged over draws, rankers,
/// and stored time slices. Always a valid permutation.
Ranking posterior_rank_estimate(const PosteriorArchive& archive);

} // namespace rankdyn
