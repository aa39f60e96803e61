#pragma once

#include <vector>

#include "rankdyn/dynamic_model.hpp"
#include "rankdyn/rankings.hpp"

namespace rankdyn {

/// Per-item mean rank across a set of rankings; entries lie in [1, N].
std::vector<double> borda_scores(const std::vector<Ranking>& rankings);

/// Borda count aggregate: items ordered by ascending mean rank, ties
/// broken by item index.
Ranking borda_count(const std::vector<Ranking>& rankings);
/// Aggregates the rankings of one panel time across all rankers.
Ranking borda_count(const RankingPanel& panel, int time);

/// Linear autoregressive baseline: the dynamic Gibbs sampler with mean
/// alpha + phi z_{ij,t-1} + x' beta under a N(0, 100 I) coefficient prior.
PosteriorArchive arrolinear_fit(const RankingPanel& panel, const DynamicModelConfig& config);

} // namespace rankdyn
