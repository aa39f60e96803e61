#include "rankdyn/baselines.hpp"

#include "rankdyn/errors.hpp"

namespace rankdyn {

std::vector<double> borda_scores(const std::vector<Ranking>& rankings)
{
    if (rankings.empty())
        throw ValidationError("borda_count: no rankings");
    const int N = rankings[0].size();
    std::vector<double> mean(N, 0.0);
    for (const Ranking& r : rankings) {
        if (r.size() != N)
            throw ValidationError("borda_count: inconsistent ranking sizes");
        for (int i = 0; i < N; ++i)
            mean[i] += r.rank_of(i);
    }
    for (double& m : mean)
        m /= static_cast<double>(rankings.size());
    return mean;
}

Ranking borda_count(const std::vector<Ranking>& rankings)
{
    return rank_of_scores(borda_scores(rankings));
}

Ranking borda_count(const RankingPanel& panel, int time)
{
    std::vector<Ranking> rs;
    rs.reserve(panel.M());
    for (int j = 0; j < panel.M(); ++j)
        rs.push_back(panel.at(j, time));
    return borda_count(rs);
}

PosteriorArchive arrolinear_fit(const RankingPanel& panel, const DynamicModelConfig& config)
{
    DynamicModelConfig c = config;
    c.kind = DynamicModelConfig::linear;
    return dynamic_fit(panel, c);
}

} // namespace rankdyn
