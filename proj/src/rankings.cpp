#include "rankdyn/rankings.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rankdyn {

Ranking::Ranking(std::vector<int> ranks) : ranks_(std::move(ranks))
{
    const int n = static_cast<int>(ranks_.size());
    order_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = ranks_[i];
        if (r < 1 || r > n)
            throw ValidationError("rank " + std::to_string(r) + " out of range for item " +
                                  std::to_string(i + 1));
        if (order_[r - 1] != -1)
            throw ValidationError("duplicate rank " + std::to_string(r));
        order_[r - 1] = i;
    }
}

Ranking validate_ranking(const std::vector<int>& raw)
{
    return Ranking(raw);
}

Ranking rank_of_scores(const ScoreVector& z)
{
    const int n = static_cast<int>(z.size());
    for (double v : z)
        if (!std::isfinite(v))
            throw ValidationError("rank_of_scores: non-finite score");

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    // ascending score; ties broken by ascending item index (stable)
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return z[a] < z[b]; });
    std::vector<int> ranks(n);
    for (int r = 0; r < n; ++r)
        ranks[idx[r]] = r + 1;
    return Ranking(std::move(ranks));
}

double kendall_tau(const Ranking& a, const Ranking& b)
{
    const int n = a.size();
    if (n != b.size())
        throw ValidationError("kendall_tau: rankings have different N");
    if (n < 2)
        throw ValidationError("kendall_tau: need N >= 2");

    long discordant = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool ai = a.rank_of(i) < a.rank_of(j);
            bool bi = b.rank_of(i) < b.rank_of(j);
            if (ai != bi)
                ++discordant;
        }
    return static_cast<double>(discordant) / (0.5 * n * (n - 1));
}

CovariateSet CovariateSet::none(int N, int M, int T)
{
    CovariateSet c;
    c.N = N;
    c.M = M;
    c.T = T;
    return c;
}

RankingPanel::RankingPanel(int N, int M, int T) : N_(N), M_(M), T_(T)
{
    if (N < 1 || M < 1 || T < 1)
        throw ValidationError("RankingPanel: dimensions must be positive");
    cells_.resize(static_cast<size_t>(M) * T);
    filled_.assign(cells_.size(), 0);
    covariates = CovariateSet::none(N, M, T);
    item_labels.resize(N);
    ranker_labels.resize(M);
    time_labels.resize(T);
    for (int i = 0; i < N; ++i)
        item_labels[i] = std::to_string(i + 1);
    for (int j = 0; j < M; ++j)
        ranker_labels[j] = std::to_string(j + 1);
    for (int t = 0; t < T; ++t)
        time_labels[t] = std::to_string(t + 1);
}

const Ranking& RankingPanel::at(int ranker, int time) const
{
    size_t c = static_cast<size_t>(ranker) * T_ + time;
    if (!filled_[c])
        throw InternalError("RankingPanel: cell (" + std::to_string(ranker) + "," +
                            std::to_string(time) + ") is empty");
    return cells_[c];
}

void RankingPanel::set(int ranker, int time, Ranking r)
{
    if (r.size() != N_)
        throw ValidationError("RankingPanel: ranking has wrong N");
    size_t c = static_cast<size_t>(ranker) * T_ + time;
    cells_[c] = std::move(r);
    filled_[c] = 1;
}

bool RankingPanel::complete() const
{
    return std::all_of(filled_.begin(), filled_.end(), [](char f) { return f != 0; });
}

RankingPanel RankingPanel::head(int t_end) const
{
    if (t_end < 1 || t_end > T_)
        throw ConfigError("RankingPanel::head: bad time bound");
    RankingPanel out(N_, M_, t_end);
    out.item_labels = item_labels;
    out.ranker_labels = ranker_labels;
    out.time_labels.assign(time_labels.begin(), time_labels.begin() + t_end);
    for (int j = 0; j < M_; ++j)
        for (int t = 0; t < t_end; ++t)
            out.set(j, t, at(j, t));

    const CovariateSet& cv = covariates;
    CovariateSet sliced;
    sliced.N = N_;
    sliced.M = M_;
    sliced.T = t_end;
    sliced.Ka = cv.Ka;
    sliced.Kr = cv.Kr;
    sliced.Kw = cv.Kw;
    sliced.item.resize(static_cast<size_t>(N_) * t_end * cv.Ka);
    sliced.ranker.resize(static_cast<size_t>(M_) * t_end * cv.Kr);
    sliced.pair.resize(static_cast<size_t>(N_) * M_ * t_end * cv.Kw);
    for (int i = 0; i < N_; ++i)
        for (int t = 0; t < t_end; ++t)
            for (int k = 0; k < cv.Ka; ++k)
                sliced.item[(i * t_end + t) * cv.Ka + k] = cv.item_cov(i, t, k);
    for (int j = 0; j < M_; ++j)
        for (int t = 0; t < t_end; ++t)
            for (int k = 0; k < cv.Kr; ++k)
                sliced.ranker[(j * t_end + t) * cv.Kr + k] = cv.ranker_cov(j, t, k);
    for (int i = 0; i < N_; ++i)
        for (int j = 0; j < M_; ++j)
            for (int t = 0; t < t_end; ++t)
                for (int k = 0; k < cv.Kw; ++k)
                    sliced.pair[((i * M_ + j) * t_end + t) * cv.Kw + k] = cv.pair_cov(i, j, t, k);
    out.covariates = std::move(sliced);
    return out;
}

} // namespace rankdyn
