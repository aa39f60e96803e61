#pragma once

#include <string>
#include <vector>

#include "rankdyn/errors.hpp"

namespace rankdyn {

/// A full ranking of N items: ranks[i] is the rank of item i, a permutation
/// of 1..N. Rank 1 is most preferred; tau_i < tau_j means item i is
/// preferred to item j. Immutable after construction.
class Ranking {
public:
    Ranking() = default;
    /// Validates that `ranks` is a permutation of 1..N; throws
    /// ValidationError naming the offending entry otherwise.
    explicit Ranking(std::vector<int> ranks);

    int size() const { return static_cast<int>(ranks_.size()); }
    int rank_of(int item) const { return ranks_[item]; }
    const std::vector<int>& ranks() const { return ranks_; }

    /// item_at(r) is the item holding rank r (1-based).
    int item_at(int rank) const { return order_[rank - 1]; }
    /// Items listed from most to least preferred.
    const std::vector<int>& order() const { return order_; }

    bool operator==(const Ranking& other) const { return ranks_ == other.ranks_; }

private:
    std::vector<int> ranks_; // ranks_[item] in 1..N
    std::vector<int> order_; // order_[r-1] = item with rank r
};

/// Latent utilities z_1..z_N for one (ranker, time) cell.
using ScoreVector = std::vector<double>;

/// validate_ranking: permutation check on raw 1-based integer input.
Ranking validate_ranking(const std::vector<int>& raw);

/// rank_of_scores: tau_i < tau_j iff z_i < z_j (rank 1 = smallest score);
/// ties broken by ascending item index. Throws on non-finite input.
Ranking rank_of_scores(const ScoreVector& z);

/// Normalized Kendall tau distance: fraction of discordant pairs, in [0,1].
/// Requires equal N >= 2.
double kendall_tau(const Ranking& a, const Ranking& b);

/// Item-, ranker-, and pair-specific covariates on an N x M x T panel.
/// Any of the three blocks may be empty (K = 0). Storage is dense row-major.
struct CovariateSet {
    int N = 0, M = 0, T = 0;
    int Ka = 0, Kr = 0, Kw = 0;
    std::vector<double> item;   // [N][T][Ka]
    std::vector<double> ranker; // [M][T][Kr]
    std::vector<double> pair;   // [N][M][T][Kw]

    double item_cov(int i, int t, int k) const { return item[(i * T + t) * Ka + k]; }
    double ranker_cov(int j, int t, int k) const { return ranker[(j * T + t) * Kr + k]; }
    double pair_cov(int i, int j, int t, int k) const
    {
        return pair[((i * M + j) * T + t) * Kw + k];
    }

    int total_dim() const { return Ka + Kr + Kw; }
    bool empty() const { return total_dim() == 0; }

    static CovariateSet none(int N, int M, int T);
};

/// Complete panel of rankings: one full ranking per (ranker, time) cell.
/// T = 1 encodes the static case.
class RankingPanel {
public:
    RankingPanel() = default;
    RankingPanel(int N, int M, int T);

    int N() const { return N_; }
    int M() const { return M_; }
    int T() const { return T_; }

    const Ranking& at(int ranker, int time) const;
    void set(int ranker, int time, Ranking r);

    /// True once every (ranker, time) cell has been filled.
    bool complete() const;

    /// Panel restricted to times [0, t_end), covariates sliced to match.
    RankingPanel head(int t_end) const;

    /// Opaque external labels, mapped to dense indices in first-appearance
    /// order at ingestion. Defaults are "1".."N" style numerals.
    std::vector<std::string> item_labels, ranker_labels, time_labels;

    CovariateSet covariates;

private:
    int N_ = 0, M_ = 0, T_ = 0;
    std::vector<Ranking> cells_; // [ranker * T + time]
    std::vector<char> filled_;
};

} // namespace rankdyn
