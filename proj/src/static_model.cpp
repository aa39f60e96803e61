#include "rankdyn/static_model.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "rankdyn/errors.hpp"
#include "rankdyn/mean_model.hpp"

namespace rankdyn {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

void verify_ordering(const std::vector<double>& z, const RankingPanel& panel, int t0)
{
    const int N = panel.N(), M = panel.M(), T = panel.T();
    for (int t = t0; t < T; ++t)
        for (int j = 0; j < M; ++j) {
            const Ranking& tau = panel.at(j, t);
            size_t base = (static_cast<size_t>(t - t0) * M + j) * N;
            for (int r = 1; r < N; ++r)
                if (!(z[base + tau.item_at(r)] < z[base + tau.item_at(r + 1)]))
                    throw InternalError("latent ordering constraint violated");
        }
}

} // namespace

void sample_latent_scores_static(std::vector<double>& z, const std::vector<double>& means,
                                 const RankingPanel& panel, int t0, Rng& rng)
{
    const int N = panel.N(), M = panel.M(), T = panel.T();
    for (int t = t0; t < T; ++t)
        for (int j = 0; j < M; ++j) {
            const Ranking& tau = panel.at(j, t);
            size_t base = (static_cast<size_t>(t - t0) * M + j) * N;
            for (int i = 0; i < N; ++i) {
                int r = tau.rank_of(i);
                double lower = (r > 1) ? z[base + tau.item_at(r - 1)] : -kInf;
                double upper = (r < N) ? z[base + tau.item_at(r + 1)] : kInf;
                z[base + i] = truncated_normal_draw(means[base + i], lower, upper, rng);
            }
        }
#ifndef NDEBUG
    verify_ordering(z, panel, t0);
#endif
}

namespace {

// design row per (item, ranker, time) cell: item, ranker, pair covariate
// blocks, then the lagged observed rank when requested
std::vector<double> build_static_design(const RankingPanel& panel, int t0, bool lagged_rank,
                                        int& dim_out)
{
    const int N = panel.N(), M = panel.M(), T = panel.T();
    const CovariateSet& cv = panel.covariates;
    int dim = cv.total_dim() + (lagged_rank ? 1 : 0);
    bool dummy = dim == 0;
    if (dummy)
        dim = 1; // constant column so tree machinery has a domain
    dim_out = dim;

    std::vector<double> X(static_cast<size_t>(N) * M * (T - t0) * dim, 0.0);
    for (int t = t0; t < T; ++t)
        for (int j = 0; j < M; ++j)
            for (int i = 0; i < N; ++i) {
                double* row = X.data() +
                              ((static_cast<size_t>(t - t0) * M + j) * N + i) * dim;
                int p = 0;
                for (int k = 0; k < cv.Ka; ++k)
                    row[p++] = cv.item_cov(i, t, k);
                for (int k = 0; k < cv.Kr; ++k)
                    row[p++] = cv.ranker_cov(j, t, k);
                for (int k = 0; k < cv.Kw; ++k)
                    row[p++] = cv.pair_cov(i, j, t, k);
                if (lagged_rank)
                    row[p++] = panel.at(j, t - 1).rank_of(i);
            }
    return X;
}

} // namespace

PosteriorArchive static_fit(const RankingPanel& panel, const StaticModelConfig& config)
{
    if (!panel.complete())
        throw ValidationError("static_fit: panel is incomplete");
    if (config.n_burnin < 0 || config.n_draws <= 0 || config.thin <= 0)
        throw ConfigError("static_fit: iteration counts must be positive");
    const int N = panel.N(), M = panel.M(), T = panel.T();
    const int t0 = config.lagged_rank ? 1 : 0;
    if (config.lagged_rank && T < 2)
        throw ValidationError("lagged-rank model requires T >= 2");

    int dim = 0;
    std::vector<double> X = build_static_design(panel, t0, config.lagged_rank, dim);
    const int n = N * M * (T - t0);

    std::unique_ptr<MeanModel> model;
    if (config.kind == StaticModelConfig::robart)
        model = std::make_unique<BartMeanModel>(n, dim, config.prior);
    else
        model = std::make_unique<LinearMeanModel>(dim);
    model->set_design(X.data(), n);

    // latent start: ranks through standard-normal quantiles, constraints hold
    std::vector<double> z(n);
    for (int t = t0; t < T; ++t)
        for (int j = 0; j < M; ++j) {
            const Ranking& tau = panel.at(j, t);
            size_t base = (static_cast<size_t>(t - t0) * M + j) * N;
            for (int i = 0; i < N; ++i)
                z[base + i] = normal_quantile((tau.rank_of(i) - 0.5) / N);
        }

    Rng rng(config.seed);
    PosteriorArchive archive;
    archive.seed = config.seed;
    archive.N = N;
    archive.M = M;
    archive.slices = T - t0;
    archive.slice_offset = t0;
    archive.config = { { "model", config.kind == StaticModelConfig::robart ? "robart" : "rolinear" },
                       { "n_burnin", config.n_burnin },
                       { "n_draws", config.n_draws },
                       { "thin", config.thin },
                       { "S", config.prior.S },
                       { "lagged_rank", config.lagged_rank } };

    std::vector<double> means(n);
    const int total = config.n_burnin + config.n_draws * config.thin;
    for (int sweep = 0; sweep < total; ++sweep) {
        for (int i = 0; i < n; ++i)
            means[i] = model->mean_row(i);
        sample_latent_scores_static(z, means, panel, t0, rng);
        model->update(z, rng);

        int past = sweep - config.n_burnin;
        if (past >= 0 && (past + 1) % config.thin == 0) {
            PosteriorDraw draw;
            model->store(draw);
            draw.latent = z;
            archive.draws.push_back(std::move(draw));
        }
    }
    archive.config["acceptance_rate"] = model->acceptance_rate();
    return archive;
}

PosteriorArchive robart_fit(const RankingPanel& panel, const StaticModelConfig& config)
{
    StaticModelConfig c = config;
    c.kind = StaticModelConfig::robart;
    return static_fit(panel, c);
}

PosteriorArchive rolinear_fit(const RankingPanel& panel, const StaticModelConfig& config)
{
    StaticModelConfig c = config;
    c.kind = StaticModelConfig::rolinear;
    return static_fit(panel, c);
}

Ranking posterior_rank_estimate(const PosteriorArchive& archive)
{
    if (archive.draws.empty())
        throw ValidationError("posterior_rank_estimate: empty archive");
    const int N = archive.N, M = archive.M;
    std::vector<double> mean(N, 0.0);
    long count = 0;
    for (const auto& d : archive.draws) {
        int slices = static_cast<int>(d.latent.size()) / (N * M);
        for (int s = 0; s < slices; ++s)
            for (int j = 0; j < M; ++j) {
                for (int i = 0; i < N; ++i)
                    mean[i] += d.latent[(static_cast<size_t>(s) * M + j) * N + i];
            }
        count += static_cast<long>(slices) * M;
    }
    for (double& m : mean)
        m /= static_cast<double>(count);
    return rank_of_scores(mean);
}

} // namespace rankdyn
