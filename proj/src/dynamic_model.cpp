#include "rankdyn/dynamic_model.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "rankdyn/errors.hpp"

namespace rankdyn {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

inline double log_phi_resid(double resid)
{
    return -0.5 * resid * resid; // constants cancel in ratios
}

} // namespace

DynamicDesign::DynamicDesign(const RankingPanel& panel, const DynamicModelConfig& config)
    : panel_(panel), lag_(config.lag_input), exogenous_(config.exogenous),
      lagged_rank_(config.lagged_rank), N_(panel.N()), M_(panel.M()), T_(panel.T())
{
    dim_ = (lag_ == DynamicModelConfig::own_scalar_lag) ? 1 : N_;
    if (exogenous_)
        dim_ += panel_.covariates.total_dim();
    if (lagged_rank_)
        dim_ += 1;
    t_first_ = lagged_rank_ ? 2 : 1;
    n_rows_ = N_ * M_ * (T_ - t_first_ + 1);
}

void DynamicDesign::fill_row(int i, int j, int t, const LatentState& z, double* out) const
{
    int p = 0;
    if (lag_ == DynamicModelConfig::own_scalar_lag) {
        out[p++] = z.at(t - 1, j, i);
    } else {
        for (int i2 = 0; i2 < N_; ++i2)
            out[p++] = z.at(t - 1, j, i2);
    }
    if (exogenous_) {
        const CovariateSet& cv = panel_.covariates;
        int tt = t - 1; // panel time of slice t
        for (int k = 0; k < cv.Ka; ++k)
            out[p++] = cv.item_cov(i, tt, k);
        for (int k = 0; k < cv.Kr; ++k)
            out[p++] = cv.ranker_cov(j, tt, k);
        for (int k = 0; k < cv.Kw; ++k)
            out[p++] = cv.pair_cov(i, j, tt, k);
    }
    if (lagged_rank_)
        out[p++] = panel_.at(j, t - 2).rank_of(i);
}

void DynamicDesign::fill_matrix(const LatentState& z, std::vector<double>& X) const
{
    X.resize(static_cast<size_t>(n_rows_) * dim_);
    for (int t = t_first_; t <= T_; ++t)
        for (int j = 0; j < M_; ++j)
            for (int i = 0; i < N_; ++i)
                fill_row(i, j, t, z, X.data() + static_cast<size_t>(row_index(i, j, t)) * dim_);
}

namespace {

class PathUpdater {
public:
    PathUpdater(const RankingPanel& panel, const DynamicModelConfig& config,
                const MeanModel& model)
        : panel_(panel), config_(config), model_(model), design_(panel, config),
          row_(design_.dim())
    {
        prior_mean_ = config.z_prior_mean;
        if (prior_mean_.empty())
            prior_mean_.assign(panel.N(), 0.0);
        if (static_cast<int>(prior_mean_.size()) != panel.N())
            throw ConfigError("z_prior_mean has wrong length");
    }

    void run(LatentState& z, Rng& rng)
    {
        const int M = panel_.M(), T = panel_.T();
        for (int j = 0; j < M; ++j) {
            if (design_.t_first() == 1)
                update_presample(z, j, rng);
            for (int t = 1; t <= T; ++t)
                update_slice(z, j, t, rng);
        }
#ifndef NDEBUG
        verify(z);
#endif
    }

private:
    double mean_at(int i, int j, int t, const LatentState& z)
    {
        design_.fill_row(i, j, t, z, row_.data());
        return model_.mean_of(row_.data());
    }

    // forward transition log-factor for the rows at slice t+1 affected by
    // z_{ij,t}; `value` is substituted for the current z_{ij,t}
    double forward_logfactor(int i, int j, int t, double value, LatentState& z)
    {
        double save = z.at(t, j, i);
        z.at(t, j, i) = value;
        double lf = 0.0;
        if (config_.lag_input == DynamicModelConfig::own_scalar_lag) {
            lf = log_phi_resid(z.at(t + 1, j, i) - mean_at(i, j, t + 1, z));
        } else {
            for (int i2 = 0; i2 < panel_.N(); ++i2)
                lf += log_phi_resid(z.at(t + 1, j, i2) - mean_at(i2, j, t + 1, z));
        }
        z.at(t, j, i) = save;
        return lf;
    }

    void update_presample(LatentState& z, int j, Rng& rng)
    {
        for (int i = 0; i < panel_.N(); ++i) {
            double cur = z.at(0, j, i);
            double prop = prior_mean_[i] + rng.normal();
            double lr = forward_logfactor(i, j, 0, prop, z) -
                        forward_logfactor(i, j, 0, cur, z);
            if (std::log(rng.uniform_open()) < lr)
                z.at(0, j, i) = prop;
        }
    }

    void update_slice(LatentState& z, int j, int t, Rng& rng)
    {
        const int N = panel_.N(), T = panel_.T();
        const Ranking& tau = panel_.at(j, t - 1);
        const bool has_forward = (t < T) && (t + 1 >= design_.t_first());
        for (int i = 0; i < N; ++i) {
            int r = tau.rank_of(i);
            double lower = (r > 1) ? z.at(t, j, tau.item_at(r - 1)) : -kInf;
            double upper = (r < N) ? z.at(t, j, tau.item_at(r + 1)) : kInf;
            double m = (t >= design_.t_first()) ? mean_at(i, j, t, z) : prior_mean_[i];
            double prop = truncated_normal_draw(m, lower, upper, rng);
            if (!has_forward) {
                z.at(t, j, i) = prop;
                continue;
            }
            double cur = z.at(t, j, i);
            double lr = forward_logfactor(i, j, t, prop, z) -
                        forward_logfactor(i, j, t, cur, z);
            if (std::log(rng.uniform_open()) < lr)
                z.at(t, j, i) = prop;
        }
    }

    void verify(const LatentState& z) const
    {
        for (int j = 0; j < panel_.M(); ++j)
            for (int t = 1; t <= panel_.T(); ++t) {
                const Ranking& tau = panel_.at(j, t - 1);
                for (int r = 1; r < panel_.N(); ++r)
                    if (!(z.at(t, j, tau.item_at(r)) < z.at(t, j, tau.item_at(r + 1))))
                        throw InternalError("latent path ordering violated");
            }
    }

    const RankingPanel& panel_;
    const DynamicModelConfig& config_;
    const MeanModel& model_;
    DynamicDesign design_;
    std::vector<double> row_;
    std::vector<double> prior_mean_;
};

/// Fixed-forest adapter so the path sampler can run with the regression
/// function held constant.
class FixedForestMean final : public MeanModel {
public:
    explicit FixedForestMean(const Forest& f) : forest_(f) {}
    void set_design(const double*, int) override {}
    void update(const std::vector<double>&, Rng&) override {}
    double mean_row(int) const override { throw InternalError("FixedForestMean: no design"); }
    double mean_of(const double* x) const override { return forest_.evaluate(x); }
    void store(PosteriorDraw& d) const override { d.forest = forest_; }
    void restore(const PosteriorDraw&) override {}
    int dim() const override { return forest_.dim; }

private:
    const Forest& forest_;
};

} // namespace

void sample_latent_path(LatentState& state, const MeanModel& model, const RankingPanel& panel,
                        const DynamicModelConfig& config, Rng& rng)
{
    PathUpdater updater(panel, config, model);
    updater.run(state, rng);
}

void sample_latent_path(LatentState& state, const Forest& forest, const RankingPanel& panel,
                        const DynamicModelConfig& config, Rng& rng)
{
    FixedForestMean mean(forest);
    PathUpdater updater(panel, config, mean);
    updater.run(state, rng);
}

PosteriorArchive dynamic_fit(const RankingPanel& panel, const DynamicModelConfig& config)
{
    if (!panel.complete())
        throw ValidationError("dynamic_fit: panel is incomplete");
    if (panel.T() < 2)
        throw ValidationError("dynamic model requires T >= 2");
    if (config.n_burnin < 0 || config.n_draws <= 0 || config.thin <= 0)
        throw ConfigError("dynamic_fit: iteration counts must be positive");

    const int N = panel.N(), M = panel.M(), T = panel.T();
    DynamicDesign design(panel, config);
    const int n = design.n_rows();

    std::unique_ptr<MeanModel> model;
    if (config.kind == DynamicModelConfig::bart)
        model = std::make_unique<BartMeanModel>(n, design.dim(), config.prior);
    else
        model = std::make_unique<LinearMeanModel>(design.dim());

    LatentState z(N, M, T);
    std::vector<double> prior_mean = config.z_prior_mean;
    if (prior_mean.empty())
        prior_mean.assign(N, 0.0);
    for (int j = 0; j < M; ++j) {
        for (int i = 0; i < N; ++i)
            z.at(0, j, i) = prior_mean[i];
        for (int t = 1; t <= T; ++t) {
            const Ranking& tau = panel.at(j, t - 1);
            for (int i = 0; i < N; ++i)
                z.at(t, j, i) = normal_quantile((tau.rank_of(i) - 0.5) / N);
        }
    }

    std::vector<double> X;
    design.fill_matrix(z, X);
    model->set_design(X.data(), n);

    Rng rng(config.seed);
    PosteriorArchive archive;
    archive.seed = config.seed;
    archive.N = N;
    archive.M = M;
    archive.slices = T + 1;
    archive.slice_offset = -1;
    archive.config = { { "model", config.kind == DynamicModelConfig::bart ? "arrobart"
                                                                          : "arrolinear" },
                       { "n_burnin", config.n_burnin },
                       { "n_draws", config.n_draws },
                       { "thin", config.thin },
                       { "S", config.prior.S },
                       { "lag_input", config.lag_input == DynamicModelConfig::own_scalar_lag
                                          ? "own_scalar_lag"
                                          : "full_vector_lag" },
                       { "exogenous", config.exogenous },
                       { "lagged_rank", config.lagged_rank } };

    std::vector<double> targets(n);
    const int total = config.n_burnin + config.n_draws * config.thin;
    for (int sweep = 0; sweep < total; ++sweep) {
        sample_latent_path(z, *model, panel, config, rng);

        design.fill_matrix(z, X);
        model->set_design(X.data(), n);
        for (int t = design.t_first(); t <= T; ++t)
            for (int j = 0; j < M; ++j)
                for (int i = 0; i < N; ++i)
                    targets[design.row_index(i, j, t)] = z.at(t, j, i);
        model->update(targets, rng);

        int past = sweep - config.n_burnin;
        if (past >= 0 && (past + 1) % config.thin == 0) {
            PosteriorDraw draw;
            model->store(draw);
            draw.latent = z.z;
            archive.draws.push_back(std::move(draw));
        }
    }
    archive.config["acceptance_rate"] = model->acceptance_rate();
    return archive;
}

PosteriorArchive arrobart_fit(const RankingPanel& panel, const DynamicModelConfig& config)
{
    DynamicModelConfig c = config;
    c.kind = DynamicModelConfig::bart;
    return dynamic_fit(panel, c);
}

ForecastResult forecast_one_step(const PosteriorArchive& archive, const RankingPanel& panel,
                                 const DynamicModelConfig& config, int n_sims_per_draw,
                                 Rng& rng)
{
    if (archive.draws.empty())
        throw ValidationError("forecast_one_step: empty archive");
    if (archive.slice_offset != -1)
        throw ValidationError("forecast_one_step: archive is not from a dynamic fit");
    const int N = archive.N, M = archive.M;
    const int T_fit = archive.slices - 1;   // fitted periods
    const int t_fc = T_fit;                 // panel time of the forecast period
    const CovariateSet& cv = panel.covariates;
    const int t_cov = std::min(t_fc, panel.T() - 1);

    const bool own_lag = config.lag_input == DynamicModelConfig::own_scalar_lag;
    int dim = own_lag ? 1 : N;
    if (config.exogenous)
        dim += cv.total_dim();
    if (config.lagged_rank)
        dim += 1;

    ForecastResult res;
    res.N = N;
    res.M = M;
    res.rank_prob.assign(static_cast<size_t>(M) * N * N, 0.0);
    res.mean_scores.assign(static_cast<size_t>(M) * N, 0.0);

    std::vector<double> x(dim), mean(N), zstar(N);
    long total_sims = 0;
    for (const auto& draw : archive.draws) {
        for (int j = 0; j < M; ++j) {
            for (int i = 0; i < N; ++i) {
                int p = 0;
                if (own_lag) {
                    x[p++] = archive.latent_at(draw, T_fit, j, i);
                } else {
                    for (int i2 = 0; i2 < N; ++i2)
                        x[p++] = archive.latent_at(draw, T_fit, j, i2);
                }
                if (config.exogenous) {
                    for (int k = 0; k < cv.Ka; ++k)
                        x[p++] = cv.item_cov(i, t_cov, k);
                    for (int k = 0; k < cv.Kr; ++k)
                        x[p++] = cv.ranker_cov(j, t_cov, k);
                    for (int k = 0; k < cv.Kw; ++k)
                        x[p++] = cv.pair_cov(i, j, t_cov, k);
                }
                if (config.lagged_rank)
                    x[p++] = panel.at(j, t_fc - 1).rank_of(i);

                if (draw.forest.size() > 0) {
                    mean[i] = draw.forest.evaluate(x.data());
                } else {
                    double m = draw.beta.at(0);
                    for (int k = 0; k < dim; ++k)
                        m += draw.beta.at(k + 1) * x[k];
                    mean[i] = m;
                }
            }
            for (int sim = 0; sim < n_sims_per_draw; ++sim) {
                for (int i = 0; i < N; ++i) {
                    zstar[i] = mean[i] + rng.normal();
                    res.mean_scores[static_cast<size_t>(j) * N + i] += zstar[i];
                }
                Ranking r = rank_of_scores(zstar);
                for (int i = 0; i < N; ++i)
                    res.rank_prob[(static_cast<size_t>(j) * N + i) * N + (r.rank_of(i) - 1)] +=
                        1.0;
            }
        }
    }
    total_sims = static_cast<long>(archive.draws.size()) * n_sims_per_draw;
    for (double& p : res.rank_prob)
        p /= static_cast<double>(total_sims);
    for (double& s : res.mean_scores)
        s /= static_cast<double>(total_sims);

    res.point.reserve(M);
    for (int j = 0; j < M; ++j) {
        ScoreVector s(res.mean_scores.begin() + static_cast<size_t>(j) * N,
                      res.mean_scores.begin() + static_cast<size_t>(j + 1) * N);
        res.point.push_back(rank_of_scores(s));
    }
    return res;
}

} // namespace rankdyn
