#include "rankdyn/simgen.hpp"

#include <cmath>
#include <ostream>

#include "rankdyn/errors.hpp"
#include "rankdyn/mean_model.hpp"
#include "rankdyn/num_text.hpp"

namespace rankdyn {

int StaticScenarioSpec::K_x() const
{
    switch (scenario) {
    case 1: return 4;
    case 2: return 3;
    case 3: return 4;
    default: throw ConfigError("static scenario must be 1, 2, or 3");
    }
}

double StaticScenarioSpec::rho() const
{
    switch (scenario) {
    case 1: return 0.0;
    case 2: return 0.5;
    case 3: return 0.5;
    default: throw ConfigError("static scenario must be 1, 2, or 3");
    }
}

std::vector<double> gen_correlated_covariates(int n_rows, int K_x, double rho, Rng& rng)
{
    if (K_x < 1)
        throw ConfigError("gen_correlated_covariates: K_x must be >= 1");
    if (!(std::abs(rho) < 1.0))
        throw ConfigError("gen_correlated_covariates: |rho| must be < 1");

    std::vector<double> L(static_cast<size_t>(K_x) * K_x);
    for (int l = 0; l < K_x; ++l)
        for (int m = 0; m < K_x; ++m)
            L[l * K_x + m] = std::pow(rho, std::abs(l - m));
    cholesky_factor(L, K_x);

    std::vector<double> X(static_cast<size_t>(n_rows) * K_x);
    std::vector<double> e(K_x);
    for (int r = 0; r < n_rows; ++r) {
        for (int k = 0; k < K_x; ++k)
            e[k] = rng.normal();
        for (int l = 0; l < K_x; ++l) {
            double s = 0.0;
            for (int m = 0; m <= l; ++m)
                s += L[l * K_x + m] * e[m];
            X[static_cast<size_t>(r) * K_x + l] = s;
        }
    }
    return X;
}

StaticScenarioData gen_static_scenario(const StaticScenarioSpec& spec)
{
    if (spec.N < 2 || spec.M < 1)
        throw ConfigError("gen_static_scenario: need N >= 2 and M >= 1");
    if (!(spec.sigma > 0.0))
        throw ConfigError("gen_static_scenario: sigma must be positive");
    const int N = spec.N, M = spec.M, K = spec.K_x();

    Rng rng(spec.seed);
    std::vector<double> X = gen_correlated_covariates(N, K, spec.rho(), rng);

    StaticScenarioData data;
    data.gamma.resize(N);
    for (int i = 0; i < N; ++i) {
        const double* x = X.data() + static_cast<size_t>(i) * K;
        double norm2 = 0.0;
        for (int k = 0; k < K; ++k)
            norm2 += x[k] * x[k];
        double g = 0.0;
        switch (spec.scenario) {
        case 1:
            g = 3.0 * x[0] + 2.0 * x[1] - 1.0 * x[2] - 0.5 * x[3];
            break;
        case 2:
            g = 3.0 * x[0] + 2.0 * x[1] + 1.0 * x[2] + norm2;
            break;
        case 3:
            g = norm2;
            break;
        }
        data.gamma[i] = g;
    }

    data.panel = RankingPanel(N, M, 1);
    CovariateSet& cv = data.panel.covariates;
    cv.N = N;
    cv.M = M;
    cv.T = 1;
    cv.Ka = K;
    cv.item = X;

    ScoreVector z(N);
    for (int j = 0; j < M; ++j) {
        for (int i = 0; i < N; ++i)
            z[i] = data.gamma[i] + spec.sigma * rng.normal();
        data.panel.set(j, 0, rank_of_scores(z));
    }
    return data;
}

DynamicScenarioData gen_dynamic_scenario(const DynamicScenarioSpec& spec)
{
    if (spec.scenario < 1 || spec.scenario > 3)
        throw ConfigError("dynamic scenario must be 1, 2, or 3");
    if (spec.N < 2 || spec.M < 1 || spec.T < 1)
        throw ConfigError("gen_dynamic_scenario: need N >= 2, M >= 1, T >= 1");
    if (!(spec.sigma > 0.0))
        throw ConfigError("gen_dynamic_scenario: sigma must be positive");
    const int N = spec.N, M = spec.M, T = spec.T;
    const int Kw = spec.scenario == 3 ? 3 : 0;

    Rng rng(spec.seed);
    DynamicScenarioData data;
    data.panel = RankingPanel(N, M, T);
    CovariateSet& cv = data.panel.covariates;
    cv.N = N;
    cv.M = M;
    cv.T = T;
    if (Kw > 0) {
        cv.Kw = Kw;
        cv.pair = gen_correlated_covariates(N * M * T, Kw, 0.5, rng);
    }

    data.latent.assign(static_cast<size_t>(T + 1) * M * N, 0.0);
    auto zat = [&](int t, int j, int i) -> double& {
        return data.latent[(static_cast<size_t>(t) * M + j) * N + i];
    };

    ScoreVector z(N);
    for (int j = 0; j < M; ++j)
        for (int i = 0; i < N; ++i)
            zat(0, j, i) = rng.normal();
    for (int t = 1; t <= T; ++t)
        for (int j = 0; j < M; ++j) {
            for (int i = 0; i < N; ++i) {
                double prev = zat(t - 1, j, i);
                double g = 0.0;
                switch (spec.scenario) {
                case 1:
                    g = 0.1 * prev * prev;
                    break;
                case 2:
                    g = 0.05 * prev + 0.1 * prev * prev;
                    break;
                case 3:
                    g = 0.1 * prev * cv.pair_cov(i, j, t - 1, 0);
                    break;
                }
                zat(t, j, i) = g + spec.sigma * rng.normal();
                z[i] = zat(t, j, i);
            }
            data.panel.set(j, t - 1, rank_of_scores(z));
        }
    return data;
}

void write_truth_static(std::ostream& out, const StaticScenarioData& data)
{
    out << "item,gamma\n";
    for (int i = 0; i < data.panel.N(); ++i)
        out << data.panel.item_labels[i] << ',' << format_double(data.gamma[i]) << '\n';
}

void write_truth_dynamic(std::ostream& out, const DynamicScenarioData& data)
{
    out << "time,ranker,item,z\n";
    const int N = data.panel.N(), M = data.panel.M(), T = data.panel.T();
    for (int t = 0; t <= T; ++t)
        for (int j = 0; j < M; ++j)
            for (int i = 0; i < N; ++i)
                out << t << ',' << data.panel.ranker_labels[j] << ','
                    << data.panel.item_labels[i] << ','
                    << format_double(data.latent_at(t, j, i)) << '\n';
}

} // namespace rankdyn
