#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rankdyn/rankings.hpp"
#include "rankdyn/rng.hpp"

namespace rankdyn {

/// Synthetic ranking data: static cross-sections and dynamic latent AR
/// panels, with ground truth retained for evaluation.

/// Static scenarios: 1. gamma = x'b, b = (3,2,-1,-0.5), K_x = 4, rho = 0;
/// 2. gamma = x'b + |x|^2, b = (3,2,1), K_x = 3, rho = 0.5;
/// 3. gamma = |x|^2, K_x = 4, rho = 0.5.
struct StaticScenarioSpec {
    int scenario = 1;
    double sigma = 1.0;
    int N = 20;
    int M = 10;
    std::uint64_t seed = 0;

    int K_x() const;
    double rho() const;
};

struct StaticScenarioData {
    RankingPanel panel;        // T = 1, covariates in the item block
    std::vector<double> gamma; // true score per item
};

/// Dynamic scenarios: 1. gamma = 0.1 z^2; 2. gamma = 0.05 z + 0.1 z^2;
/// 3. gamma = 0.1 z x_1 with K_x = 3 pair covariates, rho = 0.5 (the
/// covariate stored at a panel time is the one entering that period's mean).
struct DynamicScenarioSpec {
    int scenario = 1;
    double sigma = 1.0;
    int N = 20;
    int M = 5;
    int T = 52;
    std::uint64_t seed = 0;
};

struct DynamicScenarioData {
    RankingPanel panel;
    std::vector<double> latent; // [t][j][i] over t = 0..T, t = 0 pre-sample

    double latent_at(int t, int j, int i) const
    {
        return latent[(static_cast<size_t>(t) * panel.M() + j) * panel.N() + i];
    }
};

/// n_rows i.i.d. zero-mean multivariate normal rows with Toeplitz
/// covariance rho^|l-m| (drawn through its Cholesky factor); row-major.
std::vector<double> gen_correlated_covariates(int n_rows, int K_x, double rho, Rng& rng);

StaticScenarioData gen_static_scenario(const StaticScenarioSpec& spec);
DynamicScenarioData gen_dynamic_scenario(const DynamicScenarioSpec& spec);

/// Truth sidecars: static `item,gamma`; dynamic `time,ranker,item,z` with
/// time 0 holding the pre-sample state.
void write_truth_static(std::ostream& out, const StaticScenarioData& data);
void write_truth_dynamic(std::ostream& out, const DynamicScenarioData& data);

} // namespace rankdyn
