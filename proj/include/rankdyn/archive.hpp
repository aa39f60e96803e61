#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rankdyn/bart.hpp"

namespace rankdyn {

/// One stored MCMC draw: a forest (BART models) or a coefficient vector
/// (linear models), plus the latent-score state at that draw.
struct PosteriorDraw {
    Forest forest;              // size 0 when the model is linear
    std::vector<double> beta;   // empty when the model is a forest
    std::vector<double> latent; // [slice][ranker][item], row-major
};

/// Stored MCMC output with enough bookkeeping to replay or forecast:
/// config snapshot, seed, dimensions, and the draws themselves.
struct PosteriorArchive {
    nlohmann::json config;
    std::uint64_t seed = 0;
    int N = 0, M = 0;
    int slices = 0;      // latent time slices per draw (static: obs cells; dynamic: T+1)
    int slice_offset = 0;// panel time of slice 0 (dynamic: -1 encodes z_0)
    std::vector<PosteriorDraw> draws;

    double latent_at(const PosteriorDraw& d, int slice, int ranker, int item) const
    {
        return d.latent[(static_cast<size_t>(slice) * M + ranker) * N + item];
    }

    /// Directory layout: config.json, draws.txt (forests/betas),
    /// latent.bin (dimension header + row-major 64-bit floats).
    void save(const std::string& dir) const;
    static PosteriorArchive load(const std::string& dir);
};

} // namespace rankdyn
