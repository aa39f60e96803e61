#include "rankdyn/archive.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>

#include "rankdyn/errors.hpp"
#include "rankdyn/num_text.hpp"

namespace rankdyn {

namespace fs = std::filesystem;

void PosteriorArchive::save(const std::string& dir) const
{
    fs::create_directories(dir);

    {
        nlohmann::json meta = config;
        meta["_archive"] = { { "seed", seed },
                             { "N", N },
                             { "M", M },
                             { "slices", slices },
                             { "slice_offset", slice_offset },
                             { "n_draws", draws.size() } };
        std::ofstream out(fs::path(dir) / "config.json", std::ios::binary);
        if (!out)
            throw ConfigError("cannot write archive config in " + dir);
        out << meta.dump(2) << "\n";
    }

    {
        std::ofstream out(fs::path(dir) / "draws.txt", std::ios::binary);
        for (size_t d = 0; d < draws.size(); ++d) {
            out << "draw " << d << "\n";
            if (draws[d].forest.size() > 0) {
                write_forest(out, draws[d].forest);
            } else {
                out << "beta " << draws[d].beta.size();
                for (double b : draws[d].beta)
                    out << " " << format_double(b);
                out << "\n";
            }
        }
    }

    {
        std::ofstream out(fs::path(dir) / "latent.bin", std::ios::binary);
        std::int64_t hdr[4] = { static_cast<std::int64_t>(draws.size()), slices, M, N };
        out.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
        for (const auto& d : draws)
            out.write(reinterpret_cast<const char*>(d.latent.data()),
                      static_cast<std::streamsize>(d.latent.size() * sizeof(double)));
    }
}

PosteriorArchive PosteriorArchive::load(const std::string& dir)
{
    PosteriorArchive a;

    {
        std::ifstream in(fs::path(dir) / "config.json");
        if (!in)
            throw ConfigError("cannot read archive config in " + dir);
        nlohmann::json meta = nlohmann::json::parse(in);
        auto arch = meta.at("_archive");
        a.seed = arch.at("seed").get<std::uint64_t>();
        a.N = arch.at("N").get<int>();
        a.M = arch.at("M").get<int>();
        a.slices = arch.at("slices").get<int>();
        a.slice_offset = arch.at("slice_offset").get<int>();
        meta.erase("_archive");
        a.config = std::move(meta);
    }

    size_t n_draws = 0;
    {
        std::ifstream in(fs::path(dir) / "latent.bin", std::ios::binary);
        if (!in)
            throw ConfigError("cannot read latent.bin in " + dir);
        std::int64_t hdr[4];
        in.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
        if (!in || hdr[1] != a.slices || hdr[2] != a.M || hdr[3] != a.N)
            throw ValidationError("latent.bin header does not match config");
        n_draws = static_cast<size_t>(hdr[0]);
        a.draws.resize(n_draws);
        size_t len = static_cast<size_t>(a.slices) * a.M * a.N;
        for (auto& d : a.draws) {
            d.latent.resize(len);
            in.read(reinterpret_cast<char*>(d.latent.data()),
                    static_cast<std::streamsize>(len * sizeof(double)));
            if (!in)
                throw ValidationError("latent.bin truncated");
        }
    }

    {
        std::ifstream in(fs::path(dir) / "draws.txt");
        if (!in)
            throw ConfigError("cannot read draws.txt in " + dir);
        for (size_t d = 0; d < n_draws; ++d) {
            std::string tag;
            size_t idx;
            if (!(in >> tag >> idx) || tag != "draw" || idx != d)
                throw ValidationError("draws.txt: bad draw header");
            auto pos = in.tellg();
            in >> tag;
            in.seekg(pos);
            if (tag == "forest") {
                a.draws[d].forest = read_forest(in);
            } else if (tag == "beta") {
                size_t k;
                in >> tag >> k;
                a.draws[d].beta.resize(k);
                for (size_t q = 0; q < k; ++q) {
                    std::string v;
                    in >> v;
                    a.draws[d].beta[q] = parse_double(v);
                }
            } else {
                throw ValidationError("draws.txt: unknown block '" + tag + "'");
            }
        }
    }

    return a;
}

} // namespace rankdyn
