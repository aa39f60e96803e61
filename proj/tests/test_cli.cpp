#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "rankdyn/cli.hpp"

using namespace rankdyn;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args)
{
    args.insert(args.begin(), "rankdyn");
    std::vector<char*> argv;
    for (std::string& a : args)
        argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch()
{
    static fs::path base = [] {
        fs::path p = fs::temp_directory_path() / "rankdyn_cli_test";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return base;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> fields(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

TEST_CASE("simulate is deterministic and honors its flags")
{
    fs::path a = scratch() / "sim_a", b = scratch() / "sim_b";
    std::vector<std::string> args = { "simulate", "--kind", "dynamic", "--scenario", "1",
                                      "--items", "4", "--rankers", "2", "--periods", "8",
                                      "--sigma", "1.0", "--seed", "7" };
    auto with_out = [&](const fs::path& p) {
        auto v = args;
        v.push_back("--out");
        v.push_back(p.string());
        return v;
    };
    REQUIRE(run(with_out(a)) == 0);
    REQUIRE(run(with_out(b)) == 0);
    CHECK(slurp(a / "data.csv") == slurp(b / "data.csv"));
    CHECK(slurp(a / "truth.csv") == slurp(b / "truth.csv"));

    std::string head;
    std::istringstream in(slurp(a / "data.csv"));
    std::getline(in, head);
    CHECK(head == "time,ranker,item,rank");
}

TEST_CASE("config errors exit with code 2")
{
    fs::path out = scratch() / "err";
    CHECK(run({ "simulate", "--kind", "dynamic", "--sigma", "-1", "--out",
                out.string() }) == 2);
    CHECK(run({ "simulate", "--kind", "sideways", "--out", out.string() }) == 2);

    // valid dataset for the fit checks
    fs::path data = scratch() / "sim_small";
    REQUIRE(run({ "simulate", "--kind", "dynamic", "--items", "3", "--rankers", "1",
                  "--periods", "4", "--out", data.string() }) == 0);
    std::string csv = (data / "data.csv").string();
    CHECK(run({ "fit", "--data", csv, "--model", "superbart", "--out",
                out.string() }) == 2);
    CHECK(run({ "fit", "--data", csv, "--model", "arrobartx_lag", "--out",
                out.string() }) == 2);

    fs::path cfgp = scratch() / "bad_key.json";
    std::ofstream(cfgp) << R"({"data": ")" << csv
                        << R"(", "model": "rolinear", "bogus_knob": 1, "out": ")"
                        << (scratch() / "x").string() << "\"}";
    CHECK(run({ "fit", "--config", cfgp.string() }) == 2);
    CHECK(run({ "fit", "--config", (scratch() / "absent.json").string() }) == 2);
}

TEST_CASE("data validation errors exit with code 3")
{
    fs::path stat = scratch() / "sim_static";
    REQUIRE(run({ "simulate", "--kind", "static", "--scenario", "1", "--items", "5",
                  "--rankers", "2", "--out", stat.string() }) == 0);
    // a dynamic model on a T = 1 panel
    CHECK(run({ "fit", "--data", (stat / "data.csv").string(), "--model", "arrobart",
                "--out", (scratch() / "x").string() }) == 3);

    fs::path bad = scratch() / "bad.csv";
    std::ofstream(bad) << "time,ranker,item,rank\n1,1,a,1\n1,1,b,oops\n";
    CHECK(run({ "fit", "--data", bad.string(), "--model", "rolinear", "--out",
                (scratch() / "x").string() }) == 3);
}

TEST_CASE("fit writes a deterministic archive")
{
    fs::path stat = scratch() / "sim_static";
    std::string csv = (stat / "data.csv").string();
    fs::path a = scratch() / "fit_a", b = scratch() / "fit_b";
    std::vector<std::string> base = { "fit", "--data", csv, "--model", "robart",
                                      "--burnin", "20", "--draws", "10", "--trees", "5",
                                      "--seed", "3" };
    auto with_out = [&](const fs::path& p) {
        auto v = base;
        v.push_back("--out");
        v.push_back(p.string());
        return v;
    };
    REQUIRE(run(with_out(a)) == 0);
    REQUIRE(run(with_out(b)) == 0);
    for (const char* f : { "config.json", "draws.txt", "latent.bin" })
        CHECK(slurp(a / f) == slurp(b / f));

    nlohmann::json meta = nlohmann::json::parse(slurp(a / "config.json"));
    CHECK(meta.at("model") == "robart");
    CHECK(meta.at("_archive").at("n_draws") == 10);
}

TEST_CASE("forecast output is a valid predictive distribution")
{
    fs::path data = scratch() / "sim_a"; // from the simulate test: N=4 M=2 T=8
    fs::path out = scratch() / "fc_arrobart";
    REQUIRE(run({ "forecast", "--data", (data / "data.csv").string(), "--model",
                  "arrobart", "--burnin", "20", "--draws", "10", "--trees", "5",
                  "--sims", "20", "--test-start", "6", "--test-end", "7", "--seed",
                  "11", "--out", out.string() }) == 0);

    // points: each (time, ranker) block is a permutation of 1..4
    std::istringstream pts(slurp(out / "points.csv"));
    std::string line;
    std::getline(pts, line);
    CHECK(line == "time,ranker,item,point_rank");
    std::map<std::string, std::vector<int>> perms;
    while (std::getline(pts, line)) {
        if (line.empty())
            continue;
        auto f = fields(line);
        REQUIRE(f.size() == 4);
        perms[f[0] + "|" + f[1]].push_back(std::stoi(f[3]));
    }
    CHECK(perms.size() == 4); // 2 times x 2 rankers
    for (auto& [key, ranks] : perms) {
        std::vector<int> sorted = ranks;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<int>{ 1, 2, 3, 4 });
    }

    // probs: doubly stochastic per (time, ranker)
    std::istringstream prb(slurp(out / "probs.csv"));
    std::getline(prb, line);
    CHECK(line == "time,ranker,item,rank,probability");
    std::map<std::string, std::map<std::string, double>> rows, cols;
    while (std::getline(prb, line)) {
        if (line.empty())
            continue;
        auto f = fields(line);
        REQUIRE(f.size() == 5);
        double p = std::stod(f[4]);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        rows[f[0] + "|" + f[1]][f[2]] += p;
        cols[f[0] + "|" + f[1]][f[3]] += p;
    }
    for (auto& [key, sums] : rows)
        for (auto& [item, s] : sums)
            CHECK(s == doctest::Approx(1.0).epsilon(0.01));
    for (auto& [key, sums] : cols)
        for (auto& [rank, s] : sums)
            CHECK(s == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("evaluate reports a unit ratio for the benchmark against itself")
{
    fs::path data = scratch() / "sim_a";
    fs::path fcb = scratch() / "fc_borda";
    REQUIRE(run({ "forecast", "--data", (data / "data.csv").string(), "--model", "borda",
                  "--test-start", "6", "--test-end", "7", "--out", fcb.string() }) == 0);

    fs::path cfgp = scratch() / "eval.json";
    nlohmann::json cfg = {
        { "data", (data / "data.csv").string() },
        { "forecasts",
          { { "arrobart", (scratch() / "fc_arrobart").string() },
            { "borda", fcb.string() } } },
        { "benchmark", "borda" },
        { "out", (scratch() / "eval.csv").string() },
    };
    std::ofstream(cfgp) << cfg.dump();
    REQUIRE(run({ "evaluate", "--config", cfgp.string() }) == 0);

    std::istringstream ev(slurp(scratch() / "eval.csv"));
    std::string line;
    std::getline(ev, line);
    CHECK(line == "model,time,ranker,tau,ratio");
    bool saw_borda = false, saw_arrobart = false;
    while (std::getline(ev, line)) {
        if (line.empty())
            continue;
        auto f = fields(line);
        REQUIRE(f.size() == 5);
        if (f[1] != "all")
            continue;
        if (f[0] == "borda") {
            saw_borda = true;
            CHECK(std::stod(f[4]) == doctest::Approx(1.0).epsilon(1e-12));
        }
        if (f[0] == "arrobart") {
            saw_arrobart = true;
            CHECK(std::stod(f[4]) >= 0.0);
        }
    }
    CHECK(saw_borda);
    CHECK(saw_arrobart);

    // unknown benchmark name
    cfg["benchmark"] = "oracle";
    std::ofstream(cfgp) << cfg.dump();
    CHECK(run({ "evaluate", "--config", cfgp.string() }) == 2);
}
