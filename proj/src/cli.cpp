#include "rankdyn/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "rankdyn/baselines.hpp"
#include "rankdyn/dynamic_model.hpp"
#include "rankdyn/errors.hpp"
#include "rankdyn/num_text.hpp"
#include "rankdyn/panel_csv.hpp"
#include "rankdyn/simgen.hpp"
#include "rankdyn/static_model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rankdyn {

namespace {

void check_keys(const json& cfg, std::initializer_list<const char*> allowed)
{
    if (!cfg.is_object())
        throw ConfigError("config must be a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError("unknown config key '" + it.key() + "'");
    }
}

json require(const json& cfg, const std::string& key)
{
    if (!cfg.contains(key))
        throw ConfigError("missing config key '" + key + "'");
    return cfg.at(key);
}

std::string gets(const json& cfg, const std::string& key)
{
    json v = require(cfg, key);
    if (!v.is_string())
        throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

long geti(const json& cfg, const std::string& key, long def)
{
    if (!cfg.contains(key))
        return def;
    const json& v = cfg.at(key);
    if (!v.is_number_integer())
        throw ConfigError("config key '" + key + "' must be an integer");
    return v.get<long>();
}

double getd(const json& cfg, const std::string& key, double def)
{
    if (!cfg.contains(key))
        return def;
    const json& v = cfg.at(key);
    if (!v.is_number())
        throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

bool getb(const json& cfg, const std::string& key, bool def)
{
    if (!cfg.contains(key))
        return def;
    const json& v = cfg.at(key);
    if (!v.is_boolean())
        throw ConfigError("config key '" + key + "' must be a boolean");
    return v.get<bool>();
}

std::ofstream open_out(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

struct ModelSpec {
    bool dynamic = false;
    bool bart = false;
    bool exo = false;
    bool lag = false;
    bool borda = false;
};

ModelSpec parse_model(const std::string& name)
{
    ModelSpec m;
    if (name == "borda") {
        m.borda = true;
        return m;
    }
    std::string base = name;
    if (base.size() > 4 && base.substr(base.size() - 4) == "_lag") {
        m.lag = true;
        base = base.substr(0, base.size() - 4);
    }
    if (base == "robart") m.bart = true;
    else if (base == "rolinear") m.bart = false;
    else if (base == "arrobart") { m.dynamic = true; m.bart = true; }
    else if (base == "arrolinear") { m.dynamic = true; m.bart = false; }
    else if (base == "arrobartx") { m.dynamic = true; m.bart = true; m.exo = true; }
    else if (base == "arrolinearx") { m.dynamic = true; m.bart = false; m.exo = true; }
    else
        throw ConfigError("unknown model '" + name + "'");
    if (m.exo && m.lag)
        throw ConfigError("unknown model '" + name + "'");
    return m;
}

DynamicModelConfig dynamic_config(const json& cfg, const ModelSpec& m)
{
    DynamicModelConfig c;
    c.n_burnin = static_cast<int>(geti(cfg, "n_burnin", c.n_burnin));
    c.n_draws = static_cast<int>(geti(cfg, "n_draws", c.n_draws));
    c.thin = static_cast<int>(geti(cfg, "thin", c.thin));
    c.prior.S = static_cast<int>(geti(cfg, "trees", c.prior.S));
    c.seed = static_cast<std::uint64_t>(geti(cfg, "seed", 0));
    c.exogenous = m.exo;
    c.lagged_rank = m.lag;
    c.kind = m.bart ? DynamicModelConfig::bart : DynamicModelConfig::linear;
    std::string li = cfg.contains("lag_input") ? gets(cfg, "lag_input") : "own_scalar_lag";
    if (li == "own_scalar_lag")
        c.lag_input = DynamicModelConfig::own_scalar_lag;
    else if (li == "full_vector_lag")
        c.lag_input = DynamicModelConfig::full_vector_lag;
    else
        throw ConfigError("lag_input must be own_scalar_lag or full_vector_lag");
    return c;
}

StaticModelConfig static_config(const json& cfg, const ModelSpec& m)
{
    StaticModelConfig c;
    c.n_burnin = static_cast<int>(geti(cfg, "n_burnin", c.n_burnin));
    c.n_draws = static_cast<int>(geti(cfg, "n_draws", c.n_draws));
    c.thin = static_cast<int>(geti(cfg, "thin", c.thin));
    c.prior.S = static_cast<int>(geti(cfg, "trees", c.prior.S));
    c.seed = static_cast<std::uint64_t>(geti(cfg, "seed", 0));
    c.kind = m.bart ? StaticModelConfig::robart : StaticModelConfig::rolinear;
    c.lagged_rank = m.lag;
    return c;
}

RankingPanel panel_for_ranker(const RankingPanel& panel, int j)
{
    const int N = panel.N(), T = panel.T();
    RankingPanel out(N, 1, T);
    for (int t = 0; t < T; ++t)
        out.set(0, t, panel.at(j, t));
    out.item_labels = panel.item_labels;
    out.time_labels = panel.time_labels;
    out.ranker_labels = { panel.ranker_labels[j] };

    const CovariateSet& cv = panel.covariates;
    CovariateSet& oc = out.covariates;
    oc.N = N;
    oc.M = 1;
    oc.T = T;
    oc.Ka = cv.Ka;
    oc.item = cv.item;
    oc.Kr = cv.Kr;
    oc.ranker.resize(static_cast<size_t>(T) * cv.Kr);
    for (int t = 0; t < T; ++t)
        for (int k = 0; k < cv.Kr; ++k)
            oc.ranker[static_cast<size_t>(t) * cv.Kr + k] = cv.ranker_cov(j, t, k);
    oc.Kw = cv.Kw;
    oc.pair.resize(static_cast<size_t>(N) * T * cv.Kw);
    for (int i = 0; i < N; ++i)
        for (int t = 0; t < T; ++t)
            for (int k = 0; k < cv.Kw; ++k)
                oc.pair[(static_cast<size_t>(i) * T + t) * cv.Kw + k] =
                    cv.pair_cov(i, j, t, k);
    return out;
}

PosteriorArchive run_fit(const RankingPanel& panel, const json& cfg, const ModelSpec& m)
{
    auto t0 = std::chrono::steady_clock::now();
    PosteriorArchive archive;
    if (m.dynamic)
        archive = dynamic_fit(panel, dynamic_config(cfg, m));
    else
        archive = static_fit(panel, static_config(cfg, m));
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    long sweeps = geti(cfg, "n_burnin", 1000) +
                  geti(cfg, "n_draws", 1000) * geti(cfg, "thin", 1);
    std::ostringstream msg;
    msg << gets(cfg, "model") << ": " << sweeps << " sweeps in " << secs << " s";
    if (archive.config.contains("acceptance_rate"))
        msg << ", tree MH acceptance "
            << archive.config["acceptance_rate"].get<double>();
    std::cout << msg.str() << "\n";
    return archive;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

int label_index(const std::vector<std::string>& labels, const std::string& s,
                const char* what)
{
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == s)
            return static_cast<int>(i);
    throw ValidationError(std::string("unknown ") + what + " label '" + s + "'");
}

} // namespace

int worker_threads()
{
    if (const char* env = std::getenv("RANKDYN_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw ConfigError("RANKDYN_THREADS must be a positive integer");
        return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void cmd_simulate(const json& cfg)
{
    check_keys(cfg, { "kind", "scenario", "sigma", "N", "M", "T", "seed", "out" });
    std::string kind = gets(cfg, "kind");
    std::string out_dir = gets(cfg, "out");
    fs::create_directories(out_dir);
    std::ofstream data = open_out(fs::path(out_dir) / "data.csv");
    std::ofstream truth = open_out(fs::path(out_dir) / "truth.csv");

    if (kind == "static") {
        StaticScenarioSpec spec;
        spec.scenario = static_cast<int>(geti(cfg, "scenario", 1));
        spec.sigma = getd(cfg, "sigma", 1.0);
        spec.N = static_cast<int>(geti(cfg, "N", spec.N));
        spec.M = static_cast<int>(geti(cfg, "M", spec.M));
        if (cfg.contains("T") && geti(cfg, "T", 1) != 1)
            throw ConfigError("static scenarios have T = 1");
        spec.seed = static_cast<std::uint64_t>(geti(cfg, "seed", 0));
        StaticScenarioData d = gen_static_scenario(spec);
        write_panel_csv(data, d.panel);
        write_truth_static(truth, d);
        std::cout << "static scenario " << spec.scenario << ": N=" << spec.N
                  << " M=" << spec.M << " T=1 sigma=" << format_double(spec.sigma) << "\n";
    } else if (kind == "dynamic") {
        DynamicScenarioSpec spec;
        spec.scenario = static_cast<int>(geti(cfg, "scenario", 1));
        spec.sigma = getd(cfg, "sigma", 1.0);
        spec.N = static_cast<int>(geti(cfg, "N", spec.N));
        spec.M = static_cast<int>(geti(cfg, "M", spec.M));
        spec.T = static_cast<int>(geti(cfg, "T", spec.T));
        spec.seed = static_cast<std::uint64_t>(geti(cfg, "seed", 0));
        DynamicScenarioData d = gen_dynamic_scenario(spec);
        write_panel_csv(data, d.panel);
        write_truth_dynamic(truth, d);
        std::cout << "dynamic scenario " << spec.scenario << ": N=" << spec.N
                  << " M=" << spec.M << " T=" << spec.T
                  << " sigma=" << format_double(spec.sigma) << "\n";
    } else {
        throw ConfigError("kind must be static or dynamic");
    }
}

void cmd_fit(const json& cfg)
{
    check_keys(cfg, { "data", "model", "n_burnin", "n_draws", "thin", "trees", "seed",
                      "out", "per_ranker", "lag_input" });
    ModelSpec m = parse_model(gets(cfg, "model"));
    if (m.borda)
        throw ConfigError("model 'borda' has nothing to fit");
    RankingPanel panel = read_panel_csv_file(gets(cfg, "data"));
    std::string out_dir = gets(cfg, "out");

    if (getb(cfg, "per_ranker", false)) {
        std::uint64_t seed = static_cast<std::uint64_t>(geti(cfg, "seed", 0));
        for (int j = 0; j < panel.M(); ++j) {
            json sub = cfg;
            sub["seed"] = static_cast<long>(Rng(seed).derive(j).seed());
            PosteriorArchive a = run_fit(panel_for_ranker(panel, j), sub, m);
            a.save((fs::path(out_dir) / ("ranker_" + panel.ranker_labels[j])).string());
        }
        return;
    }
    PosteriorArchive archive = run_fit(panel, cfg, m);
    archive.save(out_dir);
}

namespace {

struct ForecastRows {
    std::string points; // time,ranker,item,point_rank rows
    std::string probs;  // time,ranker,item,rank,probability rows
};

ForecastRows format_forecast(const RankingPanel& panel, int t, const ForecastResult& fc)
{
    ForecastRows rows;
    for (int j = 0; j < fc.M; ++j)
        for (int i = 0; i < fc.N; ++i) {
            rows.points += panel.time_labels[t] + ',' + panel.ranker_labels[j] + ',' +
                           panel.item_labels[i] + ',' +
                           std::to_string(fc.point[j].rank_of(i)) + '\n';
            for (int r = 1; r <= fc.N; ++r)
                rows.probs += panel.time_labels[t] + ',' + panel.ranker_labels[j] + ',' +
                              panel.item_labels[i] + ',' + std::to_string(r) + ',' +
                              format_double(fc.prob(j, i, r)) + '\n';
        }
    return rows;
}

} // namespace

void cmd_forecast(const json& cfg)
{
    check_keys(cfg, { "data", "model", "n_burnin", "n_draws", "thin", "trees", "seed",
                      "out", "test_start", "test_end", "n_sims", "reuse_posterior",
                      "lag_input" });
    ModelSpec m = parse_model(gets(cfg, "model"));
    RankingPanel panel = read_panel_csv_file(gets(cfg, "data"));
    const int t_start = static_cast<int>(geti(cfg, "test_start", panel.T() - 1));
    const int t_end = static_cast<int>(geti(cfg, "test_end", panel.T() - 1));
    if (t_start > t_end || t_end >= panel.T())
        throw ConfigError("test window out of range");
    const int n_sims = static_cast<int>(geti(cfg, "n_sims", 10));
    const std::uint64_t seed = static_cast<std::uint64_t>(geti(cfg, "seed", 0));
    const int n_times = t_end - t_start + 1;

    std::vector<ForecastRows> rows(n_times);
    if (m.borda) {
        for (int t = t_start; t <= t_end; ++t) {
            if (t < 1)
                throw ConfigError("borda forecast needs a preceding period");
            Ranking point = borda_count(panel, t - 1);
            ForecastRows& r = rows[t - t_start];
            for (int j = 0; j < panel.M(); ++j)
                for (int i = 0; i < panel.N(); ++i) {
                    r.points += panel.time_labels[t] + ',' + panel.ranker_labels[j] + ',' +
                                panel.item_labels[i] + ',' +
                                std::to_string(point.rank_of(i)) + '\n';
                    r.probs += panel.time_labels[t] + ',' + panel.ranker_labels[j] + ',' +
                               panel.item_labels[i] + ',' +
                               std::to_string(point.rank_of(i)) + ",1\n";
                }
        }
    } else if (!m.dynamic) {
        throw ConfigError("static models have no one-step forecast; use a dynamic model");
    } else {
        DynamicModelConfig dc = dynamic_config(cfg, m);
        const bool reuse = getb(cfg, "reuse_posterior", false);
        PosteriorArchive shared;
        if (reuse) {
            DynamicModelConfig c0 = dc;
            c0.seed = Rng(seed).derive(1000).seed();
            shared = dynamic_fit(panel.head(t_start), c0);
        }
        auto task = [&](int t) {
            DynamicModelConfig ct = dc;
            ct.seed = Rng(seed).derive(static_cast<std::uint64_t>(t)).seed();
            Rng sim_rng = Rng(seed).derive(100000 + static_cast<std::uint64_t>(t));
            ForecastResult fc;
            if (reuse) {
                fc = forecast_one_step(shared, panel, ct, n_sims, sim_rng);
            } else {
                PosteriorArchive a = dynamic_fit(panel.head(t), ct);
                fc = forecast_one_step(a, panel, ct, n_sims, sim_rng);
            }
            rows[t - t_start] = format_forecast(panel, t, fc);
        };
        const int n_workers = std::min(worker_threads(), n_times);
        if (n_workers <= 1) {
            for (int t = t_start; t <= t_end; ++t)
                task(t);
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < n_workers; ++w)
                pool.emplace_back([&, w]() {
                    for (int t = t_start + w; t <= t_end; t += n_workers)
                        task(t);
                });
            for (std::thread& th : pool)
                th.join();
        }
    }

    std::string out_dir = gets(cfg, "out");
    std::ofstream points = open_out(fs::path(out_dir) / "points.csv");
    std::ofstream probs = open_out(fs::path(out_dir) / "probs.csv");
    points << "time,ranker,item,point_rank\n";
    probs << "time,ranker,item,rank,probability\n";
    for (const ForecastRows& r : rows) {
        points << r.points;
        probs << r.probs;
    }
}

void cmd_evaluate(const json& cfg)
{
    check_keys(cfg, { "data", "forecasts", "benchmark", "out" });
    RankingPanel panel = read_panel_csv_file(gets(cfg, "data"));
    json fdirs = require(cfg, "forecasts");
    if (!fdirs.is_object() || fdirs.empty())
        throw ConfigError("forecasts must be a nonempty object of name -> directory");
    std::string benchmark = cfg.contains("benchmark") ? gets(cfg, "benchmark")
                                                      : fdirs.begin().key();
    if (!fdirs.contains(benchmark))
        throw ConfigError("benchmark '" + benchmark + "' is not among the forecasts");

    const int N = panel.N(), M = panel.M(), T = panel.T();
    // taus[model][(t, j)] plus per-model presence mask by time
    struct ModelEval {
        std::string name;
        std::vector<std::vector<double>> tau_by_time; // [t][j]
        double global = 0.0;
    };
    std::vector<ModelEval> evals;

    for (auto it = fdirs.begin(); it != fdirs.end(); ++it) {
        if (!it.value().is_string())
            throw ConfigError("forecast directory for '" + it.key() + "' must be a string");
        fs::path points_path = fs::path(it.value().get<std::string>()) / "points.csv";
        std::ifstream in(points_path, std::ios::binary);
        if (!in)
            throw ValidationError("cannot read '" + points_path.string() + "'");
        std::string line;
        if (!std::getline(in, line) || split_csv_line(line) !=
            std::vector<std::string>{ "time", "ranker", "item", "point_rank" })
            throw ValidationError(points_path.string() + ": bad header");

        // rank vectors per (time, ranker)
        std::vector<std::vector<int>> ranks(static_cast<size_t>(T) * M);
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            std::vector<std::string> f = split_csv_line(line);
            if (f.size() != 4)
                throw ValidationError(points_path.string() + ": bad row '" + line + "'");
            int t = label_index(panel.time_labels, f[0], "time");
            int j = label_index(panel.ranker_labels, f[1], "ranker");
            int i = label_index(panel.item_labels, f[2], "item");
            std::vector<int>& rv = ranks[static_cast<size_t>(t) * M + j];
            if (rv.empty())
                rv.assign(N, 0);
            rv[i] = static_cast<int>(parse_double(f[3]));
        }

        ModelEval ev;
        ev.name = it.key();
        ev.tau_by_time.resize(T);
        double sum = 0.0;
        long count = 0;
        for (int t = 0; t < T; ++t)
            for (int j = 0; j < M; ++j) {
                const std::vector<int>& rv = ranks[static_cast<size_t>(t) * M + j];
                if (rv.empty())
                    continue;
                double tau = kendall_tau(validate_ranking(rv), panel.at(j, t));
                if (ev.tau_by_time[t].empty())
                    ev.tau_by_time[t].assign(M, -1.0);
                ev.tau_by_time[t][j] = tau;
                sum += tau;
                ++count;
            }
        if (count == 0)
            throw ValidationError("no forecast rows matched the panel for '" + ev.name + "'");
        ev.global = sum / static_cast<double>(count);
        evals.push_back(std::move(ev));
    }

    double bench_avg = 0.0;
    for (const ModelEval& ev : evals)
        if (ev.name == benchmark)
            bench_avg = ev.global;

    std::ofstream out = open_out(gets(cfg, "out"));
    out << "model,time,ranker,tau,ratio\n";
    for (const ModelEval& ev : evals) {
        for (int t = 0; t < T; ++t) {
            if (ev.tau_by_time[t].empty())
                continue;
            double tsum = 0.0;
            int tcount = 0;
            for (int j = 0; j < M; ++j) {
                if (ev.tau_by_time[t][j] < 0.0)
                    continue;
                out << ev.name << ',' << panel.time_labels[t] << ','
                    << panel.ranker_labels[j] << ','
                    << format_double(ev.tau_by_time[t][j]) << ",\n";
                tsum += ev.tau_by_time[t][j];
                ++tcount;
            }
            out << ev.name << ',' << panel.time_labels[t] << ",all,"
                << format_double(tsum / tcount) << ",\n";
        }
        out << ev.name << ",all,all," << format_double(ev.global) << ','
            << format_double(bench_avg > 0.0 ? ev.global / bench_avg
                                             : (ev.global == 0.0 ? 1.0 : 0.0))
            << '\n';
    }
}

int run_cli(int argc, char** argv)
{
    CLI::App app{ "Nonparametric Thurstone rank models: simulate, fit, forecast, evaluate" };
    app.require_subcommand(1);

    struct SubState {
        CLI::App* sub = nullptr;
        std::string config_path;
        std::string data, model, out, kind, lag_input, benchmark;
        long scenario = 0, N = 0, M = 0, T = 0, seed = 0;
        long n_burnin = 0, n_draws = 0, thin = 0, trees = 0;
        long test_start = 0, test_end = 0, n_sims = 0;
        double sigma = 0.0;
        bool per_ranker = false, reuse_posterior = false;
    };
    std::vector<std::unique_ptr<SubState>> states;

    auto add_common = [&](SubState& st) {
        st.sub->add_option("--config", st.config_path, "JSON config file");
        st.sub->add_option("--out", st.out, "output path");
        st.sub->add_option("--seed", st.seed, "RNG seed");
    };

    auto* sim = new SubState;
    sim->sub = app.add_subcommand("simulate", "generate a synthetic ranking dataset");
    add_common(*sim);
    sim->sub->add_option("--kind", sim->kind, "static or dynamic");
    sim->sub->add_option("--scenario", sim->scenario, "scenario number 1..3");
    sim->sub->add_option("--sigma", sim->sigma, "noise standard deviation");
    sim->sub->add_option("--items", sim->N, "number of items N");
    sim->sub->add_option("--rankers", sim->M, "number of rankers M");
    sim->sub->add_option("--periods", sim->T, "number of periods T");
    states.emplace_back(sim);

    auto add_sampler_opts = [&](SubState& st) {
        st.sub->add_option("--data", st.data, "ranking CSV path");
        st.sub->add_option("--model", st.model, "model kind");
        st.sub->add_option("--burnin", st.n_burnin, "burn-in sweeps");
        st.sub->add_option("--draws", st.n_draws, "stored draws");
        st.sub->add_option("--thin", st.thin, "thinning interval");
        st.sub->add_option("--trees", st.trees, "number of trees S");
        st.sub->add_option("--lag-input", st.lag_input,
                           "own_scalar_lag or full_vector_lag");
    };

    auto* fit = new SubState;
    fit->sub = app.add_subcommand("fit", "run the Gibbs sampler and store an archive");
    add_common(*fit);
    add_sampler_opts(*fit);
    fit->sub->add_flag("--per-ranker", fit->per_ranker, "independent fit per ranker");
    states.emplace_back(fit);

    auto* fc = new SubState;
    fc->sub = app.add_subcommand("forecast", "expanding-window one-step forecasts");
    add_common(*fc);
    add_sampler_opts(*fc);
    fc->sub->add_option("--test-start", fc->test_start, "first test period index");
    fc->sub->add_option("--test-end", fc->test_end, "last test period index");
    fc->sub->add_option("--sims", fc->n_sims, "predictive simulations per draw");
    fc->sub->add_flag("--reuse-posterior", fc->reuse_posterior,
                      "reuse one fit for the whole window (approximate)");
    states.emplace_back(fc);

    auto* ev = new SubState;
    ev->sub = app.add_subcommand("evaluate", "Kendall tau tables against realized ranks");
    add_common(*ev);
    ev->sub->add_option("--data", ev->data, "ranking CSV path");
    ev->sub->add_option("--benchmark", ev->benchmark, "benchmark model name");
    states.emplace_back(ev);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        for (auto& stp : states) {
            SubState& st = *stp;
            if (!st.sub->parsed())
                continue;
            json cfg = json::object();
            if (!st.config_path.empty()) {
                std::ifstream in(st.config_path, std::ios::binary);
                if (!in)
                    throw ConfigError("cannot read config '" + st.config_path + "'");
                try {
                    cfg = json::parse(in);
                } catch (const json::exception& e) {
                    throw ConfigError("bad JSON in '" + st.config_path + "': " + e.what());
                }
            }
            auto set_if = [&](const char* flag, const char* key, auto value) {
                const CLI::Option* opt = st.sub->get_option_no_throw(flag);
                if (opt && opt->count())
                    cfg[key] = value;
            };
            set_if("--out", "out", st.out);
            set_if("--seed", "seed", st.seed);
            set_if("--kind", "kind", st.kind);
            set_if("--scenario", "scenario", st.scenario);
            set_if("--sigma", "sigma", st.sigma);
            set_if("--items", "N", st.N);
            set_if("--rankers", "M", st.M);
            set_if("--periods", "T", st.T);
            set_if("--data", "data", st.data);
            set_if("--model", "model", st.model);
            set_if("--burnin", "n_burnin", st.n_burnin);
            set_if("--draws", "n_draws", st.n_draws);
            set_if("--thin", "thin", st.thin);
            set_if("--trees", "trees", st.trees);
            set_if("--lag-input", "lag_input", st.lag_input);
            set_if("--per-ranker", "per_ranker", st.per_ranker);
            set_if("--test-start", "test_start", st.test_start);
            set_if("--test-end", "test_end", st.test_end);
            set_if("--sims", "n_sims", st.n_sims);
            set_if("--reuse-posterior", "reuse_posterior", st.reuse_posterior);
            set_if("--benchmark", "benchmark", st.benchmark);

            if (st.sub->get_name() == "simulate")
                cmd_simulate(cfg);
            else if (st.sub->get_name() == "fit")
                cmd_fit(cfg);
            else if (st.sub->get_name() == "forecast")
                cmd_forecast(cfg);
            else
                cmd_evaluate(cfg);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}

} // namespace rankdyn
