#include "rankdyn/panel_csv.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "rankdyn/num_text.hpp"

namespace rankdyn {

namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

int dense_index(std::map<std::string, int>& table, std::vector<std::string>& labels,
                const std::string& label)
{
    auto it = table.find(label);
    if (it != table.end())
        return it->second;
    int idx = static_cast<int>(labels.size());
    table.emplace(label, idx);
    labels.push_back(label);
    return idx;
}

} // namespace

RankingPanel read_panel_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("line 1: empty input, header required");
    auto header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "time" || header[1] != "ranker" ||
        header[2] != "item" || header[3] != "rank")
        throw ValidationError("line 1: header must start with time,ranker,item,rank");
    const int Kw = static_cast<int>(header.size()) - 4;

    std::map<std::string, int> time_ids, ranker_ids, item_ids;
    std::vector<std::string> time_labels, ranker_labels, item_labels;

    struct Row {
        int t, j, i, rank;
        std::vector<double> cov;
    };
    std::vector<Row> rows;

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        auto f = split_csv_line(line);
        if (static_cast<int>(f.size()) != 4 + Kw)
            throw ValidationError("line " + std::to_string(lineno) + ": expected " +
                                  std::to_string(4 + Kw) + " fields, got " +
                                  std::to_string(f.size()));
        Row r;
        r.t = dense_index(time_ids, time_labels, f[0]);
        r.j = dense_index(ranker_ids, ranker_labels, f[1]);
        r.i = dense_index(item_ids, item_labels, f[2]);
        try {
            r.rank = static_cast<int>(parse_double(f[3]));
            for (int k = 0; k < Kw; ++k)
                r.cov.push_back(parse_double(f[4 + k]));
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
        }
        rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw ValidationError("no data rows");

    const int N = static_cast<int>(item_labels.size());
    const int M = static_cast<int>(ranker_labels.size());
    const int T = static_cast<int>(time_labels.size());

    RankingPanel panel(N, M, T);
    panel.item_labels = item_labels;
    panel.ranker_labels = ranker_labels;
    panel.time_labels = time_labels;

    std::vector<std::vector<int>> ranks(static_cast<size_t>(M) * T,
                                        std::vector<int>(N, 0));
    CovariateSet cov;
    cov.N = N;
    cov.M = M;
    cov.T = T;
    cov.Kw = Kw;
    cov.pair.assign(static_cast<size_t>(N) * M * T * Kw, 0.0);

    std::vector<char> seen(static_cast<size_t>(N) * M * T, 0);
    for (const auto& r : rows) {
        size_t cell = (static_cast<size_t>(r.i) * M + r.j) * T + r.t;
        if (seen[cell])
            throw ValidationError("duplicate row for item " + item_labels[r.i] + ", ranker " +
                                  ranker_labels[r.j] + ", time " + time_labels[r.t]);
        seen[cell] = 1;
        ranks[static_cast<size_t>(r.j) * T + r.t][r.i] = r.rank;
        for (int k = 0; k < Kw; ++k)
            cov.pair[cell * Kw + k] = r.cov[k];
    }

    for (int j = 0; j < M; ++j)
        for (int t = 0; t < T; ++t) {
            try {
                panel.set(j, t, validate_ranking(ranks[static_cast<size_t>(j) * T + t]));
            } catch (const ValidationError& e) {
                throw ValidationError("ranker " + ranker_labels[j] + ", time " + time_labels[t] +
                                      ": " + e.what());
            }
        }
    panel.covariates = std::move(cov);
    return panel;
}

RankingPanel read_panel_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open " + path);
    return read_panel_csv(in);
}

void write_panel_csv(std::ostream& out, const RankingPanel& panel)
{
    const CovariateSet& cv = panel.covariates;
    out << "time,ranker,item,rank";
    for (int k = 0; k < cv.total_dim(); ++k)
        out << ",cov_" << (k + 1);
    out << "\n";
    for (int t = 0; t < panel.T(); ++t)
        for (int j = 0; j < panel.M(); ++j) {
            const Ranking& r = panel.at(j, t);
            for (int i = 0; i < panel.N(); ++i) {
                out << panel.time_labels[t] << ',' << panel.ranker_labels[j] << ','
                    << panel.item_labels[i] << ',' << r.rank_of(i);
                for (int k = 0; k < cv.Ka; ++k)
                    out << ',' << format_double(cv.item_cov(i, t, k));
                for (int k = 0; k < cv.Kr; ++k)
                    out << ',' << format_double(cv.ranker_cov(j, t, k));
                for (int k = 0; k < cv.Kw; ++k)
                    out << ',' << format_double(cv.pair_cov(i, j, t, k));
                out << "\n";
            }
        }
}

void write_panel_csv_file(const std::string& path, const RankingPanel& panel)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write " + path);
    write_panel_csv(out, panel);
}

} // namespace rankdyn
