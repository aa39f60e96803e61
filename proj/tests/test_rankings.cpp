#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rankdyn/panel_csv.hpp"
#include "rankdyn/rankings.hpp"

using namespace rankdyn;

namespace {

// reference count of discordant pairs
double brute_tau(const Ranking& a, const Ranking& b)
{
    int n = a.size(), disc = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool da = a.rank_of(i) < a.rank_of(j);
            bool db = b.rank_of(i) < b.rank_of(j);
            if (da != db)
                ++disc;
        }
    return disc / (n * (n - 1) / 2.0);
}

std::vector<std::vector<int>> all_perms(int n)
{
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    std::vector<std::vector<int>> out;
    do
        out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

} // namespace

TEST_CASE("ranking validation")
{
    CHECK_NOTHROW(Ranking({ 2, 1, 3 }));
    CHECK_THROWS_WITH_AS(Ranking({ 1, 1, 3 }), doctest::Contains("duplicate rank"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(Ranking({ 0, 1, 2 }), doctest::Contains("out of range"),
                         ValidationError);
    CHECK_THROWS_AS(Ranking({ 1, 2, 4 }), ValidationError);

    Ranking r({ 2, 1, 3 });
    CHECK(r.rank_of(0) == 2);
    CHECK(r.item_at(1) == 1);
    CHECK(r.item_at(3) == 2);
    CHECK(r.order() == std::vector<int>{ 1, 0, 2 });
}

TEST_CASE("rank_of_scores orientation and ties")
{
    Ranking r = rank_of_scores({ 0.3, -1.2, 2.0 });
    CHECK(r.ranks() == std::vector<int>{ 2, 1, 3 });

    // ties break by ascending item index
    Ranking t = rank_of_scores({ 1.0, 1.0, 0.0 });
    CHECK(t.ranks() == std::vector<int>{ 2, 3, 1 });

    CHECK_THROWS_AS(rank_of_scores({ 1.0, std::nan("") }), ValidationError);
}

TEST_CASE("kendall tau against brute force, N <= 4")
{
    for (int n = 2; n <= 4; ++n) {
        auto perms = all_perms(n);
        for (const auto& pa : perms)
            for (const auto& pb : perms) {
                Ranking a(pa), b(pb);
                CHECK(kendall_tau(a, b) == brute_tau(a, b));
            }
    }
}

TEST_CASE("kendall tau metric properties")
{
    Ranking a({ 1, 2, 3, 4 }), b({ 4, 3, 2, 1 }), c({ 2, 1, 3, 4 });
    CHECK(kendall_tau(a, a) == 0.0);
    CHECK(kendall_tau(a, b) == 1.0);
    CHECK(kendall_tau(a, c) == kendall_tau(c, a));
    CHECK(kendall_tau(a, b) <= kendall_tau(a, c) + kendall_tau(c, b) + 1e-12);
    CHECK_THROWS_AS(kendall_tau(Ranking({ 1, 2 }), Ranking({ 1, 2, 3 })), ValidationError);
    CHECK_THROWS_AS(kendall_tau(Ranking({ 1 }), Ranking({ 1 })), ValidationError);
}

TEST_CASE("kendall tau invariant under common item relabeling")
{
    auto perms = all_perms(4);
    Ranking a({ 3, 1, 4, 2 }), b({ 2, 4, 1, 3 });
    double base = kendall_tau(a, b);
    for (const auto& s : perms) {
        std::vector<int> ra(4), rb(4);
        for (int i = 0; i < 4; ++i) {
            ra[i] = a.rank_of(s[i] - 1);
            rb[i] = b.rank_of(s[i] - 1);
        }
        CHECK(kendall_tau(Ranking(ra), Ranking(rb)) == base);
    }
}

TEST_CASE("panel construction and head slicing")
{
    RankingPanel p(3, 2, 4);
    CHECK_FALSE(p.complete());
    for (int j = 0; j < 2; ++j)
        for (int t = 0; t < 4; ++t)
            p.set(j, t, Ranking({ 1 + (t % 3), 1 + ((t + 1) % 3), 1 + ((t + 2) % 3) }));
    CHECK(p.complete());
    CHECK(p.item_labels == std::vector<std::string>{ "1", "2", "3" });

    RankingPanel h = p.head(2);
    CHECK(h.T() == 2);
    CHECK(h.at(1, 1) == p.at(1, 1));
    CHECK(h.time_labels == std::vector<std::string>{ "1", "2" });
}

TEST_CASE("csv round trip with covariates")
{
    RankingPanel p(2, 2, 2);
    for (int j = 0; j < 2; ++j)
        for (int t = 0; t < 2; ++t)
            p.set(j, t, Ranking(j == 0 ? std::vector<int>{ 1, 2 }
                                       : std::vector<int>{ 2, 1 }));
    CovariateSet& cv = p.covariates;
    cv.N = 2;
    cv.M = 2;
    cv.T = 2;
    cv.Kw = 1;
    cv.pair = { 0.5, -1.25, 3.0, 0.125, 2.0, -7.5, 0.0625, 11.0 };

    std::ostringstream out;
    write_panel_csv(out, p);
    std::istringstream in(out.str());
    RankingPanel q = read_panel_csv(in);

    CHECK(q.N() == 2);
    CHECK(q.M() == 2);
    CHECK(q.T() == 2);
    for (int j = 0; j < 2; ++j)
        for (int t = 0; t < 2; ++t)
            CHECK(q.at(j, t) == p.at(j, t));
    CHECK(q.covariates.Kw == 1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int t = 0; t < 2; ++t)
                CHECK(q.covariates.pair_cov(i, j, t, 0) == cv.pair_cov(i, j, t, 0));

    std::ostringstream out2;
    write_panel_csv(out2, q);
    CHECK(out2.str() == out.str());
}

TEST_CASE("csv errors carry line numbers")
{
    std::istringstream bad_header("ranker,time,item,rank\n");
    CHECK_THROWS_AS(read_panel_csv(bad_header), ValidationError);

    std::istringstream dup("time,ranker,item,rank\n1,1,1,1\n1,1,2,2\n1,1,2,2\n");
    CHECK_THROWS_WITH_AS(read_panel_csv(dup), doctest::Contains("duplicate row"),
                         ValidationError);

    std::istringstream bad_num("time,ranker,item,rank\n1,1,a,1\n1,1,b,x\n");
    CHECK_THROWS_WITH_AS(read_panel_csv(bad_num), doctest::Contains("line 3"),
                         ValidationError);

    std::istringstream bad_perm("time,ranker,item,rank\n1,1,a,1\n1,1,b,1\n");
    CHECK_THROWS_AS(read_panel_csv(bad_perm), ValidationError);

    std::istringstream partial("time,ranker,item,rank\n1,1,a,1\n1,1,b,2\n1,2,a,1\n");
    CHECK_THROWS_AS(read_panel_csv(partial), ValidationError);
}
