#pragma once

#include <iosfwd>
#include <string>

#include "rankdyn/rankings.hpp"

namespace rankdyn {

/// Ranking CSV schema: one row per item x ranker x time with header
/// `time,ranker,item,rank[,cov_*...]`. Times and rankers are opaque labels
/// mapped to dense indices in first-appearance order. Covariate columns are
/// stored as pair covariates (they may vary freely per (item, ranker, time)).
/// Partial rankings are rejected: every cell must hold a full permutation.
RankingPanel read_panel_csv(std::istream& in);
RankingPanel read_panel_csv_file(const std::string& path);

/// Writes the panel with the per-row assembled covariate vector
/// (item block, then ranker block, then pair block).
void write_panel_csv(std::ostream& out, const RankingPanel& panel);
void write_panel_csv_file(const std::string& path, const RankingPanel& panel);

} // namespace rankdyn
