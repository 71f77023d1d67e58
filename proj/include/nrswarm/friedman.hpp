#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nrswarm/harness.hpp"

namespace nrswarm {

/// Ranks per problem: ranks[p][a] for problem p and algorithm a; 1 is best.
struct RankMatrix {
  std::vector<std::string> algorithms;
  std::vector<std::pair<int, std::size_t>> problems;  ///< (function id, dimension)
  std::vector<std::vector<double>> ranks;

  /// True when every problem's ranks add up to k(k+1)/2 exactly.
  bool rank_sums_exact() const;
};

/// Ranks with ties averaged; the smallest value gets rank 1 when `minimize`.
/// Throws UsageError on empty or non-finite input.
std::vector<double> rank_problem(std::span<const double> values, bool minimize = true);

/// As above, but two values tie when they agree after rounding both to the
/// smaller of their printed significant-digit counts. Sorted neighbours that
/// tie chain into one group.
std::vector<double> rank_problem(std::span<const double> values, std::span<const int> digits, bool minimize);

struct FriedmanResult {
  std::vector<double> avg_ranks;
  double chi2 = 0.0;
  int df = 0;
};

/// Throws UsageError with fewer than 2 algorithms or 2 problems, or ragged rows.
FriedmanResult friedman(const RankMatrix& m);

/// Problems on which each algorithm holds rank 1 (shared first places count for all).
std::vector<std::size_t> first_place_counts(const RankMatrix& m);

enum class RankBasis { best, mean };

struct RankOptions {
  RankBasis basis = RankBasis::best;
  /// Rank only this dimension (0 = all).
  std::size_t dimension = 0;
  /// Treat values equal at their printed precision as ties.
  bool printed_precision_ties = true;
  /// Restrict to these algorithms, in this order (empty = all, in order of first appearance).
  std::vector<std::string> algorithms;
};

/// Builds the matrix from CSV rows. Problems missing any algorithm are skipped
/// and counted in `skipped` when given.
RankMatrix build_rank_matrix(const std::vector<SummaryRow>& rows, const RankOptions& opts = {},
                             std::size_t* skipped = nullptr);

/// One row per algorithm: algorithm,avg_rank,first_places,chi2,df,problems.
std::string rankings_csv(const RankMatrix& m, const FriedmanResult& r, const std::vector<std::size_t>& firsts,
                         const std::vector<std::string>& comment_lines = {});

}  // namespace nrswarm
