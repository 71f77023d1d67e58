#include "nrswarm/friedman.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "nrswarm/error.hpp"

namespace nrswarm {

namespace {

bool rounded_equal(double a, double b, int digits) {
  if (a == b) return true;
  char sa[64];
  char sb[64];
  const int prec = std::max(digits, 1) - 1;
  std::snprintf(sa, sizeof sa, "%.*e", prec, a);
  std::snprintf(sb, sizeof sb, "%.*e", prec, b);
  return std::string(sa) == sb;
}

template <class Tie>
std::vector<double> rank_with(std::span<const double> values, bool minimize, Tie&& tie) {
  if (values.empty()) throw UsageError("rank_problem: no values");
  for (double v : values)
    if (!std::isfinite(v)) throw UsageError("rank_problem: non-finite value");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return minimize ? values[a] < values[b] : values[a] > values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && tie(order[end - 1], order[end])) ++end;
    // positions start..end-1 hold ranks start+1..end; their mean is a multiple of 1/2
    const double avg = static_cast<double>(start + 1 + end) / 2.0;
    for (std::size_t i = start; i < end; ++i) ranks[order[i]] = avg;
    start = end;
  }
  return ranks;
}

}  // namespace

std::vector<double> rank_problem(std::span<const double> values, bool minimize) {
  return rank_with(values, minimize, [&](std::size_t a, std::size_t b) { return values[a] == values[b]; });
}

std::vector<double> rank_problem(std::span<const double> values, std::span<const int> digits, bool minimize) {
  if (digits.size() != values.size()) throw UsageError("rank_problem: digits and values differ in length");
  return rank_with(values, minimize, [&](std::size_t a, std::size_t b) {
    return rounded_equal(values[a], values[b], std::min(digits[a], digits[b]));
  });
}

bool RankMatrix::rank_sums_exact() const {
  const double k = static_cast<double>(algorithms.size());
  const double expected = k * (k + 1.0) / 2.0;
  for (const auto& row : ranks) {
    double s = 0.0;
    for (double r : row) s += r;
    if (s != expected) return false;
  }
  return true;
}

FriedmanResult friedman(const RankMatrix& m) {
  const std::size_t k = m.algorithms.size();
  const std::size_t n = m.ranks.size();
  if (k < 2) throw UsageError("friedman: need at least 2 algorithms");
  if (n < 2) throw UsageError("friedman: need at least 2 problems");
  FriedmanResult r;
  r.avg_ranks.assign(k, 0.0);
  for (const auto& row : m.ranks) {
    if (row.size() != k) throw UsageError("friedman: ragged rank matrix");
    for (std::size_t a = 0; a < k; ++a) r.avg_ranks[a] += row[a];
  }
  for (double& v : r.avg_ranks) v /= static_cast<double>(n);
  const double kd = static_cast<double>(k);
  double sum_sq = 0.0;
  for (double v : r.avg_ranks) sum_sq += v * v;
  r.chi2 = 12.0 * static_cast<double>(n) / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  if (r.chi2 < 0.0) r.chi2 = 0.0;  // rounding residue when all averages are equal
  r.df = static_cast<int>(k) - 1;
  return r;
}

std::vector<std::size_t> first_place_counts(const RankMatrix& m) {
  std::vector<std::size_t> counts(m.algorithms.size(), 0);
  for (const auto& row : m.ranks) {
    const double top = *std::min_element(row.begin(), row.end());
    for (std::size_t a = 0; a < row.size(); ++a)
      if (row[a] == top) ++counts[a];
  }
  return counts;
}

RankMatrix build_rank_matrix(const std::vector<SummaryRow>& rows, const RankOptions& opts, std::size_t* skipped) {
  RankMatrix m;
  m.algorithms = opts.algorithms;
  if (m.algorithms.empty()) {
    for (const SummaryRow& r : rows)
      if (std::find(m.algorithms.begin(), m.algorithms.end(), r.algorithm) == m.algorithms.end())
        m.algorithms.push_back(r.algorithm);
  }
  std::map<std::pair<int, std::size_t>, std::map<std::string, const SummaryRow*>> by_problem;
  for (const SummaryRow& r : rows) {
    if (opts.dimension != 0 && r.dimension != opts.dimension) continue;
    by_problem[{r.function_id, r.dimension}][r.algorithm] = &r;
  }
  std::size_t missing = 0;
  for (const auto& [problem, cells] : by_problem) {
    std::vector<double> values;
    std::vector<int> digits;
    for (const std::string& a : m.algorithms) {
      const auto it = cells.find(a);
      if (it == cells.end()) break;
      const bool use_best = opts.basis == RankBasis::best;
      values.push_back(use_best ? it->second->best : it->second->mean);
      digits.push_back(use_best ? it->second->best_digits : it->second->mean_digits);
    }
    if (values.size() != m.algorithms.size()) {
      ++missing;
      continue;
    }
    m.problems.push_back(problem);
    m.ranks.push_back(opts.printed_precision_ties ? rank_problem(values, digits, true) : rank_problem(values, true));
  }
  if (skipped) *skipped = missing;
  return m;
}

std::string rankings_csv(const RankMatrix& m, const FriedmanResult& r, const std::vector<std::size_t>& firsts,
                         const std::vector<std::string>& comment_lines) {
  std::ostringstream out;
  for (const std::string& c : comment_lines) out << "# " << c << '\n';
  out << "algorithm,avg_rank,first_places,chi2,df,problems\n";
  char rank[64];
  char chi2[64];
  std::snprintf(chi2, sizeof chi2, "%.6f", r.chi2);
  for (std::size_t a = 0; a < m.algorithms.size(); ++a) {
    std::snprintf(rank, sizeof rank, "%.6f", r.avg_ranks[a]);
    out << m.algorithms[a] << ',' << rank << ',' << firsts[a] << ',' << chi2 << ',' << r.df << ','
        << m.problems.size() << '\n';
  }
  return out.str();
}

}  // namespace nrswarm
