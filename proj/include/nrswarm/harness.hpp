#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrswarm/kernels.hpp"
#include "nrswarm/optimizer.hpp"

namespace nrswarm {

/// Algorithms x functions x dimensions, each cell repeated `trials` times with
/// seeds seed_base + trial. Fixed-dimension functions run once at their own
/// dimension whatever `dimensions` holds.
struct ExperimentPlan {
  std::vector<Algorithm> algorithms;
  std::vector<int> function_ids;
  std::vector<std::size_t> dimensions{30};
  std::size_t trials = 10;
  /// Per-dimension override of `trials` (e.g. fewer seeds at 100D).
  std::map<std::size_t, std::size_t> trials_by_dimension;
  OptimizerConfig cfg;
  std::uint64_t seed_base = 0;
  /// Wall-clock budget per cell; trials starting after it is spent are skipped
  /// and the cell is marked timed out.
  std::optional<double> cell_budget_ms;

  std::size_t trials_for(std::size_t dim) const;
  /// Throws UsageError / DimensionError.
  void validate() const;
};

struct CellKey {
  Algorithm algorithm = Algorithm::hfasson;
  int function_id = 0;
  std::size_t dimension = 0;

  auto operator<=>(const CellKey&) const = default;
};

/// Compact per-run result kept in the table.
struct TrialSummary {
  std::uint64_t seed = 0;
  double final_fitness = 0.0;
  std::optional<std::size_t> iteration_at_optimum;  ///< against the known optimum, tol 1e-12
  std::optional<std::size_t> iteration_at_final;    ///< against the run's own final best, tol 1e-12
  std::size_t evaluations = 0;
  double wall_ms = 0.0;
};

struct CellResult {
  double best_over_trials = 0.0;
  double mean = 0.0;
  std::vector<TrialSummary> per_trial;
  bool timed_out = false;
};

struct ResultsTable {
  std::map<CellKey, CellResult> cells;
};

/// Cells of the plan in enumeration order (algorithm, function, dimension).
std::vector<CellKey> plan_cells(const ExperimentPlan& plan);

inline constexpr double optimum_tolerance = 1e-12;

/// Summarises one run; `known_optimum` selects the first iteration_at_optimum mode.
TrialSummary summarize(const RunRecord& rec, std::optional<double> known_optimum,
                       double tolerance = optimum_tolerance);

/// Runs every (cell, trial). `exec` fans the runs out across OpenMP threads;
/// the result is identical either way. `on_run`, if set, sees every finished
/// record (called from the collecting thread only, in enumeration order).
ResultsTable run_plan(const ExperimentPlan& plan, Execution exec = Execution::serial,
                      const std::function<void(const CellKey&, const RunRecord&)>& on_run = {});

/// First iteration whose best is within `tolerance` of `target`, or of the
/// trace's final best when no target is given. Throws UsageError on an empty trace.
std::optional<std::size_t> iteration_at_optimum(const std::vector<TracePoint>& trace, double tolerance,
                                                std::optional<double> target = std::nullopt);

/// One row of the best-fitness CSV. `source` is empty for our own results.
struct SummaryRow {
  std::string algorithm;
  int function_id = 0;
  std::size_t dimension = 0;
  double best = 0.0;
  double mean = 0.0;
  std::size_t trials = 0;
  std::string source;
  /// Significant digits the values were printed with (6 for exported tables).
  int best_digits = 6;
  int mean_digits = 6;

  bool operator==(const SummaryRow&) const = default;
};

inline constexpr const char* results_csv_header = "algorithm,function,dimension,best,mean,trials";

/// Scientific notation with 6 significant digits.
std::string format_sci(double v);

/// Significant digits of a printed decimal number ("1.57E-32" -> 3, "0" -> 1).
int significant_digits(const std::string& text);

/// Rows as they appear in the exported CSV (values rounded to 6 significant digits).
std::vector<SummaryRow> summary(const ResultsTable& table);

/// Writes `comment_lines` as "# ..." lines, then the header and one row per cell.
/// Cells with no finished trial print "timeout" for best and mean.
void export_csv(const ResultsTable& table, const std::filesystem::path& path,
                const std::vector<std::string>& comment_lines = {});
std::string to_csv(const ResultsTable& table, const std::vector<std::string>& comment_lines = {});

/// Parses the export format; an optional trailing `source` column is accepted.
/// Lines starting with '#' are skipped. Throws UsageError on malformed input.
std::vector<SummaryRow> parse_csv(const std::string& text);
std::vector<SummaryRow> read_csv(const std::filesystem::path& path);

nlohmann::json to_json(const ResultsTable& table);

/// Checked-in best-fitness values of the nine compared algorithms.
struct ReferenceData {
  std::vector<SummaryRow> rows;

  std::optional<SummaryRow> find(const std::string& algorithm, int function_id, std::size_t dimension) const;
};

std::filesystem::path default_reference_path();
ReferenceData load_reference(const std::filesystem::path& path = default_reference_path());

}  // namespace nrswarm
