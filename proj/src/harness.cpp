#include "nrswarm/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "nrswarm/error.hpp"

namespace nrswarm {

std::size_t ExperimentPlan::trials_for(std::size_t dim) const {
  const auto it = trials_by_dimension.find(dim);
  return it == trials_by_dimension.end() ? trials : it->second;
}

void ExperimentPlan::validate() const {
  if (trials < 1) throw UsageError("trials must be at least 1");
  for (const auto& [dim, n] : trials_by_dimension)
    if (n < 1) throw UsageError("trials for dimension " + std::to_string(dim) + " must be at least 1");
  if (cell_budget_ms && !(*cell_budget_ms > 0)) throw UsageError("cell budget must be positive");
  for (int id : function_ids) {
    const BenchmarkFunction& fn = function_by_id(id);
    if (fn.dimension_mode == DimensionMode::fixed) continue;
    for (std::size_t d : dimensions)
      if (!fn.accepts_dimension(d)) throw DimensionError("dimension " + std::to_string(d) + " is not valid");
  }
  cfg.validate();
}

std::vector<CellKey> plan_cells(const ExperimentPlan& plan) {
  std::vector<CellKey> cells;
  for (Algorithm a : plan.algorithms) {
    for (int id : plan.function_ids) {
      const BenchmarkFunction& fn = function_by_id(id);
      if (fn.dimension_mode == DimensionMode::fixed) {
        if (!plan.dimensions.empty()) cells.push_back({a, id, fn.fixed_dimension});
        continue;
      }
      for (std::size_t d : plan.dimensions) cells.push_back({a, id, d});
    }
  }
  return cells;
}

std::optional<std::size_t> iteration_at_optimum(const std::vector<TracePoint>& trace, double tolerance,
                                                std::optional<double> target) {
  if (trace.empty()) throw UsageError("iteration_at_optimum: empty trace");
  const double goal = target ? *target : trace.back().best_fitness;
  for (const TracePoint& t : trace)
    if (std::abs(t.best_fitness - goal) <= tolerance) return t.iteration;
  return std::nullopt;
}

TrialSummary summarize(const RunRecord& rec, std::optional<double> known_optimum, double tolerance) {
  TrialSummary s;
  s.seed = rec.seed;
  s.final_fitness = rec.final_fitness;
  if (known_optimum) s.iteration_at_optimum = iteration_at_optimum(rec.trace, tolerance, known_optimum);
  s.iteration_at_final = iteration_at_optimum(rec.trace, tolerance);
  s.evaluations = rec.evaluations;
  s.wall_ms = rec.wall_ms;
  return s;
}

ResultsTable run_plan(const ExperimentPlan& plan, Execution exec,
                      const std::function<void(const CellKey&, const RunRecord&)>& on_run) {
  plan.validate();
  struct Job {
    std::size_t cell;
    std::uint64_t seed;
  };
  const std::vector<CellKey> cells = plan_cells(plan);
  std::vector<Problem> problems;
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    problems.push_back(make_problem(function_by_id(cells[c].function_id), cells[c].dimension));
    for (std::size_t t = 0; t < plan.trials_for(cells[c].dimension); ++t) jobs.push_back({c, plan.seed_base + t});
  }

  ResultsTable table;
  for (const CellKey& k : cells) table.cells[k];

  std::vector<double> spent_ms(cells.size(), 0.0);
  std::vector<char> skipped(jobs.size(), 0);
  std::mutex budget_mutex;
  auto over_budget = [&](std::size_t cell) {
    if (!plan.cell_budget_ms) return false;
    std::lock_guard lock(budget_mutex);
    return spent_ms[cell] >= *plan.cell_budget_ms;
  };
  auto charge = [&](std::size_t cell, double ms) {
    if (!plan.cell_budget_ms) return;
    std::lock_guard lock(budget_mutex);
    spent_ms[cell] += ms;
  };

  std::vector<RunRecord> records(jobs.size());
  for_each_index(
      jobs.size(),
      [&](std::size_t j) {
        const Job& job = jobs[j];
        if (over_budget(job.cell)) {
          skipped[j] = 1;
          return;
        }
        records[j] = optimize(problems[job.cell], cells[job.cell].algorithm, plan.cfg, job.seed);
        charge(job.cell, records[j].wall_ms);
      },
      exec);

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const CellKey& key = cells[jobs[j].cell];
    CellResult& cell = table.cells[key];
    if (skipped[j]) {
      cell.timed_out = true;
      continue;
    }
    if (on_run) on_run(key, records[j]);
    cell.per_trial.push_back(summarize(records[j], problems[jobs[j].cell].known_optimum));
  }
  for (auto& [key, cell] : table.cells) {
    if (cell.per_trial.empty()) {
      cell.best_over_trials = cell.mean = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const TrialSummary& t : cell.per_trial) {
      best = std::min(best, t.final_fitness);
      sum += t.final_fitness;
    }
    cell.best_over_trials = best;
    cell.mean = sum / static_cast<double>(cell.per_trial.size());
    // the mean of values that are all equal can round just below them
    cell.mean = std::max(cell.mean, best);
  }
  return table;
}

// ---- CSV ---------------------------------------------------------------------

std::string format_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

int significant_digits(const std::string& text) {
  const auto e = text.find_first_of("eE");
  std::string digits;
  for (char c : text.substr(0, e))
    if (std::isdigit(static_cast<unsigned char>(c))) digits.push_back(c);
  // in scientific notation every mantissa digit is significant, zeros included
  if (e != std::string::npos && !digits.empty()) return static_cast<int>(digits.size());
  const auto first = digits.find_first_not_of('0');
  if (first == std::string::npos) return 1;
  return static_cast<int>(digits.size() - first);
}

namespace {

double round_sig(double v) { return std::strtod(format_sci(v).c_str(), nullptr); }

bool finished(const CellResult& c) { return !c.per_trial.empty(); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

double parse_number(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw UsageError("line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s, std::size_t line) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw UsageError("line " + std::to_string(line) + ": bad integer '" + s + "'");
  return static_cast<std::size_t>(std::stoull(s));
}

}  // namespace

std::vector<SummaryRow> summary(const ResultsTable& table) {
  std::vector<SummaryRow> rows;
  for (const auto& [key, cell] : table.cells) {
    if (!finished(cell)) continue;
    SummaryRow r;
    r.algorithm = std::string(to_string(key.algorithm));
    r.function_id = key.function_id;
    r.dimension = key.dimension;
    r.best = round_sig(cell.best_over_trials);
    r.mean = round_sig(cell.mean);
    r.trials = cell.per_trial.size();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string to_csv(const ResultsTable& table, const std::vector<std::string>& comment_lines) {
  std::ostringstream out;
  for (const std::string& c : comment_lines) out << "# " << c << '\n';
  out << results_csv_header << '\n';
  for (const auto& [key, cell] : table.cells) {
    out << to_string(key.algorithm) << ',' << key.function_id << ',' << key.dimension << ',';
    if (finished(cell))
      out << format_sci(cell.best_over_trials) << ',' << format_sci(cell.mean);
    else
      out << "timeout,timeout";
    out << ',' << cell.per_trial.size() << '\n';
  }
  return out.str();
}

void export_csv(const ResultsTable& table, const std::filesystem::path& path,
                const std::vector<std::string>& comment_lines) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path.string() + "' for writing");
  f << to_csv(table, comment_lines);
  if (!f) throw UsageError("failed writing '" + path.string() + "'");
}

std::vector<SummaryRow> parse_csv(const std::string& text) {
  std::vector<SummaryRow> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool has_source = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> f = split(line);
    if (!header_seen) {
      if (line.rfind(results_csv_header, 0) != 0)
        throw UsageError("line " + std::to_string(line_no) + ": expected header '" + results_csv_header + "'");
      has_source = f.size() == 7;
      if (f.size() != 6 && !(has_source && f[6] == "source"))
        throw UsageError("line " + std::to_string(line_no) + ": unexpected columns");
      header_seen = true;
      continue;
    }
    if (f.size() != (has_source ? 7u : 6u))
      throw UsageError("line " + std::to_string(line_no) + ": expected " + (has_source ? "7" : "6") + " fields");
    if (f[3] == "timeout") continue;
    SummaryRow r;
    r.algorithm = trim(f[0]);
    r.function_id = static_cast<int>(parse_count(trim(f[1]), line_no));
    r.dimension = parse_count(trim(f[2]), line_no);
    r.best = parse_number(trim(f[3]), line_no);
    r.mean = parse_number(trim(f[4]), line_no);
    r.best_digits = significant_digits(trim(f[3]));
    r.mean_digits = significant_digits(trim(f[4]));
    r.trials = parse_count(trim(f[5]), line_no);
    if (has_source) r.source = trim(f[6]);
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw UsageError("missing CSV header");
  return rows;
}

std::vector<SummaryRow> read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

nlohmann::json to_json(const ResultsTable& table) {
  using nlohmann::json;
  auto opt = [](const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); };
  json cells = json::array();
  for (const auto& [key, cell] : table.cells) {
    json c;
    c["algorithm"] = std::string(to_string(key.algorithm));
    c["function"] = key.function_id;
    c["dimension"] = key.dimension;
    c["best"] = finished(cell) ? json(cell.best_over_trials) : json(nullptr);
    c["mean"] = finished(cell) ? json(cell.mean) : json(nullptr);
    c["trials"] = cell.per_trial.size();
    c["timed_out"] = cell.timed_out;
    json trials = json::array();
    for (const TrialSummary& t : cell.per_trial) {
      trials.push_back({{"seed", t.seed},
                        {"final_fitness", t.final_fitness},
                        {"iteration_at_optimum", opt(t.iteration_at_optimum)},
                        {"iteration_at_final", opt(t.iteration_at_final)},
                        {"evaluations", t.evaluations}});
    }
    c["per_trial"] = std::move(trials);
    cells.push_back(std::move(c));
  }
  return json{{"cells", std::move(cells)}};
}

// ---- reference data ------------------------------------------------------------

std::optional<SummaryRow> ReferenceData::find(const std::string& algorithm, int function_id,
                                              std::size_t dimension) const {
  for (const SummaryRow& r : rows)
    if (r.algorithm == algorithm && r.function_id == function_id && r.dimension == dimension) return r;
  return std::nullopt;
}

std::filesystem::path default_reference_path() {
  return std::filesystem::path(NRSWARM_DATA_DIR) / "reference_best_fitness.csv";
}

ReferenceData load_reference(const std::filesystem::path& path) { return ReferenceData{read_csv(path)}; }

}  // namespace nrswarm
