/// nrswarm command-line front end: list, run, plan, stats, roc, vanet.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nrswarm/crvanet.hpp"
#include "nrswarm/error.hpp"
#include "nrswarm/friedman.hpp"
#include "nrswarm/harness.hpp"
#include "nrswarm/serialize.hpp"

using namespace nrswarm;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long long parse_int(const std::string& s, const char* what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw UsageError(std::string("bad ") + what + " '" + s + "'");
  return v;
}

double parse_real(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw UsageError(std::string("bad ") + what + " '" + s + "'");
  return v;
}

/// "1,3,5-8" -> {1,3,5,6,7,8}; "all" -> 1..23.
std::vector<int> parse_functions(const std::string& s) {
  if (s == "all") {
    std::vector<int> all;
    for (const BenchmarkFunction& f : catalog()) all.push_back(f.id);
    return all;
  }
  std::vector<int> ids;
  for (const std::string& item : split_list(s)) {
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      ids.push_back(static_cast<int>(parse_int(item, "function id")));
      continue;
    }
    const auto lo = parse_int(item.substr(0, dash), "function id");
    const auto hi = parse_int(item.substr(dash + 1), "function id");
    if (lo > hi) throw UsageError("bad function range '" + item + "'");
    for (auto i = lo; i <= hi; ++i) ids.push_back(static_cast<int>(i));
  }
  for (int id : ids) function_by_id(id);  // validates the range
  if (ids.empty()) throw UsageError("no functions selected");
  return ids;
}

std::vector<Algorithm> parse_algorithms(const std::string& s) {
  if (s == "all") return {Algorithm::fa, Algorithm::sso, Algorithm::hfasso, Algorithm::hfasson};
  std::vector<Algorithm> out;
  for (const std::string& item : split_list(s)) out.push_back(parse_algorithm(item));
  if (out.empty()) throw UsageError("no algorithms selected");
  return out;
}

template <class T, class F>
std::vector<T> parse_numbers(const std::string& s, F&& conv) {
  std::vector<T> out;
  for (const std::string& item : split_list(s)) out.push_back(conv(item));
  if (out.empty()) throw UsageError("empty list '" + s + "'");
  return out;
}

/// Optimizer keys of a --config file; the remaining lines are returned for the scenario parser.
std::string apply_optimizer_keys(const std::string& text, OptimizerConfig& cfg) {
  std::istringstream in(text);
  std::ostringstream rest;
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string line = trim(raw.substr(0, raw.find('#')));
    const auto eq = line.find_first_of("=:");
    if (line.empty() || eq == std::string::npos) {
      rest << raw << '\n';
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    auto real = [&] { return parse_real(v, key.c_str()); };
    auto count = [&] {
      const auto n = parse_int(v, key.c_str());
      if (n < 0) throw UsageError(key + " must be non-negative");
      return static_cast<std::size_t>(n);
    };
    if (key == "population") cfg.population = count();
    else if (key == "iter_max") cfg.iter_max = count();
    else if (key == "gamma") cfg.gamma = real();
    else if (key == "beta0") cfg.beta0 = real();
    else if (key == "alpha") cfg.alpha = real();
    else if (key == "alpha_decay") cfg.alpha_decay = real();
    else if (key == "m_exponent") cfg.m_exponent = real();
    else if (key == "delta_min") cfg.delta_range.lo = real();
    else if (key == "delta_max") cfg.delta_range.hi = real();
    else if (key == "ph_min") cfg.ph_range.lo = real();
    else if (key == "ph_max") cfg.ph_range.hi = real();
    else if (key == "temp_min") cfg.temp_range.lo = real();
    else if (key == "temp_max") cfg.temp_range.hi = real();
    else if (key == "w_min") cfg.w_min = real();
    else if (key == "w_max") cfg.w_max = real();
    else if (key == "fd_step_rel") cfg.fd.fd_step_rel = real();
    else if (key == "second_step_rel") cfg.fd.second_step_rel = real();
    else if (key == "fd_step_abs_floor") cfg.fd.fd_step_abs_floor = real();
    else if (key == "second_deriv_floor") cfg.fd.second_deriv_floor = real();
    else if (key == "max_step") cfg.fd.max_step = real();
    else if (key == "probe_fraction") cfg.fd.probe_fraction = real();
    else if (key == "probe_shrink") cfg.fd.probe_shrink = real();
    else if (key == "fa_attraction_in_hybrid") cfg.fa_attraction_in_hybrid = real() != 0.0;
    else if (key == "velocity_clamp_fraction") {
      const double f = real();
      cfg.velocity_clamp_fraction = f > 0 ? std::optional<double>(f) : std::nullopt;
    } else {
      rest << raw << '\n';
    }
  }
  return rest.str();
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw UsageError("failed writing '" + path + "'");
}

/// Writes to `path`, or standard output when it is empty or "-".
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-")
    std::cout << content;
  else
    write_file(path, content);
}

struct Common {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  int workers = 0;
  std::size_t pop = 0;    // 0: keep config value
  std::size_t iters = 0;  // 0: keep config value
};

struct Loaded {
  OptimizerConfig cfg;
  SensingScenario scenario;
};

Loaded load_config(const Common& c, bool want_scenario) {
  Loaded l;
  if (!c.config_path.empty()) {
    const std::string rest = apply_optimizer_keys(read_file(c.config_path), l.cfg);
    if (want_scenario) {
      l.scenario = parse_scenario(rest);
    } else {
      // reject stray keys in optimizer-only commands
      std::istringstream in(rest);
      std::string raw;
      while (std::getline(in, raw)) {
        const std::string line = trim(raw.substr(0, raw.find('#')));
        if (!line.empty()) throw UsageError("config: unknown key in '" + line + "'");
      }
    }
  }
  if (c.pop) l.cfg.population = c.pop;
  if (c.iters) l.cfg.iter_max = c.iters;
  l.cfg.validate();
  if (want_scenario) l.scenario.validate();
  return l;
}

Execution execution_for(int workers) {
  if (workers == 1) return Execution::serial;
  set_threads(workers);
  return Execution::parallel;
}

void add_common(CLI::App* app, Common& c, bool with_optimizer) {
  app->add_option("--config", c.config_path, "key = value file (optimizer and scenario keys)");
  app->add_option("--out", c.out, "output path ('-' for standard output)");
  app->add_option("--seed", c.seed, "random seed (seed base for multi-run commands)");
  app->add_option("--workers", c.workers, "OpenMP threads: 1 = serial, 0 = all available")->check(CLI::NonNegativeNumber);
  if (with_optimizer) {
    app->add_option("--pop", c.pop, "population size (default 30)");
    app->add_option("--iters", c.iters, "iterations (default 1000)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::string command_line = "nrswarm";
  for (int i = 1; i < argc; ++i) command_line += std::string(" ") + argv[i];

  CLI::App app{"Hybrid firefly / sperm-swarm optimisation with Newton refinement"};
  app.require_subcommand(1);

  // list
  auto* list = app.add_subcommand("list", "print the 23 benchmark functions");
  bool list_json = false;
  std::string list_out;
  list->add_flag("--json", list_json, "JSON instead of CSV");
  list->add_option("--out", list_out, "output path");

  // run
  auto* run = app.add_subcommand("run", "one seeded optimisation, written as a RunRecord JSON");
  Common run_c;
  std::string run_alg = "hfasson";
  int run_fn = 1;
  std::size_t run_dim = 0;
  add_common(run, run_c, true);
  run->add_option("--algorithm", run_alg, "fa | sso | hfasso | hfasson");
  run->add_option("--function", run_fn, "function id 1..23");
  run->add_option("--dim", run_dim, "dimension (default: 30, or the function's fixed dimension)");

  // plan
  auto* plan = app.add_subcommand("plan", "algorithms x functions x dimensions x trials -> best-fitness CSV");
  Common plan_c;
  std::string plan_alg = "hfasson";
  std::string plan_fn = "all";
  std::string plan_dim = "30";
  std::size_t plan_trials = 10;
  std::string plan_json;
  double plan_budget = 0.0;
  add_common(plan, plan_c, true);
  plan->add_option("--algorithm", plan_alg, "comma list or 'all'");
  plan->add_option("--function", plan_fn, "ids, ranges (1-13) or 'all'");
  plan->add_option("--dim", plan_dim, "comma list of dimensions");
  plan->add_option("--trials", plan_trials, "runs per cell (default 10)");
  plan->add_option("--json", plan_json, "also write the JSON mirror here");
  plan->add_option("--budget-ms", plan_budget, "wall-clock budget per cell (0 = none)");

  // stats
  auto* stats = app.add_subcommand("stats", "Friedman ranking of a best-fitness CSV");
  std::string stats_in;
  std::string stats_out;
  std::size_t stats_dim = 0;
  std::string stats_basis = "best";
  bool stats_exact = false;
  std::string stats_algs;
  stats->add_option("--input", stats_in, "results CSV")->required();
  stats->add_option("--out", stats_out, "rankings CSV");
  stats->add_option("--dim", stats_dim, "rank one dimension only (0 = all)");
  stats->add_option("--basis", stats_basis, "best | mean");
  stats->add_flag("--exact-ties", stats_exact, "tie only bit-identical values (default: printed precision)");
  stats->add_option("--algorithm", stats_algs, "comma list restricting and ordering algorithms");

  // roc
  auto* roc = app.add_subcommand("roc", "Monte-Carlo ROC grid of the energy detector");
  Common roc_c;
  std::string roc_snr = "17,10,0,-10,-17";
  std::string roc_thr;
  std::size_t roc_trials = 10000;
  add_common(roc, roc_c, false);
  roc->add_option("--snr", roc_snr, "comma list of SNRs in dB");
  roc->add_option("--thresholds", roc_thr, "comma list (default: 41 points around N sigma^2)");
  roc->add_option("--trials", roc_trials, "sensings per hypothesis");

  // vanet
  auto* vanet = app.add_subcommand("vanet", "spectrum utilisation: optimised threshold vs Pfa-0.1 baseline");
  Common vanet_c;
  std::string vanet_vehicles = "20,40,60,80,100";
  std::size_t vanet_trials = 10;
  add_common(vanet, vanet_c, true);
  vanet->add_option("--vehicles", vanet_vehicles, "comma list of vehicle counts");
  vanet->add_option("--trials", vanet_trials, "seeds per vehicle count (seed, seed+1, ...)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const std::vector<std::string> header{command_line};
    if (list->parsed()) {
      if (list_json) {
        emit(list_out, catalog_json().dump(2) + "\n");
      } else {
        std::ostringstream out;
        out << "id,name,lower,upper,dimension_mode,dimension,known_optimum\n";
        for (const BenchmarkFunction& f : catalog()) {
          const auto opt = f.known_optimum(f.canonical_dimension());
          out << f.id << ',' << f.name << ',' << f.bounds.lower << ',' << f.bounds.upper << ','
              << (f.dimension_mode == DimensionMode::fixed ? "fixed" : "scalable") << ',' << f.canonical_dimension()
              << ',' << (opt ? format_sci(*opt) : std::string("none")) << '\n';
        }
        emit(list_out, out.str());
      }
    } else if (run->parsed()) {
      const Loaded l = load_config(run_c, false);
      const BenchmarkFunction& fn = function_by_id(run_fn);
      const std::size_t dim = run_dim ? run_dim : fn.canonical_dimension();
      const Problem p = make_problem(fn, dim);
      OptimizerConfig cfg = l.cfg;
      cfg.execution = execution_for(run_c.workers);
      RunRecord rec = optimize(p, parse_algorithm(run_alg), cfg, run_c.seed);
      nlohmann::json j = to_json(rec);
      j["command"] = command_line;
      emit(run_c.out, j.dump(2) + "\n");
      std::cerr << to_string(rec.algorithm) << " f" << fn.id << " " << dim << "D seed " << rec.seed
                << ": best " << format_sci(rec.final_fitness) << "\n";
    } else if (plan->parsed()) {
      const Loaded l = load_config(plan_c, false);
      ExperimentPlan ep;
      ep.algorithms = parse_algorithms(plan_alg);
      ep.function_ids = parse_functions(plan_fn);
      ep.dimensions = parse_numbers<std::size_t>(plan_dim, [](const std::string& s) {
        const auto v = parse_int(s, "dimension");
        if (v < 1) throw UsageError("dimension must be positive");
        return static_cast<std::size_t>(v);
      });
      ep.trials = plan_trials;
      ep.cfg = l.cfg;
      ep.seed_base = plan_c.seed;
      if (plan_budget > 0) ep.cell_budget_ms = plan_budget;
      const ResultsTable t = run_plan(ep, execution_for(plan_c.workers));
      emit(plan_c.out, to_csv(t, header));
      if (!plan_json.empty()) {
        nlohmann::json j = to_json(t);
        j["command"] = command_line;
        j["config"] = to_json(ep.cfg);
        write_file(plan_json, j.dump(2) + "\n");
      }
    } else if (stats->parsed()) {
      RankOptions opts;
      opts.dimension = stats_dim;
      opts.printed_precision_ties = !stats_exact;
      if (stats_basis == "mean")
        opts.basis = RankBasis::mean;
      else if (stats_basis != "best")
        throw UsageError("--basis must be best or mean");
      if (!stats_algs.empty()) opts.algorithms = split_list(stats_algs);
      std::size_t skipped = 0;
      const RankMatrix m = build_rank_matrix(read_csv(stats_in), opts, &skipped);
      const FriedmanResult r = friedman(m);
      const auto firsts = first_place_counts(m);
      const std::size_t k = m.algorithms.size();
      std::cerr << "rank-sum check (each problem sums to k(k+1)/2 = " << k * (k + 1) / 2
                << "): " << (m.rank_sums_exact() ? "ok" : "FAILED") << " over " << m.problems.size()
                << " problems, " << skipped << " incomplete problems skipped\n";
      emit(stats_out, rankings_csv(m, r, firsts, header));
    } else if (roc->parsed()) {
      const Loaded l = load_config(roc_c, true);
      const SensingScenario& s = l.scenario;
      std::vector<double> thresholds;
      if (roc_thr.empty()) {
        const double n = static_cast<double>(s.samples_per_sensing) * s.noise_variance;
        for (int i = 0; i <= 40; ++i) thresholds.push_back(n * (0.8 + 0.02 * i));
      } else {
        thresholds = parse_numbers<double>(roc_thr, [](const std::string& v) { return parse_real(v, "threshold"); });
      }
      const auto snrs = parse_numbers<double>(roc_snr, [](const std::string& v) { return parse_real(v, "SNR"); });
      const auto pts = roc_curve(s, snrs, thresholds, roc_trials, roc_c.seed, execution_for(roc_c.workers));
      std::vector<std::string> h = header;
      h.push_back(describe(s));
      emit(roc_c.out, roc_csv(pts, h));
    } else if (vanet->parsed()) {
      const Loaded l = load_config(vanet_c, true);
      const auto vehicles = parse_numbers<std::size_t>(vanet_vehicles, [](const std::string& v) {
        const auto n = parse_int(v, "vehicle count");
        if (n < 1) throw UsageError("vehicle count must be positive");
        return static_cast<std::size_t>(n);
      });
      if (vanet_trials < 1) throw UsageError("--trials must be positive");
      std::vector<std::uint64_t> seeds;
      for (std::size_t i = 0; i < vanet_trials; ++i) seeds.push_back(vanet_c.seed + i);
      const auto rows = utilization_study(l.scenario, vehicles, seeds, l.cfg, execution_for(vanet_c.workers));
      std::vector<std::string> h = header;
      h.push_back(describe(l.scenario));
      emit(vanet_c.out, utilization_csv(rows, h));
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
