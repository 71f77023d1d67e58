/// Acceptance checks 1-7. Prints one PASS/FAIL line per criterion and exits
/// nonzero if any fails. Details go to stderr.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli_util.hpp"
#include "nrswarm/bench_functions.hpp"
#include "nrswarm/crvanet.hpp"
#include "nrswarm/friedman.hpp"
#include "nrswarm/harness.hpp"
#include "nrswarm/newton.hpp"

using namespace nrswarm;

namespace {

constexpr double never = std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      std::cerr << "    miss: " << what << "\n";
    }
  }
};

std::map<int, std::pair<bool, std::string>> verdicts;

void report(int n, const Verdict& v, const std::string& summary) {
  const std::string line = "criterion " + std::to_string(n) + ": " + (v.pass ? "PASS" : "FAIL") + " - " + summary;
  std::cerr << line << std::endl;
  verdicts[n] = {v.pass, line};
}

// ---- 1 and 2 ------------------------------------------------------------------

ResultsTable hfasson_30d;  // reused by criterion 2

void zero_optimum() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentPlan plan;
  plan.algorithms = {Algorithm::hfasson};
  plan.function_ids = {1, 2, 3, 4, 6, 9, 11};
  plan.dimensions = {30, 50, 100};
  plan.trials = 10;
  plan.trials_by_dimension[100] = 3;
  const ResultsTable t = run_plan(plan, Execution::parallel);
  Verdict v;
  for (const auto& [key, cell] : t.cells) {
    const double tol = key.function_id <= 4 ? 1e-16 : 1e-12;
    char line[160];
    std::snprintf(line, sizeof line, "f%d %zuD: best %.3e over %zu seeds (need <= %.0e)", key.function_id,
                  key.dimension, cell.best_over_trials, cell.per_trial.size(), tol);
    std::cerr << "  " << line << "\n";
    v.require(cell.best_over_trials <= tol, line);
    if (key.dimension == 30) hfasson_30d.cells[key] = cell;
  }
  char s[128];
  std::snprintf(s, sizeof s, "HFASSON zero-optimum reproduction on f1-f4, f6, f9, f11 at 30/50/100D (%.0f s)",
                seconds_since(t0));
  report(1, v, s);
}

void convergence_order() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<int> fids{1, 2, 3, 4, 9, 10, 11};
  ExperimentPlan plan;
  plan.function_ids = {10};
  plan.dimensions = {30};
  plan.trials = 10;
  plan.algorithms = {Algorithm::hfasson};
  ResultsTable hfasson = run_plan(plan, Execution::parallel);
  for (const auto& [k, c] : hfasson_30d.cells) hfasson.cells[k] = c;
  plan.function_ids = fids;
  plan.algorithms = {Algorithm::hfasso};
  const ResultsTable hfasso = run_plan(plan, Execution::parallel);

  auto medians = [](const CellResult& c) {
    std::vector<double> it;
    for (const auto& t : c.per_trial)
      it.push_back(t.iteration_at_optimum ? static_cast<double>(*t.iteration_at_optimum) : never);
    return median(it);
  };
  Verdict v;
  for (int id : fids) {
    const double a = medians(hfasson.cells.at({Algorithm::hfasson, id, 30}));
    const double b = medians(hfasso.cells.at({Algorithm::hfasso, id, 30}));
    std::ostringstream line;
    line << "f" << id << " 30D median iteration at optimum: HFASSON " << a << " vs HFASSO " << b;
    std::cerr << "  " << line.str() << "\n";
    v.require(a < b, line.str());
  }
  char s[128];
  std::snprintf(s, sizeof s, "HFASSON reaches the optimum earlier than HFASSO (paired seeds, 30D, %.0f s)",
                seconds_since(t0));
  report(2, v, s);
}

// ---- 3 ------------------------------------------------------------------------

void friedman_oracle() {
  Verdict v;
  RankMatrix m;
  m.algorithms = {"A", "B", "C"};
  for (int p = 0; p < 4; ++p) {
    m.problems.push_back({p + 1, 30});
    m.ranks.push_back({1, 2, 3});
  }
  const FriedmanResult r = friedman(m);
  v.require(r.chi2 == 8.0 && r.df == 2, "hand-worked 3x4 matrix: chi2 " + std::to_string(r.chi2));

  Rng rng(2718);
  std::size_t bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + rng.index(9);
    RankMatrix rm;
    rm.algorithms.resize(k);
    for (std::size_t p = 0; p < 2 + rng.index(20); ++p) {
      std::vector<double> values(k);
      for (double& x : values) x = static_cast<double>(rng.index(4));
      rm.ranks.push_back(rank_problem(values));
    }
    bad += !rm.rank_sums_exact();
  }
  v.require(bad == 0, std::to_string(bad) + " random matrices broke the rank-sum identity");

  const ReferenceData ref = load_reference();
  std::ostringstream firsts;
  for (std::size_t dim : {30u, 50u, 100u}) {
    RankOptions opts;
    opts.dimension = dim;
    const RankMatrix rm = build_rank_matrix(ref.rows, opts);
    const auto counts = first_place_counts(rm);
    const auto at = std::find(rm.algorithms.begin(), rm.algorithms.end(), "HFASSON") - rm.algorithms.begin();
    const std::size_t n = counts[static_cast<std::size_t>(at)];
    firsts << dim << "D=" << n << " ";
    std::ostringstream line;
    line << dim << "D: HFASSON holds " << n << " first places on the reference table (need 9)";
    std::cerr << "  " << line.str() << "\n";
    v.require(n == 9, line.str());
  }
  report(3, v, "Friedman oracle chi2=8, rank sums over 1000 random matrices, reference first places " + firsts.str());
}

// ---- 4 ------------------------------------------------------------------------

void newton_exactness() {
  Verdict v;
  const FdConfig cfg;
  Rng rng(4242);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + rng.index(50);
    std::vector<double> a(d), c(d), x(d);
    for (std::size_t i = 0; i < d; ++i) {
      a[i] = rng.uniform(0.5, 5);
      c[i] = rng.uniform(-5, 5);
      x[i] = rng.uniform(-10, 10);
    }
    const double b = rng.uniform(-5, 5);
    const Objective f = [&](std::span<const double> y) {
      double s = b;
      for (std::size_t i = 0; i < d; ++i) s += a[i] * (y[i] - c[i]) * (y[i] - c[i]);
      return s;
    };
    const auto y = refine(f, x, Bounds{-20, 20}, cfg);
    for (std::size_t i = 0; i < d; ++i) worst = std::max(worst, std::abs(y[i] - c[i]));
  }
  v.require(worst <= 1e-8, "quadratic sweep worst coordinate error " + std::to_string(worst));

  double worst_rel = 0.0;
  for (int id : {1, 5}) {
    const auto& fn = function_by_id(id);
    const Objective f = [&](std::span<const double> y) { return fn.value(y); };
    for (int t = 0; t < 100; ++t) {
      std::vector<double> x(10);
      for (double& xi : x) xi = rng.uniform(fn.bounds.lower, fn.bounds.upper);
      std::vector<double> exact(10, 0.0);
      if (id == 1) {
        for (std::size_t i = 0; i < 10; ++i) exact[i] = 2 * x[i];
      } else {
        for (std::size_t i = 0; i + 1 < 10; ++i) {
          const double r = x[i + 1] - x[i] * x[i];
          exact[i] += -400 * x[i] * r - 2 * (1 - x[i]);
          exact[i + 1] += 200 * r;
        }
      }
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < 10; ++i) {
        const double e = first_derivative(f, x, i, cfg, fn.bounds) - exact[i];
        num += e * e;
        den += exact[i] * exact[i];
      }
      worst_rel = std::max(worst_rel, std::sqrt(num / den));
    }
  }
  v.require(worst_rel <= 1e-5, "gradient relative error " + std::to_string(worst_rel));
  char s[160];
  std::snprintf(s, sizeof s, "Newton sweep error %.2e on 100 quadratics, FD gradient relative error %.2e on f1/f5",
                worst, worst_rel);
  report(4, v, s);
}

// ---- 5 ------------------------------------------------------------------------

void detector_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  SensingScenario s;
  const std::size_t trials = 10000;
  std::ostringstream detail;
  for (double p : {0.01, 0.05, 0.1, 0.5, 0.9}) {
    const double mu = threshold_for_pfa(p, s.samples_per_sensing, s.noise_variance);
    const double emp = estimate_pd_pfa(s, mu, trials, 505).pfa;
    const double th = theoretical_pfa(mu, s.samples_per_sensing, s.noise_variance);
    detail << p << "->" << emp << " ";
    v.require(std::abs(emp - th) <= 0.02, "Pfa " + std::to_string(emp) + " vs theory " + std::to_string(th));
  }
  auto e0 = simulate_energies(s, Hypothesis::h0, s.snr_db, trials, 606);
  std::sort(e0.begin(), e0.end());
  const double mu = e0[static_cast<std::size_t>(0.9 * trials) - 1];  // empirical Pfa = 0.1
  const auto pts = roc_curve(s, {-17.0, 17.0}, {mu}, trials, 606);
  v.require(pts[1].pd > pts[0].pd,
            "Pd at 17 dB " + std::to_string(pts[1].pd) + " vs -17 dB " + std::to_string(pts[0].pd));
  char s5[200];
  std::snprintf(s5, sizeof s5, "empirical vs theoretical Pfa within 0.02; Pd(17 dB)=%.4f > Pd(-17 dB)=%.4f at Pfa %.3f (%.0f s)",
                pts[1].pd, pts[0].pd, pts[0].pfa, seconds_since(t0));
  std::cerr << "  Pfa targets -> empirical: " << detail.str() << "\n";
  report(5, v, s5);
}

// ---- 6 ------------------------------------------------------------------------

void utilization_direction() {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  const SensingScenario s;
  const OptimizerConfig cfg;
  const std::vector<std::size_t> vehicles{20, 60, 80, 100};
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 1; i <= 10; ++i) seeds.push_back(i);
  const auto rows = utilization_study(s, vehicles, seeds, cfg, Execution::parallel);
  std::ostringstream brief;
  for (std::size_t nv : vehicles) {
    std::vector<double> opt, base;
    double mu = 0.0;
    for (const auto& r : rows)
      if (r.vehicles == nv) {
        opt.push_back(r.optimized.utilization_pct);
        base.push_back(r.baseline.utilization_pct);
        mu += r.mu_optimized / static_cast<double>(seeds.size());
      }
    char line[200];
    std::snprintf(line, sizeof line, "%zu vehicles: median utilization optimized %.2f%% vs baseline %.2f%% (mean mu* %.1f, baseline mu %.1f)",
                  nv, median(opt), median(base), mu, rows.front().mu_baseline);
    std::cerr << "  " << line << "\n";
    v.require(median(opt) >= median(base), line);
    brief << nv << ":" << median(opt) << "/" << median(base) << " ";
  }
  char s6[200];
  std::snprintf(s6, sizeof s6, "median utilization optimized/baseline %s(%.0f s)", brief.str().c_str(),
                seconds_since(t0));
  report(6, v, s6);
}

// ---- 7 ------------------------------------------------------------------------

void cli_determinism() {
  Verdict v;
  const auto dir = cli_util::scratch_dir();
  const auto scenario = dir / "acc_scenario.cfg";
  std::ofstream(scenario) << "slot_count = 200\nmc_trials = 200\niter_max = 30\n";
  const auto plan_csv = dir / "acc_plan.csv";
  const auto out = dir / "acc_out";
  struct Cmd {
    std::string args;
    bool json;
  };
  const std::vector<Cmd> cmds{
      {"list --out " + out.string(), false},
      {"list --json --out " + out.string(), false},
      {"run --algorithm hfasson --function 9 --dim 10 --seed 7 --iters 60 --out " + out.string(), true},
      {"run --algorithm fa --function 7 --dim 10 --seed 7 --iters 30 --out " + out.string(), true},
      {"plan --algorithm all --function 1,10,16 --dim 5 --trials 3 --iters 30 --seed 11 --out " + plan_csv.string(),
       false},
      {"stats --input " + plan_csv.string() + " --out " + out.string(), false},
      {"roc --snr -17,-10,17 --trials 500 --seed 5 --out " + out.string(), false},
      {"vanet --vehicles 20,60 --trials 2 --seed 3 --config " + scenario.string() + " --out " + out.string(), false},
  };
  std::size_t identical = 0;
  for (const Cmd& c : cmds) {
    const bool is_plan = c.args.rfind("plan", 0) == 0;
    const auto target = is_plan ? plan_csv : out;
    const auto a = cli_util::run(c.args);
    const std::string first = cli_util::slurp(target);
    const auto b = cli_util::run(c.args);
    const std::string second = cli_util::slurp(target);
    bool same = a.code == 0 && b.code == 0 && !first.empty();
    if (same) same = c.json ? cli_util::without_wall_time(first) == cli_util::without_wall_time(second) : first == second;
    v.require(same, "nrswarm " + c.args + " (exit " + std::to_string(a.code) + "/" + std::to_string(b.code) + ")");
    identical += same;
  }
  report(7, v, std::to_string(identical) + "/" + std::to_string(cmds.size()) +
                   " CLI commands byte-identical on repeat (wall_ms excluded)");
}

}  // namespace

int main() {
  const int threads = max_threads();
  std::cerr << "acceptance: " << threads << " OpenMP thread(s)\n";
  struct Step {
    int n;
    void (*fn)();
  };
  const Step steps[] = {{3, friedman_oracle}, {4, newton_exactness}, {5, detector_oracle}, {7, cli_determinism},
                        {6, utilization_direction}, {1, zero_optimum}, {2, convergence_order}};
  for (const Step& s : steps) {
    try {
      s.fn();
    } catch (const std::exception& e) {
      Verdict v;
      v.pass = false;
      report(s.n, v, std::string("error: ") + e.what());
    }
  }
  bool all = true;
  for (const auto& [n, result] : verdicts) {
    std::cout << result.second << "\n";
    all = all && result.first;
  }
  std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
  return all ? 0 : 1;
}
