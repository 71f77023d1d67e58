#include "nrswarm/crvanet.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "nrswarm/error.hpp"

namespace nrswarm {

// ---- scenario ------------------------------------------------------------------

double SensingScenario::snr_linear() const { return std::pow(10.0, snr_db / 10.0); }

double SensingScenario::threshold_upper() const {
  if (mu_max) return *mu_max;
  return 2.0 * static_cast<double>(samples_per_sensing) * noise_variance * (1.0 + snr_linear());
}

double SensingScenario::lambda() const { return penalty_lambda ? *penalty_lambda : 10.0 * threshold_upper(); }

void SensingScenario::validate() const {
  if (channels == 0 || primary_users == 0 || secondary_users == 0 || vehicles == 0)
    throw UsageError("channels, primary_users, secondary_users and vehicles must be positive");
  if (samples_per_sensing == 0) throw UsageError("samples_per_sensing must be positive");
  if (mc_trials == 0) throw UsageError("mc_trials must be positive");
  if (!(noise_variance > 0)) throw UsageError("noise_variance must be positive");
  if (!std::isfinite(snr_db)) throw UsageError("snr_db must be finite");
  if (!(speed_min > 0 && speed_min <= speed_max)) throw UsageError("need 0 < speed_min <= speed_max");
  auto prob = [](double p, const char* name) {
    if (!(p >= 0 && p <= 1)) throw UsageError(std::string(name) + " must lie in [0, 1]");
  };
  prob(pu_activity, "pu_activity");
  prob(traffic_load, "traffic_load");
  prob(reselect_rate, "reselect_rate");
  if (mu_max && !(*mu_max > 0)) throw UsageError("mu_max must be positive");
  if (penalty_lambda && !(*penalty_lambda >= 0)) throw UsageError("penalty_lambda must be non-negative");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0') throw UsageError("scenario key '" + key + "': bad number '" + v + "'");
  return x;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const double x = to_real(key, v);
  if (x < 0 || x != std::floor(x)) throw UsageError("scenario key '" + key + "': expected a whole number");
  return static_cast<std::size_t>(x);
}

}  // namespace

SensingScenario parse_scenario(const std::string& text, SensingScenario s) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"channels", [&](auto& k, auto& v) { s.channels = to_count(k, v); }},
      {"primary_users", [&](auto& k, auto& v) { s.primary_users = to_count(k, v); }},
      {"secondary_users", [&](auto& k, auto& v) { s.secondary_users = to_count(k, v); }},
      {"vehicles", [&](auto& k, auto& v) { s.vehicles = to_count(k, v); }},
      {"snr_db", [&](auto& k, auto& v) { s.snr_db = to_real(k, v); }},
      {"samples_per_sensing", [&](auto& k, auto& v) { s.samples_per_sensing = to_count(k, v); }},
      {"noise_variance", [&](auto& k, auto& v) { s.noise_variance = to_real(k, v); }},
      {"slot_count", [&](auto& k, auto& v) { s.slot_count = to_count(k, v); }},
      {"speed_min", [&](auto& k, auto& v) { s.speed_min = to_real(k, v); }},
      {"speed_max", [&](auto& k, auto& v) { s.speed_max = to_real(k, v); }},
      {"pu_activity", [&](auto& k, auto& v) { s.pu_activity = to_real(k, v); }},
      {"traffic_load", [&](auto& k, auto& v) { s.traffic_load = to_real(k, v); }},
      {"reselect_rate", [&](auto& k, auto& v) { s.reselect_rate = to_real(k, v); }},
      {"mc_trials", [&](auto& k, auto& v) { s.mc_trials = to_count(k, v); }},
      {"mu_max", [&](auto& k, auto& v) { s.mu_max = to_real(k, v); }},
      {"penalty_lambda", [&](auto& k, auto& v) { s.penalty_lambda = to_real(k, v); }},
  };
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find_first_of("=:");
    if (eq == std::string::npos)
      throw UsageError("scenario line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("scenario line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second(key, value);
  }
  s.validate();
  return s;
}

SensingScenario load_scenario(const std::filesystem::path& path, SensingScenario base) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open scenario '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str(), base);
}

std::string describe(const SensingScenario& s) {
  std::ostringstream out;
  out << "channels=" << s.channels << " primary_users=" << s.primary_users << " secondary_users=" << s.secondary_users
      << " vehicles=" << s.vehicles << " snr_db=" << s.snr_db << " samples_per_sensing=" << s.samples_per_sensing
      << " noise_variance=" << s.noise_variance << " slot_count=" << s.slot_count << " speed=" << s.speed_min << ".."
      << s.speed_max << " pu_activity=" << s.pu_activity << " traffic_load=" << s.traffic_load
      << " reselect_rate=" << s.reselect_rate << " mc_trials=" << s.mc_trials << " mu_max=" << s.threshold_upper()
      << " penalty_lambda=" << s.lambda();
  return out.str();
}

// ---- detector ------------------------------------------------------------------

double ed_statistic(std::span<const double> samples) {
  if (samples.empty()) throw UsageError("ed_statistic: no samples");
  double t = 0.0;
  for (double v : samples) t += v * v;
  return t;
}

double sample_energy(const SensingScenario& s, Hypothesis truth, double snr_db, Rng& rng) {
  const double noise_sd = std::sqrt(s.noise_variance);
  const double signal_sd = std::sqrt(s.noise_variance * std::pow(10.0, snr_db / 10.0));
  std::vector<double> samples(s.samples_per_sensing);
  for (double& v : samples) {
    v = noise_sd * rng.normal();
    if (truth == Hypothesis::h1) v += signal_sd * rng.normal();
  }
  return ed_statistic(samples);
}

DetectorOutcome sense(const SensingScenario& s, Hypothesis truth, double mu, Rng& rng) {
  if (!(mu >= 0)) throw UsageError("sense: threshold must be non-negative");
  DetectorOutcome out;
  out.truth = truth;
  out.ted = sample_energy(s, truth, s.snr_db, rng);
  out.decision = out.ted > mu ? Hypothesis::h1 : Hypothesis::h0;
  return out;
}

namespace {

std::uint64_t stream_seed(std::uint64_t seed, Hypothesis truth) {
  return child_seed(seed, truth == Hypothesis::h0 ? 0 : 1);
}

}  // namespace

std::vector<double> simulate_energies_serial(const SensingScenario& s, Hypothesis truth, double snr_db,
                                             std::size_t trials, std::uint64_t seed) {
  const std::uint64_t base = stream_seed(seed, truth);
  std::vector<double> out(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(child_seed(base, t));
    out[t] = sample_energy(s, truth, snr_db, rng);
  }
  return out;
}

std::vector<double> simulate_energies_omp(const SensingScenario& s, Hypothesis truth, double snr_db,
                                          std::size_t trials, std::uint64_t seed) {
  const std::uint64_t base = stream_seed(seed, truth);
  std::vector<double> out(trials);
  const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    Rng rng(child_seed(base, static_cast<std::uint64_t>(t)));
    out[static_cast<std::size_t>(t)] = sample_energy(s, truth, snr_db, rng);
  }
  return out;
}

std::vector<double> simulate_energies(const SensingScenario& s, Hypothesis truth, double snr_db,
                                      std::size_t trials, std::uint64_t seed, Execution exec) {
  return exec == Execution::serial ? simulate_energies_serial(s, truth, snr_db, trials, seed)
                                   : simulate_energies_omp(s, truth, snr_db, trials, seed);
}

double exceed_fraction(std::span<const double> energies, double mu) {
  if (energies.empty()) return 0.0;
  const auto above = std::count_if(energies.begin(), energies.end(), [mu](double e) { return e > mu; });
  return static_cast<double>(above) / static_cast<double>(energies.size());
}

namespace {

/// Exceedance fraction on an ascending-sorted sample.
double sorted_exceed(const std::vector<double>& sorted, double mu) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), mu);
  return static_cast<double>(sorted.end() - it) / static_cast<double>(sorted.size());
}

}  // namespace

DetectionRates estimate_pd_pfa(const SensingScenario& s, double mu, std::size_t trials, std::uint64_t seed,
                               Execution exec) {
  if (trials < 1) throw UsageError("estimate_pd_pfa: trials must be positive");
  if (!(mu >= 0)) throw UsageError("estimate_pd_pfa: threshold must be non-negative");
  const auto e0 = simulate_energies(s, Hypothesis::h0, s.snr_db, trials, seed, exec);
  const auto e1 = simulate_energies(s, Hypothesis::h1, s.snr_db, trials, seed, exec);
  return {exceed_fraction(e1, mu), exceed_fraction(e0, mu)};
}

double q_function(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double q_inverse(double p) {
  if (!(p > 0 && p < 1)) throw UsageError("q_inverse: probability must lie in (0, 1)");
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (q_function(mid) > p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double theoretical_pfa(double mu, std::size_t n, double noise_variance) {
  const double nd = static_cast<double>(n);
  return q_function((mu - nd * noise_variance) / (noise_variance * std::sqrt(2.0 * nd)));
}

double theoretical_pd(double mu, std::size_t n, double noise_variance, double snr_linear) {
  const double nd = static_cast<double>(n);
  const double scale = noise_variance * (1.0 + snr_linear);
  return q_function((mu - nd * scale) / (scale * std::sqrt(2.0 * nd)));
}

double threshold_for_pfa(double pfa, std::size_t n, double noise_variance) {
  const double nd = static_cast<double>(n);
  return nd * noise_variance + noise_variance * std::sqrt(2.0 * nd) * q_inverse(pfa);
}

std::vector<RocPoint> roc_curve(const SensingScenario& s, const std::vector<double>& snr_db,
                                const std::vector<double>& thresholds, std::size_t trials, std::uint64_t seed,
                                Execution exec) {
  if (snr_db.empty() || thresholds.empty()) throw UsageError("roc_curve: empty SNR or threshold list");
  if (trials < 1) throw UsageError("roc_curve: trials must be positive");
  auto e0 = simulate_energies(s, Hypothesis::h0, s.snr_db, trials, seed, exec);
  std::sort(e0.begin(), e0.end());
  std::vector<RocPoint> out;
  for (double snr : snr_db) {
    auto e1 = simulate_energies(s, Hypothesis::h1, snr, trials, seed, exec);
    std::sort(e1.begin(), e1.end());
    for (double mu : thresholds) {
      if (!(mu >= 0)) throw UsageError("roc_curve: thresholds must be non-negative");
      out.push_back({mu, sorted_exceed(e0, mu), sorted_exceed(e1, mu), snr});
    }
  }
  return out;
}

// ---- threshold optimisation ---------------------------------------------------

double sensing_fitness(double thres, double pfa, const OptimizerConfig& cfg, double delta) {
  if (!(pfa >= 0 && pfa <= 1)) throw UsageError("sensing_fitness: pfa must lie in [0, 1]");
  return thres * (-pfa) * (cfg.beta0 * delta * cfg.alpha);
}

ThresholdResult optimize_threshold(const SensingScenario& s, const OptimizerConfig& cfg, std::uint64_t seed,
                                   Execution exec) {
  s.validate();
  auto e0 = simulate_energies(s, Hypothesis::h0, s.snr_db, s.mc_trials, child_seed(seed, 11), exec);
  auto e1 = simulate_energies(s, Hypothesis::h1, s.snr_db, s.mc_trials, child_seed(seed, 11), exec);
  std::sort(e0.begin(), e0.end());
  std::sort(e1.begin(), e1.end());
  Rng delta_rng(child_seed(seed, 12));
  const double delta = delta_rng.uniform(cfg.delta_range.lo, cfg.delta_range.hi);
  const double lambda = s.lambda();

  Problem p;
  p.name = "sensing_threshold";
  p.dimension = 1;
  p.bounds = Bounds{0.0, s.threshold_upper()};
  p.objective = [&](std::span<const double> x, double) {
    const double mu = x[0];
    return sensing_fitness(mu, sorted_exceed(e0, mu), cfg, delta) + lambda * (1.0 - sorted_exceed(e1, mu));
  };
  ThresholdResult r;
  r.record = optimize(p, Algorithm::hfasson, cfg, seed);
  r.mu = r.record.final_position.at(0);
  r.delta = delta;
  r.rates = {sorted_exceed(e1, r.mu), sorted_exceed(e0, r.mu)};
  return r;
}

// ---- network simulation -------------------------------------------------------

NetworkResult run_network_sim(const SensingScenario& s, double mu, std::uint64_t seed) {
  s.validate();
  if (s.slot_count == 0) throw UsageError("run_network_sim: zero slots");
  if (!(mu >= 0)) throw UsageError("run_network_sim: threshold must be non-negative");
  Rng rng(seed);
  const std::size_t nv = s.vehicles;
  std::vector<double> reselect(nv);
  std::vector<std::size_t> channel(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    reselect[v] = s.reselect_rate * rng.uniform(s.speed_min, s.speed_max) / s.speed_max;
    channel[v] = rng.index(s.channels);
  }
  std::vector<char> pu_on(s.channels);
  std::vector<std::size_t> tx(s.channels);
  std::vector<char> pending(nv);
  std::size_t used = 0;
  std::size_t su_used = 0;
  NetworkResult r;
  r.slots = s.slot_count;
  for (std::size_t slot = 0; slot < s.slot_count; ++slot) {
    std::fill(pu_on.begin(), pu_on.end(), 0);
    for (std::size_t p = 0; p < s.primary_users; ++p)
      if (rng.uniform() < s.pu_activity) pu_on[p % s.channels] = 1;
    for (std::size_t v = 0; v < nv; ++v)
      if (rng.uniform() < reselect[v]) channel[v] = rng.index(s.channels);
    for (std::size_t v = 0; v < nv; ++v) pending[v] = rng.uniform() < s.traffic_load;

    // round-robin: up to secondary_users vehicles with traffic get to sense
    std::fill(tx.begin(), tx.end(), 0);
    std::size_t served = 0;
    for (std::size_t k = 0; k < nv && served < s.secondary_users; ++k) {
      const std::size_t v = (slot + k) % nv;
      if (!pending[v]) continue;
      ++served;
      const std::size_t c = channel[v];
      const DetectorOutcome o = sense(s, pu_on[c] ? Hypothesis::h1 : Hypothesis::h0, mu, rng);
      if (o.decision == Hypothesis::h0) ++tx[c];
    }
    for (std::size_t c = 0; c < s.channels; ++c) {
      if (pu_on[c]) {
        ++used;
        if (tx[c] > 0) ++r.pu_collisions;
      } else if (tx[c] == 1) {
        ++used;
        ++su_used;
      } else if (tx[c] > 1) {
        ++r.su_collisions;
      }
    }
  }
  const double total = static_cast<double>(s.channels * s.slot_count);
  r.utilization_pct = 100.0 * static_cast<double>(used) / total;
  r.su_utilization_pct = 100.0 * static_cast<double>(su_used) / total;
  return r;
}

std::vector<UtilizationRow> utilization_study(const SensingScenario& s, const std::vector<std::size_t>& vehicles,
                                              const std::vector<std::uint64_t>& seeds, const OptimizerConfig& cfg,
                                              Execution exec) {
  s.validate();
  const double mu_base = threshold_for_pfa(baseline_pfa, s.samples_per_sensing, s.noise_variance);
  // the threshold objective does not depend on the vehicle count: optimise once per seed
  std::vector<double> mu_opt(seeds.size());
  for_each_index(
      seeds.size(), [&](std::size_t i) { mu_opt[i] = optimize_threshold(s, cfg, seeds[i], Execution::serial).mu; },
      exec);
  std::vector<UtilizationRow> rows(vehicles.size() * seeds.size());
  for_each_index(
      rows.size(),
      [&](std::size_t k) {
        const std::size_t vi = k / seeds.size();
        const std::size_t si = k % seeds.size();
        SensingScenario sc = s;
        sc.vehicles = vehicles[vi];
        UtilizationRow& row = rows[k];
        row.vehicles = vehicles[vi];
        row.seed = seeds[si];
        row.mu_optimized = mu_opt[si];
        row.mu_baseline = mu_base;
        row.optimized = run_network_sim(sc, mu_opt[si], seeds[si]);
        row.baseline = run_network_sim(sc, mu_base, seeds[si]);
      },
      exec);
  return rows;
}

std::string utilization_csv(const std::vector<UtilizationRow>& rows, const std::vector<std::string>& comment_lines) {
  std::ostringstream out;
  for (const std::string& c : comment_lines) out << "# " << c << '\n';
  out << "vehicles,seed,utilization_pct,baseline_pct,su_utilization_pct,baseline_su_pct,mu_optimized,mu_baseline\n";
  char buf[256];
  for (const UtilizationRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%llu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.vehicles,
                  static_cast<unsigned long long>(r.seed), r.optimized.utilization_pct, r.baseline.utilization_pct,
                  r.optimized.su_utilization_pct, r.baseline.su_utilization_pct, r.mu_optimized, r.mu_baseline);
    out << buf;
  }
  return out.str();
}

std::string roc_csv(const std::vector<RocPoint>& points, const std::vector<std::string>& comment_lines) {
  std::ostringstream out;
  for (const std::string& c : comment_lines) out << "# " << c << '\n';
  out << "snr_db,threshold,pfa,pd\n";
  char buf[160];
  for (const RocPoint& p : points) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6f,%.6f,%.6f\n", p.snr_db, p.threshold, p.pfa, p.pd);
    out << buf;
  }
  return out.str();
}

}  // namespace nrswarm
