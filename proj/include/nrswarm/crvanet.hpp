#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nrswarm/kernels.hpp"
#include "nrswarm/optimizer.hpp"
#include "nrswarm/rng.hpp"

namespace nrswarm {

/// Spectrum-sensing and channel-access scenario.
struct SensingScenario {
  std::size_t channels = 5;
  std::size_t primary_users = 5;    ///< PU p owns channel p mod channels
  std::size_t secondary_users = 6;  ///< cognitive radios that may access per slot
  std::size_t vehicles = 20;
  double snr_db = -10.0;
  std::size_t samples_per_sensing = 1000;  ///< N
  double noise_variance = 1.0;             ///< sigma^2
  std::size_t slot_count = 1000;
  double speed_min = 10.0;  ///< m/s
  double speed_max = 30.0;
  double pu_activity = 0.5;    ///< per-slot on-probability of each PU
  double traffic_load = 0.05;  ///< per-slot packet probability of each vehicle
  double reselect_rate = 0.1;  ///< channel re-selection probability of a vehicle at speed_max
  std::size_t mc_trials = 2000;  ///< sensings per hypothesis behind the threshold objective
  std::optional<double> mu_max;            ///< default 2 N sigma^2 (1 + snr)
  std::optional<double> penalty_lambda;    ///< default 10 mu_max

  double snr_linear() const;
  double threshold_upper() const;
  double lambda() const;
  /// Throws UsageError on non-positive counts or out-of-range probabilities.
  void validate() const;
};

/// key = value lines ('#' starts a comment). Unknown keys are an error.
SensingScenario parse_scenario(const std::string& text, SensingScenario base = {});
SensingScenario load_scenario(const std::filesystem::path& path, SensingScenario base = {});
std::string describe(const SensingScenario& s);

enum class Hypothesis { h0, h1 };

struct DetectorOutcome {
  double ted = 0.0;
  Hypothesis decision = Hypothesis::h0;
  Hypothesis truth = Hypothesis::h0;
};

/// Sum of squared samples. Throws UsageError on empty input.
double ed_statistic(std::span<const double> samples);

/// Energy of N samples of AWGN (h0) or Gaussian signal plus AWGN (h1) at `snr_db`.
double sample_energy(const SensingScenario& s, Hypothesis truth, double snr_db, Rng& rng);

/// One sensing: decides h1 iff Ted > mu. Throws UsageError for mu < 0.
DetectorOutcome sense(const SensingScenario& s, Hypothesis truth, double mu, Rng& rng);

/// Ted of `trials` independent sensings; trial t uses its own child stream of
/// `seed`, so the serial and OpenMP kernels give identical vectors.
std::vector<double> simulate_energies_serial(const SensingScenario& s, Hypothesis truth, double snr_db,
                                             std::size_t trials, std::uint64_t seed);
std::vector<double> simulate_energies_omp(const SensingScenario& s, Hypothesis truth, double snr_db,
                                          std::size_t trials, std::uint64_t seed);
std::vector<double> simulate_energies(const SensingScenario& s, Hypothesis truth, double snr_db,
                                      std::size_t trials, std::uint64_t seed, Execution exec = Execution::parallel);

/// Fraction of energies strictly above mu.
double exceed_fraction(std::span<const double> energies, double mu);

struct DetectionRates {
  double pd = 0.0;
  double pfa = 0.0;
};

/// Empirical (Pd, Pfa) at the scenario SNR; deterministic given seed.
DetectionRates estimate_pd_pfa(const SensingScenario& s, double mu, std::size_t trials, std::uint64_t seed,
                               Execution exec = Execution::parallel);

/// Standard normal upper tail.
double q_function(double z);
/// Inverse of q_function on (0, 1).
double q_inverse(double p);

/// Gaussian approximation Q((mu - N sigma^2) / (sigma^2 sqrt(2N))).
double theoretical_pfa(double mu, std::size_t n, double noise_variance);
/// Matching approximation under h1 (mean N sigma^2 (1+snr), sd sigma^2 (1+snr) sqrt(2N)).
double theoretical_pd(double mu, std::size_t n, double noise_variance, double snr_linear);
/// Threshold whose theoretical Pfa equals `pfa`.
double threshold_for_pfa(double pfa, std::size_t n, double noise_variance);

struct RocPoint {
  double threshold = 0.0;
  double pfa = 0.0;
  double pd = 0.0;
  double snr_db = 0.0;
};

/// Grid over SNRs x thresholds. All thresholds of one SNR share one sample set,
/// so Pfa and Pd are non-increasing along ascending thresholds.
std::vector<RocPoint> roc_curve(const SensingScenario& s, const std::vector<double>& snr_db,
                                const std::vector<double>& thresholds, std::size_t trials, std::uint64_t seed,
                                Execution exec = Execution::parallel);

/// Thres * (-Pfa) * (beta0 * delta * alpha). Throws UsageError unless pfa is in [0, 1].
double sensing_fitness(double thres, double pfa, const OptimizerConfig& cfg, double delta);

struct ThresholdResult {
  double mu = 0.0;
  double delta = 0.0;  ///< the fixed draw used in sensing_fitness
  DetectionRates rates;  ///< on the objective's sample set
  RunRecord record;
};

/// HFASSON over mu in [0, mu_max] minimising sensing_fitness(mu, Pfa) + lambda (1 - Pd),
/// with Pfa and Pd measured on one fixed set of mc_trials sensings per hypothesis.
ThresholdResult optimize_threshold(const SensingScenario& s, const OptimizerConfig& cfg, std::uint64_t seed,
                                   Execution exec = Execution::parallel);

struct NetworkResult {
  double utilization_pct = 0.0;     ///< PU busy slots plus successful SU slots
  double su_utilization_pct = 0.0;  ///< successful SU slots only
  std::size_t pu_collisions = 0;    ///< SU transmissions onto a busy channel
  std::size_t su_collisions = 0;    ///< idle channel-slots with two or more SU transmissions
  std::size_t slots = 0;
};

/// Time-slotted channel access with energy-detection sensing at threshold mu.
/// Throws UsageError for zero slots or mu < 0.
NetworkResult run_network_sim(const SensingScenario& s, double mu, std::uint64_t seed);

struct UtilizationRow {
  std::size_t vehicles = 0;
  std::uint64_t seed = 0;
  double mu_optimized = 0.0;
  double mu_baseline = 0.0;
  NetworkResult optimized;
  NetworkResult baseline;
};

/// For every vehicle count and seed: optimise the threshold, then simulate it and
/// the theoretical-Pfa-0.1 baseline on the same seed.
std::vector<UtilizationRow> utilization_study(const SensingScenario& s, const std::vector<std::size_t>& vehicles,
                                              const std::vector<std::uint64_t>& seeds, const OptimizerConfig& cfg,
                                              Execution exec = Execution::parallel);

std::string utilization_csv(const std::vector<UtilizationRow>& rows, const std::vector<std::string>& comment_lines = {});
std::string roc_csv(const std::vector<RocPoint>& points, const std::vector<std::string>& comment_lines = {});

inline constexpr double baseline_pfa = 0.1;

}  // namespace nrswarm
