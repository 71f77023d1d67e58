#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "nrswarm/bench_functions.hpp"

namespace nrswarm {

using Objective = std::function<double(std::span<const double>)>;

inline constexpr Bounds unbounded{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};

/// Finite-difference settings for the Newton refinement.
///
/// The standalone derivative estimates use h = max(fd_step_abs_floor, rel * |x_i|)
/// with rel = fd_step_rel for first and second_step_rel for second derivatives.
/// The Newton coordinate step first probes a wider window,
/// h = max(that, probe_fraction * (upper - lower)), so that the three-point
/// parabola is not swamped by rounding of large objective values, and shrinks
/// it by probe_shrink while the suggested step fails to lower f.
struct FdConfig {
  double fd_step_rel = 1e-6;
  double second_step_rel = 1e-4;
  double fd_step_abs_floor = 1e-8;
  double second_deriv_floor = 1e-12;
  double max_step = 0.5;  ///< cap on |dx| as a fraction of the coordinate range
  double probe_fraction = 0.1;
  double probe_shrink = 1e-2;

  /// Throws UsageError unless every field is strictly positive, max_step <= 1
  /// and probe_shrink < 1.
  void validate() const;
};

/// Central difference (f(x+h e_i) - f(x-h e_i)) / 2h. Where x_i +- h would leave
/// `bounds`, the three-point one-sided stencil toward the interior is used instead.
double first_derivative(const Objective& f, std::span<const double> x, std::size_t i, const FdConfig& cfg,
                        Bounds bounds = unbounded);

/// (f(x+h e_i) - 2 f(x) + f(x-h e_i)) / h^2 with the same bound handling.
double second_derivative(const Objective& f, std::span<const double> x, std::size_t i, const FdConfig& cfg,
                         Bounds bounds = unbounded);

/// x_i <- x_i - g'/g'' when g'' > second_deriv_floor and the step lowers f;
/// otherwise x is returned unchanged. |dx| is capped at max_step * range and
/// the result is clamped.
std::vector<double> newton_coordinate_step(const Objective& f, std::span<const double> x, std::size_t i,
                                           const FdConfig& cfg, Bounds bounds);

/// Outcome of a refine sweep.
struct Refinement {
  std::vector<double> x;
  double value = 0.0;
  bool improved = false;
  std::size_t evaluations = 0;
};

/// One Gauss-Seidel sweep of newton_coordinate_step over all coordinates.
/// Returns the swept point only if it strictly improves on f(x).
std::vector<double> refine(const Objective& f, std::span<const double> x, Bounds bounds, const FdConfig& cfg);

/// Same as refine() but reuses the known value f(x) and reports the refined value.
Refinement refine_from(const Objective& f, std::span<const double> x, double fx, Bounds bounds,
                       const FdConfig& cfg);

}  // namespace nrswarm
