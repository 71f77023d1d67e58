#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nrswarm/rng.hpp"

namespace nrswarm {

enum class DimensionMode { scalable, fixed };

/// Per-coordinate box [lower, upper].
struct Bounds {
  double lower = 0.0;
  double upper = 0.0;

  double range() const { return upper - lower; }
  bool contains(double v) const { return v >= lower && v <= upper; }
  double clamp(double v) const { return v < lower ? lower : (v > upper ? upper : v); }
};

/// Constant tables of the Shekel/Hartmann/Kowalik/foxholes family.
struct CoefficientTable {
  int function_id = 0;
  std::vector<std::vector<double>> matrix_a;
  std::vector<double> vector_b;
  std::vector<double> vector_c;
  std::vector<std::vector<double>> matrix_p;
};

/// Descriptor of one of the 23 classical test functions.
struct BenchmarkFunction {
  int id = 0;
  std::string name;
  DimensionMode dimension_mode = DimensionMode::scalable;
  std::size_t fixed_dimension = 0;  ///< only meaningful when dimension_mode == fixed
  Bounds bounds;
  bool stochastic = false;  ///< true only for f7

  bool accepts_dimension(std::size_t dim) const;

  /// Dimension used when the caller does not pick one: 30 for scalable functions.
  std::size_t canonical_dimension() const;

  /// Global minimum value at `dim`, if known. f8 scales with dimension.
  std::optional<double> known_optimum(std::size_t dim) const;

  /// A point inside the bounds at which the function attains known_optimum(dim).
  std::optional<std::vector<double>> optimum_witness(std::size_t dim) const;

  /// Pure evaluation without argument checks. `noise` is the f7 uniform draw
  /// and is ignored by every other function.
  double value(std::span<const double> x, double noise = 0.0) const;
};

/// All 23 functions, ids 1..23 in order.
const std::vector<BenchmarkFunction>& catalog();

/// Throws UsageError for ids outside 1..23.
const BenchmarkFunction& function_by_id(int id);

Bounds bounds_of(const BenchmarkFunction& fn);

/// Checked evaluation. Throws DimensionError / OutOfBoundsError. Consumes one
/// uniform from `rng` only when the function is stochastic.
double evaluate(const BenchmarkFunction& fn, std::span<const double> x, Rng& rng);

/// Coefficients for f14, f15 and f19..f23. Throws UsageError for other ids.
const CoefficientTable& coefficients(int function_id);

/// u(y, a, k, m) penalty used by f12/f13.
double penalty_u(double y, double a, double k, double m);

}  // namespace nrswarm
