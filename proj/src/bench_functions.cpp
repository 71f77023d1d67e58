#include "nrswarm/bench_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nrswarm/error.hpp"

namespace nrswarm {
namespace {

constexpr double pi = std::numbers::pi;

inline double sqr(double v) { return v * v; }

BenchmarkFunction scalable(int id, std::string name, double lo, double hi, bool stochastic = false) {
  return BenchmarkFunction{id, std::move(name), DimensionMode::scalable, 0, Bounds{lo, hi}, stochastic};
}

BenchmarkFunction fixed(int id, std::string name, std::size_t dim, double lo, double hi) {
  return BenchmarkFunction{id, std::move(name), DimensionMode::fixed, dim, Bounds{lo, hi}, false};
}

std::vector<BenchmarkFunction> build_catalog() {
  return {
      scalable(1, "sphere", -100, 100),
      scalable(2, "schwefel_2_22", -100, 100),
      scalable(3, "schwefel_1_2", -100, 100),
      scalable(4, "schwefel_2_21", -100, 100),
      scalable(5, "rosenbrock", -30, 30),
      scalable(6, "step", -100, 100),
      scalable(7, "quartic_noise", -1.28, 1.28, true),
      scalable(8, "schwefel_2_26", -500, 500),
      scalable(9, "rastrigin", -5.12, 5.12),
      scalable(10, "ackley", -32, 32),
      scalable(11, "griewank", -600, 600),
      scalable(12, "penalized_1", -50, 50),
      scalable(13, "penalized_2", -50, 50),
      fixed(14, "shekel_foxholes", 2, -65.536, 65.536),
      fixed(15, "kowalik", 4, -5, 5),
      fixed(16, "six_hump_camel", 2, -5, 5),
      fixed(17, "branin", 2, -5, 5),
      fixed(18, "goldstein_price", 2, -2, 2),
      fixed(19, "hartmann_3", 3, 0, 1),
      fixed(20, "hartmann_6", 6, 0, 1),
      fixed(21, "shekel_5", 4, 0, 10),
      fixed(22, "shekel_7", 4, 0, 10),
      fixed(23, "shekel_10", 4, 0, 10),
  };
}

CoefficientTable foxholes_table() {
  CoefficientTable t;
  t.function_id = 14;
  const double grid[5] = {-32, -16, 0, 16, 32};
  t.matrix_a.assign(2, std::vector<double>(25));
  for (int j = 0; j < 25; ++j) {
    t.matrix_a[0][j] = grid[j % 5];
    t.matrix_a[1][j] = grid[j / 5];
  }
  return t;
}

CoefficientTable kowalik_table() {
  CoefficientTable t;
  t.function_id = 15;
  // vector_c holds the a_i targets, vector_b the b_i = 1 / b_i^-1 abscissae
  t.vector_c = {0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627, 0.0456, 0.0342, 0.0323, 0.0235, 0.0246};
  for (double inv : {0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0}) t.vector_b.push_back(1.0 / inv);
  return t;
}

CoefficientTable hartmann3_table() {
  CoefficientTable t;
  t.function_id = 19;
  t.matrix_a = {{3, 10, 30}, {0.1, 10, 35}, {3, 10, 30}, {0.1, 10, 35}};
  t.vector_c = {1.0, 1.2, 3.0, 3.2};
  t.matrix_p = {{0.3689, 0.1170, 0.2673},
                {0.4699, 0.4387, 0.7470},
                {0.1091, 0.8732, 0.5547},
                {0.03815, 0.5743, 0.8828}};
  return t;
}

CoefficientTable hartmann6_table() {
  CoefficientTable t;
  t.function_id = 20;
  t.matrix_a = {{10, 3, 17, 3.5, 1.7, 8},
                {0.05, 10, 17, 0.1, 8, 14},
                {3, 3.5, 1.7, 10, 17, 8},
                {17, 8, 0.05, 10, 0.1, 14}};
  t.vector_c = {1.0, 1.2, 3.0, 3.2};
  t.matrix_p = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};
  return t;
}

CoefficientTable shekel_table(int id, std::size_t rows) {
  static const std::vector<std::vector<double>> a = {
      {4, 4, 4, 4}, {1, 1, 1, 1}, {8, 8, 8, 8}, {6, 6, 6, 6}, {3, 7, 3, 7},
      {2, 9, 2, 9}, {5, 5, 3, 3}, {8, 1, 8, 1}, {6, 2, 6, 2}, {7, 3.6, 7, 3.6}};
  static const std::vector<double> c = {0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5};
  CoefficientTable t;
  t.function_id = id;
  t.matrix_a.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(rows));
  t.vector_c.assign(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(rows));
  return t;
}

double foxholes(std::span<const double> x) {
  const auto& t = coefficients(14);
  double s = 1.0 / 500.0;
  for (int j = 0; j < 25; ++j) {
    double inner = j + 1;
    for (int i = 0; i < 2; ++i) inner += std::pow(x[i] - t.matrix_a[i][j], 6);
    s += 1.0 / inner;
  }
  return 1.0 / s;
}

double kowalik(std::span<const double> x) {
  const auto& t = coefficients(15);
  double s = 0.0;
  for (std::size_t i = 0; i < t.vector_b.size(); ++i) {
    const double b = t.vector_b[i];
    s += sqr(t.vector_c[i] - x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3]));
  }
  return s;
}

double hartmann(const CoefficientTable& t, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.vector_c.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) inner += t.matrix_a[i][j] * sqr(x[j] - t.matrix_p[i][j]);
    s -= t.vector_c[i] * std::exp(-inner);
  }
  return s;
}

double shekel(const CoefficientTable& t, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.vector_c.size(); ++i) {
    double d = t.vector_c[i];
    for (std::size_t j = 0; j < 4; ++j) d += sqr(x[j] - t.matrix_a[i][j]);
    s -= 1.0 / d;
  }
  return s;
}

}  // namespace

double penalty_u(double y, double a, double k, double m) {
  if (y > a) return k * std::pow(y - a, m);
  if (y < -a) return k * std::pow(-y - a, m);
  return 0.0;
}

bool BenchmarkFunction::accepts_dimension(std::size_t dim) const {
  return dimension_mode == DimensionMode::scalable ? dim >= 1 : dim == fixed_dimension;
}

std::size_t BenchmarkFunction::canonical_dimension() const {
  return dimension_mode == DimensionMode::scalable ? 30 : fixed_dimension;
}

std::optional<double> BenchmarkFunction::known_optimum(std::size_t dim) const {
  if (!accepts_dimension(dim)) return std::nullopt;
  switch (id) {
    case 8: return -418.98288727243371 * static_cast<double>(dim);
    case 14: return 0.99800383779445;
    case 15: return 0.00030748598780560606;
    case 16: return -1.0316284534898776;
    case 17: return 0.39788735772973816;
    case 18: return 3.0;
    case 19: return -3.8627821478207554;
    case 20: return -3.322368011415515;
    case 21: return -10.153199679058229;
    case 22: return -10.402940566818662;
    case 23: return -10.536409816692045;
    default: return 0.0;  // f1..f7, f9..f13
  }
}

std::optional<std::vector<double>> BenchmarkFunction::optimum_witness(std::size_t dim) const {
  if (!accepts_dimension(dim)) return std::nullopt;
  switch (id) {
    case 5: return std::vector<double>(dim, 1.0);
    case 8: return std::vector<double>(dim, 420.96874635998202);
    case 12: return std::vector<double>(dim, -1.0);
    case 13: return std::vector<double>(dim, 1.0);
    case 14: return std::vector<double>{-31.978332112713616, -31.9783411398899};
    case 15: return std::vector<double>{0.1928334531220072, 0.19083624744042324, 0.12311730138624344,
                                        0.13576599305292816};
    case 16: return std::vector<double>{0.08984201681377461, -0.7126564020603137};
    case 17: return std::vector<double>{pi, 2.275};
    case 18: return std::vector<double>{0.0, -1.0};
    case 19: return std::vector<double>{0.11461434203082951, 0.5556488507905384, 0.8525469538460251};
    case 20: return std::vector<double>{0.20168951037794658, 0.15001069146456325, 0.4768739733706766,
                                        0.2753324288543796, 0.3116516165632252, 0.6573005308464771};
    case 21: return std::vector<double>{4.000037152376549, 4.000133278657566, 4.000037151057555,
                                        4.000133277090425};
    case 22: return std::vector<double>{4.000572914277084, 4.000689366040889, 3.9994897107938447,
                                        3.9996061600067923};
    case 23: return std::vector<double>{4.000746530253313, 4.000592936779709, 3.9996633957714787,
                                        3.9995097993299975};
    default: return std::vector<double>(dim, 0.0);
  }
}

double BenchmarkFunction::value(std::span<const double> x, double noise) const {
  const std::size_t d = x.size();
  double s = 0.0;
  switch (id) {
    case 1:
      for (double v : x) s += v * v;
      return s;
    case 2: {
      double prod = 1.0;
      for (double v : x) {
        s += std::abs(v);
        prod *= std::abs(v);
      }
      return s + prod;
    }
    case 3: {
      double partial = 0.0;
      for (double v : x) {
        partial += v;
        s += partial * partial;
      }
      return s;
    }
    case 4:
      for (double v : x) s = std::max(s, std::abs(v));
      return s;
    case 5:
      for (std::size_t i = 0; i + 1 < d; ++i) s += 100.0 * sqr(x[i + 1] - x[i] * x[i]) + sqr(x[i] - 1.0);
      return s;
    case 6:
      for (double v : x) s += sqr(std::floor(v + 0.5));
      return s;
    case 7:
      for (std::size_t i = 0; i < d; ++i) s += static_cast<double>(i + 1) * sqr(sqr(x[i]));
      return s + noise;
    case 8:
      for (double v : x) s -= v * std::sin(std::sqrt(std::abs(v)));
      return s;
    case 9:
      for (double v : x) s += v * v - 10.0 * std::cos(2.0 * pi * v) + 10.0;
      return s;
    case 10: {
      double sq = 0.0, cs = 0.0;
      for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * pi * v);
      }
      const double n = static_cast<double>(d);
      return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 + std::numbers::e;
    }
    case 11: {
      double prod = 1.0;
      for (std::size_t i = 0; i < d; ++i) {
        s += x[i] * x[i];
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
      }
      return s / 4000.0 - prod + 1.0;
    }
    case 12: {
      auto v = [&](std::size_t i) { return 1.0 + (x[i] + 1.0) / 4.0; };
      double inner = 10.0 * sqr(std::sin(pi * v(0)));
      for (std::size_t i = 0; i + 1 < d; ++i) inner += sqr(v(i) - 1.0) * (1.0 + 10.0 * sqr(std::sin(pi * v(i + 1))));
      inner += sqr(v(d - 1) - 1.0);
      double pen = 0.0;
      for (double y : x) pen += penalty_u(y, 10.0, 100.0, 4.0);
      return pi / static_cast<double>(d) * inner + pen;
    }
    case 13: {
      double inner = sqr(std::sin(3.0 * pi * x[0]));
      for (std::size_t i = 0; i + 1 < d; ++i) inner += sqr(x[i] - 1.0) * (1.0 + sqr(std::sin(3.0 * pi * x[i + 1])));
      inner += sqr(x[d - 1] - 1.0) * (1.0 + sqr(std::sin(2.0 * pi * x[d - 1])));
      double pen = 0.0;
      for (double y : x) pen += penalty_u(y, 5.0, 100.0, 4.0);
      return 0.1 * inner + pen;
    }
    case 14: return foxholes(x);
    case 15: return kowalik(x);
    case 16: {
      const double a = x[0], b = x[1];
      return 4 * a * a - 2.1 * std::pow(a, 4) + std::pow(a, 6) / 3.0 + a * b - 4 * b * b + 4 * std::pow(b, 4);
    }
    case 17:
      return sqr(x[1] - 5.1 / (4 * pi * pi) * x[0] * x[0] + 5 / pi * x[0] - 6) +
             10 * (1 - 1 / (8 * pi)) * std::cos(x[0]) + 10;
    case 18: {
      const double a = x[0], b = x[1];
      return (1 + sqr(a + b + 1) * (19 - 14 * a + 3 * a * a - 14 * b + 6 * a * b + 3 * b * b)) *
             (30 + sqr(2 * a - 3 * b) * (18 - 32 * a + 12 * a * a + 48 * b - 36 * a * b + 27 * b * b));
    }
    case 19:
    case 20: return hartmann(coefficients(id), x);
    case 21:
    case 22:
    case 23: return shekel(coefficients(id), x);
    default: throw UsageError("unknown benchmark function id " + std::to_string(id));
  }
}

const std::vector<BenchmarkFunction>& catalog() {
  static const std::vector<BenchmarkFunction> fns = build_catalog();
  return fns;
}

const BenchmarkFunction& function_by_id(int id) {
  if (id < 1 || id > 23)
    throw UsageError("function id " + std::to_string(id) + " out of range; valid ids are 1..23");
  return catalog()[static_cast<std::size_t>(id - 1)];
}

Bounds bounds_of(const BenchmarkFunction& fn) { return fn.bounds; }

double evaluate(const BenchmarkFunction& fn, std::span<const double> x, Rng& rng) {
  if (!fn.accepts_dimension(x.size())) {
    throw DimensionError("f" + std::to_string(fn.id) + " does not accept dimension " + std::to_string(x.size()) +
                         (fn.dimension_mode == DimensionMode::fixed
                              ? " (fixed dimension " + std::to_string(fn.fixed_dimension) + ")"
                              : std::string{}));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!fn.bounds.contains(x[i]))
      throw OutOfBoundsError("f" + std::to_string(fn.id) + ": coordinate " + std::to_string(i) + " = " +
                             std::to_string(x[i]) + " outside bounds");
  }
  const double noise = fn.stochastic ? rng.uniform() : 0.0;
  return fn.value(x, noise);
}

const CoefficientTable& coefficients(int function_id) {
  static const CoefficientTable f14 = foxholes_table();
  static const CoefficientTable f15 = kowalik_table();
  static const CoefficientTable f19 = hartmann3_table();
  static const CoefficientTable f20 = hartmann6_table();
  static const CoefficientTable f21 = shekel_table(21, 5);
  static const CoefficientTable f22 = shekel_table(22, 7);
  static const CoefficientTable f23 = shekel_table(23, 10);
  switch (function_id) {
    case 14: return f14;
    case 15: return f15;
    case 19: return f19;
    case 20: return f20;
    case 21: return f21;
    case 22: return f22;
    case 23: return f23;
    default: throw UsageError("function " + std::to_string(function_id) + " has no coefficient table");
  }
}

}  // namespace nrswarm
