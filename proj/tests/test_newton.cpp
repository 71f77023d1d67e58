#include <doctest.h>

#include <cmath>
#include <vector>

#include "nrswarm/bench_functions.hpp"
#include "nrswarm/error.hpp"
#include "nrswarm/newton.hpp"
#include "nrswarm/rng.hpp"

using namespace nrswarm;

namespace {

double sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

TEST_CASE("first_derivative examples") {
  const FdConfig cfg;
  const std::vector<double> x{3.0};
  CHECK(first_derivative(sq, x, 0, cfg) == doctest::Approx(6.0).epsilon(1e-6));
  CHECK(std::abs(first_derivative([](auto) { return 4.2; }, x, 0, cfg)) == 0.0);
  const auto& f5 = function_by_id(5);
  const Objective rosen = [&](std::span<const double> y) { return f5.value(y); };
  CHECK(std::abs(first_derivative(rosen, std::vector<double>{0.0, 0.0}, 0, cfg) + 2.0) <= 1e-4);
}

TEST_CASE("second_derivative examples") {
  const FdConfig cfg;
  for (double x : {-7.0, 0.0, 0.3, 12.0}) CHECK(std::abs(second_derivative(sq, std::vector<double>{x}, 0, cfg) - 2.0) <= 1e-4);
  const Objective lin = [](std::span<const double> y) { return 3.0 * y[0] - 1.0; };
  CHECK(std::abs(second_derivative(lin, std::vector<double>{5.0}, 0, cfg)) <= 1e-6);
  const Objective quart = [](std::span<const double> y) { return std::pow(y[0], 4); };
  CHECK(std::abs(second_derivative(quart, std::vector<double>{1.0}, 0, cfg) - 12.0) <= 1e-2);
}

TEST_CASE("derivative probes stay inside bounds") {
  const FdConfig cfg;
  const Bounds b{0.0, 1.0};
  const Objective guarded = [&](std::span<const double> y) {
    if (!b.contains(y[0])) throw OutOfBoundsError("probe left the box");
    return y[0] * y[0];
  };
  CHECK(first_derivative(guarded, std::vector<double>{1.0}, 0, cfg, b) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(second_derivative(guarded, std::vector<double>{0.0}, 0, cfg, b) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("newton_coordinate_step examples") {
  const FdConfig cfg;
  const Bounds b{-100, 100};
  CHECK(std::abs(newton_coordinate_step(sq, std::vector<double>{3.0}, 0, cfg, b)[0]) <= 1e-8);
  const Objective shifted = [](std::span<const double> y) { return 2.5 * (y[0] - 1.7) * (y[0] - 1.7) + 4.0; };
  CHECK(newton_coordinate_step(shifted, std::vector<double>{-40.0}, 0, cfg, b)[0] == doctest::Approx(1.7).epsilon(1e-9));
  const Objective lin = [](std::span<const double> y) { return 2.0 * y[0]; };
  CHECK(newton_coordinate_step(lin, std::vector<double>{5.0}, 0, cfg, b)[0] == 5.0);
  const Objective concave = [](std::span<const double> y) { return -y[0] * y[0]; };
  CHECK(newton_coordinate_step(concave, std::vector<double>{1.0}, 0, cfg, b)[0] == 1.0);
}

TEST_CASE("refine examples") {
  const FdConfig cfg;
  const Bounds b{-100, 100};
  // strict local minimum: nothing to gain
  const std::vector<double> origin(4, 0.0);
  CHECK(refine(sq, origin, b, cfg) == origin);
  // f1 30D from interior points lands on the origin
  Rng rng(7);
  const auto& f1 = function_by_id(1);
  const Objective sphere = [&](std::span<const double> y) { return f1.value(y); };
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(30);
    for (double& v : x) v = rng.uniform(-100, 100);
    const auto y = refine(sphere, x, f1.bounds, cfg);
    for (double v : y) CHECK(std::abs(v) <= 1e-8);
  }
  const Objective concave = [](std::span<const double> y) { return -y[0] * y[0]; };
  CHECK(refine(concave, std::vector<double>{1.0}, b, cfg)[0] == 1.0);
}

TEST_CASE("quadratic exactness property") {
  const FdConfig cfg;
  const Bounds b{-20, 20};
  Rng rng(2024);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + rng.index(12);
    std::vector<double> a(d), c(d), x(d);
    for (std::size_t i = 0; i < d; ++i) {
      a[i] = rng.uniform(0.5, 5);
      c[i] = rng.uniform(-5, 5);
      x[i] = rng.uniform(-10, 10);
    }
    const double off = rng.uniform(-5, 5);
    const Objective f = [&](std::span<const double> y) {
      double s = off;
      for (std::size_t i = 0; i < d; ++i) s += a[i] * (y[i] - c[i]) * (y[i] - c[i]);
      return s;
    };
    const auto y = refine(f, x, b, cfg);
    for (std::size_t i = 0; i < d; ++i) worst = std::max(worst, std::abs(y[i] - c[i]));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("first_derivative accuracy on cubics") {
  const FdConfig cfg;
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    const double c0 = rng.uniform(-3, 3), c1 = rng.uniform(-3, 3), c2 = rng.uniform(-3, 3), c3 = rng.uniform(-3, 3);
    const double x = rng.uniform(-10, 10);
    const Objective p = [&](std::span<const double> y) { return ((c3 * y[0] + c2) * y[0] + c1) * y[0] + c0; };
    const double exact = (3 * c3 * x + 2 * c2) * x + c1;
    const double est = first_derivative(p, std::vector<double>{x}, 0, cfg);
    // relative to the derivative's scale, so near-roots of p' do not blow up the ratio
    const double scale = std::max(std::abs(exact), 3 * std::abs(c3) * x * x + 2 * std::abs(c2 * x) + std::abs(c1));
    CHECK(std::abs(est - exact) <= 1e-5 * std::max(scale, 1.0));
  }
}

TEST_CASE("never-worsen and bound safety on multimodal functions") {
  const FdConfig cfg;
  Rng rng(5);
  for (int id : {5, 8, 9, 10, 11, 12, 13}) {
    const auto& fn = function_by_id(id);
    const Objective f = [&](std::span<const double> y) { return fn.value(y); };
    for (int t = 0; t < 10; ++t) {
      std::vector<double> x(10);
      for (double& v : x) v = rng.uniform(fn.bounds.lower, fn.bounds.upper);
      const auto y = refine(f, x, fn.bounds, cfg);
      CAPTURE(id);
      CHECK(f(y) <= f(x));
      for (double v : y) CHECK(fn.bounds.contains(v));
      const auto r = refine_from(f, x, f(x), fn.bounds, cfg);
      CHECK(r.x == y);
      CHECK(r.improved == (r.value < f(x)));
      CHECK(r.evaluations > 0);
    }
  }
}

TEST_CASE("FdConfig validation") {
  FdConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.max_step = 1.5;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.fd_step_rel = 0.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = {};
  cfg.probe_shrink = 1.0;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
}
