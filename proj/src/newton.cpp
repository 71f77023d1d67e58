#include "nrswarm/newton.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "nrswarm/error.hpp"

namespace nrswarm {
namespace {

double base_step(double xi, double rel, const FdConfig& cfg) {
  return std::max(cfg.fd_step_abs_floor, rel * std::abs(xi));
}

/// First and second derivative estimates from a three-point stencil.
struct Derivatives {
  double g1;
  double g2;
};

/// Central stencil x_i +- h when it fits inside the bounds; otherwise the
/// one-sided stencil x_i, x_i + s h, x_i + 2 s h toward the roomier side, with
/// h shrunk if even that does not fit. Both are exact on quadratics.
/// `f0` is f(x), evaluated on demand when not supplied.
Derivatives stencil(const Objective& f, std::span<const double> x, std::size_t i, double h, Bounds bounds,
                    std::optional<double> f0, std::size_t& evaluations) {
  std::vector<double> y(x.begin(), x.end());
  const double xi = x[i];
  const double below = xi - bounds.lower;
  const double above = bounds.upper - xi;
  auto at = [&](double v) {
    y[i] = v;
    ++evaluations;
    return f(y);
  };
  auto centre = [&] {
    if (!f0) f0 = f(x), ++evaluations;
    return *f0;
  };
  // the realized step may differ from h by rounding; use the representable one
  const double hc = (xi + h) - xi;
  if (xi - hc >= bounds.lower && xi + hc <= bounds.upper) {
    const double plus = at(xi + hc);
    const double minus = at(xi - hc);
    return {(plus - minus) / (2.0 * hc), (plus - 2.0 * centre() + minus) / (hc * hc)};
  }
  const double sign = above >= below ? 1.0 : -1.0;
  const double room = std::max(below, above);
  const double step = std::min(h, 0.5 * room * (1.0 - 1e-12));
  const double hp = sign * ((xi + sign * step) - xi);
  const double f1 = at(xi + sign * hp);
  const double f2 = at(xi + 2.0 * sign * hp);
  const double c = centre();
  return {sign * (-3.0 * c + 4.0 * f1 - f2) / (2.0 * hp), (c - 2.0 * f1 + f2) / (hp * hp)};
}

}  // namespace

void FdConfig::validate() const {
  if (!(fd_step_rel > 0 && second_step_rel > 0 && fd_step_abs_floor > 0 && second_deriv_floor > 0 &&
        max_step > 0 && probe_fraction > 0 && probe_shrink > 0))
    throw UsageError("finite-difference settings must be strictly positive");
  if (max_step > 1.0) throw UsageError("max_step must not exceed 1");
  if (probe_shrink >= 1.0) throw UsageError("probe_shrink must be below 1");
}

double first_derivative(const Objective& f, std::span<const double> x, std::size_t i, const FdConfig& cfg,
                        Bounds bounds) {
  std::size_t n = 0;
  return stencil(f, x, i, base_step(x[i], cfg.fd_step_rel, cfg), bounds, std::nullopt, n).g1;
}

double second_derivative(const Objective& f, std::span<const double> x, std::size_t i, const FdConfig& cfg,
                         Bounds bounds) {
  std::size_t n = 0;
  return stencil(f, x, i, base_step(x[i], cfg.second_step_rel, cfg), bounds, std::nullopt, n).g2;
}

namespace {

struct CoordinateResult {
  double xi;
  double value;
  std::size_t evaluations;
};

/// Newton update of coordinate i. The three-point probe starts wide and
/// shrinks by probe_shrink whenever the step it suggests fails to lower f,
/// down to the plain finite-difference step. Returns the first improving
/// coordinate, or the unchanged one when no probe width helps.
CoordinateResult coordinate_update(const Objective& f, std::vector<double>& y, std::size_t i, double fy,
                                   const FdConfig& cfg, Bounds bounds) {
  const double xi = y[i];
  const double h_min = base_step(xi, cfg.second_step_rel, cfg);
  double h = h_min;
  if (std::isfinite(bounds.range())) h = std::max(h, cfg.probe_fraction * bounds.range());
  CoordinateResult out{xi, fy, 0};
  for (;;) {
    const auto [g1, g2] = stencil(f, y, i, h, bounds, fy, out.evaluations);
    if (g2 > cfg.second_deriv_floor && std::isfinite(g1)) {
      double dx = -g1 / g2;
      if (std::isfinite(bounds.range())) {
        const double cap = cfg.max_step * bounds.range();
        dx = std::clamp(dx, -cap, cap);
      }
      const double next = bounds.clamp(xi + dx);
      if (next != xi) {
        y[i] = next;
        const double fn = f(y);
        ++out.evaluations;
        y[i] = xi;
        if (fn < fy) {
          out.xi = next;
          out.value = fn;
          return out;
        }
      }
    }
    if (h <= h_min) return out;
    h = std::max(h_min, h * cfg.probe_shrink);
  }
}

}  // namespace

std::vector<double> newton_coordinate_step(const Objective& f, std::span<const double> x, std::size_t i,
                                           const FdConfig& cfg, Bounds bounds) {
  std::vector<double> y(x.begin(), x.end());
  y[i] = coordinate_update(f, y, i, f(x), cfg, bounds).xi;
  return y;
}

Refinement refine_from(const Objective& f, std::span<const double> x, double fx, Bounds bounds,
                       const FdConfig& cfg) {
  Refinement r{std::vector<double>(x.begin(), x.end()), fx, false, 0};
  std::vector<double> y = r.x;
  double fy = fx;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const CoordinateResult c = coordinate_update(f, y, i, fy, cfg, bounds);
    r.evaluations += c.evaluations;
    y[i] = c.xi;
    fy = c.value;
  }
  if (fy < fx) {
    r.x = std::move(y);
    r.value = fy;
    r.improved = true;
  }
  return r;
}

std::vector<double> refine(const Objective& f, std::span<const double> x, Bounds bounds, const FdConfig& cfg) {
  return refine_from(f, x, f(x), bounds, cfg).x;
}

}  // namespace nrswarm
