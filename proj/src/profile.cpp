#include "gcflab/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "gcflab/errors.hpp"
#include "gcflab/format.hpp"
#include "gcflab/parallel.hpp"

namespace gcflab {

namespace {

using Y = std::array<double, 3>;  // r, z, phi

void require_shrinker(const SolitonSpec& spec) {
  if (spec.kind != SolitonKind::Shrinker) throw InvalidSpec("profile: shrinker spec required");
  if (spec.alpha == 0.0) throw InvalidSpec("profile: alpha must be nonzero");
}

Y rhs(const SolitonSpec& spec, double s, const Y& y) {
  const ProfileRhs d = profile_rhs(spec, {s, y[0], y[1], y[2]});
  return {d.dr, d.dz, d.dphi};
}

Y axpy(const Y& y, double h, std::initializer_list<std::pair<double, const Y*>> ks) {
  Y out = y;
  for (const auto& [c, k] : ks) {
    for (int i = 0; i < 3; ++i) out[i] += h * c * (*k)[i];
  }
  return out;
}

struct Trial {
  Y y;
  double err = 0;  // scaled error norm
};

// One Dormand-Prince 5(4) step. Throws ParallelCurvatureZero when a stage
// lands exactly on sin(phi) = 0.
Trial dp45(const SolitonSpec& spec, double s, const Y& y, double h, const ShootOptions& o) {
  const Y k1 = rhs(spec, s, y);
  const Y k2 = rhs(spec, s + h / 5, axpy(y, h, {{1.0 / 5, &k1}}));
  const Y k3 = rhs(spec, s + 3 * h / 10, axpy(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
  const Y k4 = rhs(spec, s + 4 * h / 5, axpy(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
  const Y k5 = rhs(spec, s + 8 * h / 9,
                   axpy(y, h, {{19372.0 / 6561, &k1}, {-25360.0 / 2187, &k2}, {64448.0 / 6561, &k3}, {-212.0 / 729, &k4}}));
  const Y k6 = rhs(spec, s + h,
                   axpy(y, h, {{9017.0 / 3168, &k1}, {-355.0 / 33, &k2}, {46732.0 / 5247, &k3}, {49.0 / 176, &k4},
                               {-5103.0 / 18656, &k5}}));
  Trial t;
  t.y = axpy(y, h, {{35.0 / 384, &k1}, {500.0 / 1113, &k3}, {125.0 / 192, &k4}, {-2187.0 / 6784, &k5}, {11.0 / 84, &k6}});
  const Y k7 = rhs(spec, s + h, t.y);
  const Y e = axpy(Y{0, 0, 0}, h,
                   {{71.0 / 57600, &k1}, {-71.0 / 16695, &k3}, {71.0 / 1920, &k4}, {-17253.0 / 339200, &k5},
                    {22.0 / 525, &k6}, {-1.0 / 40, &k7}});
  for (int i = 0; i < 3; ++i) {
    const double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(t.y[i]));
    t.err = std::max(t.err, std::abs(e[i]) / sc);
  }
  return t;
}

// Largest h' in (0, h] sub-step where g changes sign relative to g(y), found by
// bisection on the step length.
template <typename G>
std::pair<double, Y> locate(const SolitonSpec& spec, double s, const Y& y, double h, G&& g, const ShootOptions& o) {
  const double g0 = g(y);
  double lo = 0, hi = h;
  Y at_hi = dp45(spec, s, y, h, o).y;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + std::abs(s)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const Y ym = dp45(spec, s, y, mid, o).y;
    if ((g(ym) > 0) == (g0 > 0)) {
      lo = mid;
    } else {
      hi = mid;
      at_hi = ym;
    }
  }
  return {hi, at_hi};
}

double closure_error(const SolitonSpec& spec, const ProfileState& x) {
  try {
    const double km = meridian_curvature(spec, x);
    return std::abs(x.phi + km * x.r / std::abs(std::cos(x.phi)) - std::numbers::pi);
  } catch (const ParallelCurvatureZero&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

double parallel_curvature(const ProfileState& x) { return std::sin(x.phi) / x.r; }

double meridian_curvature(const SolitonSpec& spec, const ProfileState& x) {
  const double kp = parallel_curvature(x);
  if (std::abs(std::sin(x.phi)) <= 1e-12 || !std::isfinite(kp)) throw ParallelCurvatureZero("profile: parallel curvature vanishes");
  const double support = x.z * std::cos(x.phi) - x.r * std::sin(x.phi);  // <N,Phi>
  return (spec.alpha * support + spec.lambda) / kp;
}

ProfileRhs profile_rhs(const SolitonSpec& spec, const ProfileState& x) {
  require_shrinker(spec);
  return {std::cos(x.phi), std::sin(x.phi), meridian_curvature(spec, x)};
}

double revolved_residual(const SolitonSpec& spec, const ProfileState& x) {
  const double km = meridian_curvature(spec, x);
  const double c = std::cos(x.phi), s = std::sin(x.phi);
  // second-order Taylor jet of the meridian at x, revolved about the z axis
  SurfaceMap map = [=](const Jet2d& sig, const Jet2d& th) {
    const Jet2d R = x.r + c * sig - 0.5 * s * km * sig * sig;
    const Jet2d Z = x.z + s * sig + 0.5 * c * km * sig * sig;
    return Vec3Jet{R * cos(th), R * sin(th), Z};
  };
  const SurfacePatch patch(map, ParamDomain{-0.5 * x.r, 0.5 * x.r, -1.0, 1.0}, 1, "revolved profile");
  return soliton_residual(curvature_at(patch, 0.0, 0.3), spec);
}

std::string to_string(ProfileEvent e) {
  switch (e) {
    case ProfileEvent::AxisReturn: return "axis_return";
    case ProfileEvent::Midplane: return "midplane";
    case ProfileEvent::Escape: return "escape";
    case ProfileEvent::ParallelCurvatureZero: return "parallel_curvature_zero";
    case ProfileEvent::EventLimit: return "event_limit";
    case ProfileEvent::StiffnessFailure: return "stiffness_failure";
  }
  return "unknown";
}

double Orbit::max_r() const {
  double m = 0;
  for (const auto& x : states) m = std::max(m, x.r);
  return m;
}

Orbit shoot(const SolitonSpec& spec, double z0, const ShootOptions& o) {
  require_shrinker(spec);
  const double c2 = spec.alpha * z0 + spec.lambda;
  if (!(c2 > 0)) throw InvalidSpec("profile: pole needs alpha*z0 + lambda > 0, got " + format_real(c2));
  const double c = std::sqrt(c2), h0 = o.h0;

  Orbit orbit;
  orbit.z0 = z0;
  orbit.closure_error = std::numeric_limits<double>::quiet_NaN();
  double s = h0;
  Y y = {h0 - c2 * h0 * h0 * h0 / 6, z0 + c * h0 * h0 / 2, c * h0};
  orbit.states.push_back({s, y[0], y[1], y[2]});

  const auto push = [&](double ss, const Y& yy) { orbit.states.push_back({ss, yy[0], yy[1], yy[2]}); };
  const auto cosphi = [](const Y& v) { return std::cos(v[2]); };
  const auto sinphi = [](const Y& v) { return std::sin(v[2]); };
  const auto above_axis = [&](const Y& v) { return v[0] - h0; };

  double h = std::min(1e-3, 0.1 / c);
  try {
    for (int step = 0; step < o.max_steps; ++step) {
      std::optional<Trial> t;
      try {
        t = dp45(spec, s, y, h, o);
      } catch (const ParallelCurvatureZero&) {
      }
      if (!t || !std::isfinite(t->err) || t->err > 1.0) {
        const double shrink = (t && std::isfinite(t->err)) ? std::max(0.2, 0.9 * std::pow(t->err, -0.2)) : 0.25;
        h *= shrink;
        if (h < 1e-14 * (1 + s)) {
          orbit.event = std::abs(std::sin(y[2])) < 1e-6 ? ProfileEvent::ParallelCurvatureZero
                                                          : ProfileEvent::StiffnessFailure;
          return orbit;
        }
        --step;
        continue;
      }
      const Y& yn = t->y;

      // terminal: back on the axis
      if (yn[0] <= h0 && std::cos(yn[2]) < 0) {
        const auto [hh, ye] = locate(spec, s, y, h, above_axis, o);
        push(s + hh, ye);
        orbit.event = ProfileEvent::AxisReturn;
        orbit.closure_error = closure_error(spec, orbit.states.back());
        orbit.closed = orbit.closure_error < o.closure_tol;
        return orbit;
      }
      if (yn[0] <= 0) {
        orbit.event = ProfileEvent::StiffnessFailure;
        return orbit;
      }
      // terminal: the meridian turns vertical-to-axis away from the pole
      if ((sinphi(yn) > 0) != (sinphi(y) > 0)) {
        const auto [hh, ye] = locate(spec, s, y, h, sinphi, o);
        push(s + hh, ye);
        orbit.event = ProfileEvent::ParallelCurvatureZero;
        return orbit;
      }
      if (o.stop_at_midplane && y[1] < 0 && yn[1] >= 0) {
        const auto [hh, ye] = locate(spec, s, y, h, [](const Y& v) { return v[1]; }, o);
        push(s + hh, ye);
        orbit.event = ProfileEvent::Midplane;
        return orbit;
      }
      // extrema of r
      if ((cosphi(yn) > 0) != (cosphi(y) > 0)) {
        const auto [hh, ye] = locate(spec, s, y, h, cosphi, o);
        push(s + hh, ye);
      }
      s += h;
      y = yn;
      push(s, y);
      if (y[0] > o.escape_radius || std::abs(y[1]) > o.escape_radius) {
        orbit.event = ProfileEvent::Escape;
        return orbit;
      }
      h *= std::clamp(0.9 * std::pow(std::max(t->err, 1e-10), -0.2), 0.2, 5.0);
    }
  } catch (const ParallelCurvatureZero&) {
    // an event bisection landed on sin(phi) = 0
    orbit.event = ProfileEvent::ParallelCurvatureZero;
    return orbit;
  }
  orbit.event = ProfileEvent::EventLimit;
  return orbit;
}

std::vector<Orbit> find_closed_profiles(const SolitonSpec& spec, const ShootOptions& options) {
  require_shrinker(spec);
  ShootOptions to_midplane = options;
  to_midplane.stop_at_midplane = true;
  to_midplane.max_steps = std::min(options.max_steps, 5000);
  const auto mismatch = [&](double z0) {
    const Orbit o = shoot(spec, z0, to_midplane);
    if (o.event == ProfileEvent::Midplane) return std::numbers::pi / 2 - o.states.back().phi;
    // stopped before the plane: the sign says whether it turned past vertical
    const bool turned = std::any_of(o.states.begin(), o.states.end(),
                                    [](const ProfileState& x) { return x.phi > std::numbers::pi / 2; });
    return turned ? -1.0 : 1.0;
  };

  // scan the pole curvature c = sqrt(alpha z0 + lambda); spheres have c = 1/r
  const auto pole_height = [&](double c) { return (c * c - spec.lambda) / spec.alpha; };
  const int n = 480;
  std::vector<double> grid(n + 1);
  for (int i = 0; i <= n; ++i) grid[i] = std::pow(10.0, -2.0 + 4.0 * i / n);
  std::vector<double> m(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { m[i] = mismatch(pole_height(grid[i])); });

  std::vector<std::size_t> brackets;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if ((m[i] > 0) != (m[i + 1] > 0)) brackets.push_back(i);
  }
  std::vector<std::optional<Orbit>> found(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t b) {
    double lo = grid[brackets[b]], hi = grid[brackets[b] + 1];
    double mlo = m[brackets[b]];
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double mm = mismatch(pole_height(mid));
      if ((mm > 0) == (mlo > 0)) {
        lo = mid;
        mlo = mm;
      } else {
        hi = mid;
      }
    }
    const double z0 = pole_height(0.5 * (lo + hi));
    Orbit o = shoot(spec, z0, options);
    if (o.closed) {
      found[b] = std::move(o);
      return;
    }
    // mirror the half orbit from whichever end of the bracket meets z = 0 more vertically
    std::optional<Orbit> best;
    for (double c : {lo, hi}) {
      Orbit h = shoot(spec, pole_height(c), to_midplane);
      if (h.event != ProfileEvent::Midplane) continue;
      const ProfileState& j = h.states.back();
      h.closure_error = std::max(std::abs(j.z), std::abs(std::numbers::pi / 2 - j.phi));
      if (!best || h.closure_error < best->closure_error) best = std::move(h);
    }
    if (!best || !(best->closure_error < options.closure_tol)) return;
    Orbit& half = *best;
    const ProfileState mid = half.states.back();
    for (std::size_t i = half.states.size() - 1; i-- > 0;) {
      const ProfileState& x = half.states[i];
      half.states.push_back({2 * mid.s - x.s, x.r, -x.z, std::numbers::pi - x.phi});
    }
    half.event = ProfileEvent::AxisReturn;
    half.closed = half.mirrored = true;
    found[b] = std::move(half);
  });
  std::vector<Orbit> out;
  for (auto& f : found) {
    if (f) out.push_back(std::move(*f));
  }
  return out;
}

void write_orbit_csv(std::ostream& out, const Orbit& orbit, const SolitonSpec& spec) {
  write_csv_row(out, {"s", "r", "z", "phi", "kappa_m", "kappa_p", "residual"});
  for (const auto& x : orbit.states) {
    double km = std::numeric_limits<double>::quiet_NaN(), res = km;
    try {
      km = meridian_curvature(spec, x);
      res = revolved_residual(spec, x);
    } catch (const Error&) {
    }
    write_csv_row(out, {format_real(x.s), format_real(x.r), format_real(x.z), format_real(x.phi), format_real(km),
                        format_real(parallel_curvature(x)), format_real(res)});
  }
}

}  // namespace gcflab
