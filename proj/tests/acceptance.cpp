// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gcflab/catalog.hpp"
#include "gcflab/curvature.hpp"
#include "gcflab/errors.hpp"
#include "gcflab/profile.hpp"
#include "gcflab/replay.hpp"
#include "gcflab/rigidity.hpp"
#include "gcflab/soliton.hpp"

using namespace gcflab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Eigen::Vector3d random_unit(std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  return v.normalized();
}

// plane <x,w> = c with lambda = -<w,v>; sphere with lambda r^2 - alpha r^3 = 1;
// cylinder with lambda = alpha r
Outcome catalog_soundness() {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> ur(0.3, 3.0), ua(-2.0, 2.0);
  double worst = 0, slowest = 0;
  int entries = 0;
  const auto check = [&](const SurfacePatch& p, const SolitonSpec& s) {
    const auto t0 = Clock::now();
    worst = std::max(worst, max_grid_residual(p, s, 64, 64));
    slowest = std::max(slowest, seconds_since(t0));
    ++entries;
  };
  for (int i = 0; i < 5; ++i) {
    const Eigen::Vector3d w = random_unit(rng), v = random_unit(rng);
    check(plane_patch(w, ua(rng)), SolitonSpec::translating(v, -w.dot(v)));
    check(plane_patch(w, 0.0), SolitonSpec::shrinker(ua(rng) + 2.5, 0.0));
    const double r = ur(rng), a = ua(rng);
    if (std::abs(a) > 1e-3) {
      check(sphere_patch(r), SolitonSpec::shrinker(a, (1.0 + a * r * r * r) / (r * r)));
      check(cylinder_patch(r, random_unit(rng)), SolitonSpec::shrinker(a, a * r));
    }
    const Eigen::Vector3d axis = random_unit(rng);
    check(cylinder_patch(r, axis), SolitonSpec::translating(axis, 0.0));
  }
  return {worst < 1e-10 && slowest < 1.0, std::to_string(entries) + " entries, max residual " + fmt("%.2e", worst) +
                                              ", slowest " + fmt("%.3f", slowest) + " s"};
}

Outcome symbolic_replay() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const char* id : {"T_C_K2NONZERO", "T1_CASE1", "T1_CASE2", "TD_K2NONZERO", "T2_CASE1", "T2_CASE2"}) {
    const DerivationReport r = replay(id);
    const bool stated = r.match ? r.residual.is_zero() : !r.residual.is_zero();
    ok = ok && r.polynomial_in_k1 && stated;
    detail += std::string(id) + (r.match ? "=match " : "=residual ");
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 5.0, detail + fmt("(%.2f s)", secs)};
}

Outcome second_derivative_tables() {
  const DerivationReport r = verify_second_derivative_tables();
  int matched = 0;
  for (const auto& c : r.checks) matched += c.match ? 1 : 0;
  return {r.match, std::to_string(matched) + "/" + std::to_string(r.checks.size()) + " table entries exact"};
}

Outcome gauss_identity() {
  const std::vector<double> steps = {1e-3, 5e-4, 2.5e-4};
  const std::vector<std::pair<SurfacePatch, std::vector<Eigen::Vector2d>>> cases = {
      {torus_patch(2.0, 0.5), {{0.4, 0.9}, {1.3, -2.0}, {-2.2, 0.3}, {2.9, 1.7}}},
      {ellipsoid_patch(1.5, 1.0, 0.8), {{0.4, 0.3}, {1.1, -0.7}, {-2.0, 0.9}, {2.6, -0.2}}}};
  double min_order = 1e300;
  for (const auto& [patch, pts] : cases) {
    for (const auto& q : pts) {
      std::vector<double> r;
      for (double h : steps) r.push_back(std::abs(gauss_identity_residual(patch, q.x(), q.y(), h)));
      for (std::size_t i = 0; i + 1 < r.size(); ++i) min_order = std::min(min_order, std::log2(r[i] / r[i + 1]));
    }
  }
  return {min_order >= 1.8, "min observed order " + fmt("%.3f", min_order) + " over 8 samples"};
}

double max_frames(const SurfacePatch& p, const SolitonSpec& s, int n) {
  double m = 0;
  for (const auto& q : interior_grid(p.domain(), n, n)) {
    for (double x : frame_system_residuals(p, q.x(), q.y(), s, 1e-4)) m = std::max(m, std::abs(x));
  }
  return m;
}

Outcome frame_systems() {
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ();
  double worst = 0;
  for (double theta : {0.3, std::numbers::pi / 4, 1.2}) {
    const auto cone = make_cone(theta, ez);
    worst = std::max(worst, max_frames(cone.patch, translating_spec(cone, ez), 8));
  }
  for (double r : {0.5, 1.0, 2.0}) {
    const auto cyl = make_cylinder(r, Eigen::Vector3d(1, 2, 2) / 3.0);
    worst = std::max(worst, max_frames(cyl.patch, translating_spec(cyl, cyl.direction), 8));
    for (double a : {-1.0, 0.5, 2.0}) worst = std::max(worst, max_frames(cyl.patch, shrinker_spec_for_alpha(cyl, a), 8));
  }
  const SurfacePatch torus = torus_patch(2.0, 0.5);
  double torus_min = 1e300;
  for (const auto& s : {SolitonSpec::translating(ez, 0.0), SolitonSpec::translating(Eigen::Vector3d::UnitX(), 0.5),
                        SolitonSpec::translating(ez, -1.0), SolitonSpec::shrinker(1.0, 1.0),
                        SolitonSpec::shrinker(-1.0, 0.0), SolitonSpec::shrinker(0.5, -0.3)}) {
    torus_min = std::min(torus_min, max_frames(torus, s, 6));
  }
  return {worst < 1e-6 && torus_min > 1e-2,
          "max soliton residual " + fmt("%.2e", worst) + ", torus min over specs " + fmt("%.2e", torus_min)};
}

Outcome sphere_recovery() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> ua(-2.0, 2.0), ul(-1.0, 3.0);
  bool ok = true;
  double worst = 0, slowest = 0;
  int pairs = 0;
  while (pairs < 10) {
    const double alpha = ua(rng), lambda = ul(rng);
    if (std::abs(alpha) < 0.1) continue;
    std::vector<double> roots;
    try {
      roots = solve_sphere_radius(alpha, lambda);
    } catch (const NoPositiveRoot&) {
      continue;
    }
    if (roots.front() < 0.05 || roots.back() > 20) continue;
    ++pairs;
    const SolitonSpec spec = SolitonSpec::shrinker(alpha, lambda);
    const auto found = find_closed_profiles(spec);
    double best = 1e300;
    double z0 = 0;
    for (const auto& o : found) {
      for (double r : roots) {
        if (std::abs(o.max_r() - r) < best) {
          best = std::abs(o.max_r() - r);
          z0 = o.z0;
        }
      }
    }
    worst = std::max(worst, best);
    ok = ok && best < 1e-5;
    if (!found.empty()) {
      const auto t0 = Clock::now();
      shoot(spec, z0);
      slowest = std::max(slowest, seconds_since(t0));
    }
  }
  const SolitonSpec unit = SolitonSpec::shrinker(-1, 0);
  const auto t0 = Clock::now();
  const Orbit o = shoot(unit, -1.0);
  slowest = std::max(slowest, seconds_since(t0));
  double dev = 0;
  for (const auto& x : o.states) dev = std::max(dev, std::abs(std::hypot(x.r, x.z) - 1.0));
  ok = ok && o.closed && dev < 1e-6 && slowest < 2.0;
  return {ok, "max |max r - r*| " + fmt("%.2e", worst) + ", unit circle deviation " + fmt("%.2e", dev) +
                  ", slowest shot " + fmt("%.3f", slowest) + " s"};
}

Outcome rigidity_consistency() {
  const auto t0 = Clock::now();
  int bad = 0, surfaces = 1 << 30;
  std::string where;
  for (Theorem t : all_theorems()) {
    const auto rs = theorem_experiment(t);
    surfaces = std::min<int>(surfaces, rs.size());
    for (const auto& r : rs) {
      if (r.max_residual < 1e-8 && r.hypothesis_dev < 1e-8 && r.classification == "Other") {
        ++bad;
        where += " " + r.theorem + ":" + r.surface + ";";
      }
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && surfaces >= 30 && secs < 30.0,
          std::to_string(bad) + " residual-zero constant-hypothesis surfaces classified Other" +
              (where.empty() ? "" : " (" + where.substr(1) + ")") + ", " + std::to_string(surfaces) +
              " surfaces per suite, " + fmt("%.2f s", secs)};
}

Outcome geometric_invariants() {
  std::mt19937 rng(8);
  const std::vector<SurfacePatch> surfaces = {
      torus_patch(2.0, 0.5), ellipsoid_patch(1.2, 1.0, 0.9), cylinder_patch(1.5, Eigen::Vector3d(1, 1, 0).normalized()),
      cone_patch(0.6, Eigen::Vector3d::UnitZ()), expression_patch("u", "v", "0.3*sin(2*u)*cos(v)+u*v/4", {-1, 1, -1, 1}, 1)};
  std::uniform_real_distribution<double> t(0.02, 0.98);
  double worst = 0;
  for (const auto& p : surfaces) {
    const SurfacePatch flipped = p.with_orientation(-p.orientation());
    const auto& d = p.domain();
    for (int i = 0; i < 100; ++i) {
      const double u = d.u0 + t(rng) * (d.u1 - d.u0), v = d.v0 + t(rng) * (d.v1 - d.v0);
      const CurvatureSample a = curvature_at(p, u, v), b = curvature_at(flipped, u, v);
      for (double e : {a.K - b.K, a.H + b.H, a.kappa1 + b.kappa2, a.kappa2 + b.kappa1, (a.normal + b.normal).norm(),
                       a.kappa1 * a.kappa2 - a.K, 0.5 * (a.kappa1 + a.kappa2) - a.H, a.normal.norm() - 1.0}) {
        worst = std::max(worst, std::abs(e));
      }
    }
  }
  return {worst < 1e-10, "500 samples, max violation " + fmt("%.2e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 catalog soundness", catalog_soundness},
      {"2 symbolic replay", symbolic_replay},
      {"3 second-derivative tables", second_derivative_tables},
      {"4 intrinsic Gauss identity", gauss_identity},
      {"5 frame systems", frame_systems},
      {"6 sphere recovery by shooting", sphere_recovery},
      {"7 rigidity consistency", rigidity_consistency},
      {"8 geomcore invariants", geometric_invariants}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  %-32s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
