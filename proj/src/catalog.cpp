#include "gcflab/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "gcflab/errors.hpp"

namespace gcflab {

namespace {

constexpr double kParallelTol = 1e-12;

bool parallel_to(const Eigen::Vector3d& a, const Eigen::Vector3d& b) { return a.cross(b).norm() < kParallelTol; }

Eigen::Vector3d unit(const Eigen::Vector3d& w, const char* what) {
  if (std::abs(w.norm() - 1.0) > 1e-12) throw InvalidSpec(std::string(what) + " must be a unit vector");
  return w;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Plane: return "plane";
    case Family::Sphere: return "sphere";
    case Family::Cylinder: return "cylinder";
    case Family::Cone: return "cone";
  }
  return "unknown";
}

CatalogEntry make_plane(const Eigen::Vector3d& w, double offset) {
  const Eigen::Vector3d n = unit(w, "plane normal");
  return {plane_patch(n, offset), Family::Plane, {{"offset", offset}}, n};
}

CatalogEntry make_sphere(double r) { return {sphere_patch(r), Family::Sphere, {{"r", r}}, Eigen::Vector3d::UnitZ()}; }

CatalogEntry make_cylinder(double r, const Eigen::Vector3d& axis) {
  const Eigen::Vector3d a = unit(axis, "cylinder axis");
  return {cylinder_patch(r, a), Family::Cylinder, {{"r", r}}, a};
}

CatalogEntry make_cone(double theta, const Eigen::Vector3d& axis) {
  const Eigen::Vector3d a = unit(axis, "cone axis");
  return {cone_patch(theta, a), Family::Cone, {{"theta", theta}}, a};
}

SolitonSpec translating_spec(const CatalogEntry& entry, const Eigen::Vector3d& v) {
  switch (entry.family) {
    case Family::Plane:
      // N = w everywhere.
      return SolitonSpec::translating(v, -entry.direction.dot(v));
    case Family::Sphere:
      throw InvalidSpec("spheres admit no translating spec");
    case Family::Cylinder:
      if (!parallel_to(v, entry.direction)) throw InvalidSpec("cylinder translates only along its axis");
      return SolitonSpec::translating(v, 0.0);
    case Family::Cone: {
      if (!parallel_to(v, entry.direction)) throw InvalidSpec("cone translates only along its axis");
      // <N, axis> = orientation * sin(theta) on the whole cone.
      const double n_axis = entry.patch.orientation() * std::sin(entry.params.at("theta"));
      return SolitonSpec::translating(v, -n_axis * entry.direction.dot(v));
    }
  }
  throw InvalidSpec("unknown family");
}

SolitonSpec shrinker_spec_for_alpha(const CatalogEntry& entry, double alpha) {
  if (alpha == 0.0) throw InvalidSpec("shrinker needs alpha != 0");
  switch (entry.family) {
    case Family::Plane:
      if (entry.params.at("offset") != 0.0) throw InvalidSpec("only planes through the origin are shrinkers");
      return SolitonSpec::shrinker(alpha, 0.0);
    case Family::Sphere: {
      const double r = entry.params.at("r");
      return SolitonSpec::shrinker(alpha, (1.0 + alpha * r * r * r) / (r * r));
    }
    case Family::Cylinder:
      return SolitonSpec::shrinker(alpha, alpha * entry.params.at("r"));
    case Family::Cone:
      throw InvalidSpec("cone entries carry translating specs only");
  }
  throw InvalidSpec("unknown family");
}

SolitonSpec shrinker_spec_for_lambda(const CatalogEntry& entry, double lambda) {
  switch (entry.family) {
    case Family::Plane:
      throw InvalidSpec("plane shrinkers have lambda = 0 and free alpha; use shrinker_spec_for_alpha");
    case Family::Sphere: {
      const double r = entry.params.at("r");
      return SolitonSpec::shrinker((lambda * r * r - 1.0) / (r * r * r), lambda);
    }
    case Family::Cylinder:
      return SolitonSpec::shrinker(lambda / entry.params.at("r"), lambda);
    case Family::Cone:
      throw InvalidSpec("cone entries carry translating specs only");
  }
  throw InvalidSpec("unknown family");
}

std::vector<SolitonSpec> admissible_specs(const CatalogEntry& entry) {
  std::vector<SolitonSpec> specs;
  const Eigen::Vector3d a = entry.direction;
  switch (entry.family) {
    case Family::Plane:
      for (const Eigen::Vector3d& v : {Eigen::Vector3d(a), Eigen::Vector3d(Eigen::Vector3d::UnitX()),
                                       Eigen::Vector3d(Eigen::Vector3d(1.0, 2.0, 2.0) / 3.0)}) {
        specs.push_back(translating_spec(entry, v));
      }
      if (entry.params.at("offset") == 0.0) {
        for (double alpha : {1.0, -2.0, 7.0}) specs.push_back(shrinker_spec_for_alpha(entry, alpha));
      }
      break;
    case Family::Sphere:
      for (double alpha : {-1.0, 1.0, 0.375, -2.0}) specs.push_back(shrinker_spec_for_alpha(entry, alpha));
      break;
    case Family::Cylinder:
      specs.push_back(translating_spec(entry, a));
      specs.push_back(translating_spec(entry, -a));
      for (double alpha : {1.0, -0.5, 2.0}) specs.push_back(shrinker_spec_for_alpha(entry, alpha));
      break;
    case Family::Cone:
      specs.push_back(translating_spec(entry, a));
      specs.push_back(translating_spec(entry, -a));
      break;
  }
  return specs;
}

std::vector<double> solve_sphere_radius(double alpha, double lambda) {
  if (alpha == 0.0) throw InvalidSpec("sphere radius relation needs alpha != 0");
  auto p = [&](double r) { return alpha * r * r * r - lambda * r * r + 1.0; };

  // p'(r) = r (3 alpha r - 2 lambda); the only positive critical point is
  // 2 lambda / (3 alpha) when that is positive.
  std::vector<double> knots = {0.0};
  const double crit = 2.0 * lambda / (3.0 * alpha);
  if (crit > 0.0) knots.push_back(crit);
  // Cauchy bound on the roots of r^3 - (lambda/alpha) r^2 + 1/alpha.
  knots.push_back(1.0 + std::max(std::abs(lambda / alpha), std::abs(1.0 / alpha)));

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double lo = knots[i];
    double hi = knots[i + 1];
    double plo = p(lo);
    const double phi = p(hi);
    if (plo == 0.0 && lo > 0.0) {
      roots.push_back(lo);
      continue;
    }
    if (phi == 0.0 || (plo < 0.0) == (phi < 0.0)) continue;
    // p is monotone on [lo, hi]; bisect to the last representable interval.
    while (true) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double pm = p(mid);
      if (pm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((pm < 0.0) == (plo < 0.0)) {
        lo = mid;
        plo = pm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(std::abs(p(lo)) <= std::abs(p(hi)) ? lo : hi);
  }
  // A double root sits exactly on the critical point.
  if (crit > 0.0 && std::abs(p(crit)) < 1e-12 &&
      std::none_of(roots.begin(), roots.end(), [&](double r) { return std::abs(r - crit) < 1e-9; })) {
    roots.push_back(crit);
  }
  std::sort(roots.begin(), roots.end());
  if (roots.empty()) {
    throw NoPositiveRoot("no positive r with " + std::to_string(alpha) + " r^3 - " + std::to_string(lambda) +
                         " r^2 + 1 = 0");
  }
  return roots;
}

}  // namespace gcflab
