#include "gcflab/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "gcflab/catalog.hpp"
#include "gcflab/errors.hpp"
#include "gcflab/format.hpp"
#include "gcflab/parallel.hpp"

namespace gcflab {

namespace {

Deviation deviation(const std::vector<double>& xs) {
  Deviation d;
  if (xs.empty()) return d;
  for (double x : xs) d.mean += x;
  d.mean /= static_cast<double>(xs.size());
  for (double x : xs) {
    d.max_dev = std::max(d.max_dev, std::abs(x - d.mean));
    d.mean_dev += std::abs(x - d.mean);
  }
  d.mean_dev /= static_cast<double>(xs.size());
  return d;
}

bool is_translating(Theorem t) { return t == Theorem::T1 || t == Theorem::TC || t == Theorem::ConstKTrans; }

std::set<SurfaceClass> allowed_classes(Theorem t) {
  using C = SurfaceClass;
  switch (t) {
    case Theorem::T1: return {C::Plane, C::Cylinder};
    case Theorem::TC:
    case Theorem::ConstKTrans: return {C::Plane, C::Cylinder, C::ConstantAngleFlat};
    case Theorem::T2:
    case Theorem::TD:
    case Theorem::ConstKShrink: return {C::Plane, C::Sphere, C::Cylinder};
  }
  return {};
}

std::string hypothesis_name(Theorem t) {
  switch (t) {
    case Theorem::T1:
    case Theorem::T2: return "H";
    case Theorem::TC:
    case Theorem::TD: return "principal curvature";
    case Theorem::ConstKTrans:
    case Theorem::ConstKShrink: return "K";
  }
  return "";
}

double hypothesis_deviation(Theorem t, const ConstancyScan& s) {
  switch (t) {
    case Theorem::T1:
    case Theorem::T2: return s.H.max_dev;
    case Theorem::TC:
    case Theorem::TD: return std::min(s.kappa1.max_dev, s.kappa2.max_dev);
    case Theorem::ConstKTrans:
    case Theorem::ConstKShrink: return s.K.max_dev;
  }
  return 0;
}

struct Fit {
  SolitonSpec spec;
  double max_residual = std::numeric_limits<double>::infinity();
  double mean_residual = 0;
};

Fit evaluate_spec(const ConstancyScan& s, const SolitonSpec& spec) {
  Fit f{spec, 0, 0};
  for (const auto& x : s.samples) {
    const double r = std::abs(soliton_residual(x, spec));
    f.max_residual = std::max(f.max_residual, r);
    f.mean_residual += r;
  }
  f.mean_residual /= static_cast<double>(s.samples.size());
  return f;
}

// lambda is the grid mean of K - <N,w>; w = v or alpha Phi
Fit best_fit(Theorem t, const ConstancyScan& s, const std::vector<SolitonSpec>& hints) {
  std::vector<SolitonSpec> candidates;
  const double n = static_cast<double>(s.samples.size());
  if (is_translating(t)) {
    std::vector<Eigen::Vector3d> dirs;
    for (int i = 0; i < 3; ++i) {
      dirs.push_back(Eigen::Vector3d::Unit(i));
      dirs.push_back(-Eigen::Vector3d::Unit(i));
    }
    for (const auto& h : hints) {
      if (h.kind == SolitonKind::Translating) dirs.push_back(h.v);
    }
    for (const auto& v : dirs) {
      double lambda = 0;
      for (const auto& x : s.samples) lambda += x.K - x.normal.dot(v);
      candidates.push_back(SolitonSpec::translating(v, lambda / n));
    }
  } else {
    std::vector<double> alphas = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    for (const auto& h : hints) {
      if (h.kind == SolitonKind::Shrinker) alphas.push_back(h.alpha);
    }
    for (double a : alphas) {
      double lambda = 0;
      for (const auto& x : s.samples) lambda += x.K - a * x.normal.dot(x.position);
      candidates.push_back(SolitonSpec::shrinker(a, lambda / n));
    }
  }
  Fit best;
  for (const auto& c : candidates) {
    Fit f = evaluate_spec(s, c);
    if (f.max_residual < best.max_residual) best = f;
  }
  return best;
}

SurfacePatch shifted(const SurfacePatch& p, const Eigen::Vector3d& offset) {
  SurfaceMap base = p.map();
  SurfaceMap map = [base, offset](const Jet2d& u, const Jet2d& v) {
    Vec3Jet x = base(u, v);
    for (int i = 0; i < 3; ++i) x[i] = x[i] + offset[i];
    return x;
  };
  return SurfacePatch(map, p.domain(), p.orientation(), p.label() + " shifted");
}

struct Specimen {
  SurfacePatch patch;
  std::string role;
  std::vector<SolitonSpec> hints;
  std::string note;
};

std::vector<Specimen> battery(Theorem t) {
  std::vector<Specimen> out;
  const auto catalog = [&](const CatalogEntry& e, std::string label) {
    out.push_back({e.patch.with_label(std::move(label)), "catalog", admissible_specs(e), ""});
  };
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ(), ex = Eigen::Vector3d::UnitX();
  const CatalogEntry plane = make_plane(ez, 0.0);
  const CatalogEntry cyl = make_cylinder(1.0, ez);
  const CatalogEntry sphere = make_sphere(1.0);
  const CatalogEntry cone = make_cone(std::numbers::pi / 3, ez);

  catalog(plane, "plane z=0");
  catalog(make_plane(Eigen::Vector3d(1, 1, 1).normalized(), 0.5), "plane x+y+z=0.5*sqrt(3)");
  catalog(make_plane(ex, -0.7), "plane x=-0.7");
  catalog(cyl, "cylinder r=1 axis z");
  catalog(make_cylinder(0.5, ex), "cylinder r=0.5 axis x");
  catalog(make_cylinder(2.0, Eigen::Vector3d(0, 1, 1).normalized()), "cylinder r=2 axis (0,1,1)");
  catalog(sphere, "sphere r=1");
  catalog(make_sphere(1.5), "sphere r=1.5");
  catalog(make_sphere(0.7), "sphere r=0.7");
  // apex at the origin: <N,Phi> = 0 and K = 0
  const std::string cone_note = is_translating(t) ? "" : "K = 0 and <N,Phi> = 0: lambda = 0 shrinker for every alpha";
  out.push_back({cone.patch.with_label("cone half-angle pi/3 apex at origin"), "catalog", admissible_specs(cone),
                 cone_note});
  const CatalogEntry cone_x = make_cone(std::numbers::pi / 4, ex);
  out.push_back({cone_x.patch.with_label("cone half-angle pi/4 axis x apex at origin"), "catalog",
                 admissible_specs(cone_x), cone_note});

  const auto other = [&](SurfacePatch p, std::string label, std::vector<SolitonSpec> hints = {}, std::string note = "") {
    out.push_back({p.with_label(std::move(label)), "battery", std::move(hints), std::move(note)});
  };
  const std::string elliptic_note = "cylindrical surfaces C x Rv are tested only with elliptic cross-sections";
  other(ellipsoid_patch(1.2, 1.0, 0.9), "ellipsoid (1.2,1,0.9)");
  other(ellipsoid_patch(1.0, 1.0, 0.5), "spheroid (1,1,0.5)");
  other(torus_patch(2.0, 0.5), "torus (2,0.5)");
  other(torus_patch(3.0, 1.0), "torus (3,1)");
  other(elliptic_cylinder_patch(1.0, 0.6), "elliptic cylinder (1,0.6)", {}, elliptic_note);
  other(elliptic_cylinder_patch(1.0, 0.4), "elliptic cylinder (1,0.4)", {}, elliptic_note);
  other(shifted(sphere.patch, {0, 0, 0.3}), "sphere r=1 centered (0,0,0.3)");
  other(expression_patch("u*cos(v)", "u*sin(v)", "v", {0.1, 1.5, -1.0, 1.0}, 1, {}), "helicoid");
  other(expression_patch("0.5*(exp(v) + exp(-v))*cos(u)", "0.5*(exp(v) + exp(-v))*sin(u)", "v", {-3.0, 3.0, -1.0, 1.0}, 1, {}), "catenoid");
  other(expression_patch("u", "v", "0.5*(u^2 - v^2)", {-1.0, 1.0, -1.0, 1.0}, 1, {}), "saddle z=(u^2-v^2)/2");
  other(expression_patch("u", "v", "0.5*(u^2 + v^2)", {-1.0, 1.0, -1.0, 1.0}, 1, {}), "paraboloid z=(u^2+v^2)/2");
  other(expression_patch("u", "v", "u^3 - 3*u*v^2", {-0.8, 0.8, -0.8, 0.8}, 1, {}), "monkey saddle");
  other(expression_patch("u - u^3/3 + u*v^2", "v - v^3/3 + v*u^2", "u^2 - v^2", {-0.8, 0.8, -0.8, 0.8}, 1, {}),
        "Enneper surface");
  const auto bump = [&](const CatalogEntry& e, PerturbMode mode, double eps, int f, const std::string& name) {
    other(perturb(e.patch, mode, eps, f),
          name + " " + to_string(mode) + " eps=" + format_real(eps) + " f=" + std::to_string(f), admissible_specs(e));
  };
  bump(cyl, PerturbMode::RadialBump, 0.05, 3, "cylinder r=1");
  bump(cyl, PerturbMode::GraphBump, 0.05, 3, "cylinder r=1");
  bump(cyl, PerturbMode::RadialBump, 0.01, 5, "cylinder r=1");
  bump(make_cylinder(0.5, ex), PerturbMode::RadialBump, 0.02, 2, "cylinder r=0.5 axis x");
  bump(sphere, PerturbMode::RadialBump, 0.05, 3, "sphere r=1");
  bump(make_sphere(1.5), PerturbMode::RadialBump, 0.03, 2, "sphere r=1.5");
  bump(plane, PerturbMode::GraphBump, 0.05, 2, "plane z=0");
  bump(make_plane(Eigen::Vector3d(1, 1, 1).normalized(), 0.5), PerturbMode::GraphBump, 0.02, 3, "plane x+y+z=0.5*sqrt(3)");
  bump(cone, PerturbMode::RadialBump, 0.05, 3, "cone pi/3");
  bump(cone, PerturbMode::GraphBump, 0.02, 2, "cone pi/3");
  return out;
}

}  // namespace

ConstancyScan constancy_scan(const SurfacePatch& patch, int n, int m) {
  if (n < 8 || m < 8) throw InvalidSpec("constancy scan needs a grid of at least 8x8");
  ConstancyScan s;
  s.n = n;
  s.m = m;
  const auto pts = interior_grid(patch.domain(), n, m);
  s.samples.resize(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { s.samples[i] = curvature_at(patch, pts[i].x(), pts[i].y()); });
  std::vector<double> H, K, k1, k2;
  for (const auto& x : s.samples) {
    H.push_back(x.H);
    K.push_back(x.K);
    k1.push_back(x.kappa1);
    k2.push_back(x.kappa2);
    s.max_abs_kappa1 = std::max(s.max_abs_kappa1, std::abs(x.kappa1));
    s.max_abs_kappa2 = std::max(s.max_abs_kappa2, std::abs(x.kappa2));
    s.max_gap = std::max(s.max_gap, x.kappa1 - x.kappa2);
    s.umbilic_points += x.umbilic ? 1 : 0;
  }
  s.H = deviation(H);
  s.K = deviation(K);
  s.kappa1 = deviation(k1);
  s.kappa2 = deviation(k2);
  return s;
}

std::string to_string(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::Plane: return "Plane";
    case SurfaceClass::Sphere: return "Sphere";
    case SurfaceClass::Cylinder: return "Cylinder";
    case SurfaceClass::ConstantAngleFlat: return "ConstantAngleFlat";
    case SurfaceClass::Other: return "Other";
  }
  return "Other";
}

double support_deviation(const ConstancyScan& scan, const Eigen::Vector3d& v) {
  std::vector<double> xs;
  for (const auto& x : scan.samples) xs.push_back(x.normal.dot(v));
  return deviation(xs).max_dev;
}

SurfaceClass classify(const ConstancyScan& s, const std::optional<Eigen::Vector3d>& v, double tol) {
  if (s.max_abs_kappa1 < tol && s.max_abs_kappa2 < tol) return SurfaceClass::Plane;
  if (s.max_gap < tol && s.kappa1.max_dev < tol && s.kappa2.max_dev < tol) return SurfaceClass::Sphere;
  if ((s.max_abs_kappa2 < tol && s.kappa1.max_dev < tol) || (s.max_abs_kappa1 < tol && s.kappa2.max_dev < tol)) {
    return SurfaceClass::Cylinder;
  }
  if (v && std::abs(s.K.mean) + s.K.max_dev < tol && support_deviation(s, *v) < tol) {
    return SurfaceClass::ConstantAngleFlat;
  }
  return SurfaceClass::Other;
}

std::string to_string(PerturbMode m) { return m == PerturbMode::RadialBump ? "radial_bump" : "graph_bump"; }

SurfacePatch perturb(const SurfacePatch& patch, PerturbMode mode, double eps, int frequency) {
  if (eps == 0.0) return patch;
  const SurfaceMap base = patch.map();
  const double f = frequency;
  SurfaceMap map;
  if (mode == PerturbMode::RadialBump) {
    const std::optional<Eigen::Vector3d> axis = patch.axis();
    map = [=](const Jet2d& u, const Jet2d& v) {
      Vec3Jet x = base(u, v);
      Vec3Jet d = x;
      if (axis) {
        const Jet2d t = x[0] * (*axis)[0] + x[1] * (*axis)[1] + x[2] * (*axis)[2];
        for (int i = 0; i < 3; ++i) d[i] = x[i] - t * (*axis)[i];
      }
      const Jet2d len = sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      const Jet2d b = eps * sin(f * u) * sin(f * v);
      for (int i = 0; i < 3; ++i) x[i] = x[i] + b * d[i] / len;
      return x;
    };
  } else {
    const Eigen::Vector2d c = patch.domain().center();
    const Eigen::Vector3d n0 = curvature_at(patch, c.x(), c.y()).normal;
    map = [=](const Jet2d& u, const Jet2d& v) {
      Vec3Jet x = base(u, v);
      const Jet2d b = eps * sin(f * u) * sin(f * v);
      for (int i = 0; i < 3; ++i) x[i] = x[i] + b * n0[i];
      return x;
    };
  }
  SurfacePatch out(map, patch.domain(), patch.orientation(),
                   patch.label() + " " + to_string(mode) + "(" + format_real(eps) + "," + std::to_string(frequency) + ")");
  for (const auto& q : interior_grid(patch.domain(), 64, 64)) {
    const SurfaceJet a = eval_surface(patch, q.x(), q.y());
    const SurfaceJet b = eval_surface(out, q.x(), q.y());  // throws NonImmersive
    const Eigen::Vector3d ca = a.phi_u.cross(a.phi_v), cb = b.phi_u.cross(b.phi_v);
    if (ca.dot(cb) <= 0.0) throw NonImmersive("perturbation folds the surface at (" + format_real(q.x()) + "," +
                                              format_real(q.y()) + ")");
  }
  return out;
}

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    case Theorem::TC: return "TC";
    case Theorem::TD: return "TD";
    case Theorem::ConstKTrans: return "CONST_K_TRANS";
    case Theorem::ConstKShrink: return "CONST_K_SHRINK";
  }
  return "";
}

Theorem theorem_from_string(const std::string& s) {
  for (Theorem t : all_theorems()) {
    if (to_string(t) == s) return t;
  }
  throw UnknownCase("unknown theorem id: " + s);
}

const std::vector<Theorem>& all_theorems() {
  static const std::vector<Theorem> ts = {Theorem::T1, Theorem::T2,          Theorem::TC,
                                          Theorem::TD, Theorem::ConstKTrans, Theorem::ConstKShrink};
  return ts;
}

std::string theorem_statement(Theorem t) {
  switch (t) {
    case Theorem::T1: return "translating solitons with constant mean curvature are planes or circular cylinders";
    case Theorem::T2: return "shrinkers with constant mean curvature are planes, spheres or circular cylinders";
    case Theorem::TC:
      return "translating solitons with a constant principal curvature are planes, cylindrical surfaces over plane "
             "curves or flat constant-angle surfaces";
    case Theorem::TD: return "shrinkers with a constant principal curvature are planes, spheres or circular cylinders";
    case Theorem::ConstKTrans:
      return "translating solitons with constant Gauss curvature are the constant principal curvature ones, with K = 0";
    case Theorem::ConstKShrink:
      return "shrinkers with constant Gauss curvature are planes, spheres or circular cylinders";
  }
  return "";
}

ScanReport scan_surface(Theorem t, const SurfacePatch& patch, const std::string& role,
                        const std::vector<SolitonSpec>& hints, int n, int m) {
  const ConstancyScan s = constancy_scan(patch, n, m);
  const Fit fit = best_fit(t, s, hints);
  ScanReport r;
  r.theorem = to_string(t);
  r.surface = patch.label();
  r.role = role;
  r.spec = fit.spec.describe();
  r.n = n;
  r.m = m;
  r.max_residual = fit.max_residual;
  r.mean_residual = fit.mean_residual;
  r.max_H_dev = s.H.max_dev;
  r.mean_H_dev = s.H.mean_dev;
  r.max_kappa1_dev = s.kappa1.max_dev;
  r.mean_kappa1_dev = s.kappa1.mean_dev;
  r.max_kappa2_dev = s.kappa2.max_dev;
  r.mean_kappa2_dev = s.kappa2.mean_dev;
  r.max_K_dev = s.K.max_dev;
  r.umbilic_points = s.umbilic_points;
  std::optional<Eigen::Vector3d> v;
  if (fit.spec.kind == SolitonKind::Translating) {
    v = fit.spec.v;
    r.support_dev = support_deviation(s, *v);
  }
  r.hypothesis_dev = hypothesis_deviation(t, s);
  const SurfaceClass c = classify(s, v);
  r.classification = to_string(c);
  r.allowed = allowed_classes(t).count(c) > 0;

  const bool soliton = r.max_residual < kExactTol;
  const bool hypothesis = r.hypothesis_dev < kExactTol;
  r.counterexample = soliton && hypothesis && !r.allowed;
  const std::string id = to_string(t);
  if (r.counterexample) {
    r.verdict = "not consistent with " + id + ": soliton (residual " + format_real(r.max_residual) + ") with constant " +
                hypothesis_name(t) + " classified " + r.classification;
  } else if (soliton && hypothesis) {
    r.verdict = "consistent with " + id + ": soliton with constant " + hypothesis_name(t) + " in the allowed family " +
                r.classification;
  } else {
    std::string why;
    if (!soliton) why = "residual " + format_real(r.max_residual);
    if (!hypothesis) {
      why += (why.empty() ? "" : ", ") + hypothesis_name(t) + " deviation " + format_real(r.hypothesis_dev);
    }
    r.verdict = "consistent with " + id + ": hypothesis fails (" + why + ")";
  }
  return r;
}

std::vector<ScanReport> theorem_experiment(Theorem t, int n, int m) {
  std::vector<ScanReport> out;
  for (const auto& s : battery(t)) {
    ScanReport r = scan_surface(t, s.patch, s.role, s.hints, n, m);
    r.note = s.note;
    out.push_back(std::move(r));
  }
  return out;
}

void to_json(nlohmann::json& j, const ScanReport& r) {
  j = nlohmann::json{{"theorem", r.theorem},
                     {"surface", r.surface},
                     {"role", r.role},
                     {"spec", r.spec},
                     {"grid", {r.n, r.m}},
                     {"fd_step", r.fd_step},
                     {"max_residual", r.max_residual},
                     {"mean_residual", r.mean_residual},
                     {"max_H_dev", r.max_H_dev},
                     {"mean_H_dev", r.mean_H_dev},
                     {"max_kappa1_dev", r.max_kappa1_dev},
                     {"mean_kappa1_dev", r.mean_kappa1_dev},
                     {"max_kappa2_dev", r.max_kappa2_dev},
                     {"mean_kappa2_dev", r.mean_kappa2_dev},
                     {"max_K_dev", r.max_K_dev},
                     {"support_dev", r.support_dev ? nlohmann::json(*r.support_dev) : nlohmann::json(nullptr)},
                     {"umbilic_points", r.umbilic_points},
                     {"hypothesis_dev", r.hypothesis_dev},
                     {"classification", r.classification},
                     {"allowed", r.allowed},
                     {"counterexample", r.counterexample},
                     {"verdict", r.verdict},
                     {"note", r.note}};
}

void from_json(const nlohmann::json& j, ScanReport& r) {
  try {
    j.at("theorem").get_to(r.theorem);
    j.at("surface").get_to(r.surface);
    j.at("role").get_to(r.role);
    j.at("spec").get_to(r.spec);
    j.at("grid").at(0).get_to(r.n);
    j.at("grid").at(1).get_to(r.m);
    j.at("fd_step").get_to(r.fd_step);
    j.at("max_residual").get_to(r.max_residual);
    j.at("mean_residual").get_to(r.mean_residual);
    j.at("max_H_dev").get_to(r.max_H_dev);
    j.at("mean_H_dev").get_to(r.mean_H_dev);
    j.at("max_kappa1_dev").get_to(r.max_kappa1_dev);
    j.at("mean_kappa1_dev").get_to(r.mean_kappa1_dev);
    j.at("max_kappa2_dev").get_to(r.max_kappa2_dev);
    j.at("mean_kappa2_dev").get_to(r.mean_kappa2_dev);
    j.at("max_K_dev").get_to(r.max_K_dev);
    const auto& sd = j.at("support_dev");
    r.support_dev = sd.is_null() ? std::nullopt : std::optional<double>(sd.get<double>());
    j.at("umbilic_points").get_to(r.umbilic_points);
    j.at("hypothesis_dev").get_to(r.hypothesis_dev);
    j.at("classification").get_to(r.classification);
    j.at("allowed").get_to(r.allowed);
    j.at("counterexample").get_to(r.counterexample);
    j.at("verdict").get_to(r.verdict);
    j.at("note").get_to(r.note);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scan report: ") + e.what());
  }
}

void write_reports_csv(std::ostream& out, const std::vector<ScanReport>& reports) {
  write_csv_row(out, {"theorem", "surface", "role", "spec", "n", "m", "max_residual", "mean_residual", "max_H_dev",
                      "max_kappa1_dev", "max_kappa2_dev", "max_K_dev", "support_dev", "umbilic_points",
                      "hypothesis_dev", "classification", "allowed", "counterexample", "verdict"});
  for (const auto& r : reports) {
    write_csv_row(out, {r.theorem, r.surface, r.role, r.spec, std::to_string(r.n), std::to_string(r.m),
                        format_real(r.max_residual), format_real(r.mean_residual), format_real(r.max_H_dev),
                        format_real(r.max_kappa1_dev), format_real(r.max_kappa2_dev), format_real(r.max_K_dev),
                        r.support_dev ? format_real(*r.support_dev) : "", std::to_string(r.umbilic_points),
                        format_real(r.hypothesis_dev), r.classification, r.allowed ? "true" : "false",
                        r.counterexample ? "true" : "false", r.verdict});
  }
}

}  // namespace gcflab
