#include "gcflab/surface.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "gcflab/errors.hpp"
#include "gcflab/expression.hpp"

namespace gcflab {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d value(const Vec3Jet& j) { return {j[0].val, j[1].val, j[2].val}; }
Eigen::Vector3d d_u(const Vec3Jet& j) { return {j[0].du, j[1].du, j[2].du}; }
Eigen::Vector3d d_v(const Vec3Jet& j) { return {j[0].dv, j[1].dv, j[2].dv}; }

ParamDomain periodic_u_domain(double v0, double v1) {
  return {-kPi + kSeamMargin, kPi - kSeamMargin, v0, v1};
}

Eigen::Vector3d unit_or_throw(const Eigen::Vector3d& w, const char* what) {
  const double n = w.norm();
  if (!(n > 0.0)) throw InvalidSpec(std::string(what) + " must be a nonzero vector");
  return w / n;
}

}  // namespace

SurfacePatch::SurfacePatch(SurfaceMap map, ParamDomain domain, int orientation, std::string label)
    : map_(std::move(map)), domain_(domain), orientation_(orientation), label_(std::move(label)) {
  if (orientation_ != 1 && orientation_ != -1) throw InvalidSpec("orientation must be +1 or -1");
  if (!(domain_.u0 < domain_.u1) || !(domain_.v0 < domain_.v1)) throw InvalidSpec("empty parameter domain");
}

SurfacePatch SurfacePatch::with_orientation(int orientation) const {
  SurfacePatch p = *this;
  if (orientation != 1 && orientation != -1) throw InvalidSpec("orientation must be +1 or -1");
  p.orientation_ = orientation;
  return p;
}

SurfacePatch SurfacePatch::with_domain(const ParamDomain& domain) const {
  SurfacePatch p = *this;
  if (!(domain.u0 < domain.u1) || !(domain.v0 < domain.v1)) throw InvalidSpec("empty parameter domain");
  p.domain_ = domain;
  return p;
}

SurfacePatch SurfacePatch::with_label(std::string label) const {
  SurfacePatch p = *this;
  p.label_ = std::move(label);
  return p;
}

SurfacePatch SurfacePatch::with_axis(std::optional<Eigen::Vector3d> axis) const {
  SurfacePatch p = *this;
  p.axis_ = std::move(axis);
  return p;
}

Vec3Jet eval_jet(const SurfacePatch& patch, double u, double v) {
  if (!patch.domain().contains(u, v)) {
    throw DomainError("(" + std::to_string(u) + ", " + std::to_string(v) + ") outside the open domain of " +
                      patch.label());
  }
  Vec3Jet j = patch.map()(Jet2d::coord_u(u), Jet2d::coord_v(v));
  if (d_u(j).cross(d_v(j)).norm() < kImmersionTol) {
    throw NonImmersive(patch.label() + " is not immersive at (" + std::to_string(u) + ", " +
                       std::to_string(v) + ")");
  }
  return j;
}

SurfaceJet eval_surface(const SurfacePatch& patch, double u, double v) {
  const Vec3Jet j = eval_jet(patch, u, v);
  SurfaceJet s;
  s.position = value(j);
  s.phi_u = d_u(j);
  s.phi_v = d_v(j);
  s.phi_uu = {j[0].duu, j[1].duu, j[2].duu};
  s.phi_uv = {j[0].duv, j[1].duv, j[2].duv};
  s.phi_vv = {j[0].dvv, j[1].dvv, j[2].dvv};
  return s;
}

Eigen::Vector3d position(const SurfacePatch& patch, double u, double v) {
  return value(eval_jet(patch, u, v));
}

std::vector<Eigen::Vector2d> interior_grid(const ParamDomain& d, int n, int m) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
  const double hu = (d.u1 - d.u0) / n;
  const double hv = (d.v1 - d.v0) / m;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k) pts.emplace_back(d.u0 + (i + 0.5) * hu, d.v0 + (k + 0.5) * hv);
  }
  return pts;
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> orthonormal_complement(const Eigen::Vector3d& axis) {
  const Eigen::Vector3d a = axis.normalized();
  // Pick the coordinate axis least aligned with a as a seed.
  Eigen::Index k = 0;
  a.cwiseAbs().minCoeff(&k);
  Eigen::Vector3d seed = Eigen::Vector3d::Zero();
  seed[k] = 1.0;
  const Eigen::Vector3d t1 = (seed - seed.dot(a) * a).normalized();
  const Eigen::Vector3d t2 = a.cross(t1);
  return {t1, t2};
}

SurfacePatch plane_patch(const Eigen::Vector3d& w_in, double offset) {
  const Eigen::Vector3d w = unit_or_throw(w_in, "plane normal");
  const auto [t1, t2] = orthonormal_complement(w);
  const Eigen::Vector3d base = offset * w;
  SurfaceMap map = [=](const Jet2d& u, const Jet2d& v) {
    Vec3Jet out;
    for (int i = 0; i < 3; ++i) out[i] = u * t1[i] + v * t2[i] + base[i];
    return out;
  };
  return SurfacePatch(std::move(map), {-1.0, 1.0, -1.0, 1.0}, 1, "plane");
}

SurfacePatch sphere_patch(double r) {
  if (!(r > 0.0)) throw InvalidSpec("sphere radius must be positive");
  SurfaceMap map = [r](const Jet2d& u, const Jet2d& v) {
    const Jet2d cv = cos(v);
    return Vec3Jet{r * cos(u) * cv, r * sin(u) * cv, r * sin(v)};
  };
  return SurfacePatch(std::move(map), periodic_u_domain(-kPi / 2 + kSeamMargin, kPi / 2 - kSeamMargin), -1,
                      "sphere");
}

SurfacePatch cylinder_patch(double r, const Eigen::Vector3d& axis_in) {
  if (!(r > 0.0)) throw InvalidSpec("cylinder radius must be positive");
  const Eigen::Vector3d a = unit_or_throw(axis_in, "cylinder axis");
  const auto [t1, t2] = orthonormal_complement(a);
  SurfaceMap map = [=](const Jet2d& u, const Jet2d& v) {
    const Jet2d c = r * cos(u);
    const Jet2d s = r * sin(u);
    Vec3Jet out;
    for (int i = 0; i < 3; ++i) out[i] = c * t1[i] + s * t2[i] + v * a[i];
    return out;
  };
  return SurfacePatch(std::move(map), periodic_u_domain(-1.0, 1.0), -1, "cylinder").with_axis(a);
}

SurfacePatch cone_patch(double half_angle, const Eigen::Vector3d& axis_in) {
  if (!(half_angle > 0.0 && half_angle < kPi / 2)) throw InvalidSpec("cone half-angle must lie in (0, pi/2)");
  const Eigen::Vector3d a = unit_or_throw(axis_in, "cone axis");
  const auto [t1, t2] = orthonormal_complement(a);
  const double sa = std::sin(half_angle);
  const double ca = std::cos(half_angle);
  // u: distance from the apex along a ruling, v: angle around the axis.
  SurfaceMap map = [=](const Jet2d& u, const Jet2d& v) {
    const Jet2d c = sa * cos(v);
    const Jet2d s = sa * sin(v);
    Vec3Jet out;
    for (int i = 0; i < 3; ++i) out[i] = u * (c * t1[i] + s * t2[i] + ca * a[i]);
    return out;
  };
  return SurfacePatch(std::move(map), {0.2, 2.0, -kPi + kSeamMargin, kPi - kSeamMargin}, 1, "cone")
      .with_axis(a);
}

SurfacePatch torus_patch(double R, double r) {
  if (!(r > 0.0 && R > r)) throw InvalidSpec("torus needs R > r > 0");
  SurfaceMap map = [=](const Jet2d& u, const Jet2d& v) {
    const Jet2d rho = R + r * cos(v);
    return Vec3Jet{rho * cos(u), rho * sin(u), r * sin(v)};
  };
  return SurfacePatch(std::move(map), {-kPi + kSeamMargin, kPi - kSeamMargin, -kPi + kSeamMargin, kPi - kSeamMargin},
                      1, "torus")
      .with_axis(Eigen::Vector3d::UnitZ());
}

SurfacePatch ellipsoid_patch(double a, double b, double c) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw InvalidSpec("ellipsoid semi-axes must be positive");
  SurfaceMap map = [=](const Jet2d& u, const Jet2d& v) {
    const Jet2d cv = cos(v);
    return Vec3Jet{a * cos(u) * cv, b * sin(u) * cv, c * sin(v)};
  };
  return SurfacePatch(std::move(map), periodic_u_domain(-kPi / 2 + kSeamMargin, kPi / 2 - kSeamMargin), 1,
                      "ellipsoid");
}

SurfacePatch elliptic_cylinder_patch(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw InvalidSpec("elliptic cylinder semi-axes must be positive");
  SurfaceMap map = [=](const Jet2d& u, const Jet2d& v) {
    return Vec3Jet{a * cos(u), b * sin(u), v};
  };
  return SurfacePatch(std::move(map), periodic_u_domain(-1.0, 1.0), -1, "elliptic_cylinder")
      .with_axis(Eigen::Vector3d::UnitZ());
}

SurfacePatch expression_patch(const std::string& x, const std::string& y, const std::string& z,
                              const ParamDomain& domain, int orientation,
                              const std::map<std::string, double>& params) {
  const auto ex = std::make_shared<const Expression>(Expression::parse(x, params));
  const auto ey = std::make_shared<const Expression>(Expression::parse(y, params));
  const auto ez = std::make_shared<const Expression>(Expression::parse(z, params));
  SurfaceMap map = [ex, ey, ez](const Jet2d& u, const Jet2d& v) {
    return Vec3Jet{ex->eval(u, v), ey->eval(u, v), ez->eval(u, v)};
  };
  return SurfacePatch(std::move(map), domain, orientation, "expression(" + x + ", " + y + ", " + z + ")");
}

SurfacePatch translate_parameters(const SurfacePatch& patch, double du, double dv) {
  SurfaceMap base = patch.map();
  SurfaceMap map = [base, du, dv](const Jet2d& u, const Jet2d& v) { return base(u - du, v - dv); };
  const ParamDomain& d = patch.domain();
  return SurfacePatch(std::move(map), {d.u0 + du, d.u1 + du, d.v0 + dv, d.v1 + dv}, patch.orientation(),
                      patch.label() + "[shifted]")
      .with_axis(patch.axis());
}

SurfacePatch swap_parameters(const SurfacePatch& patch) {
  SurfaceMap base = patch.map();
  SurfaceMap map = [base](const Jet2d& u, const Jet2d& v) { return base(v, u); };
  const ParamDomain& d = patch.domain();
  return SurfacePatch(std::move(map), {d.v0, d.v1, d.u0, d.u1}, patch.orientation(),
                      patch.label() + "[swapped]")
      .with_axis(patch.axis());
}

namespace {

double number_param(const nlohmann::json& params, const char* key, std::optional<double> fallback = {}) {
  if (params.contains(key)) {
    if (!params.at(key).is_number()) throw ParseError(std::string("parameter '") + key + "' must be a number");
    return params.at(key).get<double>();
  }
  if (fallback) return *fallback;
  throw ParseError(std::string("missing parameter '") + key + "'");
}

Eigen::Vector3d vector_param(const nlohmann::json& params, const char* key, const Eigen::Vector3d& fallback) {
  if (!params.contains(key)) return fallback;
  const auto& a = params.at(key);
  if (!a.is_array() || a.size() != 3) throw ParseError(std::string("parameter '") + key + "' must be [x,y,z]");
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

ParamDomain domain_from_json(const nlohmann::json& d) {
  auto range = [&](const char* key) {
    if (!d.contains(key) || !d.at(key).is_array() || d.at(key).size() != 2)
      throw ParseError(std::string("domain.") + key + " must be [lo, hi]");
    return std::pair{d.at(key)[0].get<double>(), d.at(key)[1].get<double>()};
  };
  const auto [u0, u1] = range("u");
  const auto [v0, v1] = range("v");
  return {u0, u1, v0, v1};
}

SurfacePatch builtin_from_json(const nlohmann::json& doc) {
  const std::string name = doc.at("name").get<std::string>();
  const nlohmann::json params = doc.value("params", nlohmann::json::object());
  if (name == "plane") {
    return plane_patch(vector_param(params, "w", Eigen::Vector3d::UnitZ()), number_param(params, "offset", 0.0));
  }
  if (name == "sphere") return sphere_patch(number_param(params, "r"));
  if (name == "cylinder") {
    return cylinder_patch(number_param(params, "r"), vector_param(params, "axis", Eigen::Vector3d::UnitZ()));
  }
  if (name == "cone") {
    return cone_patch(number_param(params, "theta"), vector_param(params, "axis", Eigen::Vector3d::UnitZ()));
  }
  if (name == "torus") return torus_patch(number_param(params, "R"), number_param(params, "r"));
  if (name == "ellipsoid") {
    return ellipsoid_patch(number_param(params, "a"), number_param(params, "b"), number_param(params, "c"));
  }
  if (name == "elliptic_cylinder") {
    return elliptic_cylinder_patch(number_param(params, "a"), number_param(params, "b"));
  }
  throw ParseError("unknown builtin surface '" + name + "'");
}

}  // namespace

SurfacePatch surface_from_json(const nlohmann::json& doc) {
  try {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "builtin") {
      SurfacePatch p = builtin_from_json(doc);
      if (doc.contains("orientation")) p = p.with_orientation(doc.at("orientation").get<int>());
      if (doc.contains("domain")) p = p.with_domain(domain_from_json(doc.at("domain")));
      return p;
    }
    if (kind == "expression") {
      std::map<std::string, double> params;
      if (doc.contains("params")) {
        for (const auto& [key, val] : doc.at("params").items()) params[key] = val.get<double>();
      }
      return expression_patch(doc.at("x").get<std::string>(), doc.at("y").get<std::string>(),
                              doc.at("z").get<std::string>(), domain_from_json(doc.at("domain")),
                              doc.value("orientation", 1), params);
    }
    throw ParseError("unknown surface kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("surface spec: ") + e.what());
  }
}

SurfacePatch load_surface_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open surface spec " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("surface spec " + path.string() + ": " + e.what());
  }
  return surface_from_json(doc);
}

}  // namespace gcflab
