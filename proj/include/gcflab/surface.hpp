#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "gcflab/jet.hpp"

namespace gcflab {

using Vec3Jet = std::array<Jet2d, 3>;
using SurfaceMap = std::function<Vec3Jet(const Jet2d&, const Jet2d&)>;

/// Closed parameter rectangle [u0,u1] x [v0,v1]; evaluation is allowed only
/// strictly inside.
struct ParamDomain {
  double u0 = 0.0;
  double u1 = 1.0;
  double v0 = 0.0;
  double v1 = 1.0;

  bool contains(double u, double v) const { return u > u0 && u < u1 && v > v0 && v < v1; }
  Eigen::Vector2d center() const { return {0.5 * (u0 + u1), 0.5 * (v0 + v1)}; }
};

/// Position and parameter partials of Phi through order two.
struct SurfaceJet {
  Eigen::Vector3d position;
  Eigen::Vector3d phi_u;
  Eigen::Vector3d phi_v;
  Eigen::Vector3d phi_uu;
  Eigen::Vector3d phi_uv;
  Eigen::Vector3d phi_vv;
};

/// Threshold on |Phi_u x Phi_v| below which a point is rejected.
inline constexpr double kImmersionTol = 1e-12;

/// Immutable parametric surface Phi: (u,v) -> R^3 with an orientation sign.
/// The map is evaluated on second-order jets, so all partials are exact up
/// to rounding.
class SurfacePatch {
 public:
  SurfacePatch(SurfaceMap map, ParamDomain domain, int orientation, std::string label);

  const ParamDomain& domain() const { return domain_; }
  int orientation() const { return orientation_; }
  const std::string& label() const { return label_; }
  const SurfaceMap& map() const { return map_; }

  /// Line through the origin that radial perturbations push away from.
  /// Unset for spheres and planes, which are pushed away from the origin.
  const std::optional<Eigen::Vector3d>& axis() const { return axis_; }

  SurfacePatch with_orientation(int orientation) const;
  SurfacePatch with_domain(const ParamDomain& domain) const;
  SurfacePatch with_label(std::string label) const;
  SurfacePatch with_axis(std::optional<Eigen::Vector3d> axis) const;

 private:
  SurfaceMap map_;
  ParamDomain domain_;
  int orientation_;
  std::string label_;
  std::optional<Eigen::Vector3d> axis_;
};

/// Coordinate jets of Phi at (u,v).
/// Throws DomainError outside the open domain, NonImmersive when the first
/// partials are (nearly) parallel.
Vec3Jet eval_jet(const SurfacePatch& patch, double u, double v);

/// Same data as eval_jet, regrouped into Eigen vectors.
SurfaceJet eval_surface(const SurfacePatch& patch, double u, double v);

Eigen::Vector3d position(const SurfacePatch& patch, double u, double v);

/// Cell-centred n x m grid strictly inside the domain, row-major in u.
std::vector<Eigen::Vector2d> interior_grid(const ParamDomain& domain, int n, int m);

/// Unit vectors (t1, t2) with t1 x t2 = axis.
std::pair<Eigen::Vector3d, Eigen::Vector3d> orthonormal_complement(const Eigen::Vector3d& axis);

// Builtin families. Seams and poles are cut off by kSeamMargin.
inline constexpr double kSeamMargin = 1e-3;

SurfacePatch plane_patch(const Eigen::Vector3d& w, double offset);
SurfacePatch sphere_patch(double r);
SurfacePatch cylinder_patch(double r, const Eigen::Vector3d& axis);
SurfacePatch cone_patch(double half_angle, const Eigen::Vector3d& axis);
SurfacePatch torus_patch(double R, double r);
SurfacePatch ellipsoid_patch(double a, double b, double c);
SurfacePatch elliptic_cylinder_patch(double a, double b);

/// Surface from three coordinate expressions in u, v.
SurfacePatch expression_patch(const std::string& x, const std::string& y, const std::string& z,
                              const ParamDomain& domain, int orientation,
                              const std::map<std::string, double>& params = {});

/// Phi~(u,v) = Phi(u - du, v - dv) on the shifted domain.
SurfacePatch translate_parameters(const SurfacePatch& patch, double du, double dv);
/// Phi~(u,v) = Phi(v,u); flips the induced orientation of Phi_u x Phi_v.
SurfacePatch swap_parameters(const SurfacePatch& patch);

/// Surface-spec document, either
///   {"kind":"builtin","name":"sphere","params":{"r":1.0},"orientation":-1}
/// or
///   {"kind":"expression","x":...,"y":...,"z":...,"domain":{"u":[a,b],"v":[c,d]},"orientation":1}
SurfacePatch surface_from_json(const nlohmann::json& doc);
SurfacePatch load_surface_spec(const std::filesystem::path& path);

}  // namespace gcflab
