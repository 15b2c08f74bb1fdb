#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gcflab/soliton.hpp"
#include "gcflab/surface.hpp"

namespace gcflab {

enum class Family { Plane, Sphere, Cylinder, Cone };

std::string to_string(Family f);

/// Closed-form soliton example with its parameter data.
struct CatalogEntry {
  SurfacePatch patch;
  Family family;
  std::map<std::string, double> params;  // r, offset, theta
  Eigen::Vector3d direction;             // plane normal w, or cylinder/cone axis
};

/// Plane <x,w> = offset.
CatalogEntry make_plane(const Eigen::Vector3d& w, double offset);
/// Sphere of radius r about the origin, inward normal.
CatalogEntry make_sphere(double r);
/// Circular cylinder of radius r about an axis through the origin, inward normal.
CatalogEntry make_cylinder(double r, const Eigen::Vector3d& axis);
/// Cone with apex at the origin (apex cut away) and half-angle theta.
CatalogEntry make_cone(double theta, const Eigen::Vector3d& axis);

/// Translating spec with direction v admitted by the entry. Throws
/// InvalidSpec when no lambda works (sphere; cylinder or cone with v not
/// parallel to the axis).
SolitonSpec translating_spec(const CatalogEntry& entry, const Eigen::Vector3d& v);

/// Shrinker spec with the given alpha admitted by the entry. Throws
/// InvalidSpec for cones, affine planes off the origin, and alpha == 0.
SolitonSpec shrinker_spec_for_alpha(const CatalogEntry& entry, double alpha);

/// Shrinker spec with the given lambda (alpha solved). Throws InvalidSpec
/// when the solved alpha is zero or lambda is not admissible.
SolitonSpec shrinker_spec_for_lambda(const CatalogEntry& entry, double lambda);

/// A representative, fixed list of admissible specs for the entry.
std::vector<SolitonSpec> admissible_specs(const CatalogEntry& entry);

/// Positive roots of alpha r^3 - lambda r^2 + 1 = 0 in increasing order.
/// Throws InvalidSpec for alpha == 0, NoPositiveRoot when there is none.
std::vector<double> solve_sphere_radius(double alpha, double lambda);

}  // namespace gcflab
