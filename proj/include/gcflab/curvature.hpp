#pragma once

#include <Eigen/Dense>

#include "gcflab/errors.hpp"
#include "gcflab/surface.hpp"

namespace gcflab {

/// Pointwise differential-geometric data of an oriented surface.
struct CurvatureSample {
  Eigen::Vector2d param;
  Eigen::Vector3d position;
  Eigen::Vector3d normal;
  double E = 0, F = 0, G = 0;  // first fundamental form
  double e = 0, f = 0, g = 0;  // second fundamental form w.r.t. normal
  double K = 0;
  double H = 0;
  double kappa1 = 0;  // kappa1 >= kappa2
  double kappa2 = 0;
  bool umbilic = false;
  // Unit principal directions (dir2 = normal x dir1); zero at umbilics.
  Eigen::Vector3d dir1 = Eigen::Vector3d::Zero();
  Eigen::Vector3d dir2 = Eigen::Vector3d::Zero();
  // Parameter-space vectors mapping to dir1, dir2 under dPhi.
  Eigen::Vector2d pdir1 = Eigen::Vector2d::Zero();
  Eigen::Vector2d pdir2 = Eigen::Vector2d::Zero();
};

inline constexpr double kUmbilicRelTol = 1e-8;
inline constexpr double kDefaultFdStep = 1e-4;

bool principal_gap_is_umbilic(double kappa1, double kappa2);

/// Throws DomainError / NonImmersive as eval_jet does.
CurvatureSample curvature_at(const SurfacePatch& patch, double u, double v);

/// Parameter-space vector (a,b) with a Phi_u + b Phi_v equal to the tangential
/// part of t.
Eigen::Vector2d pull_back(const SurfaceJet& jet, const Eigen::Vector3d& t);

/// Principal frame at q whose e1 points into the same half-space as
/// reference (if given). Throws UmbilicPoint at umbilics.
CurvatureSample aligned_frame(const SurfacePatch& patch, const Eigen::Vector2d& q,
                              const Eigen::Vector3d* reference = nullptr);

/// Central difference of field along the straight parameter line
/// q + t * pdir. Throws DomainError if the stencil leaves the open domain.
template <typename Field>
double directional_derivative(const SurfacePatch& patch, const Eigen::Vector2d& q, const Eigen::Vector2d& pdir,
                              double h, Field&& field) {
  const Eigen::Vector2d qp = q + h * pdir;
  const Eigen::Vector2d qm = q - h * pdir;
  if (!patch.domain().contains(qp.x(), qp.y()) || !patch.domain().contains(qm.x(), qm.y())) {
    throw DomainError("finite-difference stencil leaves the domain of " + patch.label());
  }
  return (field(qp) - field(qm)) / (2.0 * h);
}

/// Principal frame plus connection coefficients at a non-umbilic point.
struct FrameSample {
  CurvatureSample center;
  Eigen::Vector3d e1;
  Eigen::Vector3d e2;
  double e1_kappa1 = 0, e2_kappa1 = 0;
  double e1_kappa2 = 0, e2_kappa2 = 0;
  double w1 = 0;  // e2(kappa1) / (kappa1 - kappa2)
  double w2 = 0;  // e1(kappa2) / (kappa1 - kappa2)
};

FrameSample frame_at(const SurfacePatch& patch, double u, double v, double fd_step = kDefaultFdStep);

/// K minus its expression through principal curvatures and their frame
/// derivatives; O(h^2) for smooth surfaces away from umbilics.
double gauss_identity_residual(const SurfacePatch& patch, double u, double v, double fd_step = kDefaultFdStep);

}  // namespace gcflab
