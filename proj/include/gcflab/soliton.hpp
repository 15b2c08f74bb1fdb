#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "gcflab/curvature.hpp"

namespace gcflab {

enum class SolitonKind { Translating, Shrinker };

/// Translating: K = <N,v> + lambda.  Shrinker: K = alpha <N,Phi> + lambda.
struct SolitonSpec {
  SolitonKind kind = SolitonKind::Translating;
  Eigen::Vector3d v = Eigen::Vector3d::UnitZ();
  double lambda = 0.0;
  double alpha = 1.0;

  /// Throws InvalidSpec unless |v| = 1 within 1e-12.
  static SolitonSpec translating(const Eigen::Vector3d& v, double lambda);
  /// Throws InvalidSpec when alpha == 0.
  static SolitonSpec shrinker(double alpha, double lambda);

  std::string describe() const;
};

struct TangentDecomp {
  double gamma = 0;        // <w, e1>
  double mu = 0;           // <w, e2>
  double normal_part = 0;  // <w, N>
};

/// K - <N,v> - lambda, or K - alpha <N,Phi> - lambda.
double soliton_residual(const CurvatureSample& sample, const SolitonSpec& spec);

/// Components of w = v (translating) or w = Phi (shrinker) in (e1, e2, N).
TangentDecomp tangent_decomp(const CurvatureSample& sample, const FrameSample& frame, const SolitonSpec& spec);

using FrameResiduals = std::array<double, 6>;

/// Left-hand sides of the translating moving-frame system; all vanish on an
/// exact translating soliton up to O(fd_step^2).
FrameResiduals frame_system_residuals_translating(const SurfacePatch& patch, double u, double v,
                                                  const SolitonSpec& spec, double fd_step = kDefaultFdStep);

/// Shrinker analogue, with the two constant terms moved to the left.
FrameResiduals frame_system_residuals_shrinker(const SurfacePatch& patch, double u, double v,
                                               const SolitonSpec& spec, double fd_step = kDefaultFdStep);

/// Dispatches on spec.kind.
FrameResiduals frame_system_residuals(const SurfacePatch& patch, double u, double v, const SolitonSpec& spec,
                                      double fd_step = kDefaultFdStep);

/// max |soliton_residual| over the n x m interior grid.
double max_grid_residual(const SurfacePatch& patch, const SolitonSpec& spec, int n = 64, int m = 64);

}  // namespace gcflab
