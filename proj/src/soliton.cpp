#include "gcflab/soliton.hpp"

#include <cmath>
#include <sstream>

#include "gcflab/errors.hpp"
#include "gcflab/format.hpp"
#include "gcflab/parallel.hpp"

namespace gcflab {

SolitonSpec SolitonSpec::translating(const Eigen::Vector3d& v, double lambda) {
  if (std::abs(v.norm() - 1.0) > 1e-12) throw InvalidSpec("translating direction must be a unit vector");
  SolitonSpec s;
  s.kind = SolitonKind::Translating;
  s.v = v;
  s.lambda = lambda;
  s.alpha = 0.0;
  return s;
}

SolitonSpec SolitonSpec::shrinker(double alpha, double lambda) {
  if (alpha == 0.0) throw InvalidSpec("shrinker needs alpha != 0");
  SolitonSpec s;
  s.kind = SolitonKind::Shrinker;
  s.v = Eigen::Vector3d::Zero();
  s.lambda = lambda;
  s.alpha = alpha;
  return s;
}

std::string SolitonSpec::describe() const {
  if (kind == SolitonKind::Translating) {
    return "translating v=(" + format_real(v.x()) + "," + format_real(v.y()) + "," + format_real(v.z()) +
           ") lambda=" + format_real(lambda);
  }
  return "shrinker alpha=" + format_real(alpha) + " lambda=" + format_real(lambda);
}

namespace {

Eigen::Vector3d driving_field(const CurvatureSample& s, const SolitonSpec& spec) {
  return spec.kind == SolitonKind::Translating ? spec.v : s.position;
}

// Frame fields at one stencil point.
struct StencilValues {
  double gamma, mu, K, kappa1, kappa2;
};

StencilValues stencil_values(const SurfacePatch& patch, const Eigen::Vector2d& q, const Eigen::Vector3d& ref,
                             const SolitonSpec& spec) {
  const CurvatureSample s = aligned_frame(patch, q, &ref);
  const Eigen::Vector3d w = driving_field(s, spec);
  return {w.dot(s.dir1), w.dot(s.dir2), s.K, s.kappa1, s.kappa2};
}

// Frame derivatives of gamma, mu, K, kappa1, kappa2 at q.
struct FrameJet {
  CurvatureSample center;
  StencilValues value;
  StencilValues along1;  // e1(.)
  StencilValues along2;  // e2(.)
};

FrameJet frame_jet(const SurfacePatch& patch, double u, double v, const SolitonSpec& spec, double h) {
  const Eigen::Vector2d q(u, v);
  FrameJet fj;
  fj.center = aligned_frame(patch, q);
  const Eigen::Vector3d ref = fj.center.dir1;
  fj.value = stencil_values(patch, q, ref, spec);

  auto diff = [&](const Eigen::Vector2d& pdir) {
    const Eigen::Vector2d qp = q + h * pdir;
    const Eigen::Vector2d qm = q - h * pdir;
    if (!patch.domain().contains(qp.x(), qp.y()) || !patch.domain().contains(qm.x(), qm.y())) {
      throw DomainError("finite-difference stencil leaves the domain of " + patch.label());
    }
    const StencilValues p = stencil_values(patch, qp, ref, spec);
    const StencilValues m = stencil_values(patch, qm, ref, spec);
    const double s = 1.0 / (2.0 * h);
    return StencilValues{(p.gamma - m.gamma) * s, (p.mu - m.mu) * s, (p.K - m.K) * s,
                         (p.kappa1 - m.kappa1) * s, (p.kappa2 - m.kappa2) * s};
  };
  fj.along1 = diff(fj.center.pdir1);
  fj.along2 = diff(fj.center.pdir2);
  return fj;
}

}  // namespace

double soliton_residual(const CurvatureSample& s, const SolitonSpec& spec) {
  if (spec.kind == SolitonKind::Translating) return s.K - s.normal.dot(spec.v) - spec.lambda;
  return s.K - spec.alpha * s.normal.dot(s.position) - spec.lambda;
}

TangentDecomp tangent_decomp(const CurvatureSample& sample, const FrameSample& frame, const SolitonSpec& spec) {
  if (sample.umbilic) throw UmbilicPoint("tangent decomposition needs a non-umbilic point");
  const Eigen::Vector3d w = driving_field(sample, spec);
  return {w.dot(frame.e1), w.dot(frame.e2), w.dot(sample.normal)};
}

FrameResiduals frame_system_residuals_translating(const SurfacePatch& patch, double u, double v,
                                                  const SolitonSpec& spec, double fd_step) {
  if (spec.kind != SolitonKind::Translating) throw InvalidSpec("translating frame system needs a translating spec");
  const FrameJet fj = frame_jet(patch, u, v, spec, fd_step);
  const double k1 = fj.value.kappa1;
  const double k2 = fj.value.kappa2;
  const double w1 = fj.along2.kappa1 / (k1 - k2);
  const double w2 = fj.along1.kappa2 / (k1 - k2);
  const double g = fj.value.gamma;
  const double m = fj.value.mu;
  const double c = fj.value.K - spec.lambda;
  return {fj.along1.gamma - m * w1 - c * k1,
          fj.along2.gamma - m * w2,
          fj.along1.mu + g * w1,
          fj.along2.mu + g * w2 - c * k2,
          fj.along1.K + g * k1,
          fj.along2.K + m * k2};
}

FrameResiduals frame_system_residuals_shrinker(const SurfacePatch& patch, double u, double v,
                                               const SolitonSpec& spec, double fd_step) {
  if (spec.kind != SolitonKind::Shrinker) throw InvalidSpec("shrinker frame system needs a shrinker spec");
  const FrameJet fj = frame_jet(patch, u, v, spec, fd_step);
  const double k1 = fj.value.kappa1;
  const double k2 = fj.value.kappa2;
  const double w1 = fj.along2.kappa1 / (k1 - k2);
  const double w2 = fj.along1.kappa2 / (k1 - k2);
  const double g = fj.value.gamma;
  const double m = fj.value.mu;
  const double c = (fj.value.K - spec.lambda) / spec.alpha;
  return {fj.along1.gamma - m * w1 - c * k1 - 1.0,
          fj.along2.gamma - m * w2,
          fj.along1.mu + g * w1,
          fj.along2.mu + g * w2 - c * k2 - 1.0,
          fj.along1.K / spec.alpha + g * k1,
          fj.along2.K / spec.alpha + m * k2};
}

FrameResiduals frame_system_residuals(const SurfacePatch& patch, double u, double v, const SolitonSpec& spec,
                                      double fd_step) {
  return spec.kind == SolitonKind::Translating ? frame_system_residuals_translating(patch, u, v, spec, fd_step)
                                               : frame_system_residuals_shrinker(patch, u, v, spec, fd_step);
}

double max_grid_residual(const SurfacePatch& patch, const SolitonSpec& spec, int n, int m) {
  const auto pts = interior_grid(patch.domain(), n, m);
  std::vector<double> res(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    res[i] = std::abs(soliton_residual(curvature_at(patch, pts[i].x(), pts[i].y()), spec));
  });
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, r);
  return worst;
}

}  // namespace gcflab
