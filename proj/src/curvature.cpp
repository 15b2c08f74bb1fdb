#include "gcflab/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "gcflab/errors.hpp"

namespace gcflab {

namespace {

// H^2 - K may come out slightly negative at umbilics.
constexpr double kRadicandClamp = 1e-12;

}  // namespace

bool principal_gap_is_umbilic(double kappa1, double kappa2) {
  return kappa1 - kappa2 < kUmbilicRelTol * std::max(1.0, std::abs(kappa1) + std::abs(kappa2));
}

Eigen::Vector2d pull_back(const SurfaceJet& jet, const Eigen::Vector3d& t) {
  Eigen::Matrix2d first;
  first << jet.phi_u.dot(jet.phi_u), jet.phi_u.dot(jet.phi_v), jet.phi_u.dot(jet.phi_v), jet.phi_v.dot(jet.phi_v);
  return first.inverse() * Eigen::Vector2d(jet.phi_u.dot(t), jet.phi_v.dot(t));
}

CurvatureSample curvature_at(const SurfacePatch& patch, double u, double v) {
  const SurfaceJet jet = eval_surface(patch, u, v);
  CurvatureSample s;
  s.param = {u, v};
  s.position = jet.position;
  const Eigen::Vector3d cross = jet.phi_u.cross(jet.phi_v);
  s.normal = patch.orientation() * cross / cross.norm();

  s.E = jet.phi_u.dot(jet.phi_u);
  s.F = jet.phi_u.dot(jet.phi_v);
  s.G = jet.phi_v.dot(jet.phi_v);
  s.e = jet.phi_uu.dot(s.normal);
  s.f = jet.phi_uv.dot(s.normal);
  s.g = jet.phi_vv.dot(s.normal);

  const double det = s.E * s.G - s.F * s.F;
  s.K = (s.e * s.g - s.f * s.f) / det;
  s.H = (s.E * s.g - 2.0 * s.F * s.f + s.G * s.e) / (2.0 * det);

  // H^2 - K = -det(II - H I) / det(I); the deviation form avoids squaring
  // rounding noise into a spurious principal gap near umbilics.
  const double de = s.e - s.H * s.E;
  const double df = s.f - s.H * s.F;
  const double dg = s.g - s.H * s.G;
  double radicand = (df * df - de * dg) / det;
  if (radicand < 0.0) {
    if (radicand < -kRadicandClamp * std::max(1.0, s.H * s.H)) {
      throw Error("negative principal discriminant " + std::to_string(radicand) + " on " + patch.label());
    }
    radicand = 0.0;
  }
  const double root = std::sqrt(radicand);
  s.kappa1 = s.H + root;
  s.kappa2 = s.H - root;
  s.umbilic = principal_gap_is_umbilic(s.kappa1, s.kappa2);
  if (s.umbilic) return s;

  Eigen::Matrix2d first;
  first << s.E, s.F, s.F, s.G;
  Eigen::Matrix2d second;
  second << s.e, s.f, s.f, s.g;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> solver(second, first);
  // Eigenvalues ascend, so the last column belongs to kappa1.
  Eigen::Vector2d x = solver.eigenvectors().col(1);
  const Eigen::Index lead = std::abs(x[0]) >= std::abs(x[1]) ? 0 : 1;
  if (x[lead] < 0.0) x = -x;
  s.dir1 = (x[0] * jet.phi_u + x[1] * jet.phi_v).normalized();
  s.dir2 = s.normal.cross(s.dir1);
  s.pdir1 = pull_back(jet, s.dir1);
  s.pdir2 = pull_back(jet, s.dir2);
  return s;
}

CurvatureSample aligned_frame(const SurfacePatch& patch, const Eigen::Vector2d& q, const Eigen::Vector3d* reference) {
  CurvatureSample s = curvature_at(patch, q.x(), q.y());
  if (s.umbilic) {
    throw UmbilicPoint("umbilic point at (" + std::to_string(q.x()) + ", " + std::to_string(q.y()) + ") on " +
                       patch.label());
  }
  if (reference != nullptr && s.dir1.dot(*reference) < 0.0) {
    s.dir1 = -s.dir1;
    s.dir2 = -s.dir2;
    s.pdir1 = -s.pdir1;
    s.pdir2 = -s.pdir2;
  }
  return s;
}

FrameSample frame_at(const SurfacePatch& patch, double u, double v, double fd_step) {
  const Eigen::Vector2d q(u, v);
  FrameSample fr;
  fr.center = aligned_frame(patch, q);
  fr.e1 = fr.center.dir1;
  fr.e2 = fr.center.dir2;

  auto kappa1 = [&](const Eigen::Vector2d& p) { return curvature_at(patch, p.x(), p.y()).kappa1; };
  auto kappa2 = [&](const Eigen::Vector2d& p) { return curvature_at(patch, p.x(), p.y()).kappa2; };
  fr.e1_kappa1 = directional_derivative(patch, q, fr.center.pdir1, fd_step, kappa1);
  fr.e2_kappa1 = directional_derivative(patch, q, fr.center.pdir2, fd_step, kappa1);
  fr.e1_kappa2 = directional_derivative(patch, q, fr.center.pdir1, fd_step, kappa2);
  fr.e2_kappa2 = directional_derivative(patch, q, fr.center.pdir2, fd_step, kappa2);

  const double gap = fr.center.kappa1 - fr.center.kappa2;
  fr.w1 = fr.e2_kappa1 / gap;
  fr.w2 = fr.e1_kappa2 / gap;
  return fr;
}

double gauss_identity_residual(const SurfacePatch& patch, double u, double v, double fd_step) {
  const FrameSample fr = frame_at(patch, u, v, fd_step);
  const Eigen::Vector2d q(u, v);
  const Eigen::Vector3d ref = fr.e1;

  // Inner quotients are evaluated in frames sign-aligned with the centre so
  // the outer difference does not see spurious flips.
  auto ratio1 = [&](const Eigen::Vector2d& p) {
    const CurvatureSample s = aligned_frame(patch, p, &ref);
    auto kappa2 = [&](const Eigen::Vector2d& r) { return curvature_at(patch, r.x(), r.y()).kappa2; };
    return directional_derivative(patch, p, s.pdir1, fd_step, kappa2) / (s.kappa1 - s.kappa2);
  };
  auto ratio2 = [&](const Eigen::Vector2d& p) {
    const CurvatureSample s = aligned_frame(patch, p, &ref);
    auto kappa1 = [&](const Eigen::Vector2d& r) { return curvature_at(patch, r.x(), r.y()).kappa1; };
    return directional_derivative(patch, p, s.pdir2, fd_step, kappa1) / (s.kappa1 - s.kappa2);
  };
  const double outer1 = directional_derivative(patch, q, fr.center.pdir1, fd_step, ratio1);
  const double outer2 = directional_derivative(patch, q, fr.center.pdir2, fd_step, ratio2);
  const double gap = fr.center.kappa1 - fr.center.kappa2;
  const double rhs = -outer1 + outer2 -
                     (fr.e1_kappa2 * fr.e1_kappa2 + fr.e2_kappa1 * fr.e2_kappa1) / (gap * gap);
  return fr.center.K - rhs;
}

}  // namespace gcflab
