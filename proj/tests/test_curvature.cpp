#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gcflab/curvature.hpp"
#include "gcflab/errors.hpp"

using namespace gcflab;

namespace {

// Closed-form curvature of the ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1
// with outward normal, from the implicit-surface formulas.
std::pair<double, double> ellipsoid_oracle(double a, double b, double c, const Eigen::Vector3d& p) {
  const double s = p.x() * p.x() / std::pow(a, 4) + p.y() * p.y() / std::pow(b, 4) + p.z() * p.z() / std::pow(c, 4);
  const double abc2 = a * a * b * b * c * c;
  const double K = 1.0 / (abc2 * s * s);
  const double H = (p.squaredNorm() - a * a - b * b - c * c) / (2.0 * abc2 * std::pow(s, 1.5));
  return {K, H};
}

std::vector<SurfacePatch> sample_surfaces() {
  return {torus_patch(2.0, 0.5), ellipsoid_patch(1.2, 1.0, 0.9), cylinder_patch(1.5, Eigen::Vector3d(1, 1, 0).normalized()),
          cone_patch(0.6, Eigen::Vector3d::UnitZ()),
          expression_patch("u", "v", "0.3*sin(2*u)*cos(v)+u*v/4", {-1, 1, -1, 1}, 1)};
}

Eigen::Vector2d random_point(const ParamDomain& d, std::mt19937& rng) {
  std::uniform_real_distribution<double> t(0.02, 0.98);
  return {d.u0 + t(rng) * (d.u1 - d.u0), d.v0 + t(rng) * (d.v1 - d.v0)};
}

}  // namespace

TEST_CASE("round sphere and cylinder") {
  const CurvatureSample s = curvature_at(sphere_patch(1.0), 0.4, -0.3);
  CHECK(s.K == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.H == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.kappa1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.kappa2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.umbilic);
  CHECK(s.dir1.norm() == 0.0);

  const CurvatureSample c = curvature_at(cylinder_patch(2.0, Eigen::Vector3d::UnitZ()), 0.7, 0.2);
  CHECK(std::abs(c.K) < 1e-15);
  CHECK(c.H == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(c.kappa1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(c.kappa2) < 1e-15);
  CHECK(!c.umbilic);
  // Inward normal points at the axis.
  CHECK(c.normal.dot(c.position) == doctest::Approx(-2.0));
}

TEST_CASE("ellipsoid matches the implicit-surface oracle") {
  std::mt19937 rng(11);
  for (const auto& abc : {std::array{2.0, 1.0, 1.0}, std::array{1.5, 1.0, 0.8}, std::array{1.2, 1.0, 0.9}}) {
    const SurfacePatch e = ellipsoid_patch(abc[0], abc[1], abc[2]);
    for (int i = 0; i < 20; ++i) {
      const Eigen::Vector2d q = random_point(e.domain(), rng);
      const CurvatureSample s = curvature_at(e, q.x(), q.y());
      const auto [K, H] = ellipsoid_oracle(abc[0], abc[1], abc[2], s.position);
      CHECK(std::abs(s.K - K) < 1e-9);
      CHECK(std::abs(s.H - H) < 1e-9);
    }
  }
}

TEST_CASE("torus principal curvatures") {
  const double R = 2.0, r = 0.5;
  const SurfacePatch t = torus_patch(R, r);
  for (double v : {-2.5, -1.0, 0.3, 1.4, 2.9}) {
    const CurvatureSample s = curvature_at(t, 0.8, v);
    CHECK(s.kappa1 == doctest::Approx(-std::cos(v) / (R + r * std::cos(v))).epsilon(1e-12));
    CHECK(s.kappa2 == doctest::Approx(-1.0 / r).epsilon(1e-12));
  }
}

TEST_CASE("orientation flip, curvature identities and unit normal") {
  std::mt19937 rng(3);
  for (const auto& patch : sample_surfaces()) {
    const SurfacePatch flipped = patch.with_orientation(-patch.orientation());
    for (int i = 0; i < 100; ++i) {
      const Eigen::Vector2d q = random_point(patch.domain(), rng);
      const CurvatureSample a = curvature_at(patch, q.x(), q.y());
      const CurvatureSample b = curvature_at(flipped, q.x(), q.y());
      const double scale = std::max(1.0, std::abs(a.kappa1) + std::abs(a.kappa2));
      CHECK(std::abs(a.K - b.K) < 1e-10 * scale * scale);
      CHECK(std::abs(a.H + b.H) < 1e-10 * scale);
      CHECK(std::abs(a.kappa1 + b.kappa2) < 1e-10 * scale);
      CHECK(std::abs(a.kappa2 + b.kappa1) < 1e-10 * scale);
      CHECK((a.normal + b.normal).norm() < 1e-12);
      CHECK(std::abs(a.kappa1 * a.kappa2 - a.K) < 1e-10 * scale * scale);
      CHECK(std::abs(0.5 * (a.kappa1 + a.kappa2) - a.H) < 1e-10 * scale);
      CHECK(std::abs(a.normal.norm() - 1.0) < 1e-12);
      if (!a.umbilic) {
        CHECK((a.dir1.cross(a.dir2) - a.normal).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("reparametrization invariance") {
  std::mt19937 rng(5);
  for (const auto& patch : sample_surfaces()) {
    const SurfacePatch shifted = translate_parameters(patch, 0.7, -1.3);
    const SurfacePatch swapped = swap_parameters(patch);
    for (int i = 0; i < 30; ++i) {
      const Eigen::Vector2d q = random_point(patch.domain(), rng);
      const CurvatureSample a = curvature_at(patch, q.x(), q.y());
      const CurvatureSample b = curvature_at(shifted, q.x() + 0.7, q.y() - 1.3);
      const CurvatureSample c = curvature_at(swapped, q.y(), q.x());
      CHECK(std::abs(a.K - b.K) < 1e-10);
      CHECK(std::abs(a.H - b.H) < 1e-10);
      CHECK(std::abs(a.K - c.K) < 1e-10);
      // Swapping u and v reverses Phi_u x Phi_v.
      CHECK(std::abs(a.H + c.H) < 1e-10);
    }
  }
}

TEST_CASE("cylinder frame is circumferential and flat") {
  const FrameSample fr = frame_at(cylinder_patch(1.0, Eigen::Vector3d::UnitZ()), 0.5, 0.1);
  CHECK(std::abs(fr.e1.z()) < 1e-14);
  CHECK(std::abs(std::abs(fr.e2.z()) - 1.0) < 1e-14);
  for (double d : {fr.e1_kappa1, fr.e2_kappa1, fr.e1_kappa2, fr.e2_kappa2, fr.w1, fr.w2}) {
    CHECK(std::abs(d) < 1e-10);
  }
  CHECK_THROWS_AS(frame_at(sphere_patch(1.0), 0.1, 0.2), UmbilicPoint);
  CHECK_THROWS_AS(frame_at(cylinder_patch(1.0, Eigen::Vector3d::UnitZ()), 0.5, 1.0 - 5e-5), DomainError);
}

TEST_CASE("torus meridian derivative of kappa1") {
  const double R = 2.0, r = 1.0;
  const SurfacePatch t = torus_patch(R, r);
  for (double v : {-2.0, -0.6, 0.9, 2.2}) {
    const double rho = R + r * std::cos(v);
    // kappa1 = -cos v / rho; e2 is the unit meridian direction Phi_v / r.
    const double exact = R * std::sin(v) / (r * rho * rho);
    const FrameSample coarse = frame_at(t, 0.3, v, 1e-3);
    const FrameSample fine = frame_at(t, 0.3, v, 5e-4);
    const double ec = std::abs(std::abs(coarse.e2_kappa1) - std::abs(exact));
    const double ef = std::abs(std::abs(fine.e2_kappa1) - std::abs(exact));
    CHECK(ec < 1e-5);
    CHECK((ef < 0.3 * ec || ef < 1e-10));
    CHECK(std::abs(fine.e1_kappa1) < 1e-9);
  }
}

TEST_CASE("connection coefficients match finite differences of the frame") {
  const SurfacePatch e = ellipsoid_patch(2.0, 1.5, 1.0);
  const double h = 1e-4;
  for (const Eigen::Vector2d& q : {Eigen::Vector2d(0.4, 0.3), Eigen::Vector2d(-1.1, 0.7), Eigen::Vector2d(2.0, -0.5)}) {
    const FrameSample fr = frame_at(e, q.x(), q.y(), h);
    const Eigen::Vector3d ref = fr.e1;
    auto e1_at = [&](const Eigen::Vector2d& p) { return aligned_frame(e, p, &ref).dir1; };
    const Eigen::Vector2d p1 = fr.center.pdir1;
    const Eigen::Vector2d p2 = fr.center.pdir2;
    const Eigen::Vector3d de1_e1 = (e1_at(q + h * p1) - e1_at(q - h * p1)) / (2 * h);
    const Eigen::Vector3d de1_e2 = (e1_at(q + h * p2) - e1_at(q - h * p2)) / (2 * h);
    CHECK(std::abs(fr.w1 - de1_e1.dot(fr.e2)) < 1e-6);
    CHECK(std::abs(fr.w2 - de1_e2.dot(fr.e2)) < 1e-6);
  }
}

TEST_CASE("Gauss identity residual") {
  CHECK(gauss_identity_residual(cylinder_patch(1.0, Eigen::Vector3d::UnitZ()), 0.2, 0.3) == 0.0);

  const SurfacePatch t = torus_patch(2.0, 0.5);
  const double r1 = std::abs(gauss_identity_residual(t, 0.4, 0.9, 1e-3));
  const double r2 = std::abs(gauss_identity_residual(t, 0.4, 0.9, 5e-4));
  CHECK(r1 < 1e-4);
  CHECK(r1 / r2 > 3.5);
  CHECK(r1 / r2 < 4.5);

  const SurfacePatch e = ellipsoid_patch(1.5, 1.0, 0.8);
  std::mt19937 rng(17);
  for (int i = 0; i < 10; ++i) {
    const Eigen::Vector2d q = random_point(e.domain(), rng);
    const CurvatureSample s = curvature_at(e, q.x(), q.y());
    if (s.kappa1 - s.kappa2 < 0.05) continue;
    CHECK(std::abs(gauss_identity_residual(e, q.x(), q.y(), 1e-3)) < 1e-3);
  }
}
