#include <doctest.h>

#include <cmath>

#include "gcflab/errors.hpp"
#include "gcflab/surface.hpp"

using namespace gcflab;

TEST_CASE("plane jets are affine") {
  const SurfacePatch p = expression_patch("u", "v", "0", {-1, 1, -1, 1}, 1);
  const Vec3Jet j = eval_jet(p, 0.3, 0.7);
  CHECK(j[0].val == 0.3);
  CHECK(j[0].du == 1.0);
  CHECK(j[0].dv == 0.0);
  CHECK(j[0].duu == 0.0);
  for (double c : {j[2].val, j[2].du, j[2].dv, j[2].duu, j[2].duv, j[2].dvv}) CHECK(c == 0.0);
}

TEST_CASE("unit sphere chart at the origin") {
  const SurfaceJet s = eval_surface(sphere_patch(1.0), 0.0, 0.0);
  CHECK(s.position.isApprox(Eigen::Vector3d(1, 0, 0)));
  CHECK(s.phi_uu.x() == -1.0);
}

TEST_CASE("domain and immersion errors") {
  const SurfacePatch sphere = sphere_patch(1.0);
  CHECK_THROWS_AS(eval_jet(sphere, 0.0, 2.0), DomainError);
  CHECK_THROWS_AS(eval_jet(sphere, 4.0, 0.0), DomainError);
  const SurfacePatch line = expression_patch("u", "u", "u", {-1, 1, -1, 1}, 1);
  CHECK_THROWS_AS(eval_jet(line, 0.1, 0.2), NonImmersive);
}

TEST_CASE("orthonormal complement is right-handed") {
  for (const Eigen::Vector3d& a : {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 2, 3).normalized(),
                                   Eigen::Vector3d(-1, 0, 0)}) {
    const auto [t1, t2] = orthonormal_complement(a);
    CHECK(std::abs(t1.dot(a)) < 1e-15);
    CHECK(std::abs(t2.dot(a)) < 1e-15);
    CHECK((t1.cross(t2) - a).norm() < 1e-15);
  }
}

TEST_CASE("surface spec documents") {
  const auto sphere = surface_from_json(nlohmann::json::parse(
      R"j({"kind":"builtin","name":"sphere","params":{"r":2.0},"orientation":-1})j"));
  CHECK(sphere.orientation() == -1);
  CHECK(position(sphere, 0.0, 0.0).isApprox(Eigen::Vector3d(2, 0, 0)));

  const auto expr = surface_from_json(nlohmann::json::parse(
      R"j({"kind":"expression","x":"a*cos(u)*cos(v)","y":"a*sin(u)*cos(v)","z":"a*sin(v)",
          "domain":{"u":[-3.1,3.1],"v":[-1.5,1.5]},"orientation":1,"params":{"a":3}})j"));
  CHECK(position(expr, 0.0, 0.0).isApprox(Eigen::Vector3d(3, 0, 0)));
  CHECK(expr.domain().u1 == 3.1);

  const auto cyl = surface_from_json(nlohmann::json::parse(
      R"j({"kind":"builtin","name":"cylinder","params":{"r":1,"axis":[1,0,0]}})j"));
  CHECK(cyl.orientation() == -1);
  CHECK(std::abs(position(cyl, 0.4, 0.0).x()) < 1e-15);

  CHECK_THROWS_AS(surface_from_json(nlohmann::json::parse(R"j({"kind":"builtin","name":"klein"})j")), ParseError);
  CHECK_THROWS_AS(surface_from_json(nlohmann::json::parse(R"j({"kind":"builtin","name":"sphere"})j")), ParseError);
  CHECK_THROWS_AS(surface_from_json(nlohmann::json::parse(R"j({"kind":"expression","x":"u"})j")), ParseError);
  CHECK_THROWS_AS(load_surface_spec("/nonexistent/surface.json"), ParseError);
}

TEST_CASE("interior grid stays strictly inside") {
  const ParamDomain d{0, 1, -2, 2};
  const auto pts = interior_grid(d, 4, 3);
  REQUIRE(pts.size() == 12);
  for (const auto& p : pts) CHECK(d.contains(p.x(), p.y()));
  CHECK(pts[0].x() == doctest::Approx(0.125));
  CHECK(pts[1].y() == doctest::Approx(0.0));
}
