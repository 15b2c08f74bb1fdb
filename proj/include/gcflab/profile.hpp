#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "gcflab/soliton.hpp"

namespace gcflab {

/// Point of an arclength-parametrized meridian (r(s), z(s)) with tangent
/// angle phi: r' = cos phi, z' = sin phi. The revolved surface
/// (r cos t, r sin t, z) is oriented by N = (-sin phi cos t, -sin phi sin t, cos phi),
/// the inward normal on spheres.
struct ProfileState {
  double s = 0;
  double r = 0;
  double z = 0;
  double phi = 0;
};

/// Parallel principal curvature sin(phi)/r.
double parallel_curvature(const ProfileState& x);
/// Meridian curvature phi' solved from kappa_m kappa_p = alpha <N,Phi> + lambda.
/// Throws ParallelCurvatureZero when kappa_p vanishes.
double meridian_curvature(const SolitonSpec& spec, const ProfileState& x);

struct ProfileRhs {
  double dr = 0;
  double dz = 0;
  double dphi = 0;
};

/// Right-hand side of the meridian system. Throws InvalidSpec unless spec is
/// a shrinker with alpha != 0, ParallelCurvatureZero as above.
ProfileRhs profile_rhs(const SolitonSpec& spec, const ProfileState& x);

/// K - alpha <N,Phi> - lambda of the revolved surface at x, computed by
/// geomcore on a local quadratic patch of the meridian. Needs r > 0.
double revolved_residual(const SolitonSpec& spec, const ProfileState& x);

enum class ProfileEvent { AxisReturn, Midplane, Escape, ParallelCurvatureZero, EventLimit, StiffnessFailure };
std::string to_string(ProfileEvent e);

struct ShootOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h0 = 1e-4;  // series start and axis-return distance
  int max_steps = 200000;
  double escape_radius = 1e3;
  double closure_tol = 1e-3;  // angle defect at the axis
  bool stop_at_midplane = false;  // stop where z first crosses 0 upward
};

struct Orbit {
  double z0 = 0;  // height of the starting pole
  std::vector<ProfileState> states;
  ProfileEvent event = ProfileEvent::EventLimit;
  /// |phi - pi| extrapolated to the axis; NaN unless the orbit returned.
  double closure_error = 0;
  bool closed = false;
  /// Second half obtained by reflecting the first in z = 0, which maps
  /// (s, r, z, phi) to (-s, r, -z, pi - phi) and preserves the system.
  bool mirrored = false;

  double max_r() const;
};

/// Integrates from the pole (0, z0) with the umbilic cap
/// kappa_m = kappa_p = sqrt(alpha z0 + lambda), started from the series
/// expansion at s = h0, with an adaptive Dormand-Prince 5(4) pair until a
/// terminal event. Throws InvalidSpec when alpha z0 + lambda <= 0.
Orbit shoot(const SolitonSpec& spec, double z0, const ShootOptions& options = {});

/// Scans the pole curvature sqrt(alpha z0 + lambda) and bisects on pi/2 - phi
/// at the first upward crossing of z = 0; keeps the orbits that close
/// smoothly on the axis. A root whose full shot does not close (unstable
/// spheres) is kept as a mirrored orbit when the half orbit meets z = 0
/// vertically within closure_tol. Reports what is found; an empty result
/// proves nothing.
std::vector<Orbit> find_closed_profiles(const SolitonSpec& spec, const ShootOptions& options = {});

/// CSV with header s,r,z,phi,kappa_m,kappa_p,residual.
void write_orbit_csv(std::ostream& out, const Orbit& orbit, const SolitonSpec& spec);

}  // namespace gcflab
