#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "gcflab/curvature.hpp"
#include "gcflab/soliton.hpp"

namespace gcflab {

inline constexpr double kClassifyTol = 1e-6;
/// Residual and hypothesis threshold below which a surface counts as an
/// exact soliton satisfying the hypothesis.
inline constexpr double kExactTol = 1e-8;

struct Deviation {
  double mean = 0;
  double max_dev = 0;   // max |x - mean|
  double mean_dev = 0;  // mean |x - mean|
};

/// Curvature statistics over one interior grid.
struct ConstancyScan {
  int n = 0;
  int m = 0;
  Deviation H, K, kappa1, kappa2;
  double max_abs_kappa1 = 0;
  double max_abs_kappa2 = 0;
  double max_gap = 0;  // max kappa1 - kappa2
  int umbilic_points = 0;
  std::vector<CurvatureSample> samples;
};

/// Throws InvalidSpec for grids below 8x8, NonImmersive / DomainError from
/// geomcore.
ConstancyScan constancy_scan(const SurfacePatch& patch, int n = 32, int m = 32);

enum class SurfaceClass { Plane, Sphere, Cylinder, ConstantAngleFlat, Other };
std::string to_string(SurfaceClass c);

/// Max |<N,v> - mean| over the scan samples.
double support_deviation(const ConstancyScan& scan, const Eigen::Vector3d& v);

/// Plane: both curvatures vanish. Sphere: umbilic with constant curvature.
/// Cylinder: one curvature vanishes, the other is constant. ConstantAngleFlat
/// (only with a direction v): K = 0 and <N,v> constant. All with absolute
/// tolerance tol.
SurfaceClass classify(const ConstancyScan& scan, const std::optional<Eigen::Vector3d>& v = std::nullopt,
                      double tol = kClassifyTol);

enum class PerturbMode { RadialBump, GraphBump };
std::string to_string(PerturbMode m);

/// Phi + eps sin(f u) sin(f v) X. RadialBump: X is the unit vector away
/// from the patch axis (away from the origin without an axis). GraphBump: X
/// is the normal at the domain center. Throws NonImmersive when the result
/// degenerates or folds over on a 64x64 check grid.
SurfacePatch perturb(const SurfacePatch& patch, PerturbMode mode, double eps, int frequency);

enum class Theorem { T1, T2, TC, TD, ConstKTrans, ConstKShrink };
std::string to_string(Theorem t);
/// Throws UnknownCase.
Theorem theorem_from_string(const std::string& s);
const std::vector<Theorem>& all_theorems();
/// One-line statement of the rigidity result tested by the suite.
std::string theorem_statement(Theorem t);

struct ScanReport {
  std::string theorem;
  std::string surface;
  std::string role;  // catalog or battery
  std::string spec;  // best-fitting soliton spec
  int n = 0;
  int m = 0;
  double fd_step = 0;  // 0: curvatures from exact jets, no finite differences
  double max_residual = 0;
  double mean_residual = 0;
  double max_H_dev = 0;
  double mean_H_dev = 0;
  double max_kappa1_dev = 0;
  double mean_kappa1_dev = 0;
  double max_kappa2_dev = 0;
  double mean_kappa2_dev = 0;
  double max_K_dev = 0;
  std::optional<double> support_dev;  // |<N,v> - mean|, translators only
  int umbilic_points = 0;
  double hypothesis_dev = 0;  // deviation of the quantity the theorem assumes constant
  std::string classification;
  bool allowed = false;  // classification is one of the theorem's families
  bool counterexample = false;
  std::string verdict;
  std::string note;
};

/// Fits the soliton spec of the theorem's kind to the patch (direction or
/// alpha from a fixed candidate list plus hints, lambda by the grid mean),
/// scans constancy and classifies.
ScanReport scan_surface(Theorem t, const SurfacePatch& patch, const std::string& role,
                        const std::vector<SolitonSpec>& hints = {}, int n = 32, int m = 32);

/// Catalog members and a battery of perturbed and non-catalog surfaces,
/// each scanned under the theorem's hypotheses.
std::vector<ScanReport> theorem_experiment(Theorem t, int n = 32, int m = 32);

void to_json(nlohmann::json& j, const ScanReport& r);
void from_json(const nlohmann::json& j, ScanReport& r);
void write_reports_csv(std::ostream& out, const std::vector<ScanReport>& reports);

}  // namespace gcflab
