#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gcflab/derivation.hpp"

namespace gcflab {

/// One recorded operation of a replay: what was done, which printed
/// relation it starts from, and the resulting expression.
struct ReplayStep {
  std::string op;
  std::string cite;
  std::string result;
};

/// Comparison of a derived expression or relation against its printed form.
/// mode "value": exact equality of rational functions, residual = derived - printed.
/// mode "relation": numerators equal up to a rational scale c (fixed by the
/// leading coefficients), residual = c*derived - printed.
struct ReplayCheck {
  std::string name;
  std::string cite;
  std::string mode;
  std::string derived;
  std::string printed;
  bool match = false;
  std::string scale;
  std::string residual;
};

struct DivisionRecord {
  std::string factor;
  std::string justification;
  bool applied = true;
};

struct DerivationReport {
  std::string case_id;
  std::vector<ReplayStep> steps;
  std::vector<ReplayCheck> checks;
  std::vector<DivisionRecord> divisions;
  std::vector<std::string> notes;
  Poly derived;
  Poly printed;
  bool match = false;
  mpq_class scale = 1;
  Poly residual;
  /// Final derived polynomial involves k1 and otherwise only constants.
  bool polynomial_in_k1 = false;
  /// Expression tree behind each step (same order as steps); not serialized.
  std::vector<SymExpr> trees;
};

/// Replaces the image of one indeterminate in a derivation rule; used for
/// negative controls.
struct ImageOverride {
  Direction direction = Direction::E1;
  Var var = Var::k1;
  std::string image;
};

struct ReplayOptions {
  std::vector<ImageOverride> overrides;
};

struct Comparison {
  bool match = false;
  mpq_class scale = 1;
  RationalFn residual;
};

Comparison compare_values(const RationalFn& derived, const RationalFn& printed);
Comparison compare_relations(const RationalFn& derived, const RationalFn& printed);

const std::vector<std::string>& replay_case_ids();

/// Runs the derivation for one case. Throws UnknownCase.
DerivationReport replay(std::string_view case_id, const ReplayOptions& options = {});

/// Re-derives the second-derivative tables of kappa1 for translators and
/// shrinkers by equating the frame equations with the derivatives of gamma
/// and mu. match is true when every check matches.
DerivationReport verify_second_derivative_tables(const ReplayOptions& options = {});

void to_json(nlohmann::json& j, const DerivationReport& r);
void from_json(const nlohmann::json& j, DerivationReport& r);

}  // namespace gcflab
