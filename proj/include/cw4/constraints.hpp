#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cw4/combination_loss.hpp"
#include "cw4/params.hpp"
#include "cw4/tolerances.hpp"
#include "cw4/value_terms.hpp"

namespace cw4 {

// legacy: C4 and D3. loss_outer: C4' and D3. loss_recursive: C4' and D3'.
enum class Mode { legacy, loss_outer, loss_recursive };

std::string_view to_string(Mode m);
// Throws std::invalid_argument for an unknown name.
Mode parse_mode(std::string_view name);

enum class ConstraintKind { equality, inequality };
// theorem_validity: maximum-entropy requirements (C3, D4); structural: held by storage (C2, D1).
enum class ConstraintClass { linear, nonlinear, theorem_validity, structural };

std::string_view to_string(ConstraintClass c);

struct ConstraintEntry {
  std::string name;
  ConstraintKind kind = ConstraintKind::equality;
  ConstraintClass cls = ConstraintClass::linear;
  double residual = 0.0;  // NaN when not evaluated
  double tolerance = 0.0;
  bool satisfied = false;
  bool evaluated = true;
};

struct ConstraintReport {
  Mode mode = Mode::legacy;
  Tolerances tolerances;
  std::vector<ConstraintEntry> entries;
  std::string note;  // set when derived quantities could not be evaluated

  bool all_satisfied() const;
  std::vector<std::string> failing() const;
  const ConstraintEntry* find(std::string_view name) const;
  // Entries excluding the structural ones, and the nonlinear subset of those.
  int counted() const;
  int nonlinear_count() const;
};

// Reference size of the constraint system.
constexpr int kReferenceConstraintCount = 35;
constexpr int kReferenceNonlinearCount = 16;

struct TermSummary {
  double gamma = 0.0;
  double h_a = 0.0;
  double h_b = 0.0;
  double chi = 0.0;            // outer loss
  double sum_alpha_chi = 0.0;  // sum over S8bar of alpha * chi_t
  double sum_alpha_h_a = 0.0;  // sum over S8bar of alpha * H(A_t)
  double sum_alpha_h_b = 0.0;  // sum over S8bar of alpha * H(B_t)
  double sum_phi112 = 0.0;     // sum over S8bar of alpha * phi_t(112)
  double sum_phi211 = 0.0;     // sum over S8bar of alpha * phi_t(211)
  double delta_x = 0.0;
  double delta_y = 0.0;
  double delta_z = 0.0;
  double lambda_b = 0.0;
  double lambda_btilde = 0.0;
  double error_bound = 0.0;
  bool has_outer_loss = false;
  bool has_component_loss = false;
};

// Every scalar entering the constraint system and the bound. With `mode` set,
// loss terms the mode does not use are skipped. Throws PreconditionError if
// C1 or D2 fails beyond tolerance.
TermSummary evaluate_terms(const ExpandedParams& e, const Tolerances& tol = {},
                           std::optional<Mode> mode = std::nullopt);
TermSummary evaluate_terms(const ParameterSet& p, const Tolerances& tol = {},
                           std::optional<Mode> mode = std::nullopt);

// Signed residuals (>= 0 when satisfied) of the four nonlinear inequalities.
struct InequalityResiduals {
  double c4 = 0.0;  // C4 or C4' per mode
  double d3 = 0.0;  // D3 or D3' per mode
  double e1 = 0.0;
  double e2 = 0.0;
};
InequalityResiduals inequality_residuals(const TermSummary& t, Mode mode, double kappa);

// The ten C3 equalities as (left components, right components).
struct ProductEquality {
  std::vector<TripleIndex> left;
  std::vector<TripleIndex> right;
};
const std::vector<ProductEquality>& c3_equalities();

ConstraintReport evaluate(const ParameterSet& p, Mode mode, const Tolerances& tol = {});
// Reuses terms already computed for p (must include what `mode` needs).
ConstraintReport evaluate(const ParameterSet& p, Mode mode, const Tolerances& tol, const TermSummary& terms);

}  // namespace cw4
