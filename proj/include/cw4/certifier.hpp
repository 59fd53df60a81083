#pragma once

#include <string>

#include "cw4/constraints.hpp"
#include "cw4/params.hpp"

namespace cw4 {

struct CertifyOptions {
  Tolerances tolerances;
  double margin = 0.0;  // pass requires lhs >= rhs - margin
};

struct BoundCertificate {
  ParameterSet params;
  Mode mode = Mode::legacy;
  double kappa = 0.0;
  double rho = 0.0;
  double lhs = 0.0;       // Γ + H(B) + ρΔx
  double rhs = 0.0;       // 4 log2(q+2)
  double lhs_h_a = 0.0;   // same with H(A) in place of H(B)
  double error_budget = 0.0;
  double certify_margin = 0.0;
  TermSummary terms;
  ConstraintReport report;
  bool pass = false;

  double margin() const { return lhs - rhs; }
};

// (4 log2(q+2) - Γ - H(B)) / Δx. Throws UnsatisfiedConstraintsError or
// DegenerateCertificateError.
double implied_bound(const ParameterSet& p, Mode mode, const Tolerances& tol = {});

BoundCertificate certify(const ParameterSet& p, Mode mode, double rho, const CertifyOptions& opt = {});

// Human-readable report; the line "CERTIFIED ..." appears only when c.pass.
std::string format_report(const BoundCertificate& c);
// One `key=value` per line.
std::string format_key_values(const BoundCertificate& c);

}  // namespace cw4
