#include "cw4/certifier.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "cw4/errors.hpp"
#include "cw4/summation.hpp"

namespace cw4 {

namespace {

double rhs_of(int q) { return 4 * std::log2(static_cast<double>(q) + 2); }

}  // namespace

double implied_bound(const ParameterSet& p, Mode mode, const Tolerances& tol) {
  const auto report = evaluate(p, mode, tol);
  if (!report.note.empty()) throw UnsatisfiedConstraintsError(report.failing());
  const auto t = evaluate_terms(p, tol, mode);
  if (!(t.delta_x > 0.0)) throw DegenerateCertificateError(fmt::format("delta_x = {} is not positive", t.delta_x));
  if (!report.all_satisfied()) throw UnsatisfiedConstraintsError(report.failing());
  return (rhs_of(p.q) - t.gamma - t.h_b) / t.delta_x;
}

BoundCertificate certify(const ParameterSet& p, Mode mode, double rho, const CertifyOptions& opt) {
  BoundCertificate c;
  c.params = p;
  c.mode = mode;
  c.kappa = p.kappa;
  c.rho = rho;
  c.rhs = rhs_of(p.q);
  c.certify_margin = opt.margin;
  c.report = evaluate(p, mode, opt.tolerances);
  if (!c.report.note.empty()) {
    c.lhs = c.lhs_h_a = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  c.terms = evaluate_terms(p, opt.tolerances);

  CompensatedSum lhs, lhs_a;
  lhs.add(c.terms.gamma).add(c.terms.h_b).add(rho * c.terms.delta_x);
  lhs_a.add(c.terms.gamma).add(c.terms.h_a).add(rho * c.terms.delta_x);
  c.lhs = lhs.value();
  c.lhs_h_a = lhs_a.value();

  // Summation error of the accumulated totals, plus a per-term allowance for
  // the logarithms and products feeding them, plus the final additions.
  constexpr double u = std::numeric_limits<double>::epsilon() / 2;
  c.error_budget = c.terms.error_bound * std::max(1.0, std::fabs(rho)) +
                   64 * u * (std::fabs(c.terms.gamma) + c.terms.h_b + std::fabs(rho * c.terms.delta_x)) +
                   lhs.error_bound() + 4 * u * c.rhs;
  c.pass = c.report.all_satisfied() && c.lhs >= c.rhs - opt.margin;
  return c;
}

std::string format_report(const BoundCertificate& c) {
  std::string s;
  s += fmt::format("mode        {}\n", to_string(c.mode));
  s += fmt::format("kappa       {}\n", c.kappa);
  s += fmt::format("q           {}\n", c.params.q);
  s += fmt::format("rho         {:.7f}\n", c.rho);
  s += fmt::format("lhs         {:.10f}   (Gamma + H(B) + rho*dx)\n", c.lhs);
  s += fmt::format("lhs[H(A)]   {:.10f}\n", c.lhs_h_a);
  s += fmt::format("rhs         {:.10f}   (4 log2(q+2))\n", c.rhs);
  s += fmt::format("margin      {:.3e}\n", c.margin());
  s += fmt::format("budget      {:.3e}\n", c.error_budget);
  if (c.report.note.empty()) {
    const auto& t = c.terms;
    s += fmt::format("Gamma {:.8f}  H(A) {:.8f}  H(B) {:.8f}\n", t.gamma, t.h_a, t.h_b);
    s += fmt::format("dx {:.8f}  dy {:.8f}  dz {:.8f}\n", t.delta_x, t.delta_y, t.delta_z);
    s += fmt::format("chi {:.8f}  sum a*chi_t {:.8f}\n", t.chi, t.sum_alpha_chi);
    s += fmt::format("sum a*H(A_t) {:.8f}  sum a*H(B_t) {:.8f}\n", t.sum_alpha_h_a, t.sum_alpha_h_b);
  } else {
    s += "not evaluated: " + c.report.note + "\n";
  }
  s += fmt::format("constraints ({} counted, {} nonlinear; reference {} / {})\n", c.report.counted(),
                   c.report.nonlinear_count(), kReferenceConstraintCount, kReferenceNonlinearCount);
  for (const auto& e : c.report.entries) {
    s += fmt::format("  {:<12} {:<3} {:<16} {:>+.3e}  tol {:.0e}  {}\n", e.name,
                     e.kind == ConstraintKind::equality ? "=" : ">=", to_string(e.cls), e.residual, e.tolerance,
                     e.satisfied ? "ok" : "FAIL");
  }
  if (c.pass)
    s += fmt::format("CERTIFIED omega({}) <= {:.7f}\n", c.kappa, c.rho);
  else if (!c.report.all_satisfied())
    s += "REJECTED: constraints fail\n";
  else
    s += "REJECTED: lhs < rhs\n";
  return s;
}

std::string format_key_values(const BoundCertificate& c) {
  std::string s;
  s += fmt::format("mode={}\n", to_string(c.mode));
  s += fmt::format("kappa={:.17g}\n", c.kappa);
  s += fmt::format("q={}\n", c.params.q);
  s += fmt::format("rho={:.17g}\n", c.rho);
  s += fmt::format("lhs={:.17g}\n", c.lhs);
  s += fmt::format("lhs_h_a={:.17g}\n", c.lhs_h_a);
  s += fmt::format("rhs={:.17g}\n", c.rhs);
  s += fmt::format("margin={:.17g}\n", c.margin());
  s += fmt::format("error_budget={:.17g}\n", c.error_budget);
  s += fmt::format("gamma={:.17g}\n", c.terms.gamma);
  s += fmt::format("h_a={:.17g}\n", c.terms.h_a);
  s += fmt::format("h_b={:.17g}\n", c.terms.h_b);
  s += fmt::format("chi={:.17g}\n", c.terms.chi);
  s += fmt::format("sum_alpha_chi={:.17g}\n", c.terms.sum_alpha_chi);
  s += fmt::format("sum_alpha_h_a={:.17g}\n", c.terms.sum_alpha_h_a);
  s += fmt::format("sum_alpha_h_b={:.17g}\n", c.terms.sum_alpha_h_b);
  s += fmt::format("delta_x={:.17g}\n", c.terms.delta_x);
  s += fmt::format("delta_y={:.17g}\n", c.terms.delta_y);
  s += fmt::format("delta_z={:.17g}\n", c.terms.delta_z);
  for (const auto& e : c.report.entries)
    s += fmt::format("residual.{}={:.17g}\nsatisfied.{}={}\n", e.name, e.residual, e.name, e.satisfied ? 1 : 0);
  s += fmt::format("pass={}\n", c.pass ? 1 : 0);
  return s;
}

}  // namespace cw4
