#include "cw4/value_terms.hpp"

#include <cmath>
#include <stdexcept>

#include "cw4/errors.hpp"
#include "cw4/marginals.hpp"
#include "cw4/summation.hpp"

namespace cw4 {

double lambda(double beta) {
  if (beta <= 0.0) return 0.0;
  if (beta >= 1.0) return 1.0;
  return beta * std::log2(2 * beta) + (1 - beta) * std::log2(1 - beta);
}

double factor_log_size(const TripleIndex& abc, int q) {
  const int lo = abc.min();
  const int hi = std::max(abc.i, std::max(abc.j, abc.k));
  if (lo != 0) throw std::invalid_argument("factor " + abc.label() + " has no zero coordinate");
  if (hi == 4) return 0.0;
  if (hi == 3) return std::log2(2.0 * q);
  return std::log2(static_cast<double>(q) * q + 2);
}

RWTerms rw_terms(const TripleIndex& t, const ExpandedParams& e, double d2_tolerance) {
  if (!in_s8(t) || in_s8bar(t)) throw std::invalid_argument("R/W terms need a zero coordinate, got " + t.label());
  const auto m = component_marginals(t, e, d2_tolerance);
  int role = 0;
  while (t[role] == 0) ++role;
  RWTerms out;
  out.r = m.role(role).entropy();
  const auto& gv = e.g_of(t);
  for (const auto& en : subcomponent_template(t).entries)
    out.log2_w += en.share * gv[en.slot - 1] * (factor_log_size(en.left, e.q) + factor_log_size(en.right, e.q));
  return out;
}

RWTerms rw_terms(const TripleIndex& t, const ParameterSet& p, double d2_tolerance) {
  return rw_terms(t, expand(p), d2_tolerance);
}

ValueBreakdown value_breakdown(const ExpandedParams& e, const Tolerances& tol) {
  global_marginals(e, tol.eq_linear);

  ValueBreakdown out;
  out.lambda_b = lambda(e.b);
  out.lambda_btilde = lambda(e.btilde);
  const double l2q = std::log2(2.0 * e.q);
  const double lq2 = std::log2(static_cast<double>(e.q) * e.q + 2);
  const double lq = std::log2(static_cast<double>(e.q));

  CompensatedSum gamma, dx, dy, dz;
  for (const auto& t : s8_triples()) {
    ComponentContribution c{t, e.alpha_of(t)};
    if (in_s8bar(t)) {
      const auto m = component_marginals(t, e, tol.eq_linear);
      const auto f = phi(t, e);
      const double f112 = f({1, 1, 2}), f121 = f({1, 2, 1}), f211 = f({2, 1, 1});
      c.gamma = c.alpha * (m.b.entropy() + 2 * f112 + (1 - out.lambda_btilde) * f211);
      c.delta_x = c.alpha * ((f({1, 0, 3}) + f({3, 0, 1})) * l2q + f({2, 0, 2}) * lq2 +
                             (f112 + f211 * e.btilde) * lq);
      c.delta_y = c.alpha * ((f({1, 3, 0}) + f({3, 1, 0})) * l2q + f({2, 2, 0}) * lq2 +
                             (f121 + f211 * e.btilde) * lq);
      c.delta_z = c.alpha * ((f({0, 1, 3}) + f({0, 3, 1})) * l2q + f({0, 2, 2}) * lq2 +
                             (2 * f112 * e.b + f211 * (1 - e.btilde)) * lq);
    } else {
      const auto rw = rw_terms(t, e, tol.eq_linear);
      const double v = c.alpha * (rw.r + rw.log2_w);
      if (t.j == 0) c.delta_x = v;
      if (t.k == 0) c.delta_y = v;
      if (t.i == 0) c.delta_z = v;
    }
    gamma += c.gamma;
    dx += c.delta_x;
    dy += c.delta_y;
    dz += c.delta_z;
    out.per_component.push_back(c);
  }
  out.gamma_total = gamma.value();
  out.delta_x = dx.value();
  out.delta_y = dy.value();
  out.delta_z = dz.value();
  out.error_bound = gamma.error_bound() + dx.error_bound() + dy.error_bound() + dz.error_bound();
  return out;
}

ValueBreakdown value_breakdown(const ParameterSet& p, const Tolerances& tol) {
  return value_breakdown(expand(p), tol);
}

}  // namespace cw4
