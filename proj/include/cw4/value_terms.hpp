#pragma once

#include <vector>

#include "cw4/combinatorics.hpp"
#include "cw4/params.hpp"
#include "cw4/tolerances.hpp"

namespace cw4 {

// log2((2β)^β (1-β)^(1-β)); 0 at β = 0 and 1 at β = 1.
double lambda(double beta);

// log2 of the large dimension of a factor T_abc with a zero coordinate:
// log2(2q) for the 013 family, log2(q^2+2) for the 022 family, 0 for 004.
double factor_log_size(const TripleIndex& abc, int q);

struct RWTerms {
  double r = 0.0;
  double log2_w = 0.0;
};

// R_t and log2 W_t for a component with a zero coordinate; throws
// std::invalid_argument for t in S8bar.
RWTerms rw_terms(const TripleIndex& t, const ExpandedParams& e, double d2_tolerance = 1e-6);
RWTerms rw_terms(const TripleIndex& t, const ParameterSet& p, double d2_tolerance = 1e-6);

struct ComponentContribution {
  TripleIndex component;
  double alpha = 0.0;
  double gamma = 0.0;  // already multiplied by alpha
  double delta_x = 0.0;
  double delta_y = 0.0;
  double delta_z = 0.0;
};

struct ValueBreakdown {
  double gamma_total = 0.0;
  double delta_x = 0.0;
  double delta_y = 0.0;
  double delta_z = 0.0;
  double lambda_b = 0.0;
  double lambda_btilde = 0.0;
  double error_bound = 0.0;  // summation error of the four totals combined
  std::vector<ComponentContribution> per_component;  // all of S8, lexicographic
};

// Throws PreconditionError naming C1 or the offending D2 group.
ValueBreakdown value_breakdown(const ExpandedParams& e, const Tolerances& tol = {});
ValueBreakdown value_breakdown(const ParameterSet& p, const Tolerances& tol = {});

}  // namespace cw4
