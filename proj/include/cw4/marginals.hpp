#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "cw4/combinatorics.hpp"
#include "cw4/params.hpp"

namespace cw4 {

// Shannon entropy in bits, with 0 log 0 = 0.
double entropy(std::span<const double> p);

// A probability vector over a support of fixed size N.
template <std::size_t N>
class Distribution {
 public:
  static constexpr double kDefaultTolerance = 1e-9;

  explicit Distribution(const std::array<double, N>& values, double tolerance = kDefaultTolerance)
      : values_(values) {
    double total = 0.0;
    for (double v : values_) {
      if (!(v >= 0.0)) throw std::domain_error("distribution has a negative or NaN entry");
      total += v;
    }
    if (std::fabs(total - 1.0) > tolerance)
      throw std::domain_error("distribution sums to " + std::to_string(total));
  }

  static constexpr std::size_t size() { return N; }
  const std::array<double, N>& values() const { return values_; }
  double operator[](std::size_t n) const { return values_[n]; }
  double sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }
  double entropy() const { return cw4::entropy(values_); }

 private:
  std::array<double, N> values_;
};

// Affine function of one component's g-slots: constant + sum_l coef[l] * g_l.
struct SlotForm {
  double constant = 0.0;
  std::array<double, kMaxSlots> coef{};

  double operator()(const std::array<double, kMaxSlots>& g) const {
    return constant + coef[0] * g[0] + coef[1] * g[1] + coef[2] * g[2] + coef[3] * g[3];
  }
  bool operator==(const SlotForm&) const = default;
};

struct GlobalMarginals {
  Distribution<9> a;
  Distribution<9> b;
  Distribution<9> c;
};

// A, B, C: marginals of the component weights alpha in each role. Rejects
// inputs whose alpha mass differs from 1 by more than `c1_tolerance`.
GlobalMarginals global_marginals(const ExpandedParams& e, double c1_tolerance = 1e-6);
GlobalMarginals global_marginals(const ParameterSet& p, double c1_tolerance = 1e-6);

struct ComponentMarginals {
  Distribution<5> a;
  Distribution<5> b;
  Distribution<5> c;

  const Distribution<5>& role(int r) const { return r == 0 ? a : (r == 1 ? b : c); }
};

// A_t, B_t, C_t from the transcribed closed forms (permuted for t outside
// S8^≺). Throws PreconditionError("D2[...]") when t's slot weights do not sum
// to 1 within `d2_tolerance`.
ComponentMarginals component_marginals(const TripleIndex& t, const ExpandedParams& e,
                                       double d2_tolerance = 1e-6);
ComponentMarginals component_marginals(const TripleIndex& t, const ParameterSet& p,
                                       double d2_tolerance = 1e-6);

// Same marginals accumulated directly from the subcomponent template.
ComponentMarginals component_marginals_from_template(const TripleIndex& t, const ParameterSet& p,
                                                     double d2_tolerance = 1e-6);

// Closed-form slot forms of one marginal (role 0..2) of any t in S8.
const std::array<SlotForm, 5>& marginal_forms(const TripleIndex& t, int role);

// Weight of each factor T_abc (abc in S4) inside a component of S8bar.
struct PhiTable {
  TripleIndex component;
  std::array<double, kS4Size> weights{};  // indexed by s4_index

  double operator()(const TripleIndex& abc) const { return weights[s4_index(abc)]; }
  double total() const;
};

// Throws std::invalid_argument if t is not in S8bar.
PhiTable phi(const TripleIndex& t, const ExpandedParams& e);
PhiTable phi(const TripleIndex& t, const ParameterSet& p);
PhiTable phi_from_template(const TripleIndex& t, const ParameterSet& p);

// Slot forms of phi_t, indexed by s4_index; t must be in S8bar.
const std::array<SlotForm, kS4Size>& phi_forms(const TripleIndex& t);

// Residual of t's slot normalisation: sum_l mult_l g_l - 1.
double d2_residual(const TripleIndex& t, const std::array<double, kMaxSlots>& g);

}  // namespace cw4
