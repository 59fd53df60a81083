#pragma once

#include <array>
#include <optional>

#include "cw4/combinatorics.hpp"
#include "cw4/marginals.hpp"
#include "cw4/params.hpp"
#include "cw4/tolerances.hpp"

namespace cw4 {

// Split of the x-index r of a factor T_rst into (a, r - a), a in {0,1,2}.
Distribution<3> d_rst(const TripleIndex& rst, double btilde, int q);

struct OuterLoss {
  Distribution<25> gamma;  // (c, d) at 5c + d
  std::array<double, 9> alpha_iplus{};
  std::array<std::optional<Distribution<5>>, 9> alpha_iplus_bar;
  double chi = 0.0;

  double gamma_at(int c, int d) const { return gamma[5 * c + d]; }
};

OuterLoss outer_loss(const ExpandedParams& e, const Tolerances& tol = {});
OuterLoss outer_loss(const ParameterSet& p, const Tolerances& tol = {});

struct ComponentLoss {
  TripleIndex component;
  Distribution<81> gamma;  // (a, b, c, d) at 27a + 9b + 3c + d
  std::array<double, 5> beta{};
  std::array<std::optional<Distribution<3>>, 5> beta_bar;
  double chi = 0.0;

  double gamma_at(int a, int b, int c, int d) const { return gamma[27 * a + 9 * b + 3 * c + d]; }
};

// t must be in S8bar (std::invalid_argument otherwise).
ComponentLoss component_loss(const TripleIndex& t, const ExpandedParams& e, const Tolerances& tol = {});
ComponentLoss component_loss(const TripleIndex& t, const ParameterSet& p, const Tolerances& tol = {});

}  // namespace cw4
