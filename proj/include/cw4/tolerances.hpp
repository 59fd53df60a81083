#pragma once

namespace cw4 {

struct Tolerances {
  double eq_log = 1e-4;     // C3 and D4, log domain
  double eq_linear = 1e-6;  // C1 and D2
  double ineq = 1e-8;       // C4, C4', D3, D3', E1, E2
};

}  // namespace cw4
