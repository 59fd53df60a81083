#include "cw4/combination_loss.hpp"

#include <stdexcept>

namespace cw4 {

Distribution<3> d_rst(const TripleIndex& rst, double btilde, int q) {
  if (!in_s4(rst)) throw std::invalid_argument("triple " + rst.label() + " is not in S4");
  const double q2 = static_cast<double>(q) * q;
  switch (rst.i) {
    case 4: return Distribution<3>({0.0, 0.0, 1.0});
    case 3: return Distribution<3>({0.0, 0.5, 0.5});
    case 2:
      if (rst.j == 1) return Distribution<3>({(1 - btilde) / 2, btilde, (1 - btilde) / 2});
      return Distribution<3>({1 / (q2 + 2), q2 / (q2 + 2), 1 / (q2 + 2)});
    case 1: return Distribution<3>({0.5, 0.5, 0.0});
    default: return Distribution<3>({1.0, 0.0, 0.0});
  }
}

OuterLoss outer_loss(const ExpandedParams& e, const Tolerances& tol) {
  const auto global = global_marginals(e, tol.eq_linear);
  std::array<double, 25> gamma{};
  std::array<std::array<double, 5>, 9> bar_mass{};
  std::array<double, 9> iplus{};
  double edge = 0.0;
  for (const auto& t : s8_triples()) {
    const double a = e.alpha_of(t);
    const auto m = component_marginals(t, e, tol.eq_linear);
    for (int c = 0; c < 5; ++c) {
      const int d = t.i - c;
      if (d >= 0 && d <= 4) gamma[5 * c + d] += a * m.a[c];
    }
    if (t.j == 0 || t.k == 0) {
      edge += a * m.a.entropy();
    } else {
      iplus[t.i] += a;
      for (int c = 0; c < 5; ++c) bar_mass[t.i][c] += a * m.a[c];
    }
  }
  OuterLoss out{Distribution<25>(gamma, 2 * tol.eq_linear), iplus, {}, 0.0};
  double inner = 0.0;
  for (int i = 0; i < 9; ++i) {
    if (iplus[i] <= 0.0) continue;
    double s = 0.0;
    for (double v : bar_mass[i]) s += v;
    std::array<double, 5> bar{};
    for (int c = 0; c < 5; ++c) bar[c] = bar_mass[i][c] / s;
    out.alpha_iplus_bar[i].emplace(bar);
    inner += iplus[i] * out.alpha_iplus_bar[i]->entropy();
  }
  out.chi = global.a.entropy() - out.gamma.entropy() + edge + inner;
  return out;
}

OuterLoss outer_loss(const ParameterSet& p, const Tolerances& tol) { return outer_loss(expand(p), tol); }

ComponentLoss component_loss(const TripleIndex& t, const ExpandedParams& e, const Tolerances& tol) {
  if (!in_s8bar(t)) throw std::invalid_argument("triple " + t.label() + " is not in S8bar");
  const auto m = component_marginals(t, e, tol.eq_linear);
  const auto f = phi(t, e);

  std::array<double, 81> gamma{};
  std::array<std::array<double, 3>, 5> bar_mass{};
  std::array<double, 5> beta{};
  double edge = 0.0;
  for (const auto& rst : s4_triples()) {
    const double w = f(rst);
    if (w == 0.0) continue;
    const auto rest = t - rst;
    if (!in_s4(rest)) throw std::logic_error("factor " + rst.label() + " does not fit in " + t.label());
    const auto d = d_rst(rst, e.btilde, e.q);
    const auto dp = d_rst(rest, e.btilde, e.q);
    for (int a = 0; a < 3; ++a) {
      if (d[a] == 0.0) continue;
      for (int c = 0; c < 3; ++c) {
        if (dp[c] == 0.0) continue;
        gamma[27 * a + 9 * (rst.i - a) + 3 * c + (rest.i - c)] += w / 2 * d[a] * dp[c];
      }
    }
    if (rst.j == 0 || rst.k == 0) {
      edge += w * d.entropy();
    } else {
      beta[rst.i] += w / 2;
      for (int a = 0; a < 3; ++a) bar_mass[rst.i][a] += w / 2 * d[a];
    }
  }
  ComponentLoss out{t, Distribution<81>(gamma, tol.eq_linear), beta, {}, 0.0};
  double inner = 0.0;
  for (int r = 0; r < 5; ++r) {
    if (beta[r] <= 0.0) continue;
    double s = 0.0;
    for (double v : bar_mass[r]) s += v;
    std::array<double, 3> bar{};
    for (int a = 0; a < 3; ++a) bar[a] = bar_mass[r][a] / s;
    out.beta_bar[r].emplace(bar);
    inner += 2 * beta[r] * out.beta_bar[r]->entropy();
  }
  out.chi = m.a.entropy() - out.gamma.entropy() + edge + inner;
  return out;
}

ComponentLoss component_loss(const TripleIndex& t, const ParameterSet& p, const Tolerances& tol) {
  return component_loss(t, expand(p), tol);
}

}  // namespace cw4
