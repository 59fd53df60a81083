// Acceptance run: one PASS/FAIL line per criterion.
// Exit status is nonzero when a criterion fails that is not listed in kKnownGaps.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cw4/certifier.hpp"
#include "cw4/combination_loss.hpp"
#include "cw4/marginals.hpp"
#include "cw4/optimizer.hpp"
#include "cw4/value_terms.hpp"
#include "test_support.hpp"

using namespace cw4;
using Clock = std::chrono::steady_clock;

namespace {

// Criteria whose reference value is not reproduced by the formulas.
const std::set<int> kKnownGaps = {2};

struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    expect(std::fabs(got - want) <= tol, fmt::format("{} = {:.10f}, want {} +- {:g}", what, got, want, tol));
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double residual(const ConstraintReport& r, const std::string& name) { return r.find(name)->residual; }

Check criterion1() {
  Check c;
  const auto cert = certify(testing::load_table(5), Mode::legacy, 3.251640);
  c.expect(cert.pass, "verify rejected");
  c.near(cert.lhs, 11.2294215, 1e-6, "lhs");
  c.near(cert.rhs, 11.2294197, 1e-6, "rhs");
  return c;
}

Check criterion2() {
  Check c;
  const auto cert = certify(testing::load_table(6), Mode::loss_outer, 3.251502);
  c.expect(cert.pass, "verify rejected");
  c.near(cert.lhs, 11.2294199, 1e-6, "lhs");
  c.near(cert.terms.chi, -0.00322, 1e-4, "chi");
  return c;
}

Check criterion3() {
  Check c;
  const auto cert = certify(testing::load_table(7), Mode::loss_recursive, 3.250563);
  const auto& t = cert.terms;
  c.expect(cert.pass, "verify rejected");
  c.near(t.h_a, 2.14121, 1e-4, "H(A)");
  c.near(t.h_b, 2.14504, 1e-4, "H(B)");
  c.near(t.sum_alpha_h_a, 0.97706, 1e-4, "sum alpha H(A_t)");
  c.near(t.sum_alpha_h_b, 0.99206, 1e-4, "sum alpha H(B_t)");
  c.near(-t.chi, 0.00383, 1e-4, "-chi");
  c.near(-t.sum_alpha_chi, 0.01500, 1e-4, "-sum alpha chi_t");
  return c;
}

Check criterion4() {
  Check c;
  const auto r5 = evaluate(testing::load_table(5), Mode::legacy);
  const auto r6 = evaluate(testing::load_table(6), Mode::loss_outer);
  const auto r7 = evaluate(testing::load_table(7), Mode::loss_recursive);
  c.near(residual(r5, "C4"), 0.0, 1e-3, "table5 C4");
  c.near(residual(r5, "D3"), 0.0, 1e-3, "table5 D3");
  c.near(residual(r6, "C4'"), 0.0, 1e-3, "table6 C4'");
  c.near(residual(r7, "C4'"), 0.0, 1e-3, "table7 C4'");
  c.near(residual(r7, "D3'"), 0.0, 1e-3, "table7 D3'");
  return c;
}

template <std::size_t N>
double sum_error(const Distribution<N>& d) {
  return std::fabs(d.sum() - 1.0);
}

template <std::size_t N>
double max_gap(const Distribution<N>& a, const Distribution<N>& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < N; ++n) m = std::max(m, std::fabs(a[n] - b[n]));
  return m;
}

void properties_at(const ParameterSet& p, const ParameterSet& projected, const std::string& label, Check& c) {
  const auto gm = global_marginals(p);
  c.expect(sum_error(gm.a) <= 1e-9 && sum_error(gm.b) <= 1e-9 && sum_error(gm.c) <= 1e-9,
           label + ": global marginals");
  for (const auto& t : enumerate(IndexSet::S8)) {
    const auto m = component_marginals(t, p);
    for (int r = 0; r < 3; ++r) c.expect(sum_error(m.role(r)) <= 1e-9, label + ": marginal of " + t.label());
    const auto cf = component_marginals(t, projected);
    const auto tm = component_marginals_from_template(t, projected);
    for (int r = 0; r < 3; ++r)
      c.expect(max_gap(cf.role(r), tm.role(r)) <= 1e-12, label + ": closed form vs template at " + t.label());
  }
  for (const auto& t : enumerate(IndexSet::S8bar)) {
    c.expect(std::fabs(phi(t, p).total() - 2.0) <= 1e-9, label + ": phi total at " + t.label());
    const auto cl = component_loss(t, p);
    c.expect(sum_error(cl.gamma) <= 1e-9, label + ": gamma of " + t.label());
    for (const auto& bb : cl.beta_bar)
      if (bb) c.expect(sum_error(*bb) <= 1e-9, label + ": beta bar of " + t.label());
    c.expect(cl.chi <= 1e-9, label + ": chi_t of " + t.label() + " positive");
  }
  const auto ol = outer_loss(p);
  c.expect(sum_error(ol.gamma) <= 1e-9, label + ": outer gamma");
  for (const auto& ab : ol.alpha_iplus_bar)
    if (ab) c.expect(sum_error(*ab) <= 1e-9, label + ": alpha bar");
  c.expect(ol.chi <= 1e-9, label + ": chi positive");

  const auto vb = value_breakdown(p);
  c.expect(std::fabs(vb.delta_x - vb.delta_y) <= 1e-9, label + ": delta_x != delta_y");

  const auto legacy = evaluate(p, Mode::legacy);
  const auto outer = evaluate(p, Mode::loss_outer);
  const auto recursive = evaluate(p, Mode::loss_recursive);
  c.expect(residual(outer, "C4'") >= residual(legacy, "C4"), label + ": C4' below C4");
  c.expect(residual(recursive, "D3'") >= residual(legacy, "D3"), label + ": D3' below D3");
}

Check criterion5() {
  Check c;
  for (int n : {5, 6, 7}) {
    const auto p = testing::load_table(n);
    properties_at(p, project_c1_d2(p), fmt::format("table{}", n), c);
  }
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto p = testing::random_feasible(1000 + seed);
    properties_at(p, p, fmt::format("random {}", seed), c);
  }
  return c;
}

Check criterion6(std::string& detail) {
  Check c;
  auto p7 = testing::load_table(7);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  for (auto& a : p7.alpha) a *= 1 + noise(rng);
  for (auto& g : p7.g)
    for (auto& v : g) v *= 1 + noise(rng);
  p7.b *= 1 + noise(rng);
  p7.btilde *= 1 + noise(rng);

  SolverConfig cfg;
  cfg.mode = Mode::loss_recursive;
  cfg.kappa = 2.0;
  cfg.starts = 8;
  const auto r2 = optimize(cfg, p7);
  c.expect(r2.feasible && r2.certificate.pass, "kappa 2: no certified point");
  c.expect(certify(r2.params, cfg.mode, r2.certificate.rho).pass, "kappa 2: re-certification failed");
  c.expect(r2.certificate.rho <= 3.2516, fmt::format("kappa 2: rho {:.7f} > 3.2516", r2.certificate.rho));

  cfg.mode = Mode::legacy;
  cfg.kappa = 1.0;
  const auto r1 = optimize(cfg, testing::load_table(5));
  c.expect(r1.feasible && r1.certificate.pass, "kappa 1: no certified point");
  c.expect(certify(r1.params, cfg.mode, r1.certificate.rho).pass, "kappa 1: re-certification failed");
  c.expect(r1.certificate.rho <= 2.3735, fmt::format("kappa 1: rho {:.7f} > 2.3735", r1.certificate.rho));
  detail = fmt::format("rho(2) = {:.7f}, rho(1) = {:.7f}", r2.certificate.rho, r1.certificate.rho);
  return c;
}

Check criterion7(std::string& detail) {
  Check c;
  const auto p = testing::load_table(5);
  const double outer = implied_bound(p, Mode::loss_outer);
  const double legacy = implied_bound(p, Mode::legacy);
  c.expect(outer <= legacy, fmt::format("loss_outer {:.10f} > legacy {:.10f}", outer, legacy));
  detail = fmt::format("loss_outer {:.7f} <= legacy {:.7f}", outer, legacy);
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    double limit_s;  // 0: no runtime limit
    std::function<Check(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "table5 certificate, legacy", 1.0, [](std::string&) { return criterion1(); }},
      {2, "table6 certificate, loss_outer", 1.0, [](std::string&) { return criterion2(); }},
      {3, "table7 certificate, loss_recursive", 1.0, [](std::string&) { return criterion3(); }},
      {4, "saturation", 0.0, [](std::string&) { return criterion4(); }},
      {5, "property suite", 30.0, [](std::string&) { return criterion5(); }},
      {6, "optimizer regression", 600.0, criterion6},
      {7, "monotonicity", 0.0, criterion7},
  };

  int unexpected = 0;
  for (const auto& cr : criteria) {
    std::string detail;
    const auto t0 = Clock::now();
    Check result;
    try {
      result = cr.run(detail);
    } catch (const std::exception& e) {
      result.failures.push_back(std::string("exception: ") + e.what());
    }
    const double dt = seconds_since(t0);
    if (cr.limit_s > 0 && dt > cr.limit_s) result.failures.push_back(fmt::format("runtime {:.2f} s", dt));
    const bool ok = result.failures.empty();
    std::string line = fmt::format("{} criterion {}: {} ({:.3f} s)", ok ? "PASS" : "FAIL", cr.id, cr.title, dt);
    if (!detail.empty()) line += "; " + detail;
    for (const auto& f : result.failures) line += "; " + f;
    if (!ok && kKnownGaps.count(cr.id)) line += " [known gap]";
    std::cout << line << std::endl;
    if (!ok && !kKnownGaps.count(cr.id)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
