#include <cmath>

#include "cw4/certifier.hpp"
#include "cw4/errors.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cw4;

TEST_CASE("implied bounds of the shipped tables") {
  CHECK(std::fabs(implied_bound(testing::load_table(5), Mode::legacy) - 3.251640) < 1e-5);
  CHECK(std::fabs(implied_bound(testing::load_table(6), Mode::loss_outer) - 3.251502) < 1e-5);
  CHECK(std::fabs(implied_bound(testing::load_table(7), Mode::loss_recursive) - 3.250563) < 1e-5);
}

TEST_CASE("certify table5") {
  const auto c = certify(testing::load_table(5), Mode::legacy, 3.251640);
  CHECK(c.pass);
  CHECK(std::fabs(c.lhs - 11.2294215) < 1e-6);
  CHECK(std::fabs(c.rhs - 11.2294197) < 1e-6);
  CHECK(c.rhs == doctest::Approx(4 * std::log2(7.0)).epsilon(1e-15));
  CHECK(c.margin() > 1e3 * c.error_budget);
  CHECK(c.error_budget < 1e-9);

  const auto low = certify(testing::load_table(5), Mode::legacy, 2.0);
  CHECK(!low.pass);
  CHECK(low.lhs < low.rhs);
  CHECK(low.report.all_satisfied());
}

TEST_CASE("certify table7 reports both entropy readings") {
  const auto c = certify(testing::load_table(7), Mode::loss_recursive, 3.250563);
  CHECK(c.pass);
  CHECK(std::fabs(c.lhs - 11.229435) < 1e-6);
  CHECK(c.lhs_h_a < c.lhs);
}

TEST_CASE("refusals") {
  auto p = testing::load_table(7);
  try {
    implied_bound(p, Mode::legacy);
    FAIL("expected refusal");
  } catch (const UnsatisfiedConstraintsError& e) {
    const auto& n = e.names();
    CHECK(std::find(n.begin(), n.end(), "C4") != n.end());
  }

}

TEST_CASE("degenerate delta_x") {
  // Only the corners carry mass, so delta_x vanishes.
  auto corner = testing::load_table(5);
  corner.alpha.fill(0.0);
  corner.alpha_of({0, 0, 8}) = 1.0 / 3;
  corner.alpha_of({8, 0, 0}) = 1.0 / 3;
  CHECK(evaluate_terms(corner).delta_x == 0.0);
  CHECK_THROWS_AS(implied_bound(corner, Mode::legacy), DegenerateCertificateError);
  CHECK(!certify(corner, Mode::legacy, 3.0).pass);
}

TEST_CASE("certifying at the implied bound passes within the error budget") {
  for (int n : {5, 6, 7}) {
    const Mode m = n == 5 ? Mode::legacy : (n == 6 ? Mode::loss_outer : Mode::loss_recursive);
    const auto p = testing::load_table(n);
    const double rho = implied_bound(p, m);
    const auto probe = certify(p, m, rho);
    CertifyOptions opt;
    opt.margin = probe.error_budget;
    CHECK(certify(p, m, rho, opt).pass);
    for (double extra : {1e-9, 1e-6, 0.1, 1.0}) CHECK(certify(p, m, rho + extra).pass);
    CHECK(!certify(p, m, rho - 1e-6).pass);
  }
}

TEST_CASE("report formats") {
  const auto pass = certify(testing::load_table(5), Mode::legacy, 3.251640);
  const auto text = format_report(pass);
  CHECK(text.find("CERTIFIED") != std::string::npos);
  CHECK(text.find("C3.1") != std::string::npos);
  const auto kv = format_key_values(pass);
  CHECK(kv.find("pass=1") != std::string::npos);
  CHECK(kv.find("residual.E2=") != std::string::npos);

  const auto fail = certify(testing::load_table(5), Mode::legacy, 3.2);
  CHECK(format_report(fail).find("CERTIFIED") == std::string::npos);
  CHECK(format_key_values(fail).find("pass=0") != std::string::npos);
}
