#include <cmath>

#include "cw4/errors.hpp"
#include "cw4/marginals.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace cw4;

namespace {

template <std::size_t N>
bool close(const Distribution<N>& a, const Distribution<N>& b, double tol) {
  for (std::size_t n = 0; n < N; ++n)
    if (std::fabs(a[n] - b[n]) > tol) return false;
  return true;
}

ParameterSet with_g(const TripleIndex& t, std::array<double, 4> g) {
  auto p = testing::random_feasible(1);
  p.g[canonical_index(t)] = g;
  return p;
}

}  // namespace

TEST_CASE("entropy") {
  CHECK(entropy(std::array{1.0, 0.0, 0.0, 0.0, 0.0}) == 0.0);
  CHECK(entropy(std::array{0.5, 0.5, 0.0, 0.0, 0.0}) == 1.0);
  CHECK(entropy(std::array{0.25, 0.25, 0.25, 0.25}) == 2.0);
  CHECK(Distribution<3>({0.2, 0.3, 0.5}).entropy() ==
        doctest::Approx(-(0.2 * std::log2(0.2) + 0.3 * std::log2(0.3) + 0.5 * std::log2(0.5))));
}

TEST_CASE("distribution validation") {
  CHECK_NOTHROW(Distribution<2>({0.5, 0.5 + 5e-10}));
  CHECK_THROWS_AS(Distribution<2>({0.5, 0.5 + 5e-9}), std::domain_error);
  CHECK_THROWS_AS(Distribution<2>({-0.1, 1.1}), std::domain_error);
  CHECK_THROWS_AS(Distribution<2>({NAN, 1.0}), std::domain_error);
}

TEST_CASE("global marginals") {
  SUBCASE("corner mass") {
    ParameterSet p = testing::random_feasible(2);
    p.alpha.fill(0.0);
    p.alpha_of({0, 0, 8}) = 1.0 / 3;  // also covers 080
    p.alpha_of({8, 0, 0}) = 1.0 / 3;
    const auto m = global_marginals(p);
    for (const auto* d : {&m.a, &m.b, &m.c}) {
      CHECK((*d)[0] == doctest::Approx(2.0 / 3));
      CHECK((*d)[8] == doctest::Approx(1.0 / 3));
    }
  }
  SUBCASE("entropies of the shipped tables") {
    const auto m5 = global_marginals(testing::load_table(5));
    CHECK(std::fabs(m5.a.entropy() - 2.14399) < 1e-4);
    const auto m7 = global_marginals(testing::load_table(7));
    CHECK(std::fabs(m7.a.entropy() - 2.14121) < 1e-4);
    CHECK(std::fabs(m7.b.entropy() - 2.14504) < 1e-4);
    CHECK(m7.b.values() == m7.c.values());
  }
  SUBCASE("C1 violation is rejected") {
    auto p = testing::random_feasible(3);
    p.alpha[0] += 1e-3;
    CHECK_THROWS_AS(global_marginals(p), PreconditionError);
    try {
      global_marginals(p);
    } catch (const PreconditionError& e) {
      CHECK(e.condition() == "C1");
    }
  }
}

TEST_CASE("component marginals: listed values") {
  const auto m017 = component_marginals({0, 1, 7}, testing::random_feasible(4));
  CHECK(m017.a.values() == std::array{1.0, 0.0, 0.0, 0.0, 0.0});
  CHECK(m017.b.values() == std::array{0.5, 0.5, 0.0, 0.0, 0.0});
  CHECK(m017.c.values() == std::array{0.0, 0.0, 0.0, 0.5, 0.5});

  const auto m044 = component_marginals({0, 4, 4}, with_g({0, 4, 4}, {0, 0, 1, 0}));
  CHECK(m044.b.values() == std::array{0.0, 0.0, 1.0, 0.0, 0.0});

  const auto p7 = testing::load_table(7);
  const auto m224 = component_marginals({2, 2, 4}, p7);
  CHECK(m224.a.values() == m224.b.values());
  CHECK(close(m224.a, component_marginals_from_template({2, 2, 4}, p7).a, 1e-12));

  // 503 carries the 035 marginals with roles (y, x, z) -> (x, y, z) reordered.
  const auto p = testing::random_feasible(5);
  const auto m503 = component_marginals({5, 0, 3}, p);
  const double g1 = p.g_of({5, 0, 3}, 1), g2 = p.g_of({5, 0, 3}, 2);
  CHECK(m503.b.values() == std::array{1.0, 0.0, 0.0, 0.0, 0.0});
  CHECK(m503.a[0] == 0.0);
  CHECK(m503.a[1] == doctest::Approx(g1 / 2));
  CHECK(m503.a[2] == doctest::Approx(g2 / 2));
  CHECK(m503.a[4] == doctest::Approx(g1 / 2));
  CHECK(m503.c[0] == doctest::Approx(g1 / 2));
  CHECK(m503.c[4] == 0.0);
}

TEST_CASE("component marginals: closed form equals template for every component") {
  for (std::uint64_t seed = 10; seed < 40; ++seed) {
    const auto p = testing::random_feasible(seed);
    for (const auto& t : enumerate(IndexSet::S8)) {
      const auto cf = component_marginals(t, p);
      const auto tm = component_marginals_from_template(t, p);
      for (int r = 0; r < 3; ++r) CHECK_MESSAGE(close(cf.role(r), tm.role(r), 1e-12), t.label() << " role " << r);
    }
  }
  for (int n : {5, 6, 7}) {
    const auto p = project_c1_d2(testing::load_table(n));
    for (const auto& t : enumerate(IndexSet::S8)) {
      const auto cf = component_marginals(t, p);
      const auto tm = component_marginals_from_template(t, p);
      for (int r = 0; r < 3; ++r) CHECK_MESSAGE(close(cf.role(r), tm.role(r), 1e-12), t.label() << " role " << r);
    }
  }
}

TEST_CASE("shipped tables: closed form and template differ by at most the slot residual") {
  for (int n : {5, 6, 7}) {
    const auto p = testing::load_table(n);
    for (const auto& t : enumerate(IndexSet::S8)) {
      const double slack = std::fabs(d2_residual(t, p.g[canonical_index(t)])) + 1e-12;
      const auto cf = component_marginals(t, p);
      const auto tm = component_marginals_from_template(t, p);
      for (int r = 0; r < 3; ++r) CHECK_MESSAGE(close(cf.role(r), tm.role(r), slack), t.label() << " role " << r);
    }
  }
}

TEST_CASE("component marginal symmetry") {
  const auto p = testing::random_feasible(41);
  for (const auto& t : enumerate(IndexSet::S8)) {
    const auto m = component_marginals(t, p);
    const auto s = component_marginals(swap_yz(t), p);
    CHECK(close(m.a, s.a, 1e-15));
    CHECK(close(m.b, s.c, 1e-15));
    if (t.i == 0) CHECK(m.b.entropy() == doctest::Approx(m.c.entropy()).epsilon(1e-12));
  }
}

TEST_CASE("D2 violation is rejected with the component name") {
  auto p = testing::random_feasible(6);
  p.g_of({1, 2, 5}, 1) += 0.01;
  try {
    component_marginals({1, 5, 2}, p);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(e.condition() == "D2[1,2,5]");
  }
  CHECK_THROWS_AS(component_marginals({1, 2, 5}, p), PreconditionError);
  CHECK_NOTHROW(component_marginals({2, 1, 5}, p));
  CHECK_THROWS_AS(component_marginals({1, 1, 1}, p), std::invalid_argument);
}

TEST_CASE("phi: listed values") {
  const auto p = testing::random_feasible(7);
  const auto f116 = phi({1, 1, 6}, p);
  const double g1 = p.g_of({1, 1, 6}, 1), g2 = p.g_of({1, 1, 6}, 2);
  CHECK(f116({0, 0, 4}) == g1);
  CHECK(f116({1, 1, 2}) == g1);
  CHECK(f116({0, 1, 3}) == g2);
  CHECK(f116({1, 0, 3}) == g2);
  double rest = 0.0;
  for (const auto& abc : s4_triples())
    if (abc != TripleIndex{0, 0, 4} && abc != TripleIndex{1, 1, 2} && abc != TripleIndex{0, 1, 3} &&
        abc != TripleIndex{1, 0, 3})
      rest += f116(abc);
  CHECK(rest == 0.0);

  const auto f413 = phi({4, 1, 3}, p);
  CHECK(f413({4, 0, 0}) == p.g_of({4, 1, 3}, 1));
  CHECK(f413({2, 1, 1}) == p.g_of({4, 1, 3}, 4));

  const auto f233 = phi({2, 3, 3}, p);
  CHECK(f233({1, 3, 0}) == p.g_of({2, 3, 3}, 2));
  CHECK(f233.total() == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(phi({0, 1, 7}, p), std::invalid_argument);
}

TEST_CASE("phi: literal table equals template and sums to 2") {
  for (std::uint64_t seed = 50; seed < 80; ++seed) {
    const auto p = testing::random_feasible(seed);
    for (const auto& t : enumerate(IndexSet::S8bar)) {
      const auto lit = phi(t, p);
      const auto tm = phi_from_template(t, p);
      for (const auto& abc : s4_triples())
        CHECK_MESSAGE(std::fabs(lit(abc) - tm(abc)) < 1e-12, t.label() << " at " << abc.label());
      CHECK(std::fabs(lit.total() - 2.0) < 1e-9);
    }
  }
}
