#include <algorithm>
#include <set>

#include "cw4/combinatorics.hpp"
#include "doctest.h"

using namespace cw4;

namespace {

std::vector<TripleIndex> brute_force(int total, bool inner, bool sorted) {
  std::vector<TripleIndex> out;
  for (int i = 0; i <= total; ++i)
    for (int j = 0; j <= total; ++j)
      for (int k = 0; k <= total; ++k) {
        if (i + j + k != total) continue;
        if (inner && (i == 0 || j == 0 || k == 0)) continue;
        if (sorted && !(i <= j && j <= k)) continue;
        out.push_back({i, j, k});
      }
  return out;
}

std::vector<std::string> labels(const std::vector<TripleIndex>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.label());
  return out;
}

}  // namespace

TEST_CASE("index sets match brute-force enumeration") {
  CHECK(enumerate(IndexSet::S4) == brute_force(4, false, false));
  CHECK(enumerate(IndexSet::S8) == brute_force(8, false, false));
  CHECK(enumerate(IndexSet::S8bar) == brute_force(8, true, false));
  CHECK(enumerate(IndexSet::S8prec) == brute_force(8, false, true));
  CHECK(enumerate(IndexSet::S8bar_prec) == brute_force(8, true, true));

  CHECK(enumerate(IndexSet::S4).size() == 15);
  CHECK(enumerate(IndexSet::S8).size() == 45);
  CHECK(enumerate(IndexSet::S8bar).size() == 21);
  CHECK(enumerate(IndexSet::S8bar_prec).size() == 5);
  CHECK(labels(enumerate(IndexSet::S8prec)) ==
        std::vector<std::string>{"008", "017", "026", "035", "044", "116", "125", "134", "224", "233"});
}

TEST_CASE("dense indices are positions in the enumeration") {
  const auto s8 = enumerate(IndexSet::S8);
  for (std::size_t n = 0; n < s8.size(); ++n) CHECK(s8_index(s8[n]) == static_cast<int>(n));
  const auto s4 = enumerate(IndexSet::S4);
  for (std::size_t n = 0; n < s4.size(); ++n) CHECK(s4_index(s4[n]) == static_cast<int>(n));
  CHECK_THROWS_AS(s8_index({1, 1, 1}), std::invalid_argument);

  std::set<int> seen;
  for (const auto& t : s8) {
    const int c = canonical_index(t);
    CHECK(canonical_triples()[c] == canonicalize_yz(t));
    seen.insert(c);
  }
  CHECK(seen.size() == 25);
}

TEST_CASE("canonicalize_yz") {
  CHECK(canonicalize_yz({0, 7, 1}) == TripleIndex{0, 1, 7});
  CHECK(canonicalize_yz({1, 1, 6}) == TripleIndex{1, 1, 6});
  CHECK(canonicalize_yz({5, 0, 3}) == TripleIndex{5, 0, 3});
  for (const auto& t : enumerate(IndexSet::S8)) CHECK(canonicalize_yz(canonicalize_yz(t)) == canonicalize_yz(t));
}

TEST_CASE("sorting permutation is stable and invertible") {
  for (const auto& t : enumerate(IndexSet::S8)) {
    const auto p = RolePermutation::sorting(t);
    const auto c = p.to_canonical(t);
    CHECK(c.i <= c.j);
    CHECK(c.j <= c.k);
    CHECK(p.from_canonical(c) == t);
  }
  CHECK(RolePermutation::sorting({2, 3, 3}).is_identity());
  const auto p = RolePermutation::sorting({3, 2, 3});
  CHECK(p.source(0) == 1);
  CHECK(p.source(1) == 0);
  CHECK(p.source(2) == 2);
}

TEST_CASE("templates of listed examples") {
  const auto& t017 = subcomponent_template({0, 1, 7});
  REQUIRE(t017.entries.size() == 2);
  CHECK(t017.entries[0].left == TripleIndex{0, 0, 4});
  CHECK(t017.entries[0].right == TripleIndex{0, 1, 3});
  CHECK(t017.entries[1].left == TripleIndex{0, 1, 3});
  CHECK(t017.entries[1].right == TripleIndex{0, 0, 4});
  for (const auto& e : t017.entries) {
    CHECK(e.slot == 1);
    CHECK(e.share == 0.5);
  }

  const auto& t503 = subcomponent_template({5, 0, 3});
  REQUIRE(t503.entries.size() == 4);
  const std::vector<std::tuple<TripleIndex, TripleIndex, int>> want = {
      {{4, 0, 0}, {1, 0, 3}, 1}, {{1, 0, 3}, {4, 0, 0}, 1}, {{3, 0, 1}, {2, 0, 2}, 2}, {{2, 0, 2}, {3, 0, 1}, 2}};
  for (const auto& [l, r, s] : want) {
    const bool found = std::any_of(t503.entries.begin(), t503.entries.end(), [&](const TemplateEntry& e) {
      return e.left == l && e.right == r && e.slot == s && e.share == 0.5;
    });
    CHECK_MESSAGE(found, l.label() << "x" << r.label());
  }

  const auto& t233 = subcomponent_template({2, 3, 3});
  REQUIRE(t233.entries.size() == 10);
  std::vector<int> slots;
  for (const auto& e : t233.entries) {
    slots.push_back(e.slot);
    CHECK(e.share == 0.5);
  }
  CHECK(slots == std::vector<int>{1, 1, 2, 2, 3, 3, 1, 1, 4, 4});
  CHECK(t233.slot_multiplicity(1) == 2.0);
  CHECK(subcomponent_template({2, 2, 4}).slot_multiplicity(2) == 2.0);

  CHECK_THROWS_AS(subcomponent_template({1, 1, 1}), std::invalid_argument);
}

TEST_CASE("template invariants hold for every component") {
  int free_slots = 0;
  for (const auto& t : enumerate(IndexSet::S8)) {
    const auto& tmpl = subcomponent_template(t);
    CHECK(tmpl.component == t);
    for (const auto& e : tmpl.entries) {
      CHECK(in_s4(e.left));
      CHECK(in_s4(e.right));
      CHECK(e.left + e.right == t);
    }
    for (int l = 1; l <= tmpl.slot_count(); ++l) {
      const double m = tmpl.slot_multiplicity(l);
      CHECK((m == 1.0 || m == 2.0));
    }
    if (t.j <= t.k) free_slots += tmpl.slot_count();

    // y<->z swap of the template of t is the template of swap_yz(t), slot for slot.
    const auto& mirror = subcomponent_template(swap_yz(t));
    REQUIRE(mirror.entries.size() == tmpl.entries.size());
    for (const auto& e : tmpl.entries) {
      const bool found = std::any_of(mirror.entries.begin(), mirror.entries.end(), [&](const TemplateEntry& m) {
        return m.left == swap_yz(e.left) && m.right == swap_yz(e.right) && m.slot == e.slot && m.share == e.share;
      });
      CHECK_MESSAGE(found, t.label() << ": " << e.left.label() << "x" << e.right.label());
    }
  }
  CHECK(free_slots == 64);
}
