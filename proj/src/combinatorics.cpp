#include "cw4/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cw4 {

std::string TripleIndex::label() const {
  return std::to_string(i) + std::to_string(j) + std::to_string(k);
}

namespace {

template <std::size_t N>
std::array<TripleIndex, N> triples_with_sum(int total) {
  std::array<TripleIndex, N> out{};
  std::size_t n = 0;
  for (int i = 0; i <= total; ++i)
    for (int j = 0; i + j <= total; ++j) out[n++] = {i, j, total - i - j};
  return out;
}

// Subcomponent decomposition, one column per subcomponent: the x, y and z rows
// hold the two-digit pairs (left factor digit, right factor digit).
struct CanonicalColumns {
  TripleIndex component;
  const char* x;
  const char* y;
  const char* z;
  std::vector<std::pair<int, double>> slots;  // (slot, share) per column
};

const std::vector<CanonicalColumns>& canonical_columns() {
  constexpr double h = 0.5;
  static const std::vector<CanonicalColumns> table = {
      {{0, 0, 8}, "00", "00", "44", {{1, 1.0}}},
      {{0, 1, 7}, "00 00", "01 10", "43 34", {{1, h}, {1, h}}},
      {{0, 2, 6}, "00 00 00", "02 20 11", "42 24 33", {{1, h}, {1, h}, {2, 1.0}}},
      {{0, 3, 5}, "00 00 00 00", "03 30 12 21", "41 14 32 23", {{1, h}, {1, h}, {2, h}, {2, h}}},
      {{0, 4, 4},
       "00 00 00 00 00",
       "04 40 13 31 22",
       "40 04 31 13 22",
       {{1, h}, {1, h}, {2, h}, {2, h}, {3, 1.0}}},
      {{1, 1, 6}, "01 10 01 10", "01 10 10 01", "42 24 33 33", {{1, h}, {1, h}, {2, h}, {2, h}}},
      {{1, 2, 5},
       "01 10 01 10 10 01",
       "02 20 11 11 02 20",
       "41 14 32 23 32 23",
       {{1, h}, {1, h}, {2, h}, {2, h}, {3, h}, {3, h}}},
      {{1, 3, 4},
       "01 10 01 10 10 01 01 10",
       "03 30 12 21 03 30 21 12",
       "40 04 31 13 31 13 22 22",
       {{1, h}, {1, h}, {2, h}, {2, h}, {3, h}, {3, h}, {4, h}, {4, h}}},
      {{2, 2, 4},
       "02 20 02 20 11 11 02 20 11",
       "02 20 11 11 02 20 20 02 11",
       "40 04 31 13 31 13 22 22 22",
       {{1, h}, {1, h}, {2, h}, {2, h}, {2, h}, {2, h}, {3, h}, {3, h}, {4, 1.0}}},
      {{2, 3, 3},
       "02 20 11 11 02 20 20 02 11 11",
       "12 21 03 30 21 12 03 30 12 21",
       "30 03 30 03 21 12 21 12 21 12",
       {{1, h}, {1, h}, {2, h}, {2, h}, {3, h}, {3, h}, {1, h}, {1, h}, {4, h}, {4, h}}},
  };
  return table;
}

std::vector<std::string> split_words(const char* s) {
  std::istringstream in(s);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

SubcomponentTemplate build_canonical(const CanonicalColumns& c) {
  const auto xs = split_words(c.x);
  const auto ys = split_words(c.y);
  const auto zs = split_words(c.z);
  if (xs.size() != c.slots.size() || ys.size() != xs.size() || zs.size() != xs.size())
    throw std::logic_error("malformed subcomponent table for " + c.component.label());
  SubcomponentTemplate t{c.component, {}};
  for (std::size_t n = 0; n < xs.size(); ++n) {
    TemplateEntry e;
    e.left = {xs[n][0] - '0', ys[n][0] - '0', zs[n][0] - '0'};
    e.right = {xs[n][1] - '0', ys[n][1] - '0', zs[n][1] - '0'};
    e.slot = c.slots[n].first;
    e.share = c.slots[n].second;
    if (e.left + e.right != c.component)
      throw std::logic_error("subcomponent factors do not add up for " + c.component.label());
    t.entries.push_back(e);
  }
  return t;
}

std::array<SubcomponentTemplate, kS8Size> build_all_templates() {
  std::map<TripleIndex, SubcomponentTemplate> canonical;
  for (const auto& c : canonical_columns()) canonical.emplace(c.component, build_canonical(c));

  std::array<SubcomponentTemplate, kS8Size> all;
  for (const auto& t : s8_triples()) {
    const auto perm = RolePermutation::sorting(t);
    const auto& base = canonical.at(perm.to_canonical(t));
    SubcomponentTemplate out{t, {}};
    for (const auto& e : base.entries)
      out.entries.push_back({perm.from_canonical(e.left), perm.from_canonical(e.right), e.slot, e.share});
    all[s8_index(t)] = std::move(out);
  }
  return all;
}

}  // namespace

std::vector<TripleIndex> enumerate(IndexSet set) {
  std::vector<TripleIndex> out;
  if (set == IndexSet::S4) {
    const auto& s4 = s4_triples();
    return {s4.begin(), s4.end()};
  }
  for (const auto& t : s8_triples()) {
    const bool sorted = t.i <= t.j && t.j <= t.k;
    const bool inner = t.min() > 0;
    switch (set) {
      case IndexSet::S8: out.push_back(t); break;
      case IndexSet::S8bar: if (inner) out.push_back(t); break;
      case IndexSet::S8prec: if (sorted) out.push_back(t); break;
      case IndexSet::S8bar_prec: if (sorted && inner) out.push_back(t); break;
      case IndexSet::S4: break;
    }
  }
  return out;
}

const std::array<TripleIndex, kS4Size>& s4_triples() {
  static const auto table = triples_with_sum<kS4Size>(4);
  return table;
}

const std::array<TripleIndex, kS8Size>& s8_triples() {
  static const auto table = triples_with_sum<kS8Size>(8);
  return table;
}

const std::array<TripleIndex, kCanonicalSize>& canonical_triples() {
  static const auto table = [] {
    std::array<TripleIndex, kCanonicalSize> out{};
    std::size_t n = 0;
    for (const auto& t : s8_triples())
      if (t.j <= t.k) out[n++] = t;
    return out;
  }();
  return table;
}

int s4_index(const TripleIndex& t) {
  if (!in_s4(t)) throw std::invalid_argument("triple " + t.label() + " is not in S4");
  // Rows i = 0..4 hold 5, 4, 3, 2, 1 triples.
  int offset = 0;
  for (int r = 0; r < t.i; ++r) offset += 5 - r;
  return offset + t.j;
}

int s8_index(const TripleIndex& t) {
  if (!in_s8(t)) throw std::invalid_argument("triple " + t.label() + " is not in S8");
  int offset = 0;
  for (int r = 0; r < t.i; ++r) offset += 9 - r;
  return offset + t.j;
}

int canonical_index(const TripleIndex& t) {
  static const auto lookup = [] {
    std::array<int, kS8Size> out{};
    for (const auto& u : s8_triples()) {
      const auto& c = canonical_triples();
      const auto it = std::find(c.begin(), c.end(), canonicalize_yz(u));
      out[s8_index(u)] = static_cast<int>(it - c.begin());
    }
    return out;
  }();
  return lookup[s8_index(t)];
}

RolePermutation RolePermutation::sorting(const TripleIndex& t) {
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return t[a] < t[b]; });
  return RolePermutation(order);
}

TripleIndex RolePermutation::to_canonical(const TripleIndex& x) const {
  return {x[source_[0]], x[source_[1]], x[source_[2]]};
}

TripleIndex RolePermutation::from_canonical(const TripleIndex& x) const {
  std::array<int, 3> out{};
  for (int m = 0; m < 3; ++m) out[source_[m]] = x[m];
  return {out[0], out[1], out[2]};
}

int SubcomponentTemplate::slot_count() const {
  int n = 0;
  for (const auto& e : entries) n = std::max(n, e.slot);
  return n;
}

double SubcomponentTemplate::slot_multiplicity(int slot) const {
  double m = 0.0;
  for (const auto& e : entries)
    if (e.slot == slot) m += e.share;
  return m;
}

const SubcomponentTemplate& subcomponent_template(const TripleIndex& t) {
  static const auto all = build_all_templates();
  if (!in_s8(t)) throw std::invalid_argument("triple " + t.label() + " is not in S8");
  return all[s8_index(t)];
}

int slot_count(const TripleIndex& t) { return subcomponent_template(t).slot_count(); }

}  // namespace cw4
