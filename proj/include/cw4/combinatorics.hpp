#pragma once

#include <array>
#include <compare>
#include <string>
#include <vector>

namespace cw4 {

// An index triple (i, j, k) labelling a component (sum 8) or a factor of the
// second tensor power (sum 4). Roles: 0 = x, 1 = y, 2 = z.
struct TripleIndex {
  int i = 0;
  int j = 0;
  int k = 0;

  constexpr int sum() const { return i + j + k; }
  constexpr int operator[](int role) const { return role == 0 ? i : (role == 1 ? j : k); }
  constexpr int min() const { return i < j ? (i < k ? i : k) : (j < k ? j : k); }
  constexpr TripleIndex operator+(const TripleIndex& o) const { return {i + o.i, j + o.j, k + o.k}; }
  constexpr TripleIndex operator-(const TripleIndex& o) const { return {i - o.i, j - o.j, k - o.k}; }
  constexpr auto operator<=>(const TripleIndex&) const = default;

  // Compact label, e.g. "017".
  std::string label() const;
};

enum class IndexSet { S4, S8, S8bar, S8prec, S8bar_prec };

constexpr int kS4Size = 15;
constexpr int kS8Size = 45;
constexpr int kS8barSize = 21;
constexpr int kCanonicalSize = 25;  // triples of S8 with j <= k
constexpr int kMaxSlots = 4;

// Lexicographically ordered members of the requested set.
std::vector<TripleIndex> enumerate(IndexSet set);

constexpr bool in_s4(const TripleIndex& t) {
  return t.i >= 0 && t.j >= 0 && t.k >= 0 && t.sum() == 4;
}
constexpr bool in_s8(const TripleIndex& t) {
  return t.i >= 0 && t.j >= 0 && t.k >= 0 && t.sum() == 8;
}
constexpr bool in_s8bar(const TripleIndex& t) { return in_s8(t) && t.min() > 0; }

// (i, min(j,k), max(j,k)): representative under the y <-> z symmetry.
constexpr TripleIndex canonicalize_yz(const TripleIndex& t) {
  return t.j <= t.k ? t : TripleIndex{t.i, t.k, t.j};
}
constexpr TripleIndex swap_yz(const TripleIndex& t) { return {t.i, t.k, t.j}; }

// Dense positions (lexicographic order) used for table storage.
int s4_index(const TripleIndex& t);
int s8_index(const TripleIndex& t);
int canonical_index(const TripleIndex& t);  // position of canonicalize_yz(t) among the 25
const std::array<TripleIndex, kS4Size>& s4_triples();
const std::array<TripleIndex, kS8Size>& s8_triples();
const std::array<TripleIndex, kCanonicalSize>& canonical_triples();

// Position permutation relating a component label to its sorted form in S8^≺.
// Canonical role m corresponds to role source[m] of the original triple; ties
// are broken by a stable sort.
class RolePermutation {
 public:
  constexpr RolePermutation() = default;
  explicit constexpr RolePermutation(std::array<int, 3> source) : source_(source) {}

  static RolePermutation sorting(const TripleIndex& t);

  // Role of the original triple that plays canonical role m.
  constexpr int source(int m) const { return source_[m]; }
  TripleIndex to_canonical(const TripleIndex& x) const;
  TripleIndex from_canonical(const TripleIndex& x) const;
  bool is_identity() const { return source_ == std::array<int, 3>{0, 1, 2}; }

 private:
  std::array<int, 3> source_{0, 1, 2};
};

struct TemplateEntry {
  TripleIndex left;   // factor T_abc
  TripleIndex right;  // factor T_a'b'c'
  int slot = 1;       // 1-based g-slot
  double share = 1.0; // 1 or 1/2
};

// Subcomponent decomposition of one component with its g-slot assignment.
struct SubcomponentTemplate {
  TripleIndex component;
  std::vector<TemplateEntry> entries;

  int slot_count() const;
  // Sum of shares carried by a slot; the D2 multiplicity (1 or 2).
  double slot_multiplicity(int slot) const;
};

// Template of any t in S8; throws std::invalid_argument otherwise.
const SubcomponentTemplate& subcomponent_template(const TripleIndex& t);

int slot_count(const TripleIndex& t);

}  // namespace cw4
