#include "cw4/marginals.hpp"

#include <cmath>
#include <map>

#include "cw4/errors.hpp"

namespace cw4 {

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

namespace {

constexpr SlotForm k(double c) { return SlotForm{c, {}}; }
constexpr SlotForm g(int slot) {
  SlotForm f;
  f.coef[slot - 1] = 1.0;
  return f;
}
constexpr SlotForm operator+(SlotForm a, const SlotForm& b) {
  a.constant += b.constant;
  for (int l = 0; l < kMaxSlots; ++l) a.coef[l] += b.coef[l];
  return a;
}
constexpr SlotForm operator*(double s, SlotForm a) {
  a.constant *= s;
  for (auto& c : a.coef) c *= s;
  return a;
}
constexpr SlotForm operator/(SlotForm a, double s) { return (1.0 / s) * a; }

using Row = std::array<SlotForm, 5>;

struct ClosedForm {
  TripleIndex component;
  Row a, b, c;
};

const std::vector<ClosedForm>& closed_forms() {
  const SlotForm O{}, one = k(1), h = k(0.5);
  const auto g1 = g(1), g2 = g(2), g3 = g(3), g4 = g(4);
  static const std::vector<ClosedForm> table = {
      {{0, 0, 8}, {one, O, O, O, O}, {one, O, O, O, O}, {O, O, O, O, one}},
      {{0, 1, 7}, {one, O, O, O, O}, {h, h, O, O, O}, {O, O, O, h, h}},
      {{0, 2, 6}, {one, O, O, O, O}, {g1 / 2, g2, g1 / 2, O, O}, {O, O, g1 / 2, g2, g1 / 2}},
      {{0, 3, 5},
       {one, O, O, O, O},
       {g1 / 2, g2 / 2, g2 / 2, g1 / 2, O},
       {O, g1 / 2, g2 / 2, g2 / 2, g1 / 2}},
      {{0, 4, 4},
       {one, O, O, O, O},
       {g1 / 2, g2 / 2, g3, g2 / 2, g1 / 2},
       {g1 / 2, g2 / 2, g3, g2 / 2, g1 / 2}},
      {{1, 1, 6}, {h, h, O, O, O}, {h, h, O, O, O}, {O, O, g1 / 2, g2, g1 / 2}},
      {{1, 2, 5},
       {h, h, O, O, O},
       {(g1 + g3) / 2, g2, (g1 + g3) / 2, O, O},
       {O, g1 / 2, (g2 + g3) / 2, (g2 + g3) / 2, g1 / 2}},
      {{1, 3, 4},
       {h, h, O, O, O},
       {(g1 + g3) / 2, (g2 + g4) / 2, (g2 + g4) / 2, (g1 + g3) / 2, O},
       {g1 / 2, (g2 + g3) / 2, g4, (g2 + g3) / 2, g1 / 2}},
      {{2, 2, 4},
       {(g1 + g2 + g3) / 2, g2 + g4, (g1 + g2 + g3) / 2, O, O},
       {(g1 + g2 + g3) / 2, g2 + g4, (g1 + g2 + g3) / 2, O, O},
       {g1 / 2, g2, g3 + g4, g2, g1 / 2}},
      {{2, 3, 3},
       {g1 + g3 / 2, g2 + g4, g1 + g3 / 2, O, O},
       {(g1 + g2) / 2, (g1 + g3 + g4) / 2, (g1 + g3 + g4) / 2, (g1 + g2) / 2, O},
       {(g1 + g2) / 2, (g1 + g3 + g4) / 2, (g1 + g3 + g4) / 2, (g1 + g2) / 2, O}},
  };
  return table;
}

// Factor weights of the five inner canonical components, columns in the order
// 004 040 400 013 103 031 130 301 310 022 202 220 112 121 211.
struct PhiForm {
  TripleIndex component;
  std::array<SlotForm, kS4Size> cols;
};

constexpr std::array<TripleIndex, kS4Size> kPhiColumns = {{{0, 0, 4}, {0, 4, 0}, {4, 0, 0},
                                                           {0, 1, 3}, {1, 0, 3}, {0, 3, 1},
                                                           {1, 3, 0}, {3, 0, 1}, {3, 1, 0},
                                                           {0, 2, 2}, {2, 0, 2}, {2, 2, 0},
                                                           {1, 1, 2}, {1, 2, 1}, {2, 1, 1}}};

const std::vector<PhiForm>& phi_closed_forms() {
  const SlotForm O{};
  const auto g1 = g(1), g2 = g(2), g3 = g(3), g4 = g(4);
  static const std::vector<PhiForm> table = {
      {{1, 1, 6}, {g1, O, O, g2, g2, O, O, O, O, O, O, O, g1, O, O}},
      {{1, 2, 5}, {g1, O, O, g2, g3, O, O, O, O, g3, O, O, g2, g1, O}},
      {{1, 3, 4}, {g1, O, O, g2, g3, g3, g1, O, O, g4, O, O, g4, g2, O}},
      {{2, 2, 4}, {g1, O, O, g2, g2, O, O, O, O, g3, g3, g1, 2 * g4, g2, g2}},
      {{2, 3, 3}, {O, O, O, g1, g2, g1, g2, O, O, g3, g1, g1, g4, g4, g3}},
  };
  return table;
}

struct FormsPerTriple {
  std::array<std::array<Row, 3>, kS8Size> marginals;
  std::array<std::array<SlotForm, kS4Size>, kS8Size> phi;
  std::array<std::array<double, kMaxSlots>, kS8Size> multiplicity;
};

const FormsPerTriple& forms() {
  static const FormsPerTriple all = [] {
    std::map<TripleIndex, const ClosedForm*> marg;
    for (const auto& c : closed_forms()) marg[c.component] = &c;
    std::map<TripleIndex, const PhiForm*> ph;
    for (const auto& f : phi_closed_forms()) ph[f.component] = &f;

    FormsPerTriple out{};
    for (const auto& t : s8_triples()) {
      const int n = s8_index(t);
      const auto perm = RolePermutation::sorting(t);
      const auto canon = perm.to_canonical(t);
      const ClosedForm& cf = *marg.at(canon);
      const std::array<const Row*, 3> rows = {&cf.a, &cf.b, &cf.c};
      for (int m = 0; m < 3; ++m) out.marginals[n][perm.source(m)] = *rows[m];
      if (in_s8bar(t)) {
        const PhiForm& pf = *ph.at(canon);
        for (int col = 0; col < kS4Size; ++col)
          out.phi[n][s4_index(perm.from_canonical(kPhiColumns[col]))] = pf.cols[col];
      }
      const auto& tmpl = subcomponent_template(t);
      for (int l = 1; l <= tmpl.slot_count(); ++l) out.multiplicity[n][l - 1] = tmpl.slot_multiplicity(l);
    }
    return out;
  }();
  return all;
}

std::array<double, 5> eval_row(const Row& row, const std::array<double, kMaxSlots>& gv) {
  std::array<double, 5> out{};
  for (int c = 0; c < 5; ++c) out[c] = row[c](gv);
  return out;
}

std::string d2_name(const TripleIndex& t) {
  const auto c = canonicalize_yz(t);
  return "D2[" + std::to_string(c.i) + "," + std::to_string(c.j) + "," + std::to_string(c.k) + "]";
}

void require_d2(const TripleIndex& t, const std::array<double, kMaxSlots>& gv, double tol) {
  const double r = d2_residual(t, gv);
  if (!(std::fabs(r) <= tol))
    throw PreconditionError(d2_name(t), "slot weights of " + t.label() + " are off by " + std::to_string(r));
}

std::array<double, kMaxSlots> g_for(const TripleIndex& t, const ParameterSet& p) {
  return p.g[canonical_index(t)];
}

}  // namespace

double d2_residual(const TripleIndex& t, const std::array<double, kMaxSlots>& gv) {
  const auto& mult = forms().multiplicity[s8_index(t)];
  double s = 0.0;
  for (int l = 0; l < kMaxSlots; ++l) s += mult[l] * gv[l];
  return s - 1.0;
}

const std::array<SlotForm, 5>& marginal_forms(const TripleIndex& t, int role) {
  return forms().marginals[s8_index(t)].at(role);
}

const std::array<SlotForm, kS4Size>& phi_forms(const TripleIndex& t) {
  if (!in_s8bar(t)) throw std::invalid_argument("triple " + t.label() + " is not in S8bar");
  return forms().phi[s8_index(t)];
}

GlobalMarginals global_marginals(const ExpandedParams& e, double c1_tolerance) {
  std::array<std::array<double, 9>, 3> m{};
  for (const auto& t : s8_triples()) {
    const double a = e.alpha_of(t);
    for (int r = 0; r < 3; ++r) m[r][t[r]] += a;
  }
  double total = 0.0;
  for (double v : m[0]) total += v;
  if (!(std::fabs(total - 1.0) <= c1_tolerance))
    throw PreconditionError("C1", "component weights sum to " + std::to_string(total));
  return {Distribution<9>(m[0], c1_tolerance), Distribution<9>(m[1], c1_tolerance),
          Distribution<9>(m[2], c1_tolerance)};
}

GlobalMarginals global_marginals(const ParameterSet& p, double c1_tolerance) {
  return global_marginals(expand(p), c1_tolerance);
}

ComponentMarginals component_marginals(const TripleIndex& t, const ExpandedParams& e,
                                       double d2_tolerance) {
  if (!in_s8(t)) throw std::invalid_argument("triple " + t.label() + " is not in S8");
  const auto& gv = e.g_of(t);
  require_d2(t, gv, d2_tolerance);
  const auto& rows = forms().marginals[s8_index(t)];
  return {Distribution<5>(eval_row(rows[0], gv), d2_tolerance),
          Distribution<5>(eval_row(rows[1], gv), d2_tolerance),
          Distribution<5>(eval_row(rows[2], gv), d2_tolerance)};
}

ComponentMarginals component_marginals(const TripleIndex& t, const ParameterSet& p,
                                       double d2_tolerance) {
  return component_marginals(t, expand(p), d2_tolerance);
}

ComponentMarginals component_marginals_from_template(const TripleIndex& t, const ParameterSet& p,
                                                     double d2_tolerance) {
  const auto& tmpl = subcomponent_template(t);
  const auto gv = g_for(t, p);
  require_d2(t, gv, d2_tolerance);
  std::array<std::array<double, 5>, 3> m{};
  for (const auto& e : tmpl.entries)
    for (int r = 0; r < 3; ++r) m[r][e.left[r]] += e.share * gv[e.slot - 1];
  return {Distribution<5>(m[0], d2_tolerance), Distribution<5>(m[1], d2_tolerance),
          Distribution<5>(m[2], d2_tolerance)};
}

double PhiTable::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

PhiTable phi(const TripleIndex& t, const ExpandedParams& e) {
  const auto& cols = phi_forms(t);
  const auto& gv = e.g_of(t);
  PhiTable out{t, {}};
  for (int n = 0; n < kS4Size; ++n) out.weights[n] = cols[n](gv);
  return out;
}

PhiTable phi(const TripleIndex& t, const ParameterSet& p) { return phi(t, expand(p)); }

PhiTable phi_from_template(const TripleIndex& t, const ParameterSet& p) {
  if (!in_s8bar(t)) throw std::invalid_argument("triple " + t.label() + " is not in S8bar");
  const auto gv = g_for(t, p);
  PhiTable out{t, {}};
  for (const auto& e : subcomponent_template(t).entries) {
    const double w = e.share * gv[e.slot - 1];
    out.weights[s4_index(e.left)] += w;
    out.weights[s4_index(e.right)] += w;
  }
  return out;
}

}  // namespace cw4
