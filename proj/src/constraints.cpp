#include "cw4/constraints.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "cw4/errors.hpp"
#include "cw4/marginals.hpp"
#include "cw4/summation.hpp"

namespace cw4 {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::legacy: return "legacy";
    case Mode::loss_outer: return "loss_outer";
    case Mode::loss_recursive: return "loss_recursive";
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::legacy, Mode::loss_outer, Mode::loss_recursive})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::linear: return "linear";
    case ConstraintClass::nonlinear: return "nonlinear";
    case ConstraintClass::theorem_validity: return "theorem-validity";
    case ConstraintClass::structural: return "structural";
  }
  return "?";
}

bool ConstraintReport::all_satisfied() const {
  for (const auto& e : entries)
    if (!e.satisfied) return false;
  return true;
}

std::vector<std::string> ConstraintReport::failing() const {
  std::vector<std::string> out;
  for (const auto& e : entries)
    if (!e.satisfied) out.push_back(e.name);
  return out;
}

const ConstraintEntry* ConstraintReport::find(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

int ConstraintReport::counted() const {
  int n = 0;
  for (const auto& e : entries)
    if (e.cls != ConstraintClass::structural) ++n;
  return n;
}

int ConstraintReport::nonlinear_count() const {
  int n = 0;
  for (const auto& e : entries)
    if (e.cls == ConstraintClass::nonlinear || e.cls == ConstraintClass::theorem_validity) ++n;
  return n;
}

TermSummary evaluate_terms(const ExpandedParams& e, const Tolerances& tol, std::optional<Mode> mode) {
  const auto g = global_marginals(e, tol.eq_linear);
  const auto v = value_breakdown(e, tol);
  TermSummary s;
  s.gamma = v.gamma_total;
  s.delta_x = v.delta_x;
  s.delta_y = v.delta_y;
  s.delta_z = v.delta_z;
  s.lambda_b = v.lambda_b;
  s.lambda_btilde = v.lambda_btilde;
  s.h_a = g.a.entropy();
  s.h_b = g.b.entropy();

  const bool want_outer = !mode || *mode != Mode::legacy;
  const bool want_components = !mode || *mode == Mode::loss_recursive;
  if (want_outer) {
    s.chi = outer_loss(e, tol).chi;
    s.has_outer_loss = true;
  }
  CompensatedSum ha, hb, chi, f112, f211;
  for (const auto& t : s8_triples()) {
    if (!in_s8bar(t)) continue;
    const double a = e.alpha_of(t);
    const auto m = component_marginals(t, e, tol.eq_linear);
    const auto f = phi(t, e);
    ha += a * m.a.entropy();
    hb += a * m.b.entropy();
    f112 += a * f({1, 1, 2});
    f211 += a * f({2, 1, 1});
    if (want_components) chi += a * component_loss(t, e, tol).chi;
  }
  s.sum_alpha_h_a = ha.value();
  s.sum_alpha_h_b = hb.value();
  s.sum_phi112 = f112.value();
  s.sum_phi211 = f211.value();
  if (want_components) {
    s.sum_alpha_chi = chi.value();
    s.has_component_loss = true;
  }
  s.error_bound = v.error_bound + ha.error_bound() + hb.error_bound() + chi.error_bound();
  return s;
}

TermSummary evaluate_terms(const ParameterSet& p, const Tolerances& tol, std::optional<Mode> mode) {
  return evaluate_terms(expand(p), tol, mode);
}

InequalityResiduals inequality_residuals(const TermSummary& t, Mode mode, double kappa) {
  const bool c4_prime = mode != Mode::legacy;
  const bool d3_prime = mode == Mode::loss_recursive;
  if (c4_prime && !t.has_outer_loss) throw std::invalid_argument("terms lack the outer loss");
  if (d3_prime && !t.has_component_loss) throw std::invalid_argument("terms lack the component losses");
  InequalityResiduals r;
  r.c4 = t.h_a - (c4_prime ? t.chi : 0.0) - t.h_b;
  r.d3 = t.sum_alpha_h_a - (d3_prime ? t.sum_alpha_chi : 0.0) - t.sum_alpha_h_b;
  r.e1 = t.sum_phi211 * t.lambda_btilde - t.sum_phi112 * t.lambda_b;
  r.e2 = t.delta_z - kappa * t.delta_x;
  return r;
}

namespace {

std::vector<TripleIndex> parse_list(const char* s) {
  std::vector<TripleIndex> out;
  for (const char* c = s; *c;) {
    if (*c == ' ') {
      ++c;
      continue;
    }
    out.push_back({c[0] - '0', c[1] - '0', c[2] - '0'});
    c += 3;
  }
  return out;
}

}  // namespace

const std::vector<ProductEquality>& c3_equalities() {
  static const std::vector<ProductEquality> list = [] {
    const std::vector<std::pair<const char*, const char*>> text = {
        {"026 107 215", "017 125 206"},
        {"026 107 611", "017 116 602"},
        {"035 107 314", "017 134 305"},
        {"044 107 413", "017 134 404"},
        {"035 107 512", "017 125 503"},
        {"035 107 116 224", "017 125 134 206"},
        {"044 107 116 233", "017 134 134 206"},
        {"035 044 107 116 323", "017 026 134 134 305"},
        {"044 035 107 116 323", "017 026 134 134 305"},
        {"044 035 107 116 422", "017 026 134 125 404"},
    };
    std::vector<ProductEquality> out;
    for (const auto& [l, r] : text) out.push_back({parse_list(l), parse_list(r)});
    return out;
  }();
  return list;
}

ConstraintReport evaluate(const ParameterSet& p, Mode mode, const Tolerances& tol, const TermSummary& terms) {
  ConstraintReport rep;
  rep.mode = mode;
  rep.tolerances = tol;
  auto equality = [&](std::string name, ConstraintClass cls, double residual, double t) {
    rep.entries.push_back({std::move(name), ConstraintKind::equality, cls, residual, t, std::fabs(residual) <= t, true});
  };
  auto inequality = [&](std::string name, double residual) {
    rep.entries.push_back(
        {std::move(name), ConstraintKind::inequality, ConstraintClass::nonlinear, residual, tol.ineq, residual >= -tol.ineq, true});
  };
  auto skipped = [&](std::string name) {
    rep.entries.push_back({std::move(name), ConstraintKind::inequality, ConstraintClass::nonlinear,
                           std::numeric_limits<double>::quiet_NaN(), tol.ineq, false, false});
  };

  const auto e = expand(p);
  CompensatedSum mass;
  for (double a : e.alpha) mass += a;
  equality("C1", ConstraintClass::linear, mass.value() - 1.0, tol.eq_linear);
  rep.entries.push_back({"C2", ConstraintKind::equality, ConstraintClass::structural, 0.0, 0.0, true, true});

  auto log_alpha = [&](const TripleIndex& t) {
    const double a = e.alpha_of(t);
    return a > 0.0 ? std::log(a) : -std::numeric_limits<double>::infinity();
  };
  int n = 0;
  for (const auto& eq : c3_equalities()) {
    double l = 0.0, r = 0.0;
    for (const auto& t : eq.left) l += log_alpha(t);
    for (const auto& t : eq.right) r += log_alpha(t);
    double res = l - r;
    if (std::isnan(res)) res = std::numeric_limits<double>::infinity();
    equality(fmt::format("C3.{}", ++n), ConstraintClass::theorem_validity, res, tol.eq_log);
  }

  const bool c4_prime = mode != Mode::legacy;
  const bool d3_prime = mode == Mode::loss_recursive;
  const std::string c4_name = c4_prime ? "C4'" : "C4";
  const std::string d3_name = d3_prime ? "D3'" : "D3";
  const bool evaluated = !std::isnan(terms.h_a);
  InequalityResiduals ineq;
  if (evaluated) ineq = inequality_residuals(terms, mode, p.kappa);
  if (evaluated) {
    inequality(c4_name, ineq.c4);
  } else {
    skipped(c4_name);
  }

  rep.entries.push_back({"D1", ConstraintKind::equality, ConstraintClass::structural, 0.0, 0.0, true, true});
  for (const auto& t : canonical_triples())
    equality(fmt::format("D2[{},{},{}]", t.i, t.j, t.k), ConstraintClass::linear,
             d2_residual(t, p.g[canonical_index(t)]), tol.eq_linear);

  if (evaluated)
    inequality(d3_name, ineq.d3);
  else
    skipped(d3_name);

  n = 0;
  for (const TripleIndex t : {TripleIndex{2, 3, 3}, TripleIndex{3, 2, 3}}) {
    const auto& g = p.g[canonical_index(t)];
    double res = std::log(g[2]) + 0.5 * std::log(g[1]) - std::log(g[0]) - 0.5 * std::log(g[3]);
    if (!std::isfinite(res)) res = std::numeric_limits<double>::infinity();
    equality(fmt::format("D4.{}", ++n), ConstraintClass::theorem_validity, res, tol.eq_log);
  }

  if (evaluated) {
    inequality("E1", ineq.e1);
    inequality("E2", ineq.e2);
  } else {
    skipped("E1");
    skipped("E2");
  }
  return rep;
}

ConstraintReport evaluate(const ParameterSet& p, Mode mode, const Tolerances& tol) {
  TermSummary terms;
  std::string note;
  try {
    terms = evaluate_terms(p, tol, mode);
  } catch (const std::domain_error& err) {
    terms.h_a = std::numeric_limits<double>::quiet_NaN();
    note = err.what();
  }
  auto rep = evaluate(p, mode, tol, terms);
  rep.note = note;
  return rep;
}

}  // namespace cw4
