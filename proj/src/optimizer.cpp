#include "cw4/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "cw4/errors.hpp"

namespace cw4 {

std::string_view to_string(Strategy s) {
  return s == Strategy::penalized_direct ? "penalized-direct" : "bisection-feasibility";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "penalized-direct") return Strategy::penalized_direct;
  if (name == "bisection-feasibility") return Strategy::bisection_feasibility;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (starts < 1) throw std::invalid_argument("starts must be at least 1");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (!(lower_bound > 0.0 && lower_bound < 1.0)) throw std::invalid_argument("lower_bound must lie in (0, 1)");
  if (q < 1) throw std::invalid_argument("q must be positive");
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
  if (!(start_noise >= 0.0)) throw std::invalid_argument("start_noise must be non-negative");
  if (threads < 0) throw std::invalid_argument("threads must be non-negative");
}

int thread_limit() {
  if (const char* env = std::getenv("CW4_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n >= 1) return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Encoding

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) {
  p = std::clamp(p, 1e-15, 1 - 1e-15);
  return std::log(p / (1 - p));
}

}  // namespace

Encoding::Encoding(double lower_bound) : lb_(lower_bound) {
  int offset = 18;
  g_offset_ = offset;
  const auto& canon = canonical_triples();
  for (int c = 0; c < kCanonicalSize; ++c) {
    const auto& tmpl = subcomponent_template(canon[c]);
    Group gr;
    gr.canonical = c;
    gr.slots = tmpl.slot_count();
    for (int l = 1; l <= gr.slots; ++l) gr.mult.push_back(tmpl.slot_multiplicity(l));
    gr.d4 = canonical_index({2, 3, 3}) == c || canonical_index({3, 2, 3}) == c;
    gr.offset = offset;
    gr.free = gr.slots == 1 ? 0 : (gr.d4 ? 3 : gr.slots);
    offset += gr.free;
    groups_.push_back(gr);
  }
  b_offset_ = offset;
  size_ = offset + 2;
}

std::vector<double> Encoding::encode(const ParameterSet& p) const {
  std::vector<double> x(size_, 0.0);
  const auto e = expand(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(kS8Size, 18);
  Eigen::VectorXd y(kS8Size);
  for (const auto& t : s8_triples()) {
    const int r = s8_index(t);
    m(r, t.i) += 1;
    m(r, 9 + t.j) += 1;
    m(r, 9 + t.k) += 1;
    y(r) = std::log(std::max(e.alpha_of(t), lb_));
  }
  const Eigen::VectorXd w = m.completeOrthogonalDecomposition().solve(y);
  for (int n = 0; n < 18; ++n) x[n] = w(n);

  for (const auto& gr : groups_) {
    const auto& g = p.g[gr.canonical];
    auto lg = [&](int slot) { return std::log(std::max(g[slot], lb_)); };
    if (gr.free == 0) continue;
    if (gr.d4) {
      x[gr.offset] = lg(0);
      x[gr.offset + 1] = lg(1);
      x[gr.offset + 2] = lg(3);
    } else {
      for (int l = 0; l < gr.slots; ++l) x[gr.offset + l] = lg(l);
    }
  }
  x[b_offset_] = logit((p.b - lb_) / (1 - lb_));
  x[b_offset_ + 1] = logit((p.btilde - lb_) / (1 - lb_));
  return x;
}

ParameterSet Encoding::decode(const std::vector<double>& x, const ParameterSet& shape) const {
  ParameterSet p;
  p.q = shape.q;
  p.kappa = shape.kappa;

  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : s8_triples()) top = std::max(top, x[t.i] + x[9 + t.j] + x[9 + t.k]);
  double z = 0.0;
  for (const auto& t : s8_triples()) z += std::exp(x[t.i] + x[9 + t.j] + x[9 + t.k] - top);
  const auto& canon = canonical_triples();
  for (int c = 0; c < kCanonicalSize; ++c) {
    const auto& t = canon[c];
    p.alpha[c] = std::exp(x[t.i] + x[9 + t.j] + x[9 + t.k] - top) / z;
  }

  for (const auto& gr : groups_) {
    auto& g = p.g[gr.canonical];
    if (gr.free == 0) {
      g[0] = 1.0 / gr.mult[0];
      continue;
    }
    std::array<double, kMaxSlots> w{};
    if (gr.d4) {
      // Work relative to the largest exponent; the tie g3 = g1 sqrt(g4/g2) is homogeneous.
      const double m = std::max({x[gr.offset], x[gr.offset + 1], x[gr.offset + 2]});
      w[0] = std::exp(x[gr.offset] - m);
      w[1] = std::exp(x[gr.offset + 1] - m);
      w[3] = std::exp(x[gr.offset + 2] - m);
      w[2] = std::exp(x[gr.offset] - m + 0.5 * (x[gr.offset + 2] - x[gr.offset + 1]));
    } else {
      double m = -std::numeric_limits<double>::infinity();
      for (int l = 0; l < gr.slots; ++l) m = std::max(m, x[gr.offset + l]);
      for (int l = 0; l < gr.slots; ++l) w[l] = std::exp(x[gr.offset + l] - m);
    }
    double s = 0.0;
    for (int l = 0; l < gr.slots; ++l) s += gr.mult[l] * w[l];
    for (int l = 0; l < gr.slots; ++l) g[l] = w[l] / s;
  }
  p.b = lb_ + (1 - lb_) * sigmoid(x[b_offset_]);
  p.btilde = lb_ + (1 - lb_) * sigmoid(x[b_offset_ + 1]);
  return p;
}

std::vector<Encoding::Named> Encoding::floored_values(const ParameterSet& p) const {
  std::vector<Named> out;
  const auto& canon = canonical_triples();
  for (int c = 0; c < kCanonicalSize; ++c) {
    const auto& t = canon[c];
    out.push_back({fmt::format("alpha[{},{},{}]", t.i, t.j, t.k), p.alpha[c]});
  }
  for (const auto& gr : groups_) {
    if (gr.free == 0) continue;
    const auto& t = canon[gr.canonical];
    for (int l = 0; l < gr.slots; ++l)
      out.push_back({fmt::format("g[{},{},{},{}]", t.i, t.j, t.k, l + 1), p.g[gr.canonical][l]});
  }
  out.push_back({"b", p.b});
  out.push_back({"btilde", p.btilde});
  return out;
}

// ---------------------------------------------------------------------------
// Certification helpers

double certified_rho(const ParameterSet& p, Mode mode, const Tolerances& tol) {
  const double rho = implied_bound(p, mode, tol);
  double r = std::ceil((rho + 1e-13) * 1e10) / 1e10;
  while (!certify(p, mode, r, {tol, 0.0}).pass) r += 1e-10;
  return r;
}

namespace {

double infeasibility_of(const ConstraintReport& r) {
  double worst = 0.0;
  for (const auto& e : r.entries) {
    if (e.satisfied) continue;
    if (!e.evaluated || !std::isfinite(e.residual)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, e.kind == ConstraintKind::equality ? std::fabs(e.residual) - e.tolerance
                                                              : -e.residual - e.tolerance);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Problem: objective and inequality residuals in the free variables.

struct Point {
  bool ok = false;
  double rho = std::numeric_limits<double>::infinity();
  std::vector<double> c;               // weighted residuals, >= 0 wanted
  TermSummary terms;
};

class Problem {
 public:
  Problem(const SolverConfig& cfg, const Encoding& enc) : cfg_(cfg), enc_(enc) {
    shape_.q = cfg.q;
    shape_.kappa = cfg.kappa;
  }

  ParameterSet decode(const std::vector<double>& x) const { return enc_.decode(x, shape_); }

  // Constraint residuals c(x) >= 0 and the implied rho.
  Point evaluate(const std::vector<double>& x) const {
    Point pt;
    const auto p = decode(x);
    try {
      pt.terms = evaluate_terms(p, cfg_.tolerances, cfg_.mode);
    } catch (const std::exception&) {
      return pt;
    }
    const auto& t = pt.terms;
    if (!(t.delta_x > 0.0) || !std::isfinite(t.gamma)) return pt;
    pt.rho = (4 * std::log2(cfg_.q + 2.0) - t.gamma - t.h_b) / t.delta_x;
    const auto r = inequality_residuals(t, cfg_.mode, cfg_.kappa);
    const auto& w = cfg_.weights;
    const double d = cfg_.safety_margin;
    pt.c = {w.c4 * (r.c4 - d), w.d3 * (r.d3 - d), w.e1 * (r.e1 - d), w.e2 * (r.e2 - d)};
    const double llb = std::log(cfg_.lower_bound);
    for (const auto& v : enc_.floored_values(p))
      if (v.name != "b" && v.name != "btilde") pt.c.push_back(w.floor * 1e-3 * (std::log(v.value) - llb));
    pt.ok = std::isfinite(pt.rho);
    for (double c : pt.c)
      if (!std::isfinite(c)) pt.ok = false;
    return pt;
  }

  double lhs_minus_rhs(const Point& pt, double rho) const {
    return pt.terms.gamma + pt.terms.h_b + rho * pt.terms.delta_x - 4 * std::log2(cfg_.q + 2.0);
  }

 private:
  const SolverConfig& cfg_;
  const Encoding& enc_;
  ParameterSet shape_;
};

// ---------------------------------------------------------------------------
// Quasi-Newton minimisation with central-difference gradients.

using Fn = std::function<double(const std::vector<double>&)>;

std::vector<double> fd_gradient(const Fn& f, std::vector<double> x) {
  std::vector<double> g(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double h = 1e-6 * std::max(1.0, std::fabs(x[n]));
    const double x0 = x[n];
    x[n] = x0 + h;
    const double fp = f(x);
    x[n] = x0 - h;
    const double fm = f(x);
    x[n] = x0;
    g[n] = (fp - fm) / (2 * h);
    if (!std::isfinite(g[n])) g[n] = 0.0;
  }
  return g;
}

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
};

MinimizeResult bfgs(const Fn& f, std::vector<double> x, int max_iters, double max_step = 2.0) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  double fx = f(x);
  auto g = fd_gradient(f, x);
  int it = 0, stalled = 0;
  bool scaled = false;
  for (; it < max_iters; ++it) {
    Eigen::Map<const Eigen::VectorXd> gv(g.data(), n);
    Eigen::VectorXd d = -hinv * gv;
    double slope = gv.dot(d);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      d = -gv;
      slope = gv.dot(d);
      if (!(slope < 0.0)) break;
    }
    const double len = d.norm();
    if (len > max_step) {
      d *= max_step / len;
      slope *= max_step / len;
    }
    double step = 1.0, fnew = fx;
    std::vector<double> xnew(n);
    bool accepted = false;
    for (int k = 0; k < 50; ++k) {
      for (int i = 0; i < n; ++i) xnew[i] = x[i] + step * d(i);
      fnew = f(xnew);
      if (std::isfinite(fnew) && fnew <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (hinv.isIdentity()) break;
      hinv.setIdentity();
      continue;
    }
    auto gnew = fd_gradient(f, xnew);
    Eigen::VectorXd s = step * d;
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(gnew.data(), n) - gv;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      if (!scaled) {
        hinv *= sy / y.squaredNorm();
        scaled = true;
      }
      const double r = 1.0 / sy;
      const Eigen::VectorXd hy = hinv * y;
      hinv += (r * r * (sy + y.dot(hy))) * (s * s.transpose()) - r * (hy * s.transpose() + s * hy.transpose());
    }
    stalled = (fx - fnew <= 1e-15 * (1.0 + std::fabs(fx))) ? stalled + 1 : 0;
    x = std::move(xnew);
    g = std::move(gnew);
    fx = fnew;
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::fabs(v));
    if (gmax < 1e-11 || stalled >= 5) {
      ++it;
      break;
    }
  }
  return {std::move(x), fx, it};
}

// ---------------------------------------------------------------------------

struct Candidate {
  bool feasible = false;
  double rho = std::numeric_limits<double>::infinity();
  double infeasibility = std::numeric_limits<double>::infinity();
  ParameterSet params;
};

// Keeps the best point seen: feasible beats infeasible, then lower certified
// rho, then lower infeasibility.
void consider(Candidate& best, const ParameterSet& p, const SolverConfig& cfg) {
  const auto rep = evaluate(p, cfg.mode, cfg.tolerances);
  if (rep.all_satisfied()) {
    double rho;
    try {
      rho = certified_rho(p, cfg.mode, cfg.tolerances);
    } catch (const std::exception&) {
      return;
    }
    if (!best.feasible || rho < best.rho) best = {true, rho, 0.0, p};
    return;
  }
  if (best.feasible) return;
  const double inf = infeasibility_of(rep);
  if (inf < best.infeasibility) best = {false, std::numeric_limits<double>::infinity(), inf, p};
}

class Logger {
 public:
  explicit Logger(const std::function<void(const std::string&)>& sink) : sink_(sink) {}
  void operator()(const std::string& line) {
    if (!sink_) return;
    std::lock_guard<std::mutex> lock(mu_);
    sink_(line);
  }

 private:
  const std::function<void(const std::string&)>& sink_;
  std::mutex mu_;
};

double max_violation(const std::vector<double>& c) {
  double v = 0.0;
  for (double x : c) v = std::max(v, -x);
  return v;
}

constexpr double kMaxPenalty = 1e12;

// Augmented Lagrangian on the inequalities, rho(x) as the objective.
Candidate run_penalized(const SolverConfig& cfg, const Problem& prob, std::vector<double> x, int start,
                        Logger& log, int& iterations) {
  Candidate best;
  consider(best, prob.decode(x), cfg);
  Point pt = prob.evaluate(x);
  std::vector<double> lambda(pt.c.empty() ? 4 + 100 : pt.c.size(), 0.0);
  double r = 100.0;
  double prev_violation = pt.ok ? max_violation(pt.c) : std::numeric_limits<double>::infinity();
  int budget = cfg.max_iters;
  while (budget > 0) {
    const Fn f = [&](const std::vector<double>& z) {
      const Point q = prob.evaluate(z);
      if (!q.ok) return std::numeric_limits<double>::infinity();
      double v = q.rho;
      for (std::size_t i = 0; i < q.c.size(); ++i) {
        const double t = std::max(0.0, lambda[i] - r * q.c[i]);
        v += (t * t - lambda[i] * lambda[i]) / (2 * r);
      }
      return v;
    };
    const auto res = bfgs(f, x, std::min(budget, 150));
    budget -= std::max(res.iterations, 1);
    iterations += res.iterations;
    x = res.x;
    pt = prob.evaluate(x);
    if (!pt.ok) break;
    for (std::size_t i = 0; i < pt.c.size(); ++i) lambda[i] = std::max(0.0, lambda[i] - r * pt.c[i]);
    const double viol = max_violation(pt.c);
    consider(best, prob.decode(x), cfg);
    log(fmt::format("start={} iter={} best_rho={:.9f} penalty={:.3e}", start, iterations,
                    best.feasible ? best.rho : pt.rho, viol));
    if (res.iterations == 0) {
      if (viol <= 0.0 || r >= kMaxPenalty) break;
      r = std::min(r * 10, kMaxPenalty);
    } else if (viol > 0.25 * prev_violation) {
      r = std::min(r * 10, kMaxPenalty);
    }
    prev_violation = viol;
  }
  return best;
}

// Bisection on rho; each probe minimises a pure hinge penalty.
Candidate run_bisection(const SolverConfig& cfg, const Problem& prob, std::vector<double> x, int start,
                        Logger& log, int& iterations) {
  Candidate best;
  consider(best, prob.decode(x), cfg);
  double lo = std::max(2.0, 1.0 + cfg.kappa);
  double hi = best.feasible ? best.rho : 2.0 + cfg.kappa + 1.0;
  const int probes = 24;
  const int per_probe = std::max(1, cfg.max_iters / probes);
  for (int k = 0; k < probes && hi - lo > 1e-7 && cfg.max_iters > 0; ++k) {
    const double mid = 0.5 * (lo + hi);
    const Fn f = [&](const std::vector<double>& z) {
      const Point q = prob.evaluate(z);
      if (!q.ok) return std::numeric_limits<double>::infinity();
      double v = 0.0;
      auto hinge = [&](double c) { return c < 0.0 ? c * c : 0.0; };
      for (double c : q.c) v += hinge(c);
      v += hinge(prob.lhs_minus_rhs(q, mid) - cfg.safety_margin);
      return 1e6 * v;
    };
    const auto res = bfgs(f, x, per_probe);
    iterations += res.iterations;
    const auto p = prob.decode(res.x);
    const auto rep = evaluate(p, cfg.mode, cfg.tolerances);
    bool ok = false;
    if (rep.all_satisfied()) {
      try {
        ok = certified_rho(p, cfg.mode, cfg.tolerances) <= mid + 1e-9;
      } catch (const std::exception&) {
      }
    }
    consider(best, p, cfg);
    if (ok) {
      hi = mid;
      x = res.x;
    } else {
      lo = mid;
    }
    log(fmt::format("start={} iter={} best_rho={:.9f} penalty={:.3e}", start, iterations,
                    best.feasible ? best.rho : mid, res.f));
  }
  return best;
}

std::vector<double> start_point(const SolverConfig& cfg, const Encoding& enc, const std::optional<ParameterSet>& warm,
                                int index) {
  std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(index), std::uint64_t{0x5eed}};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x;
  if (warm) {
    x = enc.encode(*warm);
    if (index > 0)
      for (auto& v : x) v += cfg.start_noise * normal(rng);
  } else {
    x.assign(enc.size(), 0.0);
    if (index > 0)
      for (auto& v : x) v = normal(rng);
  }
  return x;
}

}  // namespace

OptimizeResult optimize(const SolverConfig& cfg, const std::optional<ParameterSet>& warm_start) {
  cfg.validate();
  const Encoding enc(cfg.lower_bound);
  const Problem prob(cfg, enc);
  std::optional<ParameterSet> warm = warm_start;
  if (warm) {
    warm->q = cfg.q;
    warm->kappa = cfg.kappa;
  }

  std::vector<Candidate> found(cfg.starts);
  std::vector<StartOutcome> outcomes(cfg.starts);
  Logger log(cfg.log);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int s = next++; s < cfg.starts; s = next++) {
      int iterations = 0;
      Candidate c;
      if (s == 0 && warm) consider(c, *warm, cfg);
      const auto x = start_point(cfg, enc, warm, s);
      const auto run = cfg.strategy == Strategy::penalized_direct ? run_penalized(cfg, prob, x, s, log, iterations)
                                                                  : run_bisection(cfg, prob, x, s, log, iterations);
      if ((run.feasible && (!c.feasible || run.rho < c.rho)) ||
          (!c.feasible && !run.feasible && run.infeasibility < c.infeasibility))
        c = run;
      found[s] = c;
      outcomes[s] = {s, c.feasible, c.rho, c.infeasibility, iterations};
    }
  };
  const int nthreads = std::min(cfg.starts, cfg.threads > 0 ? cfg.threads : thread_limit());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  int best = 0;
  for (int s = 1; s < cfg.starts; ++s) {
    const auto& a = found[s];
    const auto& b = found[best];
    if (a.feasible != b.feasible) {
      if (a.feasible) best = s;
    } else if (a.feasible ? a.rho < b.rho : a.infeasibility < b.infeasibility) {
      best = s;
    }
  }

  OptimizeResult out;
  out.starts = outcomes;
  out.best_start = best;
  out.params = found[best].params;
  out.feasible = found[best].feasible;
  out.infeasibility = found[best].infeasibility;
  if (!found[best].feasible && !std::isfinite(out.infeasibility)) {
    // Nothing evaluable was found; report the start point itself.
    out.params = enc.decode(start_point(cfg, enc, warm, 0), out.params);
    out.params.q = cfg.q;
    out.params.kappa = cfg.kappa;
  }
  const double rho = out.feasible ? found[best].rho : std::numeric_limits<double>::infinity();
  out.certificate = certify(out.params, cfg.mode, out.feasible ? rho : 0.0, {cfg.tolerances, 0.0});
  if (out.feasible && !out.certificate.pass) {
    out.feasible = false;  // re-certification is authoritative
    out.infeasibility = infeasibility_of(out.certificate.report);
  }
  for (const auto& v : enc.floored_values(out.params))
    if (v.value <= cfg.lower_bound * (1 + 1e-3)) out.boundary_active.push_back(v.name);
  return out;
}

}  // namespace cw4
