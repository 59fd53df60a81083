// cw4: verify, bound, optimize and sweep certificates for omega(kappa).

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cw4/certifier.hpp"
#include "cw4/errors.hpp"
#include "cw4/optimizer.hpp"
#include "cw4/params.hpp"

namespace fs = std::filesystem;
using namespace cw4;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Mode mode_arg(const std::string& s) {
  try {
    return parse_mode(s);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

ParameterSet load(const std::string& path, std::optional<double> kappa) {
  auto p = read_parameter_file(path);
  if (kappa) p.kappa = *kappa;
  return p;
}

struct VerifyArgs {
  std::string file;
  double rho = 0.0;
  std::optional<double> kappa;
  std::string mode = "legacy";
  double tol_eq = Tolerances{}.eq_linear;
  double tol_log = Tolerances{}.eq_log;
  double tol_ineq = Tolerances{}.ineq;
  bool kv = false;
};

int run_verify(const VerifyArgs& a) {
  const auto p = load(a.file, a.kappa);
  Tolerances tol;
  tol.eq_linear = a.tol_eq;
  tol.eq_log = a.tol_log;
  tol.ineq = a.tol_ineq;
  const auto c = certify(p, mode_arg(a.mode), a.rho, {tol, 0.0});
  std::cout << (a.kv ? format_key_values(c) : format_report(c));
  return c.pass ? kPass : kFail;
}

struct BoundArgs {
  std::string file;
  std::optional<double> kappa;
  std::string mode = "legacy";
};

int run_bound(const BoundArgs& a) {
  const auto p = load(a.file, a.kappa);
  const Mode mode = mode_arg(a.mode);
  try {
    const double implied = implied_bound(p, mode);
    const auto c = certify(p, mode, certified_rho(p, mode));
    const auto& t = c.terms;
    std::cout << fmt::format("implied rho   {:.7f}\n", implied);
    std::cout << fmt::format("Gamma         {:.8f}\n", t.gamma);
    std::cout << fmt::format("H(A)          {:.8f}\n", t.h_a);
    std::cout << fmt::format("H(B)          {:.8f}\n", t.h_b);
    std::cout << fmt::format("chi           {:.8f}\n", t.chi);
    std::cout << fmt::format("sum a*chi_t   {:.8f}\n", t.sum_alpha_chi);
    std::cout << fmt::format("delta_x       {:.8f}\n", t.delta_x);
    std::cout << fmt::format("delta_z       {:.8f}\n", t.delta_z);
    std::cout << fmt::format("margin        {:.3e}\n", c.margin());
    if (c.pass) {
      std::cout << fmt::format("CERTIFIED omega({}) <= {:.7f}\n", c.kappa, c.rho);
      return kPass;
    }
    std::cout << "REJECTED\n";
    return kFail;
  } catch (const UnsatisfiedConstraintsError& e) {
    std::cout << "REJECTED: " << e.what() << "\n";
    return kFail;
  } catch (const DegenerateCertificateError& e) {
    std::cout << "REJECTED: " << e.what() << "\n";
    return kFail;
  }
}

struct OptimizeArgs {
  double kappa = 2.0;
  std::string mode = "loss_recursive";
  int starts = 8;
  std::uint64_t seed = 1;
  int max_iters = 3000;
  std::string from;
  std::string out;
  std::string strategy = "penalized-direct";
  bool quiet = false;
};

SolverConfig solver_config(const OptimizeArgs& a) {
  SolverConfig cfg;
  cfg.kappa = a.kappa;
  cfg.mode = mode_arg(a.mode);
  cfg.starts = a.starts;
  cfg.seed = a.seed;
  cfg.max_iters = a.max_iters;
  try {
    cfg.strategy = parse_strategy(a.strategy);
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!a.quiet) cfg.log = [](const std::string& line) { std::cerr << line << "\n"; };
  return cfg;
}

std::string header_for(const OptimizeResult& r, const SolverConfig& cfg) {
  std::string h = fmt::format("kappa = {}, mode {}.\n", cfg.kappa, to_string(cfg.mode));
  if (r.feasible)
    h += fmt::format("Certifies rho = {:.10f}.", r.certificate.rho);
  else
    h += fmt::format("Infeasible (largest violation {:.3e}).", r.infeasibility);
  if (!r.boundary_active.empty()) {
    h += "\nAt the lower bound:";
    for (const auto& n : r.boundary_active) h += " " + n;
  }
  return h;
}

int run_optimize(const OptimizeArgs& a) {
  const auto cfg = solver_config(a);
  std::optional<ParameterSet> warm;
  if (!a.from.empty()) warm = read_parameter_file(a.from);
  const auto r = optimize(cfg, warm);
  if (!a.out.empty()) write_parameter_file(a.out, r.params, header_for(r, cfg));
  if (r.feasible) {
    std::cout << fmt::format("CERTIFIED omega({}) <= {:.7f}\n", cfg.kappa, r.certificate.rho);
    std::cout << fmt::format("margin {:.3e}, best start {}\n", r.certificate.margin(), r.best_start);
    return kPass;
  }
  std::cout << fmt::format("no feasible point; largest violation {:.3e}\n", r.infeasibility);
  return kFail;
}

struct SweepArgs {
  std::string kappas;
  OptimizeArgs opt;
  std::string out;
};

std::vector<double> parse_kappas(const std::string& list) {
  std::vector<double> ks;
  std::stringstream in(list);
  for (std::string item; std::getline(in, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    std::size_t used = 0;
    double k;
    try {
      k = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad kappa '" + item + "'");
    }
    if (used != item.size() || !(k >= 0.0)) throw UsageError("bad kappa '" + item + "'");
    ks.push_back(k);
  }
  if (ks.empty()) throw UsageError("--kappas is empty");
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

int run_sweep(const SweepArgs& a) {
  const auto ks = parse_kappas(a.kappas);
  std::optional<ParameterSet> warm;
  if (!a.opt.from.empty()) warm = read_parameter_file(a.opt.from);
  const fs::path csv(a.out);
  const fs::path dir = csv.has_parent_path() ? csv.parent_path() : fs::path(".");
  std::string body = "kappa,rho,margin,file\n";
  for (double k : ks) {
    auto args = a.opt;
    args.kappa = k;
    const auto cfg = solver_config(args);
    const auto r = optimize(cfg, warm);
    const auto name = fmt::format("{}_kappa_{}.cert", csv.stem().string(), k);
    write_parameter_file(dir / name, r.params, header_for(r, cfg));
    if (r.feasible) {
      body += fmt::format("{},{:.10f},{:.6e},{}\n", k, r.certificate.rho, r.certificate.margin(), name);
      std::cout << fmt::format("CERTIFIED omega({}) <= {:.7f}\n", k, r.certificate.rho);
    } else {
      body += fmt::format("{},infeasible,{:.6e},{}\n", k, -r.infeasibility, name);
      std::cout << fmt::format("kappa {}: no feasible point\n", k);
    }
  }
  std::ofstream f(csv, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + csv.string());
  f << body;
  return kPass;
}

void add_optimizer_flags(CLI::App* cmd, OptimizeArgs& a) {
  cmd->add_option("--mode", a.mode, "legacy | loss_outer | loss_recursive")->capture_default_str();
  cmd->add_option("--starts", a.starts, "number of starts")->capture_default_str();
  cmd->add_option("--seed", a.seed, "random seed")->capture_default_str();
  cmd->add_option("--max-iters", a.max_iters, "iterations per start")->capture_default_str();
  cmd->add_option("--from", a.from, "warm-start certificate");
  cmd->add_option("--strategy", a.strategy, "penalized-direct | bisection-feasibility")->capture_default_str();
  cmd->add_flag("--quiet", a.quiet, "no progress lines");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify and search for upper bounds on omega(kappa)"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "check a certificate at a given rho");
  verify->add_option("file", va.file, "certificate file")->required();
  verify->add_option("--rho", va.rho, "claimed bound")->required();
  verify->add_option("--kappa", va.kappa, "override kappa");
  verify->add_option("--mode", va.mode, "legacy | loss_outer | loss_recursive")->capture_default_str();
  verify->add_option("--tol-eq", va.tol_eq, "linear equality tolerance")->capture_default_str();
  verify->add_option("--tol-log", va.tol_log, "log-domain equality tolerance")->capture_default_str();
  verify->add_option("--tol-ineq", va.tol_ineq, "inequality tolerance")->capture_default_str();
  verify->add_flag("--kv", va.kv, "key=value output");

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "print the implied bound and its breakdown");
  bound->add_option("file", ba.file, "certificate file")->required();
  bound->add_option("--kappa", ba.kappa, "override kappa");
  bound->add_option("--mode", ba.mode, "legacy | loss_outer | loss_recursive")->capture_default_str();

  OptimizeArgs oa;
  auto* opt = app.add_subcommand("optimize", "search for a certificate");
  opt->add_option("--kappa", oa.kappa, "kappa")->capture_default_str();
  opt->add_option("--out", oa.out, "output certificate file");
  add_optimizer_flags(opt, oa);

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "optimize over a list of kappa values");
  sweep->add_option("--kappas", sa.kappas, "comma separated list")->required();
  sweep->add_option("--out", sa.out, "CSV output")->required();
  add_optimizer_flags(sweep, sa.opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify) return run_verify(va);
    if (*bound) return run_bound(ba);
    if (*opt) return run_optimize(oa);
    if (*sweep) return run_sweep(sa);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
