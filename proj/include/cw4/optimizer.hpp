#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cw4/certifier.hpp"
#include "cw4/constraints.hpp"
#include "cw4/params.hpp"

namespace cw4 {

enum class Strategy { penalized_direct, bisection_feasibility };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

// Scale factors applied to each inequality residual inside the penalty.
struct PenaltyWeights {
  double c4 = 1.0;
  double d3 = 1.0;
  double e1 = 1.0;
  double e2 = 1.0;
  double floor = 1.0;
};

struct SolverConfig {
  Mode mode = Mode::loss_recursive;
  double kappa = 2.0;
  int q = 5;
  int starts = 8;
  int max_iters = 3000;  // quasi-Newton iterations per start
  std::uint64_t seed = 1;
  double lower_bound = 1e-7;
  PenaltyWeights weights;
  Strategy strategy = Strategy::penalized_direct;
  double start_noise = 0.05;     // spread of the perturbed starts in the free variables
  double safety_margin = 2e-9;   // inequalities are driven to >= this value
  int threads = 0;               // 0: CW4_THREADS or the hardware count
  Tolerances tolerances;
  // Receives progress lines; may be called from several threads at once
  // (calls are serialized by the optimizer).
  std::function<void(const std::string&)> log;

  // Throws std::invalid_argument.
  void validate() const;
};

struct StartOutcome {
  int index = 0;
  bool feasible = false;
  double rho = 0.0;            // certified bound of the best point of this start
  double infeasibility = 0.0;  // largest violation when infeasible
  int iterations = 0;
};

struct OptimizeResult {
  ParameterSet params;
  BoundCertificate certificate;
  bool feasible = false;
  double infeasibility = 0.0;
  int best_start = 0;
  std::vector<std::string> boundary_active;  // variables at the lower bound
  std::vector<StartOutcome> starts;
};

// Never returns an uncertified bound: when feasible, `certificate` passes
// certify() at `certificate.rho`.
OptimizeResult optimize(const SolverConfig& cfg, const std::optional<ParameterSet>& warm_start = std::nullopt);

// Smallest value on a 1e-10 grid that certifies p (at least the implied bound).
double certified_rho(const ParameterSet& p, Mode mode, const Tolerances& tol = {});

// Concurrency cap from CW4_THREADS, else the hardware count (at least 1).
int thread_limit();

// Free-variable encoding used by the solver. C2, D1 hold by storage, C1, C3,
// D2 and D4 by construction.
class Encoding {
 public:
  explicit Encoding(double lower_bound);

  int size() const { return size_; }
  std::vector<double> encode(const ParameterSet& p) const;
  // q and kappa are copied from `shape`.
  ParameterSet decode(const std::vector<double>& x, const ParameterSet& shape) const;

  // Values of every stored alpha and g (for floors and boundary reports).
  struct Named {
    std::string name;
    double value;
  };
  std::vector<Named> floored_values(const ParameterSet& p) const;

 private:
  struct Group {
    int canonical = 0;
    int slots = 0;
    std::vector<double> mult;
    bool d4 = false;  // g3 is tied to g1, g2, g4
    int offset = 0;   // first free variable
    int free = 0;
  };
  double lb_;
  int size_ = 0;
  int g_offset_ = 0;
  int b_offset_ = 0;
  std::vector<Group> groups_;
};

}  // namespace cw4
