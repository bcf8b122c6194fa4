#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vropt/estimator.hpp"
#include "vropt/objective.hpp"
#include "vropt/sampling.hpp"

namespace vropt {

enum class method_kind {
  asvrg_sc,
  asvrg_nsc,
  asvrg_plain,
  svrg,
  prox_sgd,
  saga,
  katyusha,
  adapt_reg,
  adapt_smooth
};

enum class omega_rule_kind { fixed, optimal, table_preset };
enum class option_kind { option_i, option_ii };
enum class snapshot_kind { average, last };

struct SolverConfig {
  method_kind method = method_kind::asvrg_sc;
  std::string label;
  double eta = 0.0;  // 0 -> method default
  omega_rule_kind omega_rule = omega_rule_kind::table_preset;
  double omega = 0.0;  // fixed rule only
  option_kind option = option_kind::option_i;
  bool restart = false;
  int restart_every = 0;  // 0 -> derived length 2*((1-w)/w + w/(eta*m*mu))
  int epochs = 50;
  std::size_t m = 0;   // target epoch length, 0 -> 2n
  std::size_t m1 = 0;  // first epoch length, 0 -> max(1, n/4)
  double rho = 2.0;    // epoch growth factor
  std::size_t batch = 1;
  dist_kind sampling = dist_kind::uniform;
  std::uint64_t seed = 0;  // run_suite derives per-run seeds from 0
  // snapshot/init ablation knob for asvrg_plain (default average) and svrg
  // (default last)
  std::optional<snapshot_kind> snapshot;
  double katyusha_omega1 = 0.0;  // 0 -> sqrt(m mu / (3 L~)) clipped to (0, 1/2]
  // reductions
  double sigma0 = 0.0;  // adapt_reg, 0 -> L~/n
  double delta0 = 0.0;  // adapt_smooth, 0 -> G^2
  int stages = 10;
};

struct TraceRecord {
  int epoch = 0;
  std::uint64_t oracle_calls = 0;
  double elapsed_s = 0.0;
  double objective = 0.0;
  double gap = std::numeric_limits<double>::quiet_NaN();
};

struct Trace {
  std::vector<TraceRecord> records;
};

struct RunOptions {
  std::optional<double> f_star;  // enables gap tracking
  double stop_gap = 0.0;         // > 0: stop once gap <= stop_gap
  double stop_rel_change = 0.0;  // > 0: stop when |F_s - F_{s-1}| < tol*max(1,|F_s|)
  // consecutive epochs the rel-change test must hold; > 1 keeps the solver
  // polishing the iterate after the objective has levelled off
  int stop_patience = 1;
  bool record_time = true;
  // objective recorded in the trace; defaults to objective_value on the
  // problem being solved (reductions record the original objective instead)
  std::function<double(const vec&)> objective_fn;
  std::function<void(int, const vec&)> on_snapshot;
};

struct SolveResult {
  vec x;  // final snapshot
  vec best_x;
  double best_objective = std::numeric_limits<double>::infinity();
  Trace trace;
  std::uint64_t oracle_calls = 0;
  std::string method;
  // resolved parameters, for reporting
  double eta = 0.0;
  double omega0 = 0.0;
  std::size_t m = 0;
  int restart_every = 0;
};

// ---- parameter rules -------------------------------------------------------

// upper bound 1 - tau_b*L~*eta/(1 - L~*eta) on the momentum weight
double momentum_bound(double l_tilde, double eta, double tau_b = 1.0);

// omega* = m*mu*eta/2, validated against the momentum bound
double omega_optimal(std::size_t m, double mu, double eta, double l_tilde);

// next weight of the decreasing momentum sequence:
// solves (1-w)/w^2 = 1/w_prev^2 in (0,1)
double omega_next(double omega_prev);

// rho = 1 - omega + omega^2/(m*mu*eta)
double contraction_factor(double omega, std::size_t m, double mu, double eta);

struct PresetParams {
  double eta = 0.0;
  double omega = 0.0;
  std::size_t m = 0;
  int restart_every = 0;  // 0 when the preset has no restart schedule
};

// theoretical parameter tables for the strongly convex solver
PresetParams table_preset(option_kind option, std::size_t m, double mu, double l_tilde);

// ---- solvers ---------------------------------------------------------------

SolveResult asvrg_sc(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                     const RunOptions& opts = {});
SolveResult asvrg_nsc(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                      const RunOptions& opts = {});
SolveResult asvrg_plain(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                        const RunOptions& opts = {});
SolveResult svrg(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                 const RunOptions& opts = {});
SolveResult prox_sgd(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                     const RunOptions& opts = {});
SolveResult saga(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                 const RunOptions& opts = {});
SolveResult katyusha(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                     const RunOptions& opts = {});
SolveResult adapt_reg(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                      const RunOptions& opts = {});
SolveResult adapt_smooth(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                         const RunOptions& opts = {});

SolveResult solve(const CompositeProblem& p, const SolverConfig& cfg, const vec& x0,
                  const RunOptions& opts = {});
SolveResult solve(const CompositeProblem& p, const SolverConfig& cfg);

// resolves parameters and throws config_error on an invalid combination,
// without running anything
void validate_solver_config(const CompositeProblem& p, const SolverConfig& cfg);

const char* method_name(method_kind m);
}  // namespace vropt
