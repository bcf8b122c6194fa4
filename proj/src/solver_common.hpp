#pragma once

#include <chrono>
#include <cstdio>
#include <optional>

#include "vropt/solvers.hpp"

namespace vropt::detail {

// Per-epoch trace bookkeeping shared by every solver: objective/gap
// recording, best-iterate tracking, wall time, early-stop tests.
class TraceBuilder {
 public:
  TraceBuilder(const CompositeProblem& p, const RunOptions& opts)
      : p_(p), opts_(opts), start_(std::chrono::steady_clock::now()) {}

  // returns true when the run should stop
  bool record(SolveResult& res, int epoch, const vec& x, const OracleCounter& oc) {
    TraceRecord rec;
    rec.epoch = epoch;
    rec.oracle_calls = oc.calls;
    if (opts_.record_time) {
      const auto now = std::chrono::steady_clock::now();
      rec.elapsed_s = std::chrono::duration<double>(now - start_).count();
    }
    rec.objective =
        opts_.objective_fn ? opts_.objective_fn(x) : objective_value(p_, x);
    // ties go to the later iterate: near the optimum F saturates in double
    // precision while x keeps improving
    if (rec.objective <= res.best_objective) {
      res.best_objective = rec.objective;
      res.best_x = x;
    }
    if (opts_.f_star) {
      // the gap column tracks the best objective seen so far
      rec.gap = res.best_objective - *opts_.f_star;
      if (rec.gap < 0.0 && rec.gap >= -1e-10) {
        if (!clamp_logged_) {
          std::fprintf(stderr, "vropt: clamped gap %.3e to 0 at epoch %d\n", rec.gap, epoch);
          clamp_logged_ = true;
        }
        rec.gap = 0.0;
      }
    }
    res.trace.records.push_back(rec);
    if (opts_.on_snapshot) opts_.on_snapshot(epoch, x);

    bool stop = false;
    if (opts_.stop_gap > 0.0 && opts_.f_star && rec.gap <= opts_.stop_gap) stop = true;
    if (opts_.stop_rel_change > 0.0 && have_prev_) {
      const double change = std::abs(rec.objective - prev_objective_);
      last_rel_change_ = change / std::max(1.0, std::abs(rec.objective));
      if (last_rel_change_ < opts_.stop_rel_change)
        ++quiet_epochs_;
      else
        quiet_epochs_ = 0;
      if (quiet_epochs_ >= std::max(1, opts_.stop_patience)) stop = true;
    }
    prev_objective_ = rec.objective;
    have_prev_ = true;
    return stop;
  }

  double last_rel_change() const { return last_rel_change_; }

 private:
  const CompositeProblem& p_;
  const RunOptions& opts_;
  std::chrono::steady_clock::time_point start_;
  double prev_objective_ = 0.0;
  double last_rel_change_ = std::numeric_limits<double>::infinity();
  int quiet_epochs_ = 0;
  bool have_prev_ = false;
  bool clamp_logged_ = false;
};

inline std::size_t default_m(const SolverConfig& cfg, std::size_t n) {
  if (cfg.rho < 1.0) throw config_error("epoch growth factor rho must be >= 1");
  return cfg.m > 0 ? cfg.m : 2 * n;
}

inline std::size_t default_m1(const SolverConfig& cfg, std::size_t n, std::size_t m) {
  std::size_t m1 = cfg.m1 > 0 ? cfg.m1 : std::max<std::size_t>(1, n / 4);
  return std::min(m1, m);
}

// m_{s+1} = min(floor(rho * m_s), m)
inline std::size_t grow_epoch_len(std::size_t m_s, double rho, std::size_t m) {
  const double grown = std::floor(rho * static_cast<double>(m_s));
  if (grown >= static_cast<double>(m)) return m;
  return std::max<std::size_t>(1, static_cast<std::size_t>(grown));
}

inline void require_smooth_loss(const CompositeProblem& p, const char* who) {
  if (!p.loss.smooth())
    throw config_error(std::string(who) + " needs a smooth loss; smooth the hinge first");
}

inline void require_unit_batch(const SolverConfig& cfg, const char* who) {
  if (cfg.batch != 1)
    throw config_error(std::string(who) + " does not support mini-batches");
}

inline void check_x0(const CompositeProblem& p, const vec& x0) {
  if (x0.size() != p.dim()) throw std::invalid_argument("x0 dimension mismatch");
}

}  // namespace vropt::detail
