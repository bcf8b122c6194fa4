#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vropt/dataset.hpp"
#include "vropt/objective.hpp"
#include "vropt/solvers.hpp"

namespace vropt {

struct SyntheticSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  double density = 1.0;      // expected fraction of nonzeros per row
  double label_noise = 0.0;  // stddev of the noise added to a'w* before sign
};

// Seeded Gaussian rows, sparsified to `density`, scaled to unit norm; labels
// are sign(a'w* + noise) for a planted Gaussian w*.
SparseDataset gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

struct ReferenceOptimum {
  vec x_star;
  double f_star = 0.0;
  double achieved_tol = 0.0;
  std::string method;
  std::uint64_t oracle_calls = 0;
};

// Runs the strongly convex solver (mu > 0) or the non-strongly convex one
// with an aggressive budget, until the successive-epoch objective change
// drops below tol*max(1,|F|). f_star is the best objective seen.
ReferenceOptimum compute_reference(const CompositeProblem& p, double tol,
                                   int max_epochs = 20000);

void save_reference(const ReferenceOptimum& ref, const std::string& path);
ReferenceOptimum load_reference(const std::string& path);

struct ProblemSpec {
  ComponentLoss loss;
  Regularizer reg;
};

struct DatasetSpec {
  std::string path;  // empty -> synthetic
  bool normalize = true;
  std::size_t dim_override = 0;
  std::optional<SyntheticSpec> synthetic;
};

enum class reference_policy { compute, file };

struct ExperimentConfig {
  DatasetSpec dataset;
  ProblemSpec problem;
  std::vector<SolverConfig> solvers;
  reference_policy ref_policy = reference_policy::compute;
  double ref_tol = 1e-12;
  std::string ref_path;  // required for the file policy
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  bool record_time = true;
};

ExperimentConfig load_experiment_config(const std::string& path);
SyntheticSpec load_synthetic_spec(const std::string& path);

struct RunSummary {
  std::string label;
  std::string csv_path;
  std::uint64_t oracle_calls = 0;
  double final_objective = 0.0;
  double final_gap = 0.0;
  // oracle calls at the first trace record with gap <= threshold; 0 = never
  std::vector<std::uint64_t> oracle_to_gap;
};

inline const std::vector<double>& summary_gap_thresholds() {
  static const std::vector<double> thresholds = {1e-2, 1e-4, 1e-6};
  return thresholds;
}

struct SuiteResult {
  std::vector<RunSummary> runs;
  ReferenceOptimum reference;
  std::string summary_path;
};

// Validates every solver config, obtains the reference optimum, runs the
// configured solvers (concurrently up to VROPT_THREADS), writes one CSV per
// run plus summary.csv under output_dir.
SuiteResult run_suite(const ExperimentConfig& cfg);

void write_trace_csv(const Trace& trace, std::size_t n, const std::string& path);

}  // namespace vropt
