#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "vropt/bench.hpp"
#include "vropt/diagnostics.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  const vropt::ExperimentConfig cfg = vropt::load_experiment_config(config_path);
  const vropt::SuiteResult result = vropt::run_suite(cfg);
  std::printf("reference: F* = %.12g (%s, %llu oracle calls, tol %.3g)\n",
              result.reference.f_star, result.reference.method.c_str(),
              static_cast<unsigned long long>(result.reference.oracle_calls),
              result.reference.achieved_tol);
  std::printf("%-24s %14s %12s", "run", "oracle_calls", "final_gap");
  for (double thr : vropt::summary_gap_thresholds()) std::printf("  to_gap<=%-7.0e", thr);
  std::printf("\n");
  for (const auto& s : result.runs) {
    std::printf("%-24s %14llu %12.3e", s.label.c_str(),
                static_cast<unsigned long long>(s.oracle_calls), s.final_gap);
    for (std::uint64_t calls : s.oracle_to_gap) {
      if (calls > 0)
        std::printf("  %-15llu", static_cast<unsigned long long>(calls));
      else
        std::printf("  %-15s", "-");
    }
    std::printf("\n");
  }
  std::printf("traces written next to %s\n", result.summary_path.c_str());
  return 0;
}

int cmd_reference(const std::string& config_path, double tol, const std::string& out_path) {
  vropt::ExperimentConfig cfg = vropt::load_experiment_config(config_path);
  vropt::SparseDataset ds;
  if (!cfg.dataset.path.empty())
    ds = vropt::load_libsvm_file(cfg.dataset.path, cfg.dataset.dim_override);
  else
    ds = vropt::gen_synthetic(*cfg.dataset.synthetic, cfg.seed);
  if (cfg.dataset.normalize) ds = vropt::normalize_rows(std::move(ds));
  const vropt::CompositeProblem p =
      vropt::make_problem(std::make_shared<const vropt::SparseDataset>(std::move(ds)),
                          cfg.problem.loss, cfg.problem.reg);
  const vropt::ReferenceOptimum ref = vropt::compute_reference(p, tol);
  const std::string path =
      !out_path.empty() ? out_path
                        : (!cfg.ref_path.empty() ? cfg.ref_path : std::string("reference.json"));
  vropt::save_reference(ref, path);
  std::printf("F* = %.17g after %llu oracle calls (achieved tol %.3g) -> %s\n", ref.f_star,
              static_cast<unsigned long long>(ref.oracle_calls), ref.achieved_tol,
              path.c_str());
  return 0;
}

int cmd_gen(const std::string& spec_path, std::uint64_t seed, const std::string& out_path) {
  const vropt::SyntheticSpec spec = vropt::load_synthetic_spec(spec_path);
  const vropt::SparseDataset ds = vropt::gen_synthetic(spec, seed);
  vropt::save_libsvm_file(ds, out_path);
  std::printf("wrote %zu examples, %zu features -> %s\n", ds.size(), ds.dim, out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variance-reduced stochastic optimization benchmark"};
  app.require_subcommand(1);

  std::string config_path, spec_path, out_path;
  double tol = 1e-12;
  std::uint64_t seed = 1;

  CLI::App* run = app.add_subcommand("run", "run a solver suite from a config file");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();

  CLI::App* reference = app.add_subcommand("reference", "compute a reference optimum");
  reference->add_option("--config", config_path, "experiment config (JSON)")->required();
  reference->add_option("--tol", tol, "successive-change stopping tolerance");
  reference->add_option("--out", out_path, "output path (default: config reference path)");

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic LIBSVM dataset");
  gen->add_option("--spec", spec_path, "synthetic spec (JSON)")->required();
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", out_path, "output LIBSVM path")->required();

  CLI::App* check = app.add_subcommand("check", "run invariant diagnostics");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (reference->parsed()) return cmd_reference(config_path, tol, out_path);
    if (gen->parsed()) return cmd_gen(spec_path, seed, out_path);
    if (check->parsed()) return vropt::run_diagnostics(std::cout) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
