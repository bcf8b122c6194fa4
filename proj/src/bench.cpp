#include "vropt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

namespace vropt {

SparseDataset gen_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.n == 0 || spec.d == 0) throw config_error("synthetic spec needs n >= 1 and d >= 1");
  if (!(spec.density > 0.0) || spec.density > 1.0)
    throw config_error("synthetic density must lie in (0, 1]");
  Rng rng(seed);
  SparseDataset ds;
  ds.dim = spec.d;
  ds.rows.reserve(spec.n);
  ds.labels.reserve(spec.n);

  vec w_star(spec.d);
  for (double& w : w_star) w = rng.next_gaussian();

  for (std::size_t i = 0; i < spec.n; ++i) {
    SparseRow row;
    do {
      row.indices.clear();
      row.values.clear();
      for (std::size_t j = 0; j < spec.d; ++j) {
        const double v = rng.next_gaussian();
        if (spec.density >= 1.0 || rng.next_double() < spec.density) {
          row.indices.push_back(static_cast<std::uint32_t>(j));
          row.values.push_back(v);
        }
      }
    } while (row.indices.empty());
    row.recompute_norm();
    const double inv = 1.0 / std::sqrt(row.squared_norm);
    for (double& v : row.values) v *= inv;
    row.recompute_norm();

    const double margin = row.dot(w_star) +
                          (spec.label_noise > 0.0 ? spec.label_noise * rng.next_gaussian() : 0.0);
    ds.labels.push_back(margin >= 0.0 ? 1.0 : -1.0);
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

ReferenceOptimum compute_reference(const CompositeProblem& p, double tol, int max_epochs) {
  if (!(tol > 0.0)) throw config_error("reference tolerance must be positive");
  SolverConfig cfg;
  cfg.method = p.mu > 0.0 ? method_kind::asvrg_sc : method_kind::asvrg_nsc;
  cfg.m = 2 * p.size();
  cfg.m1 = cfg.m;
  cfg.epochs = max_epochs;
  cfg.seed = 9001;
  if (cfg.method == method_kind::asvrg_sc) {
    cfg.omega_rule = omega_rule_kind::table_preset;
    cfg.option = option_kind::option_ii;
    cfg.restart = true;
  }
  RunOptions opts;
  opts.stop_rel_change = tol;
  // keep polishing the iterate after the objective levels off; the gap in x
  // keeps contracting long after F stops resolving in double precision
  opts.stop_patience = 300;
  opts.record_time = false;

  const SolveResult r = solve(p, cfg, vec(p.dim(), 0.0), opts);
  ReferenceOptimum ref;
  ref.x_star = r.best_x;
  ref.f_star = r.best_objective;
  ref.method = r.method;
  ref.oracle_calls = r.oracle_calls;
  const auto& recs = r.trace.records;
  if (recs.size() >= 2) {
    const double change =
        std::abs(recs.back().objective - recs[recs.size() - 2].objective);
    ref.achieved_tol = change / std::max(1.0, std::abs(recs.back().objective));
  }
  return ref;
}

void write_trace_csv(const Trace& trace, std::size_t n, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write '" + path + "'");
  out << "epoch,oracle_calls,effective_passes,elapsed_s,objective,gap\n";
  char buf[160];
  for (const TraceRecord& rec : trace.records) {
    const double passes = static_cast<double>(rec.oracle_calls) / static_cast<double>(n);
    std::snprintf(buf, sizeof(buf), "%d,%llu,%.17g,%.6f,%.17g,%.17g\n", rec.epoch,
                  static_cast<unsigned long long>(rec.oracle_calls), passes, rec.elapsed_s,
                  rec.objective, rec.gap);
    out << buf;
  }
}

namespace {

std::string sanitize_label(const std::string& s) {
  std::string out;
  for (char c : s)
    out.push_back((std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
                      ? c
                      : '_');
  return out.empty() ? std::string("run") : out;
}

unsigned suite_thread_cap(std::size_t n_runs) {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VROPT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(cap, std::max<std::size_t>(1, n_runs)));
}

}  // namespace

SuiteResult run_suite(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;

  // dataset
  SparseDataset ds;
  if (!cfg.dataset.path.empty())
    ds = load_libsvm_file(cfg.dataset.path, cfg.dataset.dim_override);
  else if (cfg.dataset.synthetic)
    ds = gen_synthetic(*cfg.dataset.synthetic, cfg.seed);
  else
    throw config_error("experiment config needs a dataset path or a synthetic spec");
  if (cfg.dataset.normalize) ds = normalize_rows(std::move(ds));

  const CompositeProblem p = make_problem(
      std::make_shared<const SparseDataset>(std::move(ds)), cfg.problem.loss, cfg.problem.reg);

  // resolve labels and validate every run before anything starts
  std::vector<SolverConfig> solvers = cfg.solvers;
  std::vector<std::string> used_labels;
  for (std::size_t k = 0; k < solvers.size(); ++k) {
    if (solvers[k].label.empty())
      solvers[k].label = std::string(method_name(solvers[k].method)) +
                         (solvers.size() > 1 ? "_" + std::to_string(k) : "");
    std::string label = sanitize_label(solvers[k].label);
    for (int suffix = 2;
         std::find(used_labels.begin(), used_labels.end(), label) != used_labels.end();
         ++suffix)
      label = sanitize_label(solvers[k].label) + "_" + std::to_string(suffix);
    used_labels.push_back(label);
    solvers[k].label = std::move(label);
    if (solvers[k].seed == 0) solvers[k].seed = cfg.seed + 1000 * (k + 1);
    validate_solver_config(p, solvers[k]);
  }

  fs::create_directories(cfg.output_dir);
  if (!fs::is_directory(cfg.output_dir))
    throw config_error("cannot create output dir '" + cfg.output_dir + "'");

  SuiteResult result;
  if (cfg.ref_policy == reference_policy::file) {
    if (cfg.ref_path.empty()) throw config_error("file reference policy needs a path");
    result.reference = load_reference(cfg.ref_path);
    if (result.reference.x_star.size() != p.dim())
      throw config_error("reference optimum dimension mismatch");
  } else {
    result.reference = compute_reference(p, cfg.ref_tol);
    save_reference(result.reference,
                   (fs::path(cfg.output_dir) / "reference.json").string());
  }

  result.runs.resize(solvers.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= solvers.size()) return;
      RunOptions opts;
      opts.f_star = result.reference.f_star;
      opts.record_time = cfg.record_time;
      const SolveResult r = solve(p, solvers[k], vec(p.dim(), 0.0), opts);

      RunSummary& summary = result.runs[k];
      summary.label = solvers[k].label;
      summary.oracle_calls = r.oracle_calls;
      if (!r.trace.records.empty()) {
        summary.final_objective = r.trace.records.back().objective;
        summary.final_gap = r.trace.records.back().gap;
      }
      for (double thr : summary_gap_thresholds()) {
        std::uint64_t crossed = 0;
        for (const TraceRecord& rec : r.trace.records)
          if (rec.gap <= thr) {
            crossed = rec.oracle_calls;
            break;
          }
        summary.oracle_to_gap.push_back(crossed);
      }
      summary.csv_path = (fs::path(cfg.output_dir) / (solvers[k].label + ".csv")).string();
      write_trace_csv(r.trace, p.size(), summary.csv_path);
    }
  };

  const unsigned n_threads = suite_thread_cap(solvers.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // summary.csv: oracle calls at the first trace record crossing each
  // gap threshold (never interpolated); empty cell when never crossed
  result.summary_path = (fs::path(cfg.output_dir) / "summary.csv").string();
  std::ofstream out(result.summary_path);
  if (!out) throw config_error("cannot write '" + result.summary_path + "'");
  out << "label,oracle_calls,final_gap";
  char buf[96];
  for (double thr : summary_gap_thresholds()) {
    std::snprintf(buf, sizeof(buf), ",oracle_to_gap_%.0e", thr);
    out << buf;
  }
  out << '\n';
  for (const RunSummary& s : result.runs) {
    std::snprintf(buf, sizeof(buf), "%s,%llu,%.17g", s.label.c_str(),
                  static_cast<unsigned long long>(s.oracle_calls), s.final_gap);
    out << buf;
    for (std::uint64_t calls : s.oracle_to_gap) {
      if (calls > 0)
        out << ',' << calls;
      else
        out << ',';
    }
    out << '\n';
  }
  return result;
}

}  // namespace vropt
