#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "oracles.hpp"
#include "vropt/bench.hpp"

using namespace vropt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("gen_synthetic") {
  SyntheticSpec spec;
  spec.n = 400;
  spec.d = 30;
  spec.density = 0.1;
  SUBCASE("fixed seeds reproduce the dataset") {
    const SparseDataset a = gen_synthetic(spec, 5);
    const SparseDataset b = gen_synthetic(spec, 5);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.rows[i].indices == b.rows[i].indices);
      CHECK(a.rows[i].values == b.rows[i].values);
    }
    const SparseDataset c = gen_synthetic(spec, 6);
    bool all_same = true;
    for (std::size_t i = 0; i < a.size(); ++i)
      all_same = all_same && a.rows[i].values == c.rows[i].values;
    CHECK_FALSE(all_same);
  }
  SUBCASE("density lands within 3 sigma of the binomial expectation") {
    const SparseDataset ds = gen_synthetic(spec, 7);
    std::size_t nnz = 0;
    for (const auto& row : ds.rows) nnz += row.indices.size();
    const double expect = 400.0 * 30.0 * 0.1;
    const double sigma = std::sqrt(400.0 * 30.0 * 0.1 * 0.9);
    CHECK(std::abs(static_cast<double>(nnz) - expect) <= 3.0 * sigma);
  }
  SUBCASE("rows come out unit norm") {
    const SparseDataset ds = gen_synthetic(spec, 8);
    for (const auto& row : ds.rows)
      CHECK(std::abs(row.squared_norm - 1.0) < 1e-12);
  }
}

TEST_CASE("compute_reference") {
  SUBCASE("1-D quadratic hits the closed-form minimizer") {
    const auto data = std::make_shared<const SparseDataset>(parse_libsvm("+1 1:1\n"));
    auto p = make_problem(data, ComponentLoss::squared(), Regularizer::l2(0.5));
    // minimize (1/2)(x-1)^2 + 0.25 x^2 -> x* = 1/1.5
    const ReferenceOptimum ref = compute_reference(p, 1e-14);
    CHECK(std::abs(ref.x_star[0] - 1.0 / 1.5) < 1e-10);
    CHECK(objective_value(p, ref.x_star) == ref.f_star);  // reproduces exactly
  }
  SUBCASE("huge l1 weight shrinks the reference to zero") {
    SyntheticSpec spec;
    spec.n = 20;
    spec.d = 4;
    SparseDataset ds = gen_synthetic(spec, 9);
    auto p = make_problem(std::make_shared<const SparseDataset>(std::move(ds)),
                          ComponentLoss::squared(), Regularizer::l1(50.0));
    const ReferenceOptimum ref = compute_reference(p, 1e-13);
    CHECK(norm2(ref.x_star) < 1e-12);
    CHECK(ref.f_star == doctest::Approx(smooth_value(p, vec(4, 0.0))).epsilon(1e-12));
  }
  SUBCASE("d = 3 logistic agrees with a Newton oracle to 1e-8") {
    SyntheticSpec spec;
    spec.n = 40;
    spec.d = 3;
    SparseDataset ds = gen_synthetic(spec, 10);
    auto p = make_problem(std::make_shared<const SparseDataset>(std::move(ds)),
                          ComponentLoss::logistic(0.05), Regularizer::l2(0.05));
    const ReferenceOptimum ref = compute_reference(p, 1e-14);
    const vec newton = oracles::newton_logistic(p);
    CHECK(max_abs_diff(ref.x_star, newton) < 1e-8);
    CHECK(std::abs(ref.f_star - objective_value(p, newton)) < 1e-10);
  }
}

TEST_CASE("reference files round-trip") {
  const fs::path dir = temp_dir("vropt_test_ref");
  ReferenceOptimum ref;
  ref.x_star = {0.25, -1.5, 3.0};
  ref.f_star = 0.125;
  ref.achieved_tol = 1e-13;
  ref.method = "asvrg_sc";
  ref.oracle_calls = 4242;
  const std::string path = (dir / "ref.json").string();
  save_reference(ref, path);
  const ReferenceOptimum back = load_reference(path);
  CHECK(back.x_star == ref.x_star);
  CHECK(back.f_star == ref.f_star);
  CHECK(back.oracle_calls == 4242);
}

TEST_CASE("run_suite") {
  const fs::path dir = temp_dir("vropt_test_suite");
  ExperimentConfig cfg;
  cfg.seed = 11;
  cfg.output_dir = (dir / "out").string();
  cfg.record_time = false;
  cfg.dataset.synthetic = SyntheticSpec{120, 8, 1.0, 0.2};
  cfg.problem.loss = ComponentLoss::logistic(1e-2);
  cfg.problem.reg = Regularizer::elastic_net(1e-2, 1e-3);
  cfg.ref_tol = 1e-13;

  SolverConfig s1;
  s1.method = method_kind::asvrg_sc;
  s1.label = "asvrg";
  s1.epochs = 25;
  s1.seed = 2;
  SolverConfig s2;
  s2.method = method_kind::svrg;
  s2.label = "svrg";
  s2.epochs = 25;
  s2.seed = 2;
  cfg.solvers = {s1, s2};

  SUBCASE("produces schema-stable CSVs and a summary") {
    const SuiteResult res = run_suite(cfg);
    REQUIRE(res.runs.size() == 2);
    const std::string csv = slurp(res.runs[0].csv_path);
    CHECK(csv.rfind("epoch,oracle_calls,effective_passes,elapsed_s,objective,gap\n", 0) == 0);
    // each line has 6 fields
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
      CHECK(std::count(line.begin(), line.end(), ',') == 5);
      ++rows;
    }
    CHECK(rows == 26);  // epoch 0 plus 25 epochs
    const std::string summary = slurp(res.summary_path);
    CHECK(summary.find("label,oracle_calls,final_gap") == 0);
    CHECK(summary.find("asvrg") != std::string::npos);
    // gap column is non-negative throughout
    for (const auto& run : res.runs) {
      std::istringstream ls(slurp(run.csv_path));
      std::getline(ls, line);
      while (std::getline(ls, line)) {
        const auto pos = line.rfind(',');
        CHECK(std::stod(line.substr(pos + 1)) >= 0.0);
      }
    }
  }
  SUBCASE("identical configs and seeds give byte-identical CSVs") {
    ExperimentConfig cfg2 = cfg;
    cfg2.output_dir = (dir / "out2").string();
    const SuiteResult a = run_suite(cfg);
    const SuiteResult b = run_suite(cfg2);
    for (std::size_t k = 0; k < a.runs.size(); ++k)
      CHECK(slurp(a.runs[k].csv_path) == slurp(b.runs[k].csv_path));
  }
  SUBCASE("the thread cap does not change the output bytes") {
    ExperimentConfig serial = cfg;
    serial.output_dir = (dir / "serial").string();
    setenv("VROPT_THREADS", "1", 1);
    const SuiteResult a = run_suite(serial);
    ExperimentConfig parallel = cfg;
    parallel.output_dir = (dir / "parallel").string();
    setenv("VROPT_THREADS", "4", 1);
    const SuiteResult b = run_suite(parallel);
    unsetenv("VROPT_THREADS");
    for (std::size_t k = 0; k < a.runs.size(); ++k)
      CHECK(slurp(a.runs[k].csv_path) == slurp(b.runs[k].csv_path));
    CHECK(slurp(a.summary_path) == slurp(b.summary_path));
  }
  SUBCASE("a saved reference can be fed back through the file policy") {
    ExperimentConfig first = cfg;
    first.output_dir = (dir / "ref_out").string();
    const SuiteResult a = run_suite(first);
    ExperimentConfig second = cfg;
    second.output_dir = (dir / "ref_out2").string();
    second.ref_policy = reference_policy::file;
    second.ref_path = (fs::path(first.output_dir) / "reference.json").string();
    const SuiteResult b = run_suite(second);
    CHECK(b.reference.f_star == a.reference.f_star);
    for (std::size_t k = 0; k < a.runs.size(); ++k)
      CHECK(slurp(a.runs[k].csv_path) == slurp(b.runs[k].csv_path));
  }
  SUBCASE("an empty solver list still writes an empty summary") {
    ExperimentConfig cfg2 = cfg;
    cfg2.solvers.clear();
    cfg2.output_dir = (dir / "out3").string();
    const SuiteResult res = run_suite(cfg2);
    CHECK(res.runs.empty());
    const std::string summary = slurp(res.summary_path);
    CHECK(summary.find("label,") == 0);
  }
  SUBCASE("invalid solver configs fail before any run") {
    ExperimentConfig cfg2 = cfg;
    cfg2.output_dir = (dir / "out4").string();
    SolverConfig bad;
    bad.method = method_kind::asvrg_sc;
    bad.omega_rule = omega_rule_kind::fixed;
    bad.omega = 0.99;
    bad.eta = 1.0;  // violates the momentum bound
    cfg2.solvers = {s1, bad};
    CHECK_THROWS_AS(run_suite(cfg2), config_error);
    CHECK_FALSE(fs::exists(fs::path(cfg2.output_dir) / "asvrg.csv"));
  }
  SUBCASE("summary thresholds use first crossings") {
    const SuiteResult res = run_suite(cfg);
    // re-derive the first crossing from the CSV itself
    for (const auto& run : res.runs) {
      std::istringstream ls(slurp(run.csv_path));
      std::string line;
      std::getline(ls, line);
      std::vector<std::pair<std::uint64_t, double>> rows;
      while (std::getline(ls, line)) {
        const auto first_comma = line.find(',');
        const auto second_comma = line.find(',', first_comma + 1);
        const std::uint64_t calls =
            std::stoull(line.substr(first_comma + 1, second_comma - first_comma - 1));
        const double gap = std::stod(line.substr(line.rfind(',') + 1));
        rows.emplace_back(calls, gap);
      }
      const auto& thresholds = summary_gap_thresholds();
      for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
        std::uint64_t expect = 0;
        for (const auto& [calls, gap] : rows)
          if (gap <= thresholds[ti]) {
            expect = calls;
            break;
          }
        const RunSummary& summary =
            *std::find_if(res.runs.begin(), res.runs.end(),
                          [&](const RunSummary& r) { return r.label == run.label; });
        CHECK(summary.oracle_to_gap[ti] == expect);
      }
    }
  }
}

TEST_CASE("experiment config JSON parsing") {
  const fs::path dir = temp_dir("vropt_test_cfg");
  const std::string path = (dir / "cfg.json").string();
  {
    std::ofstream out(path);
    out << R"({
      "seed": 3,
      "output_dir": ")" << (dir / "out").string() << R"(",
      "record_time": false,
      "dataset": {"synthetic": {"n": 50, "d": 6, "density": 0.5}, "normalize": true},
      "problem": {
        "loss": "logistic", "lambda1": 1e-4,
        "regularizer": {"kind": "elastic_net", "mu_g": 1e-3, "lambda": 1e-4}
      },
      "reference": {"policy": "compute", "tol": 1e-12},
      "solvers": [
        {"method": "asvrg_sc", "label": "fast", "epochs": 10, "option": "II",
         "restart": true, "sampling": "lipschitz", "seed": 4},
        {"method": "asvrg_nsc", "epochs": 5, "batch": 5}
      ]
    })";
  }
  const ExperimentConfig cfg = load_experiment_config(path);
  CHECK(cfg.seed == 3);
  CHECK_FALSE(cfg.record_time);
  REQUIRE(cfg.dataset.synthetic.has_value());
  CHECK(cfg.dataset.synthetic->n == 50);
  CHECK(cfg.problem.loss.embedded_l2 == 1e-4);
  CHECK(cfg.problem.reg.kind == reg_kind::elastic_net);
  REQUIRE(cfg.solvers.size() == 2);
  CHECK(cfg.solvers[0].label == "fast");
  CHECK(cfg.solvers[0].option == option_kind::option_ii);
  CHECK(cfg.solvers[0].restart);
  CHECK(cfg.solvers[0].sampling == dist_kind::lipschitz);
  CHECK(cfg.solvers[1].batch == 5);
  // and the whole thing runs end to end
  const SuiteResult res = run_suite(cfg);
  CHECK(res.runs.size() == 2);
}
