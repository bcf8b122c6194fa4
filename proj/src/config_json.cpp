#include <fstream>

#include <json.hpp>

#include "vropt/bench.hpp"

namespace vropt {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw config_error("bad JSON in '" + path + "': " + e.what());
  }
  return j;
}

method_kind parse_method(const std::string& s) {
  if (s == "asvrg_sc") return method_kind::asvrg_sc;
  if (s == "asvrg_nsc") return method_kind::asvrg_nsc;
  if (s == "asvrg_plain") return method_kind::asvrg_plain;
  if (s == "svrg") return method_kind::svrg;
  if (s == "prox_sgd") return method_kind::prox_sgd;
  if (s == "saga") return method_kind::saga;
  if (s == "katyusha") return method_kind::katyusha;
  if (s == "adapt_reg") return method_kind::adapt_reg;
  if (s == "adapt_smooth") return method_kind::adapt_smooth;
  throw config_error("unknown method '" + s + "'");
}

loss_kind parse_loss(const std::string& s) {
  if (s == "logistic") return loss_kind::logistic;
  if (s == "squared") return loss_kind::squared;
  if (s == "hinge") return loss_kind::hinge;
  if (s == "smoothed_hinge") return loss_kind::smoothed_hinge;
  throw config_error("unknown loss '" + s + "'");
}

reg_kind parse_reg(const std::string& s) {
  if (s == "zero") return reg_kind::zero;
  if (s == "l2") return reg_kind::l2;
  if (s == "l1") return reg_kind::l1;
  if (s == "elastic_net") return reg_kind::elastic_net;
  throw config_error("unknown regularizer '" + s + "'");
}

SolverConfig parse_solver(const json& j) {
  SolverConfig cfg;
  cfg.method = parse_method(j.at("method").get<std::string>());
  cfg.label = j.value("label", std::string{});
  cfg.eta = j.value("eta", 0.0);
  if (j.contains("omega_rule")) {
    const std::string r = j["omega_rule"].get<std::string>();
    if (r == "fixed")
      cfg.omega_rule = omega_rule_kind::fixed;
    else if (r == "optimal")
      cfg.omega_rule = omega_rule_kind::optimal;
    else if (r == "table_preset")
      cfg.omega_rule = omega_rule_kind::table_preset;
    else
      throw config_error("unknown omega_rule '" + r + "'");
  }
  cfg.omega = j.value("omega", 0.0);
  if (cfg.omega > 0.0 && !j.contains("omega_rule")) cfg.omega_rule = omega_rule_kind::fixed;
  if (j.contains("option")) {
    const std::string o = j["option"].get<std::string>();
    if (o == "I" || o == "i")
      cfg.option = option_kind::option_i;
    else if (o == "II" || o == "ii")
      cfg.option = option_kind::option_ii;
    else
      throw config_error("option must be 'I' or 'II'");
  }
  cfg.restart = j.value("restart", false);
  cfg.restart_every = j.value("restart_every", 0);
  cfg.epochs = j.value("epochs", 50);
  cfg.m = j.value("m", static_cast<std::size_t>(0));
  cfg.m1 = j.value("m1", static_cast<std::size_t>(0));
  cfg.rho = j.value("rho", 2.0);
  cfg.batch = j.value("batch", static_cast<std::size_t>(1));
  if (j.contains("sampling")) {
    const std::string s = j["sampling"].get<std::string>();
    if (s == "uniform")
      cfg.sampling = dist_kind::uniform;
    else if (s == "lipschitz")
      cfg.sampling = dist_kind::lipschitz;
    else
      throw config_error("sampling must be 'uniform' or 'lipschitz'");
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("snapshot")) {
    const std::string s = j["snapshot"].get<std::string>();
    if (s == "average")
      cfg.snapshot = snapshot_kind::average;
    else if (s == "last")
      cfg.snapshot = snapshot_kind::last;
    else
      throw config_error("snapshot must be 'average' or 'last'");
  }
  cfg.katyusha_omega1 = j.value("katyusha_omega1", 0.0);
  cfg.sigma0 = j.value("sigma0", 0.0);
  cfg.delta0 = j.value("delta0", 0.0);
  cfg.stages = j.value("stages", 10);
  return cfg;
}

SyntheticSpec parse_synthetic(const json& j) {
  SyntheticSpec spec;
  spec.n = j.at("n").get<std::size_t>();
  spec.d = j.at("d").get<std::size_t>();
  spec.density = j.value("density", 1.0);
  spec.label_noise = j.value("label_noise", 0.0);
  return spec;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::string& path) {
  const json j = read_json(path);
  ExperimentConfig cfg;
  cfg.seed = j.value("seed", static_cast<std::uint64_t>(1));
  cfg.output_dir = j.value("output_dir", std::string("out"));
  cfg.record_time = j.value("record_time", true);

  const json& jd = j.at("dataset");
  cfg.dataset.path = jd.value("path", std::string{});
  cfg.dataset.normalize = jd.value("normalize", true);
  cfg.dataset.dim_override = jd.value("dim", static_cast<std::size_t>(0));
  if (jd.contains("synthetic")) cfg.dataset.synthetic = parse_synthetic(jd["synthetic"]);
  if (cfg.dataset.path.empty() && !cfg.dataset.synthetic)
    throw config_error("dataset needs a 'path' or a 'synthetic' block");

  const json& jp = j.at("problem");
  ComponentLoss loss;
  loss.kind = parse_loss(jp.value("loss", std::string("logistic")));
  loss.embedded_l2 = jp.value("lambda1", 0.0);
  loss.delta = jp.value("delta", 0.0);
  Regularizer reg = Regularizer::zero();
  if (jp.contains("regularizer")) {
    const json& jr = jp["regularizer"];
    reg.kind = parse_reg(jr.value("kind", std::string("zero")));
    reg.mu_g = jr.value("mu_g", 0.0);
    reg.lambda = jr.value("lambda", 0.0);
  }
  cfg.problem.loss = loss;
  cfg.problem.reg = reg;

  if (j.contains("reference")) {
    const json& jr = j["reference"];
    const std::string policy = jr.value("policy", std::string("compute"));
    if (policy == "compute")
      cfg.ref_policy = reference_policy::compute;
    else if (policy == "file")
      cfg.ref_policy = reference_policy::file;
    else
      throw config_error("reference policy must be 'compute' or 'file'");
    cfg.ref_tol = jr.value("tol", 1e-12);
    cfg.ref_path = jr.value("path", std::string{});
  }

  if (j.contains("solvers"))
    for (const json& js : j["solvers"]) cfg.solvers.push_back(parse_solver(js));
  return cfg;
}

void save_reference(const ReferenceOptimum& ref, const std::string& path) {
  json j;
  j["x_star"] = ref.x_star;
  j["f_star"] = ref.f_star;
  j["achieved_tol"] = ref.achieved_tol;
  j["method"] = ref.method;
  j["oracle_calls"] = ref.oracle_calls;
  std::ofstream out(path);
  if (!out) throw config_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

ReferenceOptimum load_reference(const std::string& path) {
  const json j = read_json(path);
  ReferenceOptimum ref;
  ref.x_star = j.at("x_star").get<std::vector<double>>();
  ref.f_star = j.at("f_star").get<double>();
  ref.achieved_tol = j.value("achieved_tol", 0.0);
  ref.method = j.value("method", std::string{});
  ref.oracle_calls = j.value("oracle_calls", static_cast<std::uint64_t>(0));
  return ref;
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
  return parse_synthetic(read_json(path));
}

}  // namespace vropt
