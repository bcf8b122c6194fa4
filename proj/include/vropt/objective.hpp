#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vropt/dataset.hpp"
#include "vropt/linalg.hpp"

namespace vropt {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unsupported_operation : std::logic_error {
  using std::logic_error::logic_error;
};

enum class loss_kind { logistic, squared, hinge, smoothed_hinge };

// Component loss f_i acting on row i, with an optional (l2/2)||x||^2 term
// folded into every component. The raw hinge admits values and subgradients
// only; gradients go through its Moreau envelope (smoothed_hinge).
struct ComponentLoss {
  loss_kind kind = loss_kind::logistic;
  double embedded_l2 = 0.0;  // lambda_1
  double delta = 0.0;        // smoothing level, smoothed_hinge only

  static ComponentLoss logistic(double l2 = 0.0) { return {loss_kind::logistic, l2, 0.0}; }
  static ComponentLoss squared(double l2 = 0.0) { return {loss_kind::squared, l2, 0.0}; }
  static ComponentLoss hinge(double l2 = 0.0) { return {loss_kind::hinge, l2, 0.0}; }
  static ComponentLoss smoothed_hinge(double delta, double l2 = 0.0) {
    return {loss_kind::smoothed_hinge, l2, delta};
  }
  bool smooth() const { return kind != loss_kind::hinge; }
};

enum class reg_kind { zero, l2, l1, elastic_net };

struct Regularizer {
  reg_kind kind = reg_kind::zero;
  double mu_g = 0.0;    // weight of the (mu_g/2)||x||^2 part
  double lambda = 0.0;  // weight of the lambda*||x||_1 part

  static Regularizer zero() { return {reg_kind::zero, 0.0, 0.0}; }
  static Regularizer l2(double mu_g) { return {reg_kind::l2, mu_g, 0.0}; }
  static Regularizer l1(double lambda) { return {reg_kind::l1, 0.0, lambda}; }
  static Regularizer elastic_net(double mu_g, double lambda) {
    return {reg_kind::elastic_net, mu_g, lambda};
  }
  bool smooth() const { return lambda == 0.0; }
};

double reg_value(const Regularizer& g, std::span<const double> x);

// argmin_y { (1/2gamma)||y - v||^2 + g(y) }
void reg_prox(const Regularizer& g, std::span<const double> v, double gamma,
              std::span<double> out);
vec reg_prox(const Regularizer& g, const vec& v, double gamma);

// gradient of a smooth regularizer (lambda == 0)
void reg_grad(const Regularizer& g, std::span<const double> x, std::span<double> out);

// F = (1/n) sum_i f_i + g. The optional quadratic perturbation
// (aug_sigma/2)||x - aug_center||^2 counts as part of every f_i; it is what
// the adaptive regularization reduction adds per stage.
struct CompositeProblem {
  std::shared_ptr<const SparseDataset> data;
  ComponentLoss loss;
  Regularizer reg;
  double mu = 0.0;                // strong convexity of F
  std::vector<double> lipschitz;  // L_i
  double l_max = 0.0;
  double l_avg = 0.0;
  double l_tilde = 0.0;     // L~ under uniform sampling (= l_max)
  double g_lipschitz = 0.0;  // G: Lipschitz constant of f_i when non-smooth
  double aug_sigma = 0.0;
  vec aug_center;

  std::size_t size() const { return data->size(); }
  std::size_t dim() const { return data->dim; }
};

std::vector<double> lipschitz_constants(const SparseDataset& data, const ComponentLoss& loss);

CompositeProblem make_problem(std::shared_ptr<const SparseDataset> data, ComponentLoss loss,
                              Regularizer reg);

// copy of p with (sigma/2)||x - center||^2 added to every component
CompositeProblem augment_problem(const CompositeProblem& p, double sigma, vec center);

// copy of a hinge problem with the loss replaced by its delta-envelope
CompositeProblem smoothed_problem(const CompositeProblem& p, double delta);

double component_value(const CompositeProblem& p, std::size_t i, std::span<const double> x);
void component_grad(const CompositeProblem& p, std::size_t i, std::span<const double> x,
                    std::span<double> out);
vec component_grad(const CompositeProblem& p, std::size_t i, const vec& x);

void full_grad(const CompositeProblem& p, std::span<const double> x, std::span<double> out);
vec full_grad(const CompositeProblem& p, const vec& x);

double smooth_value(const CompositeProblem& p, std::span<const double> x);  // f(x)
double objective_value(const CompositeProblem& p, std::span<const double> x);

// Moreau envelope of the raw hinge component (embedded l2 and perturbation
// excluded): inf_y max(0, 1 - b_i a_i'y) + (delta/2)||x - y||^2. The gradient
// is delta*(x - prox); both reduce to the scalar envelope of t -> max(0, 1-t)
// with parameter delta/||a_i||^2 evaluated at the margin.
double moreau_value(const CompositeProblem& p, std::size_t i, std::span<const double> x,
                    double delta);
void moreau_grad(const CompositeProblem& p, std::size_t i, std::span<const double> x,
                 double delta, std::span<double> out);
vec moreau_grad(const CompositeProblem& p, std::size_t i, const vec& x, double delta);

}  // namespace vropt
