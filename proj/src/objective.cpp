#include "vropt/objective.hpp"

#include <cmath>

namespace vropt {

namespace {

void check_dim(const CompositeProblem& p, std::span<const double> x) {
  if (x.size() != p.dim()) throw std::invalid_argument("dimension mismatch");
}

void check_index(const CompositeProblem& p, std::size_t i) {
  if (i >= p.size()) throw std::invalid_argument("component index out of range");
}

// log(1 + e^z), overflow-safe
double softplus(double z) {
  if (z > 30.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

// 1 / (1 + e^{-z})
double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// scalar Moreau envelope of t -> max(0, 1-t) with parameter nu, at margin m
double hinge_envelope(double m, double nu) {
  if (m >= 1.0) return 0.0;
  if (m >= 1.0 - 1.0 / nu) return 0.5 * nu * (1.0 - m) * (1.0 - m);
  return 1.0 - m - 0.5 / nu;
}

// derivative of the scalar envelope w.r.t. the margin
double hinge_envelope_slope(double m, double nu) {
  if (m >= 1.0) return 0.0;
  if (m >= 1.0 - 1.0 / nu) return -nu * (1.0 - m);
  return -1.0;
}

// multiplier c_i such that the data part of grad f_i(x) is c_i * a_i
double margin_coef(const CompositeProblem& p, std::size_t i, std::span<const double> x) {
  const SparseRow& a = p.data->rows[i];
  const double b = p.data->labels[i];
  switch (p.loss.kind) {
    case loss_kind::logistic:
      return -b * sigmoid(-b * a.dot(x));
    case loss_kind::squared:
      return a.dot(x) - b;
    case loss_kind::smoothed_hinge: {
      const double q = a.squared_norm;
      if (q <= 0.0) return 0.0;
      return b * hinge_envelope_slope(b * a.dot(x), p.loss.delta / q);
    }
    case loss_kind::hinge:
      throw unsupported_operation("raw hinge has no gradient; use its Moreau envelope");
  }
  return 0.0;
}

}  // namespace

double reg_value(const Regularizer& g, std::span<const double> x) {
  double l1 = 0.0, sq = 0.0;
  switch (g.kind) {
    case reg_kind::zero:
      return 0.0;
    case reg_kind::l2:
      return 0.5 * g.mu_g * squared_norm(x);
    case reg_kind::l1:
      for (double v : x) l1 += std::abs(v);
      return g.lambda * l1;
    case reg_kind::elastic_net:
      for (double v : x) {
        l1 += std::abs(v);
        sq += v * v;
      }
      return 0.5 * g.mu_g * sq + g.lambda * l1;
  }
  return 0.0;
}

void reg_prox(const Regularizer& g, std::span<const double> v, double gamma,
              std::span<double> out) {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox step must be positive");
  switch (g.kind) {
    case reg_kind::zero:
      std::copy(v.begin(), v.end(), out.begin());
      return;
    case reg_kind::l2: {
      const double scale = 1.0 / (1.0 + gamma * g.mu_g);
      for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j] * scale;
      return;
    }
    case reg_kind::l1:
    case reg_kind::elastic_net: {
      const double thr = gamma * g.lambda;
      const double scale = 1.0 / (1.0 + gamma * g.mu_g);  // mu_g == 0 for plain l1
      for (std::size_t j = 0; j < v.size(); ++j) {
        const double t = v[j];
        if (t > thr)
          out[j] = (t - thr) * scale;
        else if (t < -thr)
          out[j] = (t + thr) * scale;
        else
          out[j] = 0.0;
      }
      return;
    }
  }
}

vec reg_prox(const Regularizer& g, const vec& v, double gamma) {
  vec out(v.size());
  reg_prox(g, v, gamma, out);
  return out;
}

void reg_grad(const Regularizer& g, std::span<const double> x, std::span<double> out) {
  if (!g.smooth()) throw unsupported_operation("regularizer with an l1 part is not smooth");
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = g.mu_g * x[j];
}

std::vector<double> lipschitz_constants(const SparseDataset& data, const ComponentLoss& loss) {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double q = data.rows[i].squared_norm;
    switch (loss.kind) {
      case loss_kind::logistic:
        out[i] = 0.25 * q + loss.embedded_l2;
        break;
      case loss_kind::squared:
        out[i] = q + loss.embedded_l2;
        break;
      case loss_kind::smoothed_hinge:
        // the delta-envelope of the composed hinge is delta-smooth in x
        out[i] = loss.delta + loss.embedded_l2;
        break;
      case loss_kind::hinge:
        out[i] = 0.0;
        break;
    }
  }
  return out;
}

CompositeProblem make_problem(std::shared_ptr<const SparseDataset> data, ComponentLoss loss,
                              Regularizer reg) {
  if (!data || data->size() == 0) throw config_error("problem needs a non-empty dataset");
  if (loss.embedded_l2 < 0.0 || !std::isfinite(loss.embedded_l2))
    throw config_error("embedded l2 weight must be finite and >= 0");
  if (loss.kind == loss_kind::smoothed_hinge && !(loss.delta > 0.0))
    throw config_error("smoothed hinge needs delta > 0");
  if (reg.mu_g < 0.0 || reg.lambda < 0.0 || !std::isfinite(reg.mu_g) ||
      !std::isfinite(reg.lambda))
    throw config_error("regularizer weights must be finite and >= 0");

  CompositeProblem p;
  p.data = std::move(data);
  p.loss = loss;
  p.reg = reg;
  p.mu = loss.embedded_l2 + reg.mu_g;
  p.lipschitz = lipschitz_constants(*p.data, loss);
  p.l_max = 0.0;
  p.l_avg = 0.0;
  for (double L : p.lipschitz) {
    p.l_max = std::max(p.l_max, L);
    p.l_avg += L;
  }
  p.l_avg /= static_cast<double>(p.size());
  p.l_tilde = p.l_max;
  if (loss.kind == loss_kind::hinge || loss.kind == loss_kind::smoothed_hinge) {
    for (const auto& row : p.data->rows)
      p.g_lipschitz = std::max(p.g_lipschitz, std::sqrt(row.squared_norm));
  }
  return p;
}

CompositeProblem augment_problem(const CompositeProblem& p, double sigma, vec center) {
  if (!(sigma > 0.0)) throw config_error("augmentation sigma must be positive");
  if (center.size() != p.dim()) throw std::invalid_argument("dimension mismatch");
  if (p.aug_sigma > 0.0)
    throw config_error("stacking quadratic perturbations is not supported");
  CompositeProblem out = p;
  out.aug_sigma = sigma;
  out.aug_center = std::move(center);
  out.mu = p.mu + sigma;
  for (double& L : out.lipschitz) L += sigma;
  out.l_max = p.l_max + sigma;
  out.l_avg = p.l_avg + sigma;
  out.l_tilde = out.l_max;
  return out;
}

CompositeProblem smoothed_problem(const CompositeProblem& p, double delta) {
  if (p.loss.kind != loss_kind::hinge)
    throw config_error("only the raw hinge can be smoothed");
  CompositeProblem out = p;
  out.loss = ComponentLoss::smoothed_hinge(delta, p.loss.embedded_l2);
  out.lipschitz = lipschitz_constants(*p.data, out.loss);
  out.l_max = 0.0;
  out.l_avg = 0.0;
  for (double L : out.lipschitz) {
    out.l_max = std::max(out.l_max, L);
    out.l_avg += L;
  }
  out.l_avg /= static_cast<double>(out.size());
  out.l_tilde = out.l_max;
  return out;
}

double component_value(const CompositeProblem& p, std::size_t i, std::span<const double> x) {
  check_index(p, i);
  check_dim(p, x);
  const SparseRow& a = p.data->rows[i];
  const double b = p.data->labels[i];
  double v = 0.0;
  switch (p.loss.kind) {
    case loss_kind::logistic:
      v = softplus(-b * a.dot(x));
      break;
    case loss_kind::squared: {
      const double r = a.dot(x) - b;
      v = 0.5 * r * r;
      break;
    }
    case loss_kind::hinge:
      v = std::max(0.0, 1.0 - b * a.dot(x));
      break;
    case loss_kind::smoothed_hinge:
      v = moreau_value(p, i, x, p.loss.delta);
      break;
  }
  if (p.loss.embedded_l2 > 0.0) v += 0.5 * p.loss.embedded_l2 * squared_norm(x);
  if (p.aug_sigma > 0.0) {
    double sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double d = x[j] - p.aug_center[j];
      sq += d * d;
    }
    v += 0.5 * p.aug_sigma * sq;
  }
  return v;
}

void component_grad(const CompositeProblem& p, std::size_t i, std::span<const double> x,
                    std::span<double> out) {
  check_index(p, i);
  check_dim(p, x);
  std::fill(out.begin(), out.end(), 0.0);
  p.data->rows[i].add_scaled(margin_coef(p, i, x), out);
  if (p.loss.embedded_l2 > 0.0) axpy(p.loss.embedded_l2, x, out);
  if (p.aug_sigma > 0.0)
    for (std::size_t j = 0; j < x.size(); ++j)
      out[j] += p.aug_sigma * (x[j] - p.aug_center[j]);
}

vec component_grad(const CompositeProblem& p, std::size_t i, const vec& x) {
  vec out(x.size());
  component_grad(p, i, x, out);
  return out;
}

void full_grad(const CompositeProblem& p, std::span<const double> x, std::span<double> out) {
  check_dim(p, x);
  std::fill(out.begin(), out.end(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    p.data->rows[i].add_scaled(inv_n * margin_coef(p, i, x), out);
  if (p.loss.embedded_l2 > 0.0) axpy(p.loss.embedded_l2, x, out);
  if (p.aug_sigma > 0.0)
    for (std::size_t j = 0; j < x.size(); ++j)
      out[j] += p.aug_sigma * (x[j] - p.aug_center[j]);
}

vec full_grad(const CompositeProblem& p, const vec& x) {
  vec out(x.size());
  full_grad(p, x, out);
  return out;
}

double smooth_value(const CompositeProblem& p, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += component_value(p, i, x);
  return s / static_cast<double>(p.size());
}

double objective_value(const CompositeProblem& p, std::span<const double> x) {
  return smooth_value(p, x) + reg_value(p.reg, x);
}

double moreau_value(const CompositeProblem& p, std::size_t i, std::span<const double> x,
                    double delta) {
  check_index(p, i);
  check_dim(p, x);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (p.loss.kind != loss_kind::hinge && p.loss.kind != loss_kind::smoothed_hinge)
    throw unsupported_operation("Moreau envelope applies to the hinge loss");
  const SparseRow& a = p.data->rows[i];
  const double q = a.squared_norm;
  if (q <= 0.0) return 1.0;  // hinge is the constant 1 on a zero row
  return hinge_envelope(p.data->labels[i] * a.dot(x), delta / q);
}

void moreau_grad(const CompositeProblem& p, std::size_t i, std::span<const double> x,
                 double delta, std::span<double> out) {
  check_index(p, i);
  check_dim(p, x);
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (p.loss.kind != loss_kind::hinge && p.loss.kind != loss_kind::smoothed_hinge)
    throw unsupported_operation("Moreau envelope applies to the hinge loss");
  std::fill(out.begin(), out.end(), 0.0);
  const SparseRow& a = p.data->rows[i];
  const double q = a.squared_norm;
  if (q <= 0.0) return;
  const double b = p.data->labels[i];
  a.add_scaled(b * hinge_envelope_slope(b * a.dot(x), delta / q), out);
}

vec moreau_grad(const CompositeProblem& p, std::size_t i, const vec& x, double delta) {
  vec out(x.size());
  moreau_grad(p, i, x, delta, out);
  return out;
}

}  // namespace vropt
