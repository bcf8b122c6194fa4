#include <cmath>

#include "vropt/solvers.hpp"

namespace vropt {

double momentum_bound(double l_tilde, double eta, double tau_b) {
  const double le = l_tilde * eta;
  if (!(le < 1.0)) throw config_error("step size too large: L~*eta must be < 1");
  return 1.0 - tau_b * le / (1.0 - le);
}

double omega_optimal(std::size_t m, double mu, double eta, double l_tilde) {
  if (!(mu > 0.0)) throw config_error("omega* needs mu > 0");
  if (!(eta > 0.0)) throw config_error("omega* needs eta > 0");
  const double w = 0.5 * static_cast<double>(m) * mu * eta;
  const double bound = momentum_bound(l_tilde, eta);
  if (w > bound)
    throw config_error("omega* = m*mu*eta/2 violates the momentum constraint; decrease eta");
  return w;
}

double omega_next(double omega_prev) {
  if (!(omega_prev > 0.0)) throw config_error("momentum weight must be positive");
  // algebraically (sqrt(w^4 + 4w^2) - w^2)/2, rearranged to avoid cancellation
  return 2.0 / (1.0 + std::sqrt(1.0 + 4.0 / (omega_prev * omega_prev)));
}

double contraction_factor(double omega, std::size_t m, double mu, double eta) {
  return 1.0 - omega + omega * omega / (static_cast<double>(m) * mu * eta);
}

PresetParams table_preset(option_kind option, std::size_t m, double mu, double l_tilde) {
  if (!(mu > 0.0) || !(l_tilde > 0.0) || m == 0)
    throw config_error("table presets need m >= 1, mu > 0 and L~ > 0");
  const double md = static_cast<double>(m);
  const double ratio = md * mu / l_tilde;
  PresetParams out;
  if (option == option_kind::option_i) {
    if (ratio >= 0.68623 && ratio <= 145.72) {
      out.eta = (2.0 / 5.0) * std::sqrt(1.0 / (mu * md * l_tilde));
      out.omega = (2.0 / 25.0) * std::sqrt(ratio);
      out.m = m;
    } else {
      out.eta = 1.0 / (5.0 * l_tilde);
      out.omega = 1.0 / 5.0;
      out.m = static_cast<std::size_t>(std::ceil(2.0 * l_tilde / mu));
    }
    out.restart_every = 0;
    return out;
  }
  // Option II, restarted
  if (ratio <= 0.75) {
    out.eta = 1.0 / (3.0 * l_tilde);
    out.omega = std::sqrt(ratio / 3.0);
  } else {
    out.eta = 1.0 / (4.0 * md * mu);
    out.omega = 0.5;
  }
  out.m = m;
  const double s =
      2.0 * ((1.0 - out.omega) / out.omega + out.omega / (out.eta * md * mu));
  out.restart_every = static_cast<int>(std::ceil(s - 1e-12));
  return out;
}

const char* method_name(method_kind m) {
  switch (m) {
    case method_kind::asvrg_sc: return "asvrg_sc";
    case method_kind::asvrg_nsc: return "asvrg_nsc";
    case method_kind::asvrg_plain: return "asvrg_plain";
    case method_kind::svrg: return "svrg";
    case method_kind::prox_sgd: return "prox_sgd";
    case method_kind::saga: return "saga";
    case method_kind::katyusha: return "katyusha";
    case method_kind::adapt_reg: return "adapt_reg";
    case method_kind::adapt_smooth: return "adapt_smooth";
  }
  return "unknown";
}

}  // namespace vropt
