#pragma once

#include <vector>

#include "bosonstat/common.hpp"

// Gaussian laser-power-fluctuation dephasing: transformed density matrices
// in the energy eigenbasis, exact fidelity for pure targets, and the
// single-/many-body fidelity lower bounds.
namespace bosonstat::error_model {

struct DephasingParams {
  double sigma_s = 0.0;         // dimensionless fluctuation std
  double t = 0.0;               // time; same unit convention as 1/omega
  std::vector<double> omegas;   // eigenfrequencies (unit is the caller's contract)

  double bandwidth() const;     // W = max(omega) - min(omega)
};

// rho' = sum_ik rho_ik exp(-(sigma_s (omega_i - omega_k) t)^2 / 2) |i><k|:
// elementwise Gaussian damping of the off-diagonal terms in the energy
// eigenbasis.
MatrixXcd dephase(const MatrixXcd& rho, const DephasingParams& params);

// F = sum_{k k'} |rho_{k'k}|^2 exp(-(sigma_s (omega_k' - omega_k) t)^2 / 2)
// for a pure target state (purity within 1e-8 of 1).
double fidelity_after_dephasing(const MatrixXcd& rho0, const DephasingParams& params);

// F_n >= exp(-(n sigma_s W t)^2 / 2); the many-body bandwidth is n W.
double fidelity_lower_bound(double n, double sigma_s, double bandwidth, double t);

}  // namespace bosonstat::error_model
