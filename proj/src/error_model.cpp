#include "bosonstat/error_model.hpp"

#include <algorithm>
#include <cmath>

namespace bosonstat::error_model {

double DephasingParams::bandwidth() const {
  require(!omegas.empty(), "DephasingParams: no eigenfrequencies");
  const auto [mn, mx] = std::minmax_element(omegas.begin(), omegas.end());
  return *mx - *mn;
}

MatrixXcd dephase(const MatrixXcd& rho, const DephasingParams& params) {
  require(params.sigma_s >= 0.0 && params.t >= 0.0, "dephase: sigma_s and t must be nonnegative");
  const Eigen::Index d = rho.rows();
  require(rho.cols() == d, "dephase: density matrix must be square");
  require(static_cast<Eigen::Index>(params.omegas.size()) == d,
          "dephase: need one eigenfrequency per level");
  require((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-8, "dephase: input must be Hermitian");
  MatrixXcd out(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double phase = params.sigma_s * (params.omegas[i] - params.omegas[k]) * params.t;
      out(i, k) = rho(i, k) * std::exp(-phase * phase / 2.0);
    }
  }
  return out;
}

double fidelity_after_dephasing(const MatrixXcd& rho0, const DephasingParams& params) {
  const Eigen::Index d = rho0.rows();
  require(rho0.cols() == d, "fidelity_after_dephasing: density matrix must be square");
  const double purity = (rho0 * rho0).trace().real();
  require(std::abs(purity - 1.0) <= 1e-8, "fidelity_after_dephasing: target must be pure");
  double f = 0.0;
  for (Eigen::Index kp = 0; kp < d; ++kp) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double phase = params.sigma_s * (params.omegas[kp] - params.omegas[k]) * params.t;
      f += std::norm(rho0(kp, k)) * std::exp(-phase * phase / 2.0);
    }
  }
  return f;
}

double fidelity_lower_bound(double n, double sigma_s, double bandwidth, double t) {
  require(n >= 0.0 && sigma_s >= 0.0 && bandwidth >= 0.0 && t >= 0.0,
          "fidelity_lower_bound: parameters must be nonnegative");
  const double arg = n * sigma_s * bandwidth * t;
  return std::exp(-arg * arg / 2.0);
}

}  // namespace bosonstat::error_model
