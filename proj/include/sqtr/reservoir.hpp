#pragma once

// The squeezed thermal reservoir as a generalized equilibrium object:
// potentials (beta, mu), the equilibrium mode state, entropy flow with its
// heat/work split, and the Omega potential whose excess over equilibrium is
// the relative entropy.

#include "sqtr/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sqtr {

// Physical description of one reservoir mode: thermal seed at inverse
// temperature beta0, squeezed by xi >= 0 (phase fixed to zero), frequency
// omega. Derived generalized-Gibbs multipliers: beta = beta0 cosh(2 xi),
// mu = tanh(2 xi) in [0, 1).
struct ReservoirSpec {
  double beta0 = 1.0;
  double xi = 0.0;
  double theta = 0.0;  // squeezing phase, fixed to zero by convention
  double omega = 1.0;

  ReservoirSpec() = default;
  ReservoirSpec(double beta0_in, double xi_in, double omega_in)
      : beta0(beta0_in), xi(xi_in), omega(omega_in) {
    validate();
  }

  void validate() const {
    if (!(beta0 > 0.0))
      throw std::invalid_argument("ReservoirSpec: beta0 must be > 0");
    if (!(omega > 0.0))
      throw std::invalid_argument("ReservoirSpec: omega must be > 0");
    if (xi < 0.0)
      throw std::invalid_argument(
          "ReservoirSpec: xi must be >= 0 (negative squeezing is a phase "
          "rotation, excluded to keep theta = 0)");
    if (theta != 0.0)
      throw std::invalid_argument("ReservoirSpec: theta is fixed to 0");
  }

  double beta() const { return beta0 * std::cosh(2.0 * xi); }
  double mu() const { return std::tanh(2.0 * xi); }
  double n_th() const { return 1.0 / std::expm1(beta0 * omega); }
  double log_z0() const { return -std::log(-std::expm1(-beta0 * omega)); }
  // ln Z = ln Z0 + beta0 omega sinh^2(xi): the additive constant from
  // beta0 S H S^dag = beta (H - mu A) + beta0 omega sinh^2(xi), required for
  // Omega(eq) = -(ln Z)/beta to match the relative-entropy identity.
  double log_z() const {
    const double sh = std::sinh(xi);
    return log_z0() + beta0 * omega * sh * sh;
  }
};

inline std::pair<double, double> derive_potentials(double beta0, double xi) {
  const ReservoirSpec r(beta0, xi, 1.0);
  return {r.beta(), r.mu()};
}

// Squeezed thermal equilibrium state of one reservoir mode:
// Dx^2 = (2 n_th + 1) e^{-2 xi}/2, Dp^2 = (2 n_th + 1) e^{+2 xi}/2.
inline GaussianState equilibrium_state(const ReservoirSpec& r) {
  r.validate();
  return apply(squeeze_op(r.xi, 0, 1), make_thermal(r.n_th(), r.omega));
}

// Reservoir-side bookkeeping of one exchange: entropy flow and the
// heat/work split. All identities hold exactly by construction.
struct FlowRecord {
  double dE_R = 0.0;
  double dA_R = 0.0;
  double dS_R = 0.0;  // beta (dE_R - mu dA_R)
  double Q_R = 0.0;   // dS_R / beta
  double W_R = 0.0;   // mu dA_R
};

inline FlowRecord entropy_flow(const ReservoirSpec& r, double dE_R,
                               double dA_R) {
  if (!std::isfinite(dE_R) || !std::isfinite(dA_R))
    throw std::invalid_argument("entropy_flow: inputs must be finite");
  FlowRecord f;
  f.dE_R = dE_R;
  f.dA_R = dA_R;
  f.dS_R = r.beta() * (dE_R - r.mu() * dA_R);
  f.W_R = r.mu() * dA_R;
  f.Q_R = f.dS_R / r.beta();
  return f;
}

namespace detail {

inline void require_resonant_single_mode(const GaussianState& s,
                                         const ReservoirSpec& r,
                                         const char* who) {
  if (s.modes() != 1)
    throw std::invalid_argument(std::string(who) + ": state must be one mode");
  if (std::abs(s.freqs()(0) - r.omega) > 1e-12)
    throw std::invalid_argument(std::string(who) +
                                ": mode is not resonant with the reservoir");
}

}  // namespace detail

// Omega = <H> - mu <A> - S/beta; Omega(s) - Omega(eq) = D(s||eq)/beta >= 0
// with Omega(eq) = -(ln Z)/beta.
inline double omega_potential(const GaussianState& s, const ReservoirSpec& r) {
  detail::require_resonant_single_mode(s, r, "omega_potential");
  return energy(s, 0) - r.mu() * asymmetry(s, 0) - entropy(s) / r.beta();
}

// Nonequilibrium free energy F = <H> - S/beta (coincides with Omega at mu=0).
inline double noneq_free_energy(const GaussianState& s,
                                const ReservoirSpec& r) {
  detail::require_resonant_single_mode(s, r, "noneq_free_energy");
  return energy(s, 0) - entropy(s) / r.beta();
}

// D(s || equilibrium(r)) = -S(s) + beta(<H> - mu <A>) + ln Z, exact for
// Gaussian s against the generalized Gibbs reference.
inline double relative_entropy_to_gge(const GaussianState& s,
                                      const ReservoirSpec& r) {
  detail::require_resonant_single_mode(s, r, "relative_entropy_to_gge");
  return -entropy(s) +
         r.beta() * (energy(s, 0) - r.mu() * asymmetry(s, 0)) + r.log_z();
}

// Squeezing threshold beyond which the squeezed quadrature drops below shot
// noise: xi* = (1/2) ln coth(beta0 omega / 2); monotone decreasing.
inline double xi_star(double beta0_omega) {
  if (!(beta0_omega > 0.0))
    throw std::invalid_argument("xi_star: beta0*omega must be > 0");
  return 0.5 * std::log(1.0 / std::tanh(beta0_omega / 2.0));
}

}  // namespace sqtr
