#include "sqtr/reservoir.hpp"

#include "sqtr/fock.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using namespace sqtr;
namespace fk = sqtr::fock;

constexpr double kNth1 = 0.581976706869326424;  // 1/(e - 1)

TEST(DerivePotentials, HyperbolicClosedForms) {
  const auto [beta, mu] = derive_potentials(1.0, 0.5);
  EXPECT_NEAR(beta, 1.543080634815243778, 1e-15);  // cosh 1
  EXPECT_NEAR(mu, 0.761594155955764888, 1e-15);    // tanh 1
  const auto [b0, m0] = derive_potentials(0.7, 0.0);
  EXPECT_DOUBLE_EQ(b0, 0.7);
  EXPECT_DOUBLE_EQ(m0, 0.0);
}

TEST(DerivePotentials, AsymptoticsAndMonotonicity) {
  double prev = 0.0;
  for (double xi : {0.5, 1.0, 2.0, 3.0}) {
    const double mu = derive_potentials(1.0, xi).second;
    EXPECT_GT(mu, prev);
    EXPECT_LT(mu, 1.0);
    prev = mu;
  }
  // beta/beta0 approaches e^{2 xi}/2 for large xi.
  const double beta = derive_potentials(1.0, 5.0).first;
  EXPECT_NEAR(beta / (std::exp(10.0) / 2.0), 1.0, 1e-8);
  EXPECT_THROW(derive_potentials(0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(derive_potentials(1.0, -0.5), std::invalid_argument);
}

TEST(EquilibriumState, MatchesClosedFormMoments) {
  const ReservoirSpec r(1.0, 0.5, 1.0);
  EXPECT_NEAR(r.n_th(), kNth1, 1e-15);
  const GaussianState eq = equilibrium_state(r);
  const double width = 2.0 * kNth1 + 1.0;
  EXPECT_NEAR(eq.cov()(0, 0), width * std::exp(-1.0) / 2.0, 1e-14);
  EXPECT_NEAR(eq.cov()(1, 1), width * std::exp(1.0) / 2.0, 1e-14);
  EXPECT_NEAR(eq.cov()(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(eq.means().norm(), 0.0, 1e-15);
  // <A> = omega sinh(2 xi)(n_th + 1/2).
  EXPECT_NEAR(asymmetry(eq, 0), 1.271540317407621889, 1e-13);
  // Entropy is the thermal entropy at beta0, untouched by squeezing.
  const double s_th =
      (kNth1 + 1) * std::log(kNth1 + 1) - kNth1 * std::log(kNth1);
  EXPECT_NEAR(entropy(eq), s_th, 1e-12);
}

TEST(EquilibriumState, ZeroSqueezingIsThermal) {
  const GaussianState eq = equilibrium_state(ReservoirSpec(1.3, 0.0, 2.0));
  const GaussianState th = make_thermal(1.0 / std::expm1(2.6), 2.0);
  EXPECT_LE((eq.cov() - th.cov()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EntropyFlow, IdentitiesExactByConstruction) {
  const ReservoirSpec r(0.8, 0.6, 1.2);
  for (double dE : {-0.3, 0.0, 0.7}) {
    for (double dA : {-0.2, 0.0, 0.5}) {
      const FlowRecord f = entropy_flow(r, dE, dA);
      EXPECT_NEAR(f.dS_R, r.beta() * (dE - r.mu() * dA), 1e-15);
      EXPECT_NEAR(f.Q_R + f.W_R, f.dE_R, 1e-14);
      EXPECT_NEAR(f.W_R, r.mu() * dA, 1e-15);
    }
  }
  // Thermal limit and pure-work exchange.
  EXPECT_DOUBLE_EQ(entropy_flow(r, 0.4, 0.0).W_R, 0.0);
  const double dA = 0.3;
  const FlowRecord pure = entropy_flow(r, r.mu() * dA, dA);
  EXPECT_NEAR(pure.Q_R, 0.0, 1e-15);
  EXPECT_THROW(entropy_flow(r, std::nan(""), 0.0), std::invalid_argument);
}

TEST(OmegaPotential, EquilibriumValueAndExcess) {
  const ReservoirSpec r(1.0, 0.5, 1.0);
  EXPECT_NEAR(r.log_z0(), 0.458675145387082, 1e-14);
  const GaussianState eq = equilibrium_state(r);
  EXPECT_NEAR(omega_potential(eq, r), -r.log_z() / r.beta(), 1e-12);
  // Thermal input: excess = sinh^2(xi)(2 n_th + 1)/cosh(2 xi).
  const GaussianState th = make_thermal(r.n_th(), 1.0);
  EXPECT_NEAR(omega_potential(th, r) - omega_potential(eq, r),
              0.380797077977882444, 1e-12);
  EXPECT_NEAR(omega_potential(th, r) - omega_potential(eq, r),
              relative_entropy_to_gge(th, r) / r.beta(), 1e-13);
}

TEST(OmegaPotential, ReducesToFreeEnergyWithoutSqueezing) {
  const ReservoirSpec r(1.0, 0.0, 1.0);
  const GaussianState s = apply(squeeze_op(0.3, 0, 1), make_thermal(0.4, 1.0));
  EXPECT_NEAR(omega_potential(s, r), noneq_free_energy(s, r), 1e-15);
}

TEST(OmegaPotential, RequiresResonantSingleMode) {
  const ReservoirSpec r(1.0, 0.5, 1.0);
  EXPECT_THROW(omega_potential(make_thermal(0.5, 1.1), r),
               std::invalid_argument);
  const GaussianState two =
      tensor(make_vacuum(1.0), make_vacuum(1.0));
  EXPECT_THROW(omega_potential(two, r), std::invalid_argument);
  EXPECT_THROW(relative_entropy_to_gge(make_thermal(0.5, 2.0), r),
               std::invalid_argument);
}

TEST(RelativeEntropyToGge, ClosedFormAndPositivity) {
  const ReservoirSpec r(1.0, 0.5, 1.0);
  EXPECT_NEAR(relative_entropy_to_gge(equilibrium_state(r), r), 0.0, 1e-12);
  // D(thermal(beta0) || eq) = beta0 omega sinh^2(xi)(2 n_th + 1) = sinh(1)/2.
  EXPECT_NEAR(relative_entropy_to_gge(make_thermal(r.n_th(), 1.0), r),
              0.587600596821900728, 1e-12);
}

TEST(XiStar, ClosedFormValuesAndMonotonicity) {
  EXPECT_NEAR(xi_star(0.01), 2.649162849916380, 1e-12);
  EXPECT_NEAR(xi_star(0.1), 1.498282560558831, 1e-12);
  EXPECT_NEAR(xi_star(1.0), 0.385968416452652, 1e-12);
  EXPECT_NEAR(xi_star(0.01), 2.65, 0.01);
  EXPECT_NEAR(xi_star(1.0), 0.39, 0.01);
  EXPECT_GT(xi_star(0.5), xi_star(1.0));
  EXPECT_THROW(xi_star(0.0), std::invalid_argument);
}

// Among states sharing the equilibrium (<H>, <A>), equilibrium maximizes the
// entropy: xp correlations or displacements only lower it.
TEST(MaxEntropy, EquilibriumBeatsConstrainedFamily) {
  const ReservoirSpec r(1.0, 0.5, 1.0);
  const GaussianState eq = equilibrium_state(r);
  const double s_eq = entropy(eq);
  const double e_eq = energy(eq, 0);
  const double a_eq = asymmetry(eq, 0);
  int checked = 0;
  for (double m : {0.0, 0.2, 0.4}) {
    for (double c : {-0.15, -0.05, 0.0, 0.05, 0.15}) {
      Eigen::MatrixXd cov = eq.cov();
      cov(0, 0) -= m * m;
      cov(0, 1) = cov(1, 0) = c;
      Eigen::VectorXd means(2);
      means << m, 0.0;
      GaussianState s(means, cov, eq.freqs());
      EXPECT_NEAR(energy(s, 0), e_eq, 1e-12);
      EXPECT_NEAR(asymmetry(s, 0), a_eq, 1e-12);
      EXPECT_LE(entropy(s), s_eq + 1e-9);
      if (m != 0.0 || c != 0.0) EXPECT_LT(entropy(s), s_eq);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 15);
}

TEST(OmegaPositivity, SampledStatesNeverBeatEquilibrium) {
  const ReservoirSpec r(1.0, 0.5, 1.0);
  const double omega_eq = omega_potential(equilibrium_state(r), r);
  std::mt19937_64 rng(20240817);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double nu = 0.5 + 2.5 * u(rng);
    const double eta = -1.0 + 2.0 * u(rng);
    const double phi = M_PI * u(rng);
    const SymplecticOp op(rotation_op(phi, 0, 1).matrix() *
                          squeeze_op(eta, 0, 1).matrix());
    GaussianState s =
        apply(op, make_thermal(nu - 0.5, 1.0));
    s = displace(s, 0, -1.0 + 2.0 * u(rng), -1.0 + 2.0 * u(rng));
    EXPECT_GE(omega_potential(s, r), omega_eq - 1e-12);
    EXPECT_GE(relative_entropy_to_gge(s, r), -1e-12);
  }
}

// Collision-induced reservoir free-energy change: dF_R - mu dA_R is second
// order in the mixing angle (it equals D(rho_R' || rho_R)/beta).
TEST(MuAsMarginalFreeEnergy, SecondOrderInCollisionAngle) {
  const ReservoirSpec r(1.0, 0.5, 1.0);
  const GaussianState res = equilibrium_state(r);
  const GaussianState sys = displace(make_thermal(0.3, 1.0), 0, 0.6, -0.2);
  auto err_at = [&](double theta) {
    const GaussianState out =
        apply(beam_splitter_op(theta, 0, 1, 2), tensor(sys, res));
    const GaussianState res_after = partial_trace(out, {1});
    const double dF = noneq_free_energy(res_after, r) - noneq_free_energy(res, r);
    const double dA = asymmetry(res_after, 0) - asymmetry(res, 0);
    return std::abs(dF - r.mu() * dA);
  };
  const double ratio = err_at(0.1) / err_at(0.2);
  EXPECT_GE(ratio, 0.2);
  EXPECT_LE(ratio, 0.3);
}

// The entropy-flow definition beta(dE_R - mu dA_R) reproduces the exact
// first-order entropy change -Tr[drho_R ln rho_R] of the number-basis oracle.
TEST(EntropyFlow, MatchesFockOracleFirstOrderForm) {
  const int d = 60;
  const ReservoirSpec r(1.0, 0.5, 1.0);
  const GaussianState res = equilibrium_state(r);
  const Eigen::MatrixXd rho_r = fk::gge_density(r.beta0, r.xi, r.omega, d).rho;
  const Eigen::MatrixXd lg = fk::log_density(rho_r);
  const Eigen::MatrixXd disp = fk::displacement_unitary(0.4, d);
  const Eigen::MatrixXd rho_s =
      disp * fk::thermal_density(1.0, 1.0, d) * disp.transpose();
  const GaussianState sys = displace(make_thermal(kNth1, 1.0), 0, 0.4, 0.0);
  for (double theta : {0.05, 0.1}) {
    const Eigen::MatrixXd out =
        fk::BeamSplitterUnitary(theta, d).apply(fk::kron(rho_s, rho_r));
    const Eigen::MatrixXd rho_r_after = fk::ptrace_first(out, d, d);
    const double dE = fk::density_energy(rho_r_after, 1.0) -
                      fk::density_energy(rho_r, 1.0);
    const double dA = fk::density_asymmetry(rho_r_after, 1.0) -
                      fk::density_asymmetry(rho_r, 1.0);
    const double flow = entropy_flow(r, dE, dA).dS_R;
    const double oracle = -((rho_r_after - rho_r) * lg).trace();
    EXPECT_NEAR(flow, oracle, 1e-8);
    // Gaussian-layer deltas agree with the Fock deltas.
    const GaussianState gout =
        apply(beam_splitter_op(theta, 0, 1, 2), tensor(sys, res));
    const GaussianState gres = partial_trace(gout, {1});
    EXPECT_NEAR(energy(gres, 0) - energy(res, 0), dE, 1e-8);
    EXPECT_NEAR(asymmetry(gres, 0) - asymmetry(res, 0), dA, 1e-8);
  }
}

}  // namespace
