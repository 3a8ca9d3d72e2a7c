#pragma once

// Brute-force number-basis oracle. Everything is built from truncated ladder
// matrices and exact eigen-decompositions; the Gaussian layer is validated
// against these routines in the tests.
//
// With the squeezing phase fixed to zero and displacements restricted to the
// x quadrature, every operator used here is real (density operators are real
// symmetric, unitaries real orthogonal), so the module works in real
// arithmetic throughout.

#include "sqtr/gaussian.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sqtr::fock {

inline constexpr int kDefaultDim = 60;

// Raised when a requested construction cannot be represented in the
// truncated space; carries the offending probability mass.
class truncation_error : public std::runtime_error {
 public:
  truncation_error(const std::string& what, double tail_mass)
      : std::runtime_error(what + " (tail mass " + std::to_string(tail_mass) +
                           ")"),
        tail_mass_(tail_mass) {}
  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

// Lowering operator a on d levels: a|n> = sqrt(n)|n-1>.
inline Eigen::MatrixXd lowering(int d) {
  if (d < 2) throw std::invalid_argument("lowering: need d >= 2");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Eigen::MatrixXd number_operator(int d) {
  Eigen::VectorXd n(d);
  for (int k = 0; k < d; ++k) n(k) = k;
  return n.asDiagonal();
}

inline Eigen::MatrixXd x_operator(int d) {
  const Eigen::MatrixXd a = lowering(d);
  return (a + a.transpose()) / std::sqrt(2.0);
}

// p^2 = -(a^dag - a)^2 / 2, real symmetric.
inline Eigen::MatrixXd p_squared_operator(int d) {
  const Eigen::MatrixXd a = lowering(d);
  const Eigen::MatrixXd m = a.transpose() - a;
  return -0.5 * (m * m);
}

// A = -(omega/2)(a^2 + a^dag^2).
inline Eigen::MatrixXd asymmetry_operator(double omega, int d) {
  const Eigen::MatrixXd a = lowering(d);
  const Eigen::MatrixXd a2 = a * a;
  return -0.5 * omega * (a2 + a2.transpose());
}

namespace detail {

inline double thermal_level_occupancy(double beta0_omega, int level) {
  const double q = std::exp(-beta0_omega);
  return (1.0 - q) * std::pow(q, level);
}

inline void require_seed_fits(double beta0_omega, int d) {
  const double occ = thermal_level_occupancy(beta0_omega, d);
  if (!(occ < 1e-12))
    throw truncation_error("thermal occupancy at the truncation edge too large",
                           occ);
}

// Working dimension for constructions whose true support extends well past
// the requested corner. Two effects are contained to ~1e-26 mass:
//  - geometric tails: per-level ratio max(e^{-beta0 omega}, tanh xi)
//    (squeezing spreads two quanta per step with amplitude tanh xi);
//  - unitary reflection: the squeezed image of seed level n extends to
//    ~ n e^{2 xi}; in a finite box that amplitude reflects onto the top
//    levels instead of leaving, so every seed level with non-negligible
//    occupancy must have its image inside the box.
inline int working_dim(double beta0_omega, double xi, int d) {
  const double q_eff =
      std::max(std::exp(-beta0_omega), std::tanh(std::abs(xi)));
  const double neg_log_target = -std::log(1e-26);  // ~ 59.9
  double need = d;
  if (q_eff > 0.0)
    need = std::max(need, neg_log_target / -std::log(q_eff));
  need = std::max(need,
                  std::exp(2.0 * std::abs(xi)) * neg_log_target / beta0_omega);
  int dw = d;
  while (dw < 16 * d && dw < need) dw *= 2;
  return dw;
}

// Eigenvalues of a density matrix with the tolerated negativity clipped.
// Negativity beyond -1e-12 is a hard error; smaller clips are logged when
// they exceed the noise floor.
inline Eigen::VectorXd clipped_spectrum(const Eigen::VectorXd& raw,
                                        const char* who) {
  const double most_negative = raw.minCoeff();
  if (most_negative < -1e-12)
    throw invalid_state_error(std::string(who) +
                              ": eigenvalue below tolerance, min = " +
                              std::to_string(most_negative));
  if (most_negative < -1e-13)
    std::cerr << who << ": clipping negative eigenvalue " << most_negative
              << "\n";
  Eigen::VectorXd p = raw.cwiseMax(0.0);
  const double total = p.sum();
  if (total > 0.0) p /= total;
  return p;
}

inline void require_symmetric(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols())
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-10))
    throw std::invalid_argument(std::string(who) +
                                ": matrix is not symmetric (non-Hermitian)");
}

}  // namespace detail

// Thermal density operator at inverse temperature beta0, renormalized on the
// truncated space. Errors out if the level-d occupancy is not negligible.
inline Eigen::MatrixXd thermal_density(double beta0, double omega, int d) {
  if (!(beta0 > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("thermal_density: beta0, omega must be > 0");
  if (d < 2) throw std::invalid_argument("thermal_density: need d >= 2");
  detail::require_seed_fits(beta0 * omega, d);
  Eigen::VectorXd p(d);
  for (int n = 0; n < d; ++n) p(n) = std::exp(-beta0 * omega * n);
  p /= p.sum();
  return p.asDiagonal();
}

// Squeezer S(xi) = exp[(xi/2)(a^2 - a^dag^2)], real orthogonal up to
// truncation at the top edge.
inline Eigen::MatrixXd squeeze_unitary(double xi, int d) {
  const Eigen::MatrixXd a = lowering(d);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd gen = 0.5 * xi * (a2 - a2.transpose());
  return gen.exp();
}

// Displacement along x: exp[(dx/sqrt(2))(a^dag - a)], real orthogonal.
inline Eigen::MatrixXd displacement_unitary(double dx, int d) {
  const Eigen::MatrixXd a = lowering(d);
  const Eigen::MatrixXd gen = (dx / std::sqrt(2.0)) * (a.transpose() - a);
  return gen.exp();
}

struct FockMoments {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  double cov_xp = 0.0;
};

inline double density_energy(const Eigen::MatrixXd& rho, double omega) {
  return omega * rho.diagonal().dot(
                     number_operator(static_cast<int>(rho.rows())).diagonal());
}

inline double density_asymmetry(const Eigen::MatrixXd& rho, double omega) {
  return (rho * asymmetry_operator(omega, static_cast<int>(rho.rows())))
      .trace();
}

inline FockMoments density_moments(const Eigen::MatrixXd& rho) {
  const int d = static_cast<int>(rho.rows());
  const Eigen::MatrixXd x = x_operator(d);
  FockMoments m;
  m.mean_x = (rho * x).trace();
  m.mean_p = 0.0;  // identically zero for real density matrices
  m.var_x = (rho * x * x).trace() - m.mean_x * m.mean_x;
  m.var_p = (rho * p_squared_operator(d)).trace();
  m.cov_xp = 0.0;  // (xp + px)/2 has purely imaginary matrix elements
  return m;
}

// Probability mass on the top `levels` levels.
inline double top_mass(const Eigen::MatrixXd& rho, int levels = 5) {
  const int d = static_cast<int>(rho.rows());
  const int lo = std::max(0, d - levels);
  return rho.diagonal().tail(d - lo).sum();
}

// Result of a padded construction: the requested d x d corner plus the
// functionals evaluated at the internal working dimension.
struct FockStateReport {
  Eigen::MatrixXd rho;      // d x d corner, renormalized to unit trace
  int dim = 0;              // requested dimension d
  int dim_used = 0;         // padded working dimension
  double trace_kept = 0.0;  // corner mass before renormalization
  double top5_mass = 0.0;   // top-5-level mass at the working dimension
  double corner_top5_mass = 0.0;  // top-5-level mass of the returned corner
  double energy = 0.0;            // <H>, working dimension
  double asym = 0.0;              // <A>, working dimension
  double entropy = 0.0;           // von Neumann entropy, working dimension
  FockMoments moments;            // quadrature moments, working dimension
};

namespace detail {

inline FockStateReport make_report(const Eigen::MatrixXd& rho_w, int d,
                                   double omega, double entropy_value) {
  FockStateReport rep;
  rep.dim = d;
  rep.dim_used = static_cast<int>(rho_w.rows());
  rep.top5_mass = top_mass(rho_w);
  rep.energy = density_energy(rho_w, omega);
  rep.asym = density_asymmetry(rho_w, omega);
  rep.entropy = entropy_value;
  rep.moments = density_moments(rho_w);
  Eigen::MatrixXd corner = rho_w.topLeftCorner(d, d);
  rep.trace_kept = corner.trace();
  if (!(rep.trace_kept > 0.0))
    throw truncation_error("requested corner carries no mass", 1.0);
  corner /= rep.trace_kept;
  rep.corner_top5_mass = top_mass(corner);
  rep.rho = std::move(corner);
  return rep;
}

}  // namespace detail

// Squeezed thermal state S(xi) rho_th S(xi)^dag, built at a padded working
// dimension and returned as a renormalized d x d corner.
inline FockStateReport squeezed_thermal_density(double beta0, double xi,
                                                double omega,
                                                int d = kDefaultDim) {
  if (d < 20) throw std::invalid_argument("squeezed_thermal_density: d >= 20");
  detail::require_seed_fits(beta0 * omega, d);
  const int dw = detail::working_dim(beta0 * omega, xi, d);
  const Eigen::MatrixXd s = squeeze_unitary(xi, dw);
  const Eigen::MatrixXd rho_w =
      s * thermal_density(beta0, omega, dw) * s.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho_w,
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd p =
      detail::clipped_spectrum(es.eigenvalues(), "squeezed_thermal_density");
  double entropy_value = 0.0;
  for (int k = 0; k < p.size(); ++k)
    if (p(k) > 0.0) entropy_value -= p(k) * std::log(p(k));
  return detail::make_report(rho_w, d, omega, entropy_value);
}

// Generalized Gibbs density exp[-beta(H - mu A)]/Z with beta = beta0 cosh(2 xi)
// and mu = tanh(2 xi), built by direct exponentiation at a padded working
// dimension. Must coincide with squeezed_thermal_density.
inline FockStateReport gge_density(double beta0, double xi, double omega,
                                   int d = kDefaultDim) {
  if (!(beta0 > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("gge_density: beta0, omega must be > 0");
  if (xi < 0.0) throw std::invalid_argument("gge_density: xi must be >= 0");
  if (d < 20) throw std::invalid_argument("gge_density: d >= 20");
  detail::require_seed_fits(beta0 * omega, d);
  const int dw = detail::working_dim(beta0 * omega, xi, d);
  const double beta = beta0 * std::cosh(2.0 * xi);
  const double mu = std::tanh(2.0 * xi);
  const Eigen::MatrixXd k_op =
      beta * (omega * number_operator(dw) - mu * asymmetry_operator(omega, dw));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k_op);
  // Shift by the smallest exponent before exponentiating to avoid underflow.
  const Eigen::VectorXd shifted =
      (-(es.eigenvalues().array() - es.eigenvalues().minCoeff())).exp();
  const Eigen::VectorXd p = shifted / shifted.sum();
  const Eigen::MatrixXd rho_w =
      es.eigenvectors() * p.asDiagonal() * es.eigenvectors().transpose();
  double entropy_value = 0.0;
  for (int k = 0; k < p.size(); ++k)
    if (p(k) > 0.0) entropy_value -= p(k) * std::log(p(k));
  return detail::make_report(rho_w, d, omega, entropy_value);
}

// Trace norm ||A||_1 of a symmetric matrix.
inline double trace_norm(const Eigen::MatrixXd& a) {
  detail::require_symmetric(a, "trace_norm");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// von Neumann entropy by exact eigen-decomposition.
inline double entropy_exact(const Eigen::MatrixXd& rho) {
  detail::require_symmetric(rho, "entropy_exact");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho,
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd p =
      detail::clipped_spectrum(es.eigenvalues(), "entropy_exact");
  double s = 0.0;
  for (int k = 0; k < p.size(); ++k)
    if (p(k) > 0.0) s -= p(k) * std::log(p(k));
  return s;
}

// Matrix logarithm of a density operator with the spectrum floored at 1e-30;
// keeps ln rho finite for numerically rank-deficient inputs.
inline Eigen::MatrixXd log_density(const Eigen::MatrixXd& rho) {
  detail::require_symmetric(rho, "log_density");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw invalid_state_error("log_density: eigenvalue below tolerance");
  const Eigen::VectorXd logs =
      es.eigenvalues().cwiseMax(1e-30).array().log().matrix();
  return es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().transpose();
}

// D(rho || sigma) = Tr[rho ln rho] - Tr[rho ln sigma].
inline double relative_entropy_exact(const Eigen::MatrixXd& rho,
                                     const Eigen::MatrixXd& sigma) {
  detail::require_symmetric(rho, "relative_entropy_exact");
  if (rho.rows() != sigma.rows())
    throw std::invalid_argument("relative_entropy_exact: dimension mismatch");
  return -entropy_exact(rho) - (rho * log_density(sigma)).trace();
}

// Two-mode beam splitter exp[theta_c (a^dag b - a b^dag)] on C^d x C^d.
// The coupling conserves total photon number, so the unitary is assembled
// block-wise over total-number sectors; blocks with total number < d are
// exactly unitary, truncation only touches the high-lying sectors.
class BeamSplitterUnitary {
 public:
  BeamSplitterUnitary(double theta, int d) : d_(d) {
    if (d < 2) throw std::invalid_argument("BeamSplitterUnitary: need d >= 2");
    const int sectors = 2 * d - 1;
    blocks_.reserve(sectors);
    index_.reserve(sectors);
    for (int total = 0; total < sectors; ++total) {
      const int k_lo = std::max(0, total - (d - 1));
      const int k_hi = std::min(total, d - 1);
      const int n = k_hi - k_lo + 1;
      std::vector<int> idx(n);
      for (int t = 0; t < n; ++t) idx[t] = (k_lo + t) * d + (total - k_lo - t);
      Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n, n);
      for (int t = 0; t + 1 < n; ++t) {
        const int k = k_lo + t;  // a^dag b : (k, m) -> (k+1, m-1)
        const double amp = std::sqrt(static_cast<double>((k + 1) * (total - k)));
        gen(t + 1, t) = theta * amp;
        gen(t, t + 1) = -theta * amp;
      }
      blocks_.push_back(n == 1 ? Eigen::MatrixXd::Identity(1, 1).eval()
                               : gen.exp().eval());
      index_.push_back(std::move(idx));
    }
  }

  int dim() const { return d_; }

  // U rho U^T without materializing the d^2 x d^2 unitary.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& rho) const {
    const int dd = d_ * d_;
    if (rho.rows() != dd || rho.cols() != dd)
      throw std::invalid_argument("BeamSplitterUnitary: rho must be d^2 x d^2");
    Eigen::MatrixXd tmp(dd, dd);
    for (std::size_t s = 0; s < blocks_.size(); ++s) {
      const auto& idx = index_[s];
      const int n = static_cast<int>(idx.size());
      Eigen::MatrixXd rows(n, dd);
      for (int t = 0; t < n; ++t) rows.row(t) = rho.row(idx[t]);
      rows = blocks_[s] * rows;
      for (int t = 0; t < n; ++t) tmp.row(idx[t]) = rows.row(t);
    }
    Eigen::MatrixXd out(dd, dd);
    for (std::size_t s = 0; s < blocks_.size(); ++s) {
      const auto& idx = index_[s];
      const int n = static_cast<int>(idx.size());
      Eigen::MatrixXd cols(dd, n);
      for (int t = 0; t < n; ++t) cols.col(t) = tmp.col(idx[t]);
      cols = cols * blocks_[s].transpose();
      for (int t = 0; t < n; ++t) out.col(idx[t]) = cols.col(t);
    }
    return out;
  }

  // Dense d^2 x d^2 matrix; intended for small d.
  Eigen::MatrixXd dense() const {
    const int dd = d_ * d_;
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(dd, dd);
    for (std::size_t s = 0; s < blocks_.size(); ++s) {
      const auto& idx = index_[s];
      const int n = static_cast<int>(idx.size());
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) u(idx[r], idx[c]) = blocks_[s](r, c);
    }
    return u;
  }

 private:
  int d_;
  std::vector<Eigen::MatrixXd> blocks_;
  std::vector<std::vector<int>> index_;
};

inline BeamSplitterUnitary beam_splitter_unitary(double theta, int d) {
  return BeamSplitterUnitary(theta, d);
}

// Kronecker product with the first factor as the slow index: basis |k>|m>
// maps to flat index k*d2 + m.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline Eigen::MatrixXd ptrace_second(const Eigen::MatrixXd& rho2, int d1,
                                     int d2) {
  if (rho2.rows() != d1 * d2)
    throw std::invalid_argument("ptrace_second: dimension mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      for (int m = 0; m < d2; ++m) out(i, j) += rho2(i * d2 + m, j * d2 + m);
  return out;
}

inline Eigen::MatrixXd ptrace_first(const Eigen::MatrixXd& rho2, int d1,
                                    int d2) {
  if (rho2.rows() != d1 * d2)
    throw std::invalid_argument("ptrace_first: dimension mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d2, d2);
  for (int m = 0; m < d2; ++m)
    for (int n = 0; n < d2; ++n)
      for (int i = 0; i < d1; ++i) out(m, n) += rho2(i * d2 + m, i * d2 + n);
  return out;
}

struct FirstOrderEntropyRow {
  double eps = 0.0;
  double err = 0.0;  // |S(rho + eps drho) - S(rho) + eps Tr[drho ln rho]|
};

// Checks the first-order entropy expansion around rho: the residual must be
// second order in eps.
inline std::vector<FirstOrderEntropyRow> verify_first_order_entropy(
    const Eigen::MatrixXd& rho, const Eigen::MatrixXd& drho,
    const std::vector<double>& eps_list) {
  detail::require_symmetric(rho, "verify_first_order_entropy");
  detail::require_symmetric(drho, "verify_first_order_entropy");
  if (std::abs(drho.trace()) > 1e-10)
    throw std::invalid_argument(
        "verify_first_order_entropy: perturbation must be traceless");
  const double s0 = entropy_exact(rho);
  const double first = (drho * log_density(rho)).trace();
  std::vector<FirstOrderEntropyRow> rows;
  rows.reserve(eps_list.size());
  for (double eps : eps_list) {
    const Eigen::MatrixXd pert = rho + eps * drho;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pert,
                                                      Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
      throw invalid_state_error(
          "verify_first_order_entropy: perturbed state has negative "
          "eigenvalue");
    rows.push_back({eps, std::abs(entropy_exact(pert) - s0 + eps * first)});
  }
  return rows;
}

}  // namespace sqtr::fock
