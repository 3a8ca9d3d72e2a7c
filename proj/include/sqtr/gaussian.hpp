#pragma once

// Gaussian states of bosonic modes and symplectic phase-space operations.
//
// Conventions (fixed throughout the library):
//   hbar = k_B = 1,
//   x = (a + a^dag)/sqrt(2),  p = i(a^dag - a)/sqrt(2),  [x, p] = i,
//   vacuum covariance = I/2,
//   quadrature ordering (x_1, p_1, x_2, p_2, ...),
//   mode Hamiltonian H = omega a^dag a (no zero-point term),
//   mode asymmetry   A = -(omega/2)(a^2 + a^dag^2) = (omega/2)(p^2 - x^2).

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqtr {

// Thrown when numbers that should describe a physical state fail validation
// (asymmetric covariance, violated uncertainty relation, bad frequencies).
class invalid_state_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr double kSymmetryTol = 1e-12;    // covariance symmetry
inline constexpr double kHeisenbergTol = 1e-12;  // slack on nu_k >= 1/2
inline constexpr double kSymplecticTol = 1e-10;  // ||S Omega S^T - Omega||_inf

// von Neumann entropy contribution of one symplectic eigenvalue.
inline double entropy_term(double nu) {
  const double a = nu + 0.5;
  const double b = nu - 0.5;
  double s = a * std::log(a);
  if (b > 0.0) s -= b * std::log(b);
  return s;
}

}  // namespace detail

// Symplectic form Omega for `modes` modes in (x_1, p_1, x_2, p_2, ...) order.
inline Eigen::MatrixXd symplectic_form(int modes) {
  if (modes < 1) throw std::invalid_argument("symplectic_form: modes must be >= 1");
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int m = 0; m < modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

// A linear phase-space map S, validated to preserve the symplectic form.
class SymplecticOp {
 public:
  explicit SymplecticOp(Eigen::MatrixXd matrix) : mat_(std::move(matrix)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 2 || mat_.rows() % 2 != 0)
      throw std::invalid_argument("SymplecticOp: matrix must be 2M x 2M");
    const int modes = static_cast<int>(mat_.rows()) / 2;
    const Eigen::MatrixXd omega = symplectic_form(modes);
    const double err =
        (mat_ * omega * mat_.transpose() - omega).cwiseAbs().maxCoeff();
    if (!(err <= detail::kSymplecticTol))
      throw std::invalid_argument(
          "SymplecticOp: matrix is not symplectic, |S Omega S^T - Omega| = " +
          std::to_string(err));
  }

  const Eigen::MatrixXd& matrix() const { return mat_; }
  int modes() const { return static_cast<int>(mat_.rows()) / 2; }

 private:
  Eigen::MatrixXd mat_;
};

// Symplectic eigenvalues of a covariance matrix (ascending). Helper shared by
// validation and entropy; covariance must be symmetric positive definite.
inline Eigen::VectorXd symplectic_eigenvalues_of(const Eigen::MatrixXd& cov) {
  const int modes = static_cast<int>(cov.rows()) / 2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success)
    throw invalid_state_error("covariance eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw invalid_state_error("covariance is not positive definite");
  const Eigen::MatrixXd root =
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().asDiagonal() *
      es.eigenvectors().transpose();
  // Spectrum of |i root Omega root| comes in pairs {+nu_k, -nu_k}.
  const Eigen::MatrixXcd herm =
      std::complex<double>(0.0, 1.0) * (root * symplectic_form(modes) * root);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(herm,
                                                     Eigen::EigenvaluesOnly);
  if (hs.info() != Eigen::Success)
    throw invalid_state_error("symplectic eigenvalue solve failed");
  Eigen::VectorXd nus(modes);
  for (int k = 0; k < modes; ++k) nus(k) = hs.eigenvalues()(modes + k);
  return nus;
}

// Gaussian state: first moments, covariance, and one frequency per mode.
// The covariance is symmetrized on input (within tolerance) and checked
// against the uncertainty relation nu_k >= 1/2.
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd means, Eigen::MatrixXd cov,
                Eigen::VectorXd freqs)
      : means_(std::move(means)), cov_(std::move(cov)), freqs_(std::move(freqs)) {
    const int modes = static_cast<int>(freqs_.size());
    if (modes < 1) throw std::invalid_argument("GaussianState: need >= 1 mode");
    if (means_.size() != 2 * modes || cov_.rows() != 2 * modes ||
        cov_.cols() != 2 * modes)
      throw std::invalid_argument("GaussianState: dimension mismatch");
    if (freqs_.minCoeff() <= 0.0)
      throw std::invalid_argument("GaussianState: frequencies must be > 0");
    const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= detail::kSymmetryTol))
      throw invalid_state_error("covariance asymmetry " + std::to_string(asym));
    cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
    const Eigen::VectorXd nus = symplectic_eigenvalues_of(cov_);
    if (nus.minCoeff() < 0.5 - detail::kHeisenbergTol)
      throw invalid_state_error("uncertainty relation violated, min nu = " +
                                std::to_string(nus.minCoeff()));
  }

  int modes() const { return static_cast<int>(freqs_.size()); }
  const Eigen::VectorXd& means() const { return means_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  const Eigen::VectorXd& freqs() const { return freqs_; }

 private:
  Eigen::VectorXd means_;
  Eigen::MatrixXd cov_;
  Eigen::VectorXd freqs_;
};

inline GaussianState make_vacuum(double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("make_vacuum: omega must be > 0");
  Eigen::VectorXd freqs(1);
  freqs << omega;
  return GaussianState(Eigen::VectorXd::Zero(2),
                       Eigen::MatrixXd::Identity(2, 2) / 2.0, freqs);
}

// Thermal state with mean occupation n_th: covariance (n_th + 1/2) I.
inline GaussianState make_thermal(double n_th, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("make_thermal: omega must be > 0");
  if (n_th < 0.0) throw std::invalid_argument("make_thermal: n_th must be >= 0");
  Eigen::VectorXd freqs(1);
  freqs << omega;
  return GaussianState(Eigen::VectorXd::Zero(2),
                       (n_th + 0.5) * Eigen::MatrixXd::Identity(2, 2), freqs);
}

// Single-mode squeezer S(xi) = exp[(xi/2)(a^2 - a^dag^2)]:
// x -> e^{-xi} x, p -> e^{+xi} p on the given mode.
inline SymplecticOp squeeze_op(double xi, int mode, int modes) {
  if (mode < 0 || mode >= modes)
    throw std::invalid_argument("squeeze_op: mode index out of range");
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  s(2 * mode, 2 * mode) = std::exp(-xi);
  s(2 * mode + 1, 2 * mode + 1) = std::exp(xi);
  return SymplecticOp(std::move(s));
}

// Beam splitter exp[theta (a^dag b - a b^dag)] on modes (i, j):
//   x_i -> cos(theta) x_i + sin(theta) x_j,  x_j -> cos(theta) x_j - sin(theta) x_i
// (same rotation on p). theta = pi/2 swaps the modes (up to sign).
inline SymplecticOp beam_splitter_op(double theta, int i, int j, int modes) {
  if (i < 0 || i >= modes || j < 0 || j >= modes || i == j)
    throw std::invalid_argument("beam_splitter_op: bad mode indices");
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  for (int q = 0; q < 2; ++q) {  // q = 0 for x, 1 for p
    s(2 * i + q, 2 * i + q) = c;
    s(2 * i + q, 2 * j + q) = sn;
    s(2 * j + q, 2 * i + q) = -sn;
    s(2 * j + q, 2 * j + q) = c;
  }
  return SymplecticOp(std::move(s));
}

// Phase-space rotation exp[-i phi a^dag a] on one mode:
// (x, p) -> (cos(phi) x + sin(phi) p, -sin(phi) x + cos(phi) p).
inline SymplecticOp rotation_op(double phi, int mode, int modes) {
  if (mode < 0 || mode >= modes)
    throw std::invalid_argument("rotation_op: mode index out of range");
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  const double c = std::cos(phi);
  const double sn = std::sin(phi);
  s(2 * mode, 2 * mode) = c;
  s(2 * mode, 2 * mode + 1) = sn;
  s(2 * mode + 1, 2 * mode) = -sn;
  s(2 * mode + 1, 2 * mode + 1) = c;
  return SymplecticOp(std::move(s));
}

inline GaussianState apply(const SymplecticOp& op, const GaussianState& state) {
  if (op.modes() != state.modes())
    throw std::invalid_argument("apply: operator/state mode count mismatch");
  return GaussianState(op.matrix() * state.means(),
                       op.matrix() * state.cov() * op.matrix().transpose(),
                       state.freqs());
}

// Optional phase-space displacement of one mode by (dx, dp).
inline GaussianState displace(const GaussianState& state, int mode, double dx,
                              double dp) {
  if (mode < 0 || mode >= state.modes())
    throw std::invalid_argument("displace: mode index out of range");
  Eigen::VectorXd m = state.means();
  m(2 * mode) += dx;
  m(2 * mode + 1) += dp;
  return GaussianState(std::move(m), state.cov(), state.freqs());
}

inline GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int na = 2 * a.modes();
  const int nb = 2 * b.modes();
  Eigen::VectorXd means(na + nb);
  means << a.means(), b.means();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  Eigen::VectorXd freqs(a.modes() + b.modes());
  freqs << a.freqs(), b.freqs();
  return GaussianState(std::move(means), std::move(cov), std::move(freqs));
}

// Reduced state on the listed modes (kept in the order given).
inline GaussianState partial_trace(const GaussianState& state,
                                   const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep list");
  for (std::size_t u = 0; u < keep.size(); ++u) {
    if (keep[u] < 0 || keep[u] >= state.modes())
      throw std::invalid_argument("partial_trace: mode index out of range");
    for (std::size_t v = u + 1; v < keep.size(); ++v)
      if (keep[u] == keep[v])
        throw std::invalid_argument("partial_trace: duplicate mode index");
  }
  const int m = static_cast<int>(keep.size());
  std::vector<int> idx;
  idx.reserve(2 * m);
  for (int k : keep) {
    idx.push_back(2 * k);
    idx.push_back(2 * k + 1);
  }
  Eigen::VectorXd means(2 * m);
  Eigen::MatrixXd cov(2 * m, 2 * m);
  Eigen::VectorXd freqs(m);
  for (int r = 0; r < 2 * m; ++r) {
    means(r) = state.means()(idx[r]);
    for (int c = 0; c < 2 * m; ++c) cov(r, c) = state.cov()(idx[r], idx[c]);
  }
  for (int k = 0; k < m; ++k) freqs(k) = state.freqs()(keep[k]);
  return GaussianState(std::move(means), std::move(cov), std::move(freqs));
}

inline Eigen::VectorXd symplectic_eigenvalues(const GaussianState& state) {
  return symplectic_eigenvalues_of(state.cov());
}

// von Neumann entropy S = sum_k [(nu_k + 1/2) ln(nu_k + 1/2)
//                               - (nu_k - 1/2) ln(nu_k - 1/2)].
inline double entropy(const GaussianState& state) {
  const Eigen::VectorXd nus = symplectic_eigenvalues(state);
  double s = 0.0;
  for (int k = 0; k < nus.size(); ++k) {
    // Clamp tiny numerical undershoot below the vacuum floor.
    s += detail::entropy_term(std::max(nus(k), 0.5));
  }
  return s;
}

// <H_mode> = omega [ (sigma_xx + sigma_pp)/2 + (x^2 + p^2)/2 - 1/2 ].
inline double energy(const GaussianState& state, int mode) {
  if (mode < 0 || mode >= state.modes())
    throw std::invalid_argument("energy: mode index out of range");
  const double omega = state.freqs()(mode);
  const double sxx = state.cov()(2 * mode, 2 * mode);
  const double spp = state.cov()(2 * mode + 1, 2 * mode + 1);
  const double mx = state.means()(2 * mode);
  const double mp = state.means()(2 * mode + 1);
  return omega * (0.5 * (sxx + spp) + 0.5 * (mx * mx + mp * mp) - 0.5);
}

// <A_mode> = (omega/2) [ sigma_pp + p^2 - sigma_xx - x^2 ].
inline double asymmetry(const GaussianState& state, int mode) {
  if (mode < 0 || mode >= state.modes())
    throw std::invalid_argument("asymmetry: mode index out of range");
  const double omega = state.freqs()(mode);
  const double sxx = state.cov()(2 * mode, 2 * mode);
  const double spp = state.cov()(2 * mode + 1, 2 * mode + 1);
  const double mx = state.means()(2 * mode);
  const double mp = state.means()(2 * mode + 1);
  return 0.5 * omega * (spp + mp * mp - sxx - mx * mx);
}

// Observable of the form (1/2) r^T Q r + c with r = (x_1, p_1, ...).
// Expectation over a Gaussian state: (1/2) Tr[Q sigma] + (1/2) m^T Q m + c.
struct QuadraticObservable {
  Eigen::MatrixXd quad;
  double constant = 0.0;

  double expectation(const GaussianState& state) const {
    if (quad.rows() != state.cov().rows())
      throw std::invalid_argument("QuadraticObservable: dimension mismatch");
    return 0.5 * (quad * state.cov()).trace() +
           0.5 * state.means().dot(quad * state.means()) + constant;
  }
};

// H = omega a^dag a as a quadratic form: (omega/2)(x^2 + p^2) - omega/2.
inline QuadraticObservable hamiltonian_observable(double omega, int mode,
                                                  int modes) {
  if (mode < 0 || mode >= modes)
    throw std::invalid_argument("hamiltonian_observable: mode out of range");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  q(2 * mode, 2 * mode) = omega;
  q(2 * mode + 1, 2 * mode + 1) = omega;
  return QuadraticObservable{std::move(q), -0.5 * omega};
}

// A = (omega/2)(p^2 - x^2) as a quadratic form.
inline QuadraticObservable asymmetry_observable(double omega, int mode,
                                                int modes) {
  if (mode < 0 || mode >= modes)
    throw std::invalid_argument("asymmetry_observable: mode out of range");
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  q(2 * mode, 2 * mode) = -omega;
  q(2 * mode + 1, 2 * mode + 1) = omega;
  return QuadraticObservable{std::move(q), 0.0};
}

}  // namespace sqtr
