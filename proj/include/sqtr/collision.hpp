#pragma once

// Repeated-interaction dynamics: collisions with fresh reservoir modes
// through a number-conserving beam splitter, unitary driving steps, and the
// per-step thermodynamic ledger (first law, entropy flow, entropy
// production).

#include "sqtr/gaussian.hpp"
#include "sqtr/reservoir.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sqtr {

struct CollisionConfig {
  double theta_c = 0.1;  // per-collision mixing angle, 0 < theta_c <= pi/2
  ReservoirSpec reservoir;
  int steps = 1;

  void validate() const {
    reservoir.validate();
    if (!(theta_c > 0.0) || !(theta_c <= M_PI / 2 + 1e-15))
      throw std::invalid_argument(
          "CollisionConfig: need 0 < theta_c <= pi/2");
    if (steps < 1)
      throw std::invalid_argument("CollisionConfig: steps must be >= 1");
  }
};

// One ledger row. For interaction rows the reservoir deltas are measured on
// the outgoing ancilla before it is discarded; Q is defined by the exact
// bookkeeping identity Q = dE_S - W - W_sq.
struct LedgerRow {
  int step = 0;
  std::string type;  // "interact" or "drive"
  double dE_S = 0.0;
  double dE_R = 0.0;
  double dA_S = 0.0;
  double dA_R = 0.0;
  double W = 0.0;     // mechanical work injected by driving
  double Asym = 0.0;  // asymmetry injected by driving
  double W_sq = 0.0;  // squeezing work, -mu dA_R
  double Q = 0.0;     // heat, dE_S - W - W_sq
  double dS = 0.0;    // system entropy change
  double Sigma = 0.0; // entropy production, dS + beta(W + W_sq - dE_S)
};

class ThermoLedger {
 public:
  void append(LedgerRow row) { rows_.push_back(std::move(row)); }
  const std::vector<LedgerRow>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  LedgerRow totals() const {
    LedgerRow t;
    t.step = static_cast<int>(rows_.size());
    t.type = "total";
    for (const LedgerRow& r : rows_) {
      t.dE_S += r.dE_S;
      t.dE_R += r.dE_R;
      t.dA_S += r.dA_S;
      t.dA_R += r.dA_R;
      t.W += r.W;
      t.Asym += r.Asym;
      t.W_sq += r.W_sq;
      t.Q += r.Q;
      t.dS += r.dS;
      t.Sigma += r.Sigma;
    }
    return t;
  }

  // One row per step in fixed column order, totals row appended (its step
  // column holds the literal "total").
  void write_csv(std::ostream& os) const {
    os << "step,type,dE_S,dE_R,dA_S,dA_R,W,Asym,W_sq,Q,dS,Sigma\n";
    for (const LedgerRow& r : rows_) write_row(os, std::to_string(r.step), r);
    write_row(os, "total", totals());
  }

 private:
  static void write_row(std::ostream& os, const std::string& head,
                        const LedgerRow& r) {
    char buf[352];
    std::snprintf(buf, sizeof buf,
                  ",%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,"
                  "%.12g\n",
                  head == "total" ? "" : r.type.c_str(), r.dE_S, r.dE_R,
                  r.dA_S, r.dA_R, r.W, r.Asym, r.W_sq, r.Q, r.dS, r.Sigma);
    os << head << buf;
  }

  std::vector<LedgerRow> rows_;
};

// One collision with a fresh reservoir mode. Resonance is required: with
// unequal frequencies the beam splitter would not conserve total energy.
inline std::pair<GaussianState, LedgerRow> interact_step(
    const GaussianState& system, const CollisionConfig& cfg,
    int step_index = 0) {
  cfg.validate();
  if (system.modes() != 1)
    throw std::invalid_argument("interact_step: system must be one mode");
  if (std::abs(system.freqs()(0) - cfg.reservoir.omega) > 1e-12)
    throw std::invalid_argument("interact_step: non-resonant collision");
  const ReservoirSpec& r = cfg.reservoir;
  const GaussianState res = equilibrium_state(r);
  const GaussianState joint =
      apply(beam_splitter_op(cfg.theta_c, 0, 1, 2), tensor(system, res));
  GaussianState sys_after = partial_trace(joint, {0});
  const GaussianState res_after = partial_trace(joint, {1});

  LedgerRow row;
  row.step = step_index;
  row.type = "interact";
  row.dE_S = energy(sys_after, 0) - energy(system, 0);
  row.dE_R = energy(res_after, 0) - energy(res, 0);
  row.dA_S = asymmetry(sys_after, 0) - asymmetry(system, 0);
  row.dA_R = asymmetry(res_after, 0) - asymmetry(res, 0);
  row.W_sq = -r.mu() * row.dA_R;
  row.Q = row.dE_S - row.W - row.W_sq;
  row.dS = entropy(sys_after) - entropy(system);
  row.Sigma = row.dS + r.beta() * (row.W + row.W_sq - row.dE_S);
  return {std::move(sys_after), row};
}

// Unitary driving step. Hamiltonian/asymmetry observables are passed for
// before and after the step so sudden quenches (state fixed, H changes) and
// smooth drives (H fixed across an infinitesimal step) use one bookkeeping.
inline std::pair<GaussianState, LedgerRow> drive_step(
    const GaussianState& system, const SymplecticOp& generator,
    const QuadraticObservable& h_before, const QuadraticObservable& h_after,
    const QuadraticObservable& a_before, const QuadraticObservable& a_after,
    int step_index = 0) {
  if (system.modes() != 1)
    throw std::invalid_argument("drive_step: system must be one mode");
  if (generator.modes() != 1)
    throw std::invalid_argument("drive_step: generator must act on one mode");
  GaussianState after = apply(generator, system);
  LedgerRow row;
  row.step = step_index;
  row.type = "drive";
  row.W = h_after.expectation(after) - h_before.expectation(system);
  row.Asym = a_after.expectation(after) - a_before.expectation(system);
  row.dE_S = row.W;
  row.dA_S = row.Asym;
  row.Q = row.dE_S - row.W - row.W_sq;  // identically zero
  // Unitary steps change neither the spectrum nor the reservoir.
  row.dS = 0.0;
  row.Sigma = 0.0;
  return {std::move(after), row};
}

// Sup-norm distance proxy to the reservoir equilibrium state.
inline double distance_to_equilibrium(const GaussianState& s,
                                      const ReservoirSpec& r) {
  const GaussianState eq = equilibrium_state(r);
  return (s.cov() - eq.cov()).cwiseAbs().maxCoeff() +
         s.means().cwiseAbs().maxCoeff();
}

struct RelaxationResult {
  GaussianState final_state;
  ThermoLedger ledger;
  std::vector<double> distances;  // after each collision
};

inline RelaxationResult run_relaxation(const GaussianState& initial,
                                       const CollisionConfig& cfg) {
  cfg.validate();
  RelaxationResult out{initial, {}, {}};
  out.distances.reserve(cfg.steps);
  for (int k = 0; k < cfg.steps; ++k) {
    auto [next, row] = interact_step(out.final_state, cfg, k);
    out.ledger.append(std::move(row));
    out.distances.push_back(distance_to_equilibrium(next, cfg.reservoir));
    out.final_state = std::move(next);
  }
  return out;
}

}  // namespace sqtr
