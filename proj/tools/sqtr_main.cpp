// Command-line front end: loads a scenario configuration, runs the requested
// simulation or verification suite, prints a JSON summary to stdout, and
// writes CSV/JSON artifacts atomically into the output directory.
//
// Exit codes: 0 success, 1 config error, 2 invariant failure, 3 I/O error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sqtr/collision.hpp"
#include "sqtr/gaussian.hpp"
#include "sqtr/protocol.hpp"
#include "sqtr/reservoir.hpp"
#include "sqtr/scenario.hpp"
#include "sqtr/verify.hpp"

namespace {

using nlohmann::json;

json row_numbers(const sqtr::LedgerRow& w) {
  return {{"dE_S", w.dE_S}, {"dE_R", w.dE_R}, {"dA_S", w.dA_S},
          {"dA_R", w.dA_R}, {"W", w.W},       {"Asym", w.Asym},
          {"W_sq", w.W_sq}, {"Q", w.Q},       {"dS", w.dS},
          {"Sigma", w.Sigma}};
}

json ledger_json(const sqtr::ThermoLedger& ledger) {
  json rows = json::array();
  for (const sqtr::LedgerRow& w : ledger.rows()) {
    json j = row_numbers(w);
    j["step"] = w.step;
    j["type"] = w.type;
    rows.push_back(std::move(j));
  }
  return {{"rows", std::move(rows)}, {"totals", row_numbers(ledger.totals())}};
}

std::string ledger_csv(const sqtr::ThermoLedger& ledger) {
  std::ostringstream ss;
  ledger.write_csv(ss);
  return ss.str();
}

std::string distances_csv(const std::vector<double>& distances) {
  std::string out = "step,distance\n";
  char buf[64];
  for (std::size_t k = 0; k < distances.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%zu,%.12g\n", k + 1, distances[k]);
    out += buf;
  }
  return out;
}

// Writes the per-step ledger in the format selected by output.format and
// returns the artifact file name.
std::string write_ledger_artifact(const sqtr::ScenarioConfig& cfg,
                                  const std::string& stem,
                                  const sqtr::ThermoLedger& ledger) {
  const std::filesystem::path dir = cfg.output.directory;
  if (cfg.output.format == "csv") {
    const std::string name = stem + ".csv";
    sqtr::write_file_atomic(dir / name, ledger_csv(ledger));
    return name;
  }
  const std::string name = stem + ".json";
  sqtr::write_file_atomic(dir / name, ledger_json(ledger).dump(2) + "\n");
  return name;
}

sqtr::SymplecticOp first_stroke_unitary(const sqtr::ScenarioConfig& cfg,
                                        const sqtr::ReservoirSpec& r) {
  const std::string& u = cfg.protocol.unitary;
  if (u == "identity")
    return sqtr::SymplecticOp(Eigen::MatrixXd::Identity(2, 2));
  if (u == "antisqueeze") return sqtr::squeeze_op(-r.xi, 0, 1);
  if (u == "squeeze") return sqtr::squeeze_op(cfg.protocol.squeeze, 0, 1);
  return sqtr::SymplecticOp(
      sqtr::rotation_op(cfg.protocol.rotation, 0, 1).matrix() *
      sqtr::squeeze_op(cfg.protocol.squeeze, 0, 1).matrix());
}

int cmd_equilibrium(const sqtr::ScenarioConfig& cfg) {
  const sqtr::ReservoirSpec r = cfg.reservoir_spec();
  const sqtr::GaussianState eq = sqtr::equilibrium_state(r);
  const json j = {{"beta", r.beta()},
                  {"mu", r.mu()},
                  {"n_th", r.n_th()},
                  {"energy", sqtr::energy(eq, 0)},
                  {"asymmetry", sqtr::asymmetry(eq, 0)},
                  {"entropy", sqtr::entropy(eq)},
                  {"xi_star", sqtr::xi_star(r.beta0 * r.omega)}};
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  sqtr::write_file_atomic(
      std::filesystem::path(cfg.output.directory) / "equilibrium.json", text);
  return 0;
}

int cmd_relax(const sqtr::ScenarioConfig& cfg) {
  const sqtr::ReservoirSpec r = cfg.reservoir_spec();
  const sqtr::CollisionConfig ccfg{cfg.collision.theta_c, r,
                                   cfg.collision.steps};
  const sqtr::RelaxationResult res =
      sqtr::run_relaxation(sqtr::make_vacuum(r.omega), ccfg);

  const std::filesystem::path dir = cfg.output.directory;
  const std::string ledger_name =
      write_ledger_artifact(cfg, "relax_ledger", res.ledger);
  std::string distance_name;
  if (cfg.output.format == "csv") {
    distance_name = "relax_distance.csv";
    sqtr::write_file_atomic(dir / distance_name, distances_csv(res.distances));
  } else {
    distance_name = "relax_distance.json";
    sqtr::write_file_atomic(dir / distance_name,
                            json(res.distances).dump(2) + "\n");
  }

  const json summary = {{"steps", cfg.collision.steps},
                        {"theta_c", cfg.collision.theta_c},
                        {"final_distance", res.distances.back()},
                        {"totals", row_numbers(res.ledger.totals())},
                        {"ledger", ledger_name},
                        {"distance", distance_name}};
  const std::string text = summary.dump(2) + "\n";
  std::cout << text;
  sqtr::write_file_atomic(dir / "relax_summary.json", text);
  return 0;
}

int cmd_cycle(const sqtr::ScenarioConfig& cfg) {
  const sqtr::ReservoirSpec r = cfg.reservoir_spec();
  const sqtr::SymplecticOp u1 = first_stroke_unitary(cfg, r);
  sqtr::CycleReport rep;
  int steps_used = 0;
  if (cfg.protocol.variant == "reversible") {
    sqtr::LegOptions opts;
    opts.schedule = cfg.protocol.schedule == "cosine"
                        ? sqtr::Schedule::cosine
                        : sqtr::Schedule::uniform;
    steps_used = cfg.protocol.steps;
    rep = sqtr::run_cycle(r, u1, steps_used, opts);
  } else {
    steps_used = cfg.collision.steps;
    rep = sqtr::run_irreversible_cycle(r, u1, steps_used,
                                       cfg.collision.theta_c);
  }

  const std::string ledger_name =
      write_ledger_artifact(cfg, "cycle_ledger", rep.ledger);
  const json j = {{"variant", cfg.protocol.variant},
                  {"unitary", cfg.protocol.unitary},
                  {"steps", steps_used},
                  {"W1", rep.W1},
                  {"A1", rep.A1},
                  {"W2_quench", rep.W2_quench},
                  {"A2_quench", rep.A2_quench},
                  {"W2_qs", rep.W2_qs},
                  {"A2_qs", rep.A2_qs},
                  {"W2", rep.W2},
                  {"A2", rep.A2},
                  {"W_ext", rep.W_ext},
                  {"A_ext", rep.A_ext},
                  {"W_sq", rep.W_sq},
                  {"ergotropy", rep.ergotropy},
                  {"Sigma_total", rep.Sigma_total},
                  {"final_distance", rep.final_distance},
                  {"work_identity_residual", rep.work_identity_residual},
                  {"bound_residual", rep.bound_residual},
                  {"ledger", ledger_name}};
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  sqtr::write_file_atomic(
      std::filesystem::path(cfg.output.directory) / "cycle_report.json", text);
  return 0;
}

int cmd_scan(const sqtr::ScenarioConfig& cfg) {
  const std::vector<double> grid = cfg.scan.grid();
  const std::vector<sqtr::Fig2Row> rows =
      sqtr::fig2_scan(cfg.scan.beta0_omega, grid);
  const std::filesystem::path dir = cfg.output.directory;
  std::string name;
  if (cfg.output.format == "csv") {
    name = "fig2_scan.csv";
    std::ostringstream ss;
    sqtr::write_fig2_csv(ss, rows);
    sqtr::write_file_atomic(dir / name, ss.str());
  } else {
    name = "fig2_scan.json";
    json arr = json::array();
    for (const sqtr::Fig2Row& row : rows)
      arr.push_back({{"xi", row.xi},
                     {"ergotropy", row.ergotropy},
                     {"W_sq", row.W_sq},
                     {"ratio", row.ratio},
                     {"xi_star_flag", static_cast<int>(row.xi_star_flag)}});
    sqtr::write_file_atomic(dir / name, arr.dump(2) + "\n");
  }
  const json summary = {{"rows", rows.size()},
                        {"beta0_omega", cfg.scan.beta0_omega},
                        {"xi_star", sqtr::xi_star(cfg.scan.beta0_omega)},
                        {"artifact", name}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_verify(const sqtr::ScenarioConfig& cfg, std::uint64_t seed) {
  const std::vector<sqtr::CheckResult> checks =
      sqtr::run_verification(cfg, seed);
  json arr = json::array();
  int failed = 0;
  for (const sqtr::CheckResult& c : checks) {
    arr.push_back({{"invariant", c.invariant},
                   {"residual", c.residual},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass},
                   {"detail", c.detail}});
    if (!c.pass) ++failed;
  }
  const json j = {{"checks", std::move(arr)},
                  {"failed", failed},
                  {"all_pass", failed == 0},
                  {"seed", seed}};
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  sqtr::write_file_atomic(
      std::filesystem::path(cfg.output.directory) / "verify_report.json",
      text);
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bosonic mode coupled to a squeezed thermal reservoir: equilibrium "
      "potentials, collision relaxation, work-extraction cycles, squeezing "
      "scans, and invariant verification."};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string format_override;
  std::int64_t seed = 0;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario configuration (JSON)");
    sub->add_option("--out", out_dir, "output directory for artifacts");
    sub->add_option("--seed", seed, "seed for sampled invariant suites");
    sub->add_option("--format", format_override,
                    "time-series artifact format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* c_eq = app.add_subcommand(
      "equilibrium", "print reservoir potentials and equilibrium moments");
  CLI::App* c_relax = app.add_subcommand(
      "relax", "relax the vacuum by repeated collisions, with full ledger");
  CLI::App* c_cycle =
      app.add_subcommand("cycle", "run a two-stroke work-extraction cycle");
  CLI::App* c_scan = app.add_subcommand(
      "scan", "scan extractable work and squeezing work over a grid");
  CLI::App* c_verify =
      app.add_subcommand("verify", "run the invariant verification suites");
  for (CLI::App* sub : {c_eq, c_relax, c_cycle, c_scan, c_verify})
    add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  sqtr::ScenarioConfig cfg;
  try {
    if (!config_path.empty()) cfg = sqtr::load_scenario_file(config_path);
    if (!out_dir.empty()) cfg.output.directory = out_dir;
    if (!format_override.empty()) cfg.output.format = format_override;
    cfg.validate();
  } catch (const sqtr::io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*c_eq) return cmd_equilibrium(cfg);
    if (*c_relax) return cmd_relax(cfg);
    if (*c_cycle) return cmd_cycle(cfg);
    if (*c_scan) return cmd_scan(cfg);
    return cmd_verify(cfg, static_cast<std::uint64_t>(seed));
  } catch (const sqtr::io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 2;
  }
}
