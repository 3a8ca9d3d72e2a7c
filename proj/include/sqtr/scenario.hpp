#pragma once
// Scenario configuration for the command-line front end: one JSON document
// with flat key groups. Loading rejects unknown keys, re-validates every
// referenced module invariant, and round-trips exactly through to_json().
// Also provides the atomic file-write helper used for all artifacts.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqtr/reservoir.hpp"

namespace sqtr {

// A malformed or invalid configuration (unknown key, bad value, parse error).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A filesystem failure; the message always names the offending path.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReservoirGroup {
  double beta0 = 1.0;
  double xi = 0.5;
  double omega = 1.0;
  bool operator==(const ReservoirGroup&) const = default;
};

struct CollisionGroup {
  double theta_c = 0.1;
  int steps = 2000;
  bool operator==(const CollisionGroup&) const = default;
};

struct ProtocolGroup {
  int steps = 10000;                   // quasi-static step count N
  std::string unitary = "antisqueeze"; // first-stroke unitary choice
  double squeeze = 0.5;                // parameter for "squeeze" variants
  double rotation = 0.0;               // parameter for "rotation_squeeze"
  std::string schedule = "uniform";    // drive schedule: uniform | cosine
  std::string variant = "reversible";  // second stroke: reversible | irreversible
  bool operator==(const ProtocolGroup&) const = default;
};

struct ScanGroup {
  double beta0_omega = 1.0;
  double xi_min = 0.0;
  double xi_max = 2.5;
  int xi_count = 251;
  bool operator==(const ScanGroup&) const = default;

  std::vector<double> grid() const {
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(xi_count));
    if (xi_count == 1) {
      g.push_back(xi_min);
      return g;
    }
    const double h = (xi_max - xi_min) / (xi_count - 1);
    for (int k = 0; k < xi_count; ++k) g.push_back(xi_min + h * k);
    return g;
  }
};

struct OutputGroup {
  std::string directory = "out";
  std::string format = "csv";  // time-series artifact format: csv | json
  bool operator==(const OutputGroup&) const = default;
};

struct OracleGroup {
  int dimension = 60;        // Fock truncation dimension
  double tolerance = 1e-8;   // construction-equivalence tolerance
  bool operator==(const OracleGroup&) const = default;
};

namespace detail {

inline void require_known_keys(const nlohmann::json& j, const char* group,
                               std::initializer_list<const char*> allowed) {
  if (!j.is_object())
    throw config_error(std::string(group) + ": expected a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (item.key() == a) {
        known = true;
        break;
      }
    if (!known)
      throw config_error("unknown key \"" + item.key() + "\" in \"" + group +
                         "\"");
  }
}

template <typename T>
void read_field(const nlohmann::json& j, const char* group, const char* key,
                T* out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    *out = it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw config_error(std::string(group) + "." + key + ": wrong value type");
  }
}

}  // namespace detail

struct ScenarioConfig {
  ReservoirGroup reservoir;
  CollisionGroup collision;
  ProtocolGroup protocol;
  ScanGroup scan;
  OutputGroup output;
  OracleGroup oracle;
  bool operator==(const ScenarioConfig&) const = default;

  ReservoirSpec reservoir_spec() const {
    return ReservoirSpec(reservoir.beta0, reservoir.xi, reservoir.omega);
  }

  // Re-validates every module-level invariant referenced by the groups.
  // Throws config_error naming the violated invariant.
  void validate() const {
    try {
      reservoir_spec().validate();
    } catch (const std::exception& e) {
      throw config_error(std::string("reservoir: ") + e.what());
    }
    if (!(collision.theta_c > 0.0) || !(collision.theta_c <= 1.5707963268))
      throw config_error("collision.theta_c: need 0 < theta_c <= pi/2");
    if (collision.steps < 1)
      throw config_error("collision.steps: must be >= 1");
    if (protocol.steps < 2)
      throw config_error("protocol.steps: quasi-static legs need >= 2 steps");
    if (protocol.unitary != "identity" && protocol.unitary != "antisqueeze" &&
        protocol.unitary != "squeeze" && protocol.unitary != "rotation_squeeze")
      throw config_error(
          "protocol.unitary: must be one of identity | antisqueeze | squeeze "
          "| rotation_squeeze");
    if (!std::isfinite(protocol.squeeze) || !std::isfinite(protocol.rotation))
      throw config_error("protocol.squeeze/rotation: must be finite");
    if (protocol.schedule != "uniform" && protocol.schedule != "cosine")
      throw config_error("protocol.schedule: must be uniform | cosine");
    if (protocol.variant != "reversible" && protocol.variant != "irreversible")
      throw config_error("protocol.variant: must be reversible | irreversible");
    if (!(scan.beta0_omega > 0.0))
      throw config_error("scan.beta0_omega: must be > 0");
    if (!(scan.xi_min >= 0.0))
      throw config_error("scan.xi_min: must be >= 0");
    if (!(scan.xi_max >= scan.xi_min))
      throw config_error("scan.xi_max: must be >= xi_min");
    if (scan.xi_count < 1) throw config_error("scan.xi_count: must be >= 1");
    if (output.directory.empty())
      throw config_error("output.directory: must be non-empty");
    if (output.format != "csv" && output.format != "json")
      throw config_error("output.format: must be csv | json");
    if (oracle.dimension < 20 || oracle.dimension > 4096)
      throw config_error("oracle.dimension: must be in [20, 4096]");
    if (!(oracle.tolerance > 0.0))
      throw config_error("oracle.tolerance: must be > 0");
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["reservoir"] = {{"beta0", reservoir.beta0},
                      {"xi", reservoir.xi},
                      {"omega", reservoir.omega}};
    j["collision"] = {{"theta_c", collision.theta_c},
                      {"steps", collision.steps}};
    j["protocol"] = {{"steps", protocol.steps},
                     {"unitary", protocol.unitary},
                     {"squeeze", protocol.squeeze},
                     {"rotation", protocol.rotation},
                     {"schedule", protocol.schedule},
                     {"variant", protocol.variant}};
    j["scan"] = {{"beta0_omega", scan.beta0_omega},
                 {"xi_min", scan.xi_min},
                 {"xi_max", scan.xi_max},
                 {"xi_count", scan.xi_count}};
    j["output"] = {{"directory", output.directory},
                   {"format", output.format}};
    j["oracle"] = {{"dimension", oracle.dimension},
                   {"tolerance", oracle.tolerance}};
    return j;
  }

  static ScenarioConfig from_json(const nlohmann::json& j) {
    detail::require_known_keys(
        j, "config",
        {"reservoir", "collision", "protocol", "scan", "output", "oracle"});
    ScenarioConfig c;
    if (const auto it = j.find("reservoir"); it != j.end()) {
      detail::require_known_keys(*it, "reservoir", {"beta0", "xi", "omega"});
      detail::read_field(*it, "reservoir", "beta0", &c.reservoir.beta0);
      detail::read_field(*it, "reservoir", "xi", &c.reservoir.xi);
      detail::read_field(*it, "reservoir", "omega", &c.reservoir.omega);
    }
    if (const auto it = j.find("collision"); it != j.end()) {
      detail::require_known_keys(*it, "collision", {"theta_c", "steps"});
      detail::read_field(*it, "collision", "theta_c", &c.collision.theta_c);
      detail::read_field(*it, "collision", "steps", &c.collision.steps);
    }
    if (const auto it = j.find("protocol"); it != j.end()) {
      detail::require_known_keys(
          *it, "protocol",
          {"steps", "unitary", "squeeze", "rotation", "schedule", "variant"});
      detail::read_field(*it, "protocol", "steps", &c.protocol.steps);
      detail::read_field(*it, "protocol", "unitary", &c.protocol.unitary);
      detail::read_field(*it, "protocol", "squeeze", &c.protocol.squeeze);
      detail::read_field(*it, "protocol", "rotation", &c.protocol.rotation);
      detail::read_field(*it, "protocol", "schedule", &c.protocol.schedule);
      detail::read_field(*it, "protocol", "variant", &c.protocol.variant);
    }
    if (const auto it = j.find("scan"); it != j.end()) {
      detail::require_known_keys(
          *it, "scan", {"beta0_omega", "xi_min", "xi_max", "xi_count"});
      detail::read_field(*it, "scan", "beta0_omega", &c.scan.beta0_omega);
      detail::read_field(*it, "scan", "xi_min", &c.scan.xi_min);
      detail::read_field(*it, "scan", "xi_max", &c.scan.xi_max);
      detail::read_field(*it, "scan", "xi_count", &c.scan.xi_count);
    }
    if (const auto it = j.find("output"); it != j.end()) {
      detail::require_known_keys(*it, "output", {"directory", "format"});
      detail::read_field(*it, "output", "directory", &c.output.directory);
      detail::read_field(*it, "output", "format", &c.output.format);
    }
    if (const auto it = j.find("oracle"); it != j.end()) {
      detail::require_known_keys(*it, "oracle", {"dimension", "tolerance"});
      detail::read_field(*it, "oracle", "dimension", &c.oracle.dimension);
      detail::read_field(*it, "oracle", "tolerance", &c.oracle.tolerance);
    }
    c.validate();
    return c;
  }
};

inline ScenarioConfig load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw io_error("cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config parse error in " + path.string() + ": " +
                       e.what());
  }
  return ScenarioConfig::from_json(j);
}

// Writes content to path via a temporary file in the same directory followed
// by an atomic rename, so readers never observe a partial artifact.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  std::error_code ec;
  const std::filesystem::path dir = path.parent_path();
  if (!dir.empty()) {
    std::filesystem::create_directories(dir, ec);
    if (ec)
      throw io_error("cannot create output directory: " + dir.string() + " (" +
                     ec.message() + ")");
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw io_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw io_error("cannot move " + tmp.string() + " to " + path.string() +
                   " (" + ec.message() + ")");
}

}  // namespace sqtr
