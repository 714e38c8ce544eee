#pragma once

#include "posnet/decide.hpp"

#include <optional>
#include <string>
#include <vector>

namespace posnet {

struct Discretization {
    int points = 201;          // P
    int modes = 64;            // K_max
    int velocity_points = 64;  // Q
};

/// A fully validated analysis/simulation case. Vertex and edge indices are
/// 1-based in files and 0-based here.
struct Scenario {
    enum class Kind { transport, heat };

    Kind kind = Kind::transport;
    std::optional<NetworkGraph> graph;  // transport
    Vector velocity;                    // transport, size 1 or M
    Matrix coupling;                    // heat, M x M
    Vector diffusivity;                 // heat, size M
    Vector absorption;                  // magnitudes, size 1 or M
    int absorption_sign = -1;           // transport damping convention
    Matrix control;
    bool control_positive = true;
    Discretization disc;
    ProbeParams probe;
    Verdict::Mode mode = Verdict::Mode::positive;
    std::optional<double> tol;  // default 1e-9 for matrix tests, 1e-6 on grids

    int n_edges() const;
};

struct ScenarioLoad {
    std::optional<Scenario> scenario;
    std::vector<std::string> errors;  // schema/invariant violations with field paths
    bool ok() const { return errors.empty() && scenario.has_value(); }
};

ScenarioLoad load_scenario(const std::string& path);
ScenarioLoad parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);
bool scenario_equal(const Scenario& a, const Scenario& b);

TransportSystem make_transport_system(const Scenario& s);
HeatNetwork make_heat_network(const Scenario& s);

/// Mode dispatch: transport+positive -> rank test (internal frequency
/// fallback), transport+control_constrained -> full-space polar test,
/// heat+positive -> lifted-orthant test, heat+control_constrained -> full-space polar test.
Verdict analyze_scenario(const Scenario& s, std::uint64_t seed = 0);

/// analyze + write <out_dir>/verdict.json and <out_dir>/generators.csv.
Verdict run_analyze(const Scenario& s, const std::string& out_dir, std::uint64_t seed = 0);

struct SimulationSummary {
    double t_final = 0.0;
    double final_norm = 0.0;
    double min_value = 0.0;
    long positivity_violations = 0;
    double tail_estimate = 0.0;       // heat only
    bool truncation_flagged = false;  // heat only
    std::string trajectory_path;
};

SimulationSummary run_simulate(const Scenario& s, const std::string& control_csv, double t_final,
                               const std::string& out_dir, int record_stride = 1);

std::string verdict_to_json(const Verdict& v);
void write_verdict_json(const Verdict& v, const std::string& path);
void write_generators_csv(const Verdict& v, const std::string& path);

}  // namespace posnet
