#include "posnet/scenario.hpp"

#include "posnet/csvio.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace posnet {

using nlohmann::json;

int Scenario::n_edges() const {
    if (kind == Kind::transport) return graph ? graph->n_edges() : 0;
    return static_cast<int>(coupling.rows());
}

namespace {

Vector to_vector(const json& arr) {
    Vector v(arr.size());
    Eigen::Index i = 0;
    for (const auto& x : arr) v(i++) = x.get<double>();
    return v;
}

Matrix to_matrix(const json& arr) {
    const auto rows = arr.size();
    const auto cols = rows == 0 ? 0 : arr.front().size();
    Matrix m(rows, cols);
    Eigen::Index i = 0;
    for (const auto& row : arr) {
        if (row.size() != cols) throw std::runtime_error("ragged matrix");
        Eigen::Index j = 0;
        for (const auto& x : row) m(i, j++) = x.get<double>();
        ++i;
    }
    return m;
}

json from_vector(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

json from_matrix(const Matrix& m) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        arr.push_back(row);
    }
    return arr;
}

}  // namespace

namespace {
ScenarioLoad parse_scenario_checked(const std::string& json_text);
}

ScenarioLoad parse_scenario(const std::string& json_text) {
    try {
        return parse_scenario_checked(json_text);
    } catch (const json::exception& e) {
        ScenarioLoad out;
        out.errors.push_back(std::string("schema violation: ") + e.what());
        return out;
    }
}

namespace {

ScenarioLoad parse_scenario_checked(const std::string& json_text) {
    ScenarioLoad out;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        out.errors.push_back(std::string("parse error: ") + e.what());
        return out;
    }
    auto err = [&](const std::string& msg) { out.errors.push_back(msg); };

    Scenario s;
    const std::string kind = doc.value("kind", "");
    if (kind == "transport") {
        s.kind = Scenario::Kind::transport;
    } else if (kind == "heat") {
        s.kind = Scenario::Kind::heat;
    } else {
        err("kind: must be \"transport\" or \"heat\"");
        return out;
    }

    const json params = doc.value("params", json::object());

    if (s.kind == Scenario::Kind::transport) {
        if (!doc.contains("graph")) {
            err("graph: required for transport scenarios");
            return out;
        }
        const json& g = doc["graph"];
        const int n = g.value("vertices", 0);
        if (n <= 0) err("graph.vertices: must be a positive integer");
        std::vector<Edge> edges;
        if (!g.contains("edges") || !g["edges"].is_array() || g["edges"].empty()) {
            err("graph.edges: non-empty array required");
        } else {
            std::size_t idx = 0;
            for (const auto& e : g["edges"]) {
                const int tail = e.value("tail", 0);
                const int head = e.value("head", 0);
                const double w = e.value("weight", 1.0);
                if (tail < 1 || tail > n) err("graph.edges[" + std::to_string(idx) + "].tail: out of range");
                if (head < 1 || head > n) err("graph.edges[" + std::to_string(idx) + "].head: out of range");
                if (!(w >= 0.0) || w > 1.0) err("graph.edges[" + std::to_string(idx) + "].weight: outside [0,1]");
                edges.push_back({tail - 1, head - 1, w});
                ++idx;
            }
        }
        if (out.errors.empty()) {
            try {
                s.graph.emplace(n, edges, /*kirchhoff=*/true);
            } catch (const std::invalid_argument& e) {
                err(std::string("graph: ") + e.what());
            }
        }
        if (!params.contains("velocity")) {
            err("params.velocity: required for transport");
        } else if (params["velocity"].is_number()) {
            s.velocity = Vector::Constant(1, params["velocity"].get<double>());
        } else {
            s.velocity = to_vector(params["velocity"]);
        }
        for (Eigen::Index i = 0; i < s.velocity.size(); ++i) {
            if (!(s.velocity(i) > 0.0)) err("params.velocity: entries must be strictly positive");
        }
    } else {
        if (!doc.contains("coupling") || !doc["coupling"].contains("matrix")) {
            err("coupling.matrix: required for heat scenarios");
            return out;
        }
        try {
            s.coupling = to_matrix(doc["coupling"]["matrix"]);
        } catch (const std::exception&) {
            err("coupling.matrix: ragged rows");
            return out;
        }
        if (s.coupling.rows() < 2 || s.coupling.rows() != s.coupling.cols()) {
            err("coupling.matrix: must be square with at least two edges");
        }
        if (!params.contains("diffusivity")) {
            err("params.diffusivity: required for heat");
        } else {
            s.diffusivity = to_vector(params["diffusivity"]);
            if (s.diffusivity.size() != s.coupling.rows()) {
                err("params.diffusivity: needs one entry per edge");
            }
            for (Eigen::Index i = 0; i < s.diffusivity.size(); ++i) {
                if (!(s.diffusivity(i) > 0.0)) err("params.diffusivity: entries must be strictly positive");
            }
        }
    }

    if (params.contains("absorption")) {
        if (params["absorption"].is_number()) {
            s.absorption = Vector::Constant(1, params["absorption"].get<double>());
        } else {
            s.absorption = to_vector(params["absorption"]);
        }
    } else {
        s.absorption = Vector::Constant(1, s.kind == Scenario::Kind::heat ? 1.0 : 0.0);
    }
    for (Eigen::Index i = 0; i < s.absorption.size(); ++i) {
        if (s.absorption(i) < 0.0) err("params.absorption: magnitudes must be nonnegative");
        if (s.kind == Scenario::Kind::heat && !(s.absorption(i) > 0.0)) {
            err("params.absorption: heat requires strictly positive q_j");
        }
    }
    s.absorption_sign = params.value("absorption_sign", -1);
    if (s.absorption_sign != -1 && s.absorption_sign != 1) {
        err("params.absorption_sign: must be -1 (damping) or +1 (growth)");
    }

    if (!doc.contains("control") || !doc["control"].contains("matrix")) {
        err("control.matrix: required");
        return out;
    }
    try {
        s.control = to_matrix(doc["control"]["matrix"]);
    } catch (const std::exception&) {
        err("control.matrix: ragged rows");
        return out;
    }
    s.control_positive = doc["control"].value("positive", true);
    if (s.control_positive && !is_nonnegative(s.control)) {
        err("control.matrix: negative entry but control.positive is true");
    }

    const json disc = doc.value("discretization", json::object());
    s.disc.points = disc.value("P", 201);
    s.disc.modes = disc.value("K_max", 64);
    s.disc.velocity_points = disc.value("Q", 64);
    if (s.disc.points < 3) err("discretization.P: need at least 3 grid points");
    if (s.disc.modes < 1) err("discretization.K_max: need at least 1 mode");
    if (s.disc.velocity_points < 1) err("discretization.Q: need at least 1 point");

    const json probe = doc.value("probe", json::object());
    if (probe.contains("mu_min")) s.probe.mu_min = probe["mu_min"].get<double>();
    s.probe.mu_count = probe.value("mu_count", 8);
    if (probe.contains("n_max")) s.probe.n_max = probe["n_max"].get<int>();
    if (s.probe.mu_count < 1) err("probe.mu_count: must be positive");
    if (s.probe.n_max && *s.probe.n_max < 0) err("probe.n_max: must be nonnegative");

    const std::string mode = doc.value("mode", "positive");
    if (mode == "positive") {
        s.mode = Verdict::Mode::positive;
    } else if (mode == "control_constrained") {
        s.mode = Verdict::Mode::control_constrained;
    } else {
        err("mode: must be \"positive\" or \"control_constrained\"");
    }

    if (doc.contains("tol")) {
        s.tol = doc["tol"].get<double>();
        if (!(*s.tol > 0.0)) err("tol: must be positive");
    }

    // cross-field invariants
    if (out.errors.empty()) {
        const int m = s.n_edges();
        if (s.kind == Scenario::Kind::transport) {
            if (s.velocity.size() != 1 && s.velocity.size() != m) {
                err("params.velocity: need a scalar or one entry per edge");
            }
            if (s.graph && s.control.rows() != s.graph->n_vertices()) {
                err("control.matrix: needs one row per vertex");
            }
        } else {
            if (s.control.rows() != m) err("control.matrix: needs one row per edge");
        }
        if (s.absorption.size() != 1 && s.absorption.size() != m) {
            err("params.absorption: need a scalar or one entry per edge");
        }
        if (s.mode == Verdict::Mode::positive) {
            if (!is_nonnegative(s.control)) {
                err("control.matrix: positive mode requires K >= 0");
            }
            if (s.kind == Scenario::Kind::heat && !is_nonnegative(s.coupling)) {
                err("coupling.matrix: positive mode requires a positive coupling");
            }
            if (!s.control_positive) err("control.positive: must be true in positive mode");
        }
    }

    if (out.errors.empty()) out.scenario = std::move(s);
    return out;
}

}  // namespace

ScenarioLoad load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ScenarioLoad out;
        out.errors.push_back("cannot open " + path);
        return out;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& s) {
    json doc;
    doc["kind"] = s.kind == Scenario::Kind::transport ? "transport" : "heat";
    json params;
    if (s.kind == Scenario::Kind::transport) {
        json edges = json::array();
        for (const Edge& e : s.graph->edges()) {
            edges.push_back({{"tail", e.tail + 1}, {"head", e.head + 1}, {"weight", e.weight}});
        }
        doc["graph"] = {{"vertices", s.graph->n_vertices()}, {"edges", edges}};
        params["velocity"] = from_vector(s.velocity);
    } else {
        doc["coupling"] = {{"matrix", from_matrix(s.coupling)}};
        params["diffusivity"] = from_vector(s.diffusivity);
    }
    params["absorption"] = from_vector(s.absorption);
    params["absorption_sign"] = s.absorption_sign;
    doc["params"] = params;
    doc["control"] = {{"matrix", from_matrix(s.control)}, {"positive", s.control_positive}};
    doc["discretization"] = {{"P", s.disc.points}, {"K_max", s.disc.modes}, {"Q", s.disc.velocity_points}};
    json probe;
    if (s.probe.mu_min) probe["mu_min"] = *s.probe.mu_min;
    probe["mu_count"] = s.probe.mu_count;
    if (s.probe.n_max) probe["n_max"] = *s.probe.n_max;
    doc["probe"] = probe;
    doc["mode"] = s.mode == Verdict::Mode::positive ? "positive" : "control_constrained";
    if (s.tol) doc["tol"] = *s.tol;
    return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << scenario_to_json(s);
}

bool scenario_equal(const Scenario& a, const Scenario& b) {
    return scenario_to_json(a) == scenario_to_json(b);
}

TransportSystem make_transport_system(const Scenario& s) {
    if (s.kind != Scenario::Kind::transport || !s.graph) {
        throw std::invalid_argument("make_transport_system: not a transport scenario");
    }
    const int m = s.graph->n_edges();
    Vector v = s.velocity.size() == 1 ? Vector::Constant(m, s.velocity(0)) : s.velocity;
    Vector q = s.absorption.size() == 1 ? Vector::Constant(m, s.absorption(0)) : s.absorption;
    return TransportSystem(*s.graph, v, static_cast<double>(s.absorption_sign) * q,
                           PositiveMatrix(s.control));
}

HeatNetwork make_heat_network(const Scenario& s) {
    if (s.kind != Scenario::Kind::heat) {
        throw std::invalid_argument("make_heat_network: not a heat scenario");
    }
    const int m = static_cast<int>(s.coupling.rows());
    Vector q = s.absorption.size() == 1 ? Vector::Constant(m, s.absorption(0)) : s.absorption;
    return HeatNetwork(s.diffusivity, q, s.coupling, s.control);
}

Verdict analyze_scenario(const Scenario& s, std::uint64_t seed) {
    if (s.kind == Scenario::Kind::transport) {
        TransportSystem sys = make_transport_system(s);
        if (s.mode == Verdict::Mode::positive) {
            return decide_transport_rank(sys, s.tol.value_or(1e-9), seed);
        }
        TransportFamily family(std::move(sys));
        return decide_control_constrained(family, s.probe, s.tol.value_or(1e-6), s.disc.points, seed);
    }
    HeatFamily family(make_heat_network(s));
    if (s.mode == Verdict::Mode::positive) {
        return decide_positive(family, s.probe, s.tol.value_or(1e-6), s.disc.points, seed);
    }
    return decide_control_constrained(family, s.probe, s.tol.value_or(1e-6), s.disc.points, seed);
}

std::string verdict_to_json(const Verdict& v) {
    json doc;
    doc["mode"] = to_string(v.mode);
    doc["decision"] = to_string(v.decision);
    doc["tolerance"] = v.tol;
    doc["grid_points"] = v.grid_points;
    json probe;
    probe["mus"] = v.probe.mus;
    probe["n_max"] = v.probe.n_max;
    probe["spectral_radius_at_mu_min"] = v.probe.r_at_mu_min;
    probe["neumann_tail"] = v.probe.neumann_tail;
    doc["probe"] = probe;
    doc["residual"] = v.cone.residual;
    doc["generator_count"] = v.generators.size();
    if (!v.per_mu_controllable.empty()) doc["per_mu_controllable"] = v.per_mu_controllable;
    if (v.cone.phi) {
        json phi = json::array();
        for (Eigen::Index i = 0; i < v.cone.phi->size(); ++i) phi.push_back((*v.cone.phi)(i));
        doc["certificate"] = phi;
        doc["failed_target"] = v.cone.failed_target;
    }
    if (!v.cone.memberships.empty()) {
        json mem = json::array();
        for (const Vector& lam : v.cone.memberships) {
            json row = json::array();
            for (Eigen::Index i = 0; i < lam.size(); ++i) row.push_back(lam(i));
            mem.push_back(row);
        }
        doc["memberships"] = mem;
    }
    if (!v.cone.note.empty()) doc["cone_note"] = v.cone.note;
    doc["notes"] = v.notes;
    return doc.dump(2) + "\n";
}

void write_verdict_json(const Verdict& v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << verdict_to_json(v);
}

void write_generators_csv(const Verdict& v, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    if (v.grid_points > 0) {
        out << "generator,mu_index,power,input,edge,x,value\n";
        const int pts = v.grid_points;
        const double dx = 1.0 / (pts - 1);
        for (std::size_t g = 0; g < v.generators.size(); ++g) {
            const auto& info = v.generator_info[g];
            const Vector& vec = v.generators[g];
            const int edges = static_cast<int>(vec.size()) / pts;
            for (int j = 0; j < edges; ++j) {
                for (int p = 0; p < pts; ++p) {
                    out << g << ',' << info[0] << ',' << info[1] << ',' << info[2] << ',' << (j + 1)
                        << ',' << format_double(p * dx) << ','
                        << format_double(vec(static_cast<Eigen::Index>(j) * pts + p)) << '\n';
                }
            }
        }
    } else {
        out << "generator,mu_index,power,input,component,value\n";
        for (std::size_t g = 0; g < v.generators.size(); ++g) {
            const auto& info = v.generator_info[g];
            const Vector& vec = v.generators[g];
            for (Eigen::Index i = 0; i < vec.size(); ++i) {
                out << g << ',' << info[0] << ',' << info[1] << ',' << info[2] << ',' << (i + 1)
                    << ',' << format_double(vec(i)) << '\n';
            }
        }
    }
}

Verdict run_analyze(const Scenario& s, const std::string& out_dir, std::uint64_t seed) {
    std::filesystem::create_directories(out_dir);
    Verdict v = analyze_scenario(s, seed);
    write_verdict_json(v, out_dir + "/verdict.json");
    write_generators_csv(v, out_dir + "/generators.csv");
    return v;
}

SimulationSummary run_simulate(const Scenario& s, const std::string& control_csv, double t_final,
                               const std::string& out_dir, int record_stride) {
    std::filesystem::create_directories(out_dir);
    const bool positive_mode = s.mode == Verdict::Mode::positive;
    ControlSignal u = read_control_csv(control_csv, positive_mode);

    SimulationSummary summary;
    summary.t_final = t_final;
    summary.trajectory_path = out_dir + "/trajectory.csv";

    if (s.kind == Scenario::Kind::transport) {
        TransportSystem sys = make_transport_system(s);
        GridFunction f0(sys.n_edges(), s.disc.points, 1);
        TransportTrajectory traj = simulate_mild(sys, f0, u, t_final, positive_mode, record_stride);
        write_trajectory_csv(summary.trajectory_path, traj.times, traj.states);
        summary.final_norm = traj.states.back().norm();
        summary.min_value = traj.states.back().min_value();
        summary.positivity_violations = traj.positivity_violations;
    } else {
        HeatNetwork net = make_heat_network(s);
        SpectralBasis basis = make_spectral_basis(s.disc.modes, s.disc.points);
        GridFunction h0(net.edges, s.disc.points, 2);
        const double dt = 1e-3;
        HeatTrajectory traj =
            heat_simulate_mild(net, basis, h0, u, t_final, dt, positive_mode, record_stride);
        write_trajectory_csv(summary.trajectory_path, traj.times, traj.states);
        write_coefficients_csv(out_dir + "/coefficients.csv",
                               spectral_analyze(basis, traj.states.back()));
        summary.final_norm = traj.states.back().norm();
        summary.min_value = traj.states.back().min_value();
        summary.positivity_violations = traj.positivity_violations;
        summary.tail_estimate = traj.tail_estimate;
        summary.truncation_flagged = traj.truncation_flagged;
    }
    return summary;
}

}  // namespace posnet
