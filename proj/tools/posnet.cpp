// Command-line front end: scenario analysis, PDE network simulation, the
// Szasz-Mirakjan check suite, and a quick selftest.
//
// Exit codes: 0 = verdict/result produced (including not_controllable),
// 2 = invalid input, 3 = numerical failure or inconclusive.

#include "posnet/csvio.hpp"
#include "posnet/scenario.hpp"
#include "posnet/szasz.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace posnet;

int cmd_analyze(const std::string& scenario_path, const std::string& out_dir, std::uint64_t seed) {
    ScenarioLoad load = load_scenario(scenario_path);
    if (!load.ok()) {
        for (const std::string& e : load.errors) std::cerr << "error: " << e << "\n";
        return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = run_analyze(*load.scenario, out_dir, seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "mode: " << to_string(v.mode) << "\n"
              << "decision: " << to_string(v.decision) << "\n"
              << "residual: " << v.cone.residual << " (tol " << v.tol << ")\n"
              << "generators: " << v.generators.size() << "\n";
    if (!v.probe.mus.empty()) {
        std::cout << "mu samples: " << v.probe.mus.size() << " from " << v.probe.mus.front()
                  << ", r(Gamma D_mu_min) = " << v.probe.r_at_mu_min
                  << ", Neumann tail " << v.probe.neumann_tail << "\n";
    }
    for (const std::string& n : v.notes) std::cout << "note: " << n << "\n";
    std::cout << "report: " << out_dir << "/verdict.json (" << ms << " ms)\n";
    return v.decision == Verdict::Decision::inconclusive ? 3 : 0;
}

int cmd_simulate(const std::string& scenario_path, const std::string& control_csv, double t_final,
                 const std::string& out_dir, int stride) {
    ScenarioLoad load = load_scenario(scenario_path);
    if (!load.ok()) {
        for (const std::string& e : load.errors) std::cerr << "error: " << e << "\n";
        return 2;
    }
    try {
        SimulationSummary s = run_simulate(*load.scenario, control_csv, t_final, out_dir, stride);
        std::cout << "t_final: " << s.t_final << "\n"
                  << "final norm: " << s.final_norm << "\n"
                  << "min value: " << s.min_value << "\n"
                  << "positivity violations: " << s.positivity_violations << "\n";
        if (load.scenario->kind == Scenario::Kind::heat) {
            std::cout << "truncation tail estimate: " << s.tail_estimate
                      << (s.truncation_flagged ? " (FLAGGED: increase K_max)" : "") << "\n";
        }
        std::cout << "trajectory: " << s.trajectory_path << "\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

int cmd_szasz(const std::vector<int>& n_list, double v, const std::string& out_path) {
    const int points = 101;
    const Vector xs = uniform_grid(points);
    bool ok = true;

    std::ofstream csv;
    if (!out_path.empty()) {
        csv.open(out_path);
        csv << "n,x,mn_f,f,error\n";
    }

    std::cout << "Korovkin identities (warped test functions 1, y, y^2):\n";
    for (int n : n_list) {
        MirakjanEval cfg{n, v};
        double e1 = 0.0, ephi = 0.0, ephi2 = 0.0;
        for (int i = 0; i < points; ++i) {
            const double rate = n * cfg.warp(xs(i));
            const double phi = cfg.warp(xs(i));
            e1 = std::max(e1, std::abs(szasz_warped(cfg, [](double) { return 1.0; }, rate) - 1.0));
            ephi = std::max(ephi, std::abs(szasz_warped(cfg, [](double y) { return y; }, rate) - phi));
            ephi2 = std::max(ephi2, std::abs(szasz_warped(cfg, [](double y) { return y * y; }, rate) -
                                             (phi * phi + phi / n)));
        }
        std::cout << "  n=" << n << "  |M(1)-1|=" << e1 << "  |M(phi)-phi|=" << ephi
                  << "  |M(phi^2)-phi^2-phi/n|=" << ephi2 << "\n";
        ok = ok && e1 <= 1e-10 && ephi <= 1e-10 && ephi2 <= 1e-10;
    }

    std::cout << "uniform convergence for f(x) = x:\n";
    double prev = 0.0;
    bool first = true;
    for (int n : n_list) {
        MirakjanEval cfg{n, v};
        auto f = [](double x) { return x; };
        const Vector m = mirakjan_apply_grid(cfg, f, xs);
        double sup = 0.0;
        for (int i = 0; i < points; ++i) {
            const double err = std::abs(m(i) - xs(i));
            sup = std::max(sup, err);
            if (csv.is_open()) {
                csv << n << ',' << format_double(xs(i)) << ',' << format_double(m(i)) << ','
                    << format_double(xs(i)) << ',' << format_double(err) << '\n';
            }
        }
        std::cout << "  n=" << n << "  sup|M f - f| = " << sup;
        if (!first) std::cout << "  ratio " << sup / prev;
        std::cout << "\n";
        if (!first && sup / prev > 0.75) ok = false;
        prev = sup;
        first = false;
    }
    std::cout << (ok ? "szasz check: PASS\n" : "szasz check: FAIL\n");
    return ok ? 0 : 3;
}

int cmd_selftest();

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Positive-network controllability toolkit"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string control_csv;
    std::uint64_t seed = 0;
    double t_final = 1.0;
    int stride = 1;

    auto* analyze = app.add_subcommand("analyze", "decide controllability for a scenario");
    analyze->add_option("--scenario", scenario_path, "scenario JSON")->required();
    analyze->add_option("--out", out_dir, "output directory");
    analyze->add_option("--seed", seed, "seed for randomized restarts");

    auto* simulate = app.add_subcommand("simulate", "run the PDE network simulation");
    simulate->add_option("--scenario", scenario_path, "scenario JSON")->required();
    simulate->add_option("--control", control_csv, "control CSV (t,u_1..u_n)")->required();
    simulate->add_option("--t-final", t_final, "time horizon")->required();
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--stride", stride, "record every k-th step");

    std::vector<int> n_list{8, 16, 32, 64, 128};
    double szasz_v = 1.0;
    std::string szasz_out;
    auto* szasz = app.add_subcommand("szasz", "approximation-operator check suite");
    szasz->add_flag("--check", "run the identity and convergence checks");
    szasz->add_option("--n-list", n_list, "orders to test");
    szasz->add_option("--velocity", szasz_v, "warp velocity");
    szasz->add_option("--out", szasz_out, "CSV dump path");

    auto* selftest = app.add_subcommand("selftest", "quick internal consistency checks");
    (void)selftest;

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) return cmd_analyze(scenario_path, out_dir, seed);
    if (simulate->parsed()) return cmd_simulate(scenario_path, control_csv, t_final, out_dir, stride);
    if (szasz->parsed()) return cmd_szasz(n_list, szasz_v, szasz_out);
    return cmd_selftest();
}

namespace {

int cmd_selftest() {
    using namespace posnet;
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "[ ok ] " : "[FAIL] ") << what << "\n";
        if (!ok) ++failures;
    };

    // 3-cycle adjacency is the cyclic permutation
    NetworkGraph cycle(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}});
    Matrix adj = adjacency(cycle).get();
    Matrix perm = Matrix::Zero(3, 3);
    perm(1, 0) = perm(2, 1) = perm(0, 2) = 1.0;
    check((adj - perm).cwiseAbs().maxCoeff() == 0.0, "cycle adjacency");
    check(is_strongly_connected(cycle), "cycle strong connectivity");
    check(std::abs(spectral_radius(adj) - 1.0) < 1e-9, "stochastic spectral radius");

    // cone: orthant from unit vectors
    std::vector<Vector> gens{Vector::Unit(2, 0), Vector::Unit(2, 1)};
    check(cone_equals_positive_orthant(gens, 2, 1e-9).verdict, "orthant test");
    Vector t(2);
    t << 0.0, 1.0;
    check(!cone_member({(Vector(2) << 1, 1).finished(), (Vector(2) << 1, 0).finished()}, t, 1e-9)
               .verdict,
          "separation test");

    // transport transfer identity at mu = ln 2
    TransportSystem sys(cycle, Vector::Constant(3, 1.0), Vector::Zero(3),
                        PositiveMatrix(Matrix::Identity(3, 3)));
    Matrix ts = transfer_simple(sys, std::log(2.0)).get();
    check((ts - 0.5 * perm).cwiseAbs().maxCoeff() < 1e-15, "transfer halving");
    Matrix tc = transport_transfer_via_trace(sys, std::log(2.0), 101);
    check((ts - tc).cwiseAbs().maxCoeff() < 1e-13, "transfer composition");

    // Szasz identity at one point
    MirakjanEval cfg{32, 1.0};
    const double phi0 = cfg.warp(0.25);
    const double m2 = szasz_warped(cfg, [](double y) { return y * y; }, 32 * phi0);
    check(std::abs(m2 - (phi0 * phi0 + phi0 / 32)) < 1e-10, "szasz second moment");

    std::cout << (failures == 0 ? "selftest: PASS\n" : "selftest: FAIL\n");
    return failures == 0 ? 0 : 3;
}

}  // namespace
