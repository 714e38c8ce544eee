// Acceptance suite: one check per criterion, one PASS/FAIL line each.
// Exit code is the number of failed criteria.

#include "posnet/csvio.hpp"
#include "posnet/decide.hpp"
#include "posnet/scenario.hpp"
#include "posnet/szasz.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

using namespace posnet;

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::string kScenarios = POSNET_SCENARIO_DIR;

int g_failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

NetworkGraph cycle(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    return NetworkGraph(n, edges);
}

Scenario cycle_scenario(int n, double b) {
    Scenario s;
    s.kind = Scenario::Kind::transport;
    s.graph.emplace(cycle(n));
    s.velocity = Vector::Constant(1, 1.0);
    s.absorption = Vector::Constant(1, 0.0);
    Matrix k = Matrix::Zero(n, n);
    k(0, 0) = b;
    s.control = k;
    s.mode = Verdict::Mode::positive;
    return s;
}

HeatNetwork heat_path(double b, int control_row = 0) {
    Matrix coupling = Matrix::Zero(3, 3);
    coupling(1, 0) = 1.0;
    coupling(2, 1) = 1.0;
    Matrix k = Matrix::Zero(3, 1);
    k(control_row, 0) = b;
    return HeatNetwork(Vector::Constant(3, 1.0), Vector::Constant(3, 1.0), coupling, k);
}

// --- criterion 1 ---------------------------------------------------------
void criterion_1() {
    bool ok = true;
    std::ostringstream detail;
    double worst_ms = 0.0;
    for (int n = 3; n <= 8 && ok; ++n) {
        const double b = 0.75 + 0.5 * n;
        const auto t0 = std::chrono::steady_clock::now();
        const Verdict v = analyze_scenario(cycle_scenario(n, b));
        const double sec = seconds_since(t0);
        worst_ms = std::max(worst_ms, 1e3 * sec);
        if (v.decision != Verdict::Decision::controllable || sec >= 1.0) {
            ok = false;
            break;
        }
        // nonzero generators are exactly b e_1 .. b e_n
        std::vector<bool> seen(static_cast<std::size_t>(n), false);
        for (const Vector& g : v.generators) {
            if (g.cwiseAbs().maxCoeff() == 0.0) continue;
            int hit = -1;
            for (int j = 0; j < n; ++j) {
                if (g(j) != 0.0) {
                    if (hit >= 0 || g(j) != b) {
                        ok = false;
                    }
                    hit = j;
                }
            }
            if (hit < 0) ok = false;
            if (hit >= 0) seen[static_cast<std::size_t>(hit)] = true;
        }
        for (bool s : seen) ok = ok && s;
    }
    detail << "N=3..8, worst case " << worst_ms << " ms";
    report(1, "directed-cycle reproduction with exact generator set", ok, detail.str());
}

// --- criterion 2 ---------------------------------------------------------
void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    bool ok = true;
    int agreements = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);  // N <= 6
        NetworkGraph g = oracle::random_kirchhoff_graph(n, rng);
        const int cols = 1 + static_cast<int>(rng() % 2);
        Matrix k = Matrix::Zero(n, cols);
        for (int c = 0; c < cols; ++c) k(static_cast<int>(rng() % n), c) = unif(rng);
        TransportSystem sys(g, Vector::Constant(g.n_edges(), 1.0), Vector::Zero(g.n_edges()),
                            PositiveMatrix(k));
        const Verdict rank = decide_transport_rank(sys, 1e-9);
        const Verdict freq = decide_transport_frequency(sys, ProbeParams{}, 1e-9);
        bool uniform = true;
        for (int flag : freq.per_mu_controllable) {
            uniform = uniform && flag == freq.per_mu_controllable.front();
        }
        if (rank.decision != freq.decision || !uniform) {
            ok = false;
            break;
        }
        ++agreements;
    }
    const double sec = seconds_since(t0);
    ok = ok && sec < 30.0;
    std::ostringstream detail;
    detail << agreements << "/50 agree, verdict mu-invariant, " << sec << " s";
    report(2, "rank test agrees with the frequency test on random Kirchhoff graphs", ok,
           detail.str());
}

// --- criterion 3 ---------------------------------------------------------
void criterion_3() {
    bool ok = true;
    std::ostringstream detail;
    for (double b : {1.0, -1.0}) {
        const char* file = b > 0 ? "/heat_path_onesign.json" : "/heat_path_negative.json";
        const ScenarioLoad load = load_scenario(kScenarios + file);
        if (!load.ok()) {
            ok = false;
            break;
        }
        const Verdict v = analyze_scenario(*load.scenario);
        if (v.decision != Verdict::Decision::not_controllable || !v.cone.phi) {
            ok = false;
            break;
        }
        HeatFamily family(heat_path(b));
        const Vector& phi = *v.cone.phi;
        if (phi.lpNorm<Eigen::Infinity>() <= 1e-8) ok = false;
        const Vector w = grid_mass_weights(3, 201);
        double worst_pairing = -1e300;
        for (const Vector& g : v.generators) {
            worst_pairing = std::max(worst_pairing, w.cwiseProduct(g).dot(phi));
        }
        if (worst_pairing > 1e-8) ok = false;

        // sign-alternation diagnostic: trapezoid <xi_1 b, cos(k pi x)>
        const HeatNetwork& net = family.network();
        SpectralBasis basis = make_spectral_basis(32, 201);
        const double mu = v.probe.mus.front();
        GridFunction lift(3, 201, 2);
        for (int p = 0; p < 201; ++p) lift.values(0, p) = xi_kernel(net, mu, 0, p / 200.0) * b;
        const Matrix coeffs = spectral_analyze(basis, lift);
        for (int k = 0; k <= 32; ++k) {
            const double c = coeffs(0, k);
            const double expected_sign = ((k % 2 == 0) ? 1.0 : -1.0) * (b > 0 ? 1.0 : -1.0);
            if (std::abs(c) <= 1e-8 || c * expected_sign <= 0.0) ok = false;
        }
        detail << "b=" << b << " worst pairing " << worst_pairing << "; ";
    }
    report(3, "heat path under one-signed control: not controllable with sound certificate", ok,
           detail.str());
}

// --- criterion 4 ---------------------------------------------------------
void criterion_4() {
    HeatFamily family(heat_path(1.0));
    const int points = 201;
    const ScenarioLoad load = load_scenario(kScenarios + "/heat_path.json");
    bool ok = load.ok();
    const Verdict v = ok ? analyze_scenario(*load.scenario)
                         : decide_positive(family, ProbeParams{}, 1e-6, points);
    ok = ok && v.decision == Verdict::Decision::controllable && v.cone.memberships.size() == 3;
    double worst = 0.0;
    if (ok) {
        const Matrix lift = family.lift_profiles(v.probe.mus.front(), points);
        const Vector w = grid_mass_weights(3, points);
        for (int j = 0; j < 3; ++j) {
            Vector target = Vector::Zero(3 * points);
            target.segment(j * points, points) = lift.row(j).transpose();
            Vector combo = Vector::Zero(3 * points);
            const Vector& lam = v.cone.memberships[static_cast<std::size_t>(j)];
            if (lam.minCoeff() < 0.0) ok = false;
            for (std::size_t g = 0; g < v.generators.size(); ++g) {
                combo += lam(static_cast<Eigen::Index>(g)) * v.generators[g];
            }
            worst = std::max(worst, w.cwiseProduct((combo - target).cwiseAbs()).sum());
        }
        ok = ok && worst <= 1e-6;
    }
    std::ostringstream detail;
    detail << "worst weighted membership residual " << worst;
    report(4, "heat path with positive control: positively controllable", ok, detail.str());
}

// --- criterion 5 ---------------------------------------------------------
void criterion_5() {
    std::mt19937_64 rng(5150);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        NetworkGraph g = oracle::random_kirchhoff_graph(n, rng);
        TransportSystem sys(g, Vector::Constant(g.n_edges(), 1.0), Vector::Zero(g.n_edges()),
                            PositiveMatrix(Matrix::Identity(n, n)));
        for (int i = 0; i < 8; ++i) {
            const double mu = 0.05 + 0.45 * i;
            const Matrix direct = transfer_simple(sys, mu).get();
            const Matrix composed = transport_transfer_via_trace(sys, mu, 41);
            worst = std::max(worst, (direct - composed).cwiseAbs().maxCoeff());
        }
    }
    ok = worst < 1e-12;

    double worst_nilpotent = 0.0;
    HeatNetwork net = heat_path(1.0);
    for (double mu : {0.2, 1.0, 3.0, 10.0}) {
        const Matrix a = heat_transfer(net, mu);
        worst_nilpotent = std::max(worst_nilpotent, (a * a * a).cwiseAbs().maxCoeff());
    }
    ok = ok && worst_nilpotent < 1e-14;
    std::ostringstream detail;
    detail << "transfer deviation " << worst << ", ||A(mu)^3|| " << worst_nilpotent;
    report(5, "transfer identities and path nilpotency", ok, detail.str());
}

// --- criterion 6 ---------------------------------------------------------
void criterion_6() {
    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    bool ok = true;

    // semigroup law on exact-shift grids
    double worst_law = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        TransportSystem sys(cycle(3), Vector::Constant(3, 1.25),
                            Vector::Constant(3, -unif(rng)), PositiveMatrix(Matrix::Zero(3, 1)));
        GridFunction f(3, 201, 1);
        for (int j = 0; j < 3; ++j)
            for (int p = 0; p < 201; ++p) f.values(j, p) = unif(rng);
        const double dx = f.dx();
        const double t = (5 + static_cast<int>(rng() % 40)) * dx / 1.25;
        const double s = (5 + static_cast<int>(rng() % 40)) * dx / 1.25;
        const GridFunction lhs = free_semigroup_apply(sys, f, t + s);
        const GridFunction rhs = free_semigroup_apply(sys, free_semigroup_apply(sys, f, s), t);
        worst_law = std::max(worst_law, (lhs.values - rhs.values).cwiseAbs().maxCoeff());
    }
    ok = worst_law <= 1e-12;

    // 100 random positive simulations with zero positivity violations
    long violations = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        NetworkGraph g = oracle::random_kirchhoff_graph(n, rng);
        const int m = g.n_edges();
        Matrix k = Matrix::Zero(n, 1);
        k(static_cast<int>(rng() % n), 0) = unif(rng);
        TransportSystem sys(g, Vector::Constant(m, 1.0), Vector::Constant(m, -unif(rng)),
                            PositiveMatrix(k));
        GridFunction f0(m, 41, 1);
        for (int j = 0; j < m; ++j)
            for (int p = 0; p < 41; ++p) f0.values(j, p) = unif(rng);
        ControlSignal u;
        u.positive = true;
        u.dt = 0.2;
        for (int s = 0; s < 5; ++s) u.samples.push_back(Vector::Constant(1, unif(rng)));
        const TransportTrajectory traj = simulate_mild(sys, f0, u, 1.0, true);
        violations += traj.positivity_violations;
        for (const GridFunction& st : traj.states) {
            if (st.min_value() < 0.0) ++violations;
        }
    }
    for (int trial = 0; trial < 40; ++trial) {
        Matrix coupling(3, 3);
        Matrix k = Matrix::Zero(3, 1);
        for (int i = 0; i < 3; ++i) {
            k(i, 0) = 0.5 * unif(rng);
            for (int j = 0; j < 3; ++j) coupling(i, j) = 0.4 * unif(rng);
        }
        HeatNetwork net(Vector::Constant(3, 0.5 + unif(rng)), Vector::Constant(3, 0.5 + unif(rng)),
                        coupling, k);
        SpectralBasis basis = make_spectral_basis(64, 101);
        GridFunction h0(3, 101, 2);
        for (int j = 0; j < 3; ++j) {
            const double a = 0.1 + 0.5 * unif(rng);
            const double c = unif(rng);
            for (int p = 0; p < 101; ++p) {
                const double x = p / 100.0;
                h0.values(j, p) = a + c * std::exp(-20.0 * (x - 0.5) * (x - 0.5));
            }
        }
        ControlSignal u;
        u.positive = true;
        u.samples.push_back(Vector::Constant(1, unif(rng)));
        const HeatTrajectory traj = heat_simulate_mild(net, basis, h0, u, 0.5, 1e-3, true);
        violations += traj.positivity_violations;
    }
    ok = ok && violations == 0;

    // heat decay bound with truncation tail below 1e-8
    HeatNetwork net(Vector::Constant(3, 0.9), Vector::Constant(3, 0.7), Matrix::Zero(3, 3),
                    Matrix::Zero(3, 1));
    SpectralBasis basis = make_spectral_basis(64, 201);
    GridFunction h(3, 201, 2);
    for (int j = 0; j < 3; ++j)
        for (int p = 0; p < 201; ++p) h.values(j, p) = unif(rng);
    const double h0norm = heat_semigroup_apply(net, basis, h, 0.0).norm();
    bool decay_ok = true;
    for (double t : {0.1, 0.5, 1.0, 2.0}) {
        const double lhs = heat_semigroup_apply(net, basis, h, t).norm();
        // tail of the truncated series at t >= 0.1 is below e^{lambda_65 t}
        const double tail = std::exp((-0.7 - 0.9 * 65.0 * 65.0 * kPi * kPi) * t);
        if (tail >= 1e-8) decay_ok = false;
        if (lhs > std::exp(-0.7 * t) * h0norm + 1e-8) decay_ok = false;
    }
    ok = ok && decay_ok;

    std::ostringstream detail;
    detail << "semigroup law " << worst_law << ", violations " << violations;
    report(6, "semigroup law, positivity of 100 random simulations, heat decay bound", ok,
           detail.str());
}

// --- criterion 7 ---------------------------------------------------------
void criterion_7() {
    TransportSystem sys(cycle(2), Vector::Constant(2, 1.0), Vector::Constant(2, -0.3),
                        PositiveMatrix(Matrix::Zero(2, 1)));
    const double mu = 0.5;
    struct Case {
        const char* name;
        double (*f)(double);
    };
    const Case cases[] = {{"x", [](double x) { return x; }},
                          {"1+x", [](double x) { return 1.0 + x; }},
                          {"sin(pi x)", [](double x) { return std::sin(kPi * x); }}};
    bool ok = true;
    double worst801 = 0.0, worst_order = 1e9;
    for (const Case& c : cases) {
        double prev = 0.0;
        for (int points : {201, 401, 801}) {
            GridFunction f(2, points, 1);
            for (int p = 0; p < points; ++p) {
                f.values.col(p).setConstant(c.f(p / double(points - 1)));
            }
            const GridFunction r = resolvent_apply(sys, mu, f);
            const Vector ode = oracle::resolvent_ode_oracle(c.f, mu, -0.3, 1.0, points);
            const double err = (r.values.row(0).transpose() - ode).cwiseAbs().maxCoeff();
            if (points == 801) worst801 = std::max(worst801, err);
            if (prev > 0.0) worst_order = std::min(worst_order, std::log2(prev / err));
            prev = err;
        }
    }
    ok = worst801 < 1e-6 && worst_order >= 1.9;
    std::ostringstream detail;
    detail << "max error at P=801: " << worst801 << ", observed order " << worst_order;
    report(7, "transport resolvent matches the ODE oracle at second order", ok, detail.str());
}

// --- criterion 8 ---------------------------------------------------------
void criterion_8() {
    std::mt19937_64 rng(888);
    std::uniform_int_distribution<int> entry(0, 3);
    int decisive = 0;
    bool ok = true;
    int trial = 0;
    while (decisive < 100 && trial < 400) {
        ++trial;
        const int d = 2 + static_cast<int>(rng() % 3);
        const int m = 1 + static_cast<int>(rng() % 6);
        std::vector<Vector> gens;
        for (int k = 0; k < m; ++k) {
            Vector g(d);
            for (int i = 0; i < d; ++i) g(i) = entry(rng);
            gens.push_back(g);
        }
        Vector t(d);
        for (int i = 0; i < d; ++i) t(i) = entry(rng);

        const ConeReport rep = cone_member(gens, t, 1e-9);
        const double res2 = oracle::nnls_residual(gens, t, 50000);
        if (res2 <= 1e-7) {
            if (!rep.verdict) ok = false;
            ++decisive;
        } else if (res2 > 1e-3) {
            if (rep.verdict) ok = false;
            if (!rep.phi) {
                ok = false;
            } else {
                const Vector& phi = *rep.phi;
                for (const Vector& g : gens) {
                    if (g.dot(phi) > 1e-9) ok = false;
                }
                if (t.dot(phi) <= 1e-9) ok = false;
                const double margin = 0.25 * rep.residual / std::max(1.0, t.lpNorm<1>());
                if (!oracle::sphere_has_separator(gens, t, 0.02, 1e-9, margin)) ok = false;
            }
            ++decisive;
        }
        if (!ok) break;
    }
    ok = ok && decisive >= 100;
    std::ostringstream detail;
    detail << decisive << " decisive instances, all agree";
    report(8, "cone verdicts match the dual-sphere / NNLS oracle", ok, detail.str());
}

// --- criterion 9 ---------------------------------------------------------
void criterion_9() {
    bool ok = true;
    double worst_id = 0.0;
    for (int n : {8, 16, 32, 64, 128}) {
        MirakjanEval cfg{n, 1.0};
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            const double phi = cfg.warp(x);
            const double rate = n * phi;
            worst_id = std::max(
                worst_id, std::abs(szasz_warped(cfg, [](double) { return 1.0; }, rate) - 1.0));
            const double m2 = szasz_warped(cfg, [](double y) { return y * y; }, rate);
            worst_id = std::max(worst_id, std::abs(m2 - (phi * phi + phi / n)));
        }
    }
    ok = worst_id <= 1e-10;

    const Vector xs = uniform_grid(101);
    auto f = [](double x) { return x; };
    double prev = -1.0;
    double worst_ratio = 0.0;
    for (int n : {8, 16, 32, 64, 128}) {
        MirakjanEval cfg{n, 1.0};
        const Vector m = mirakjan_apply_grid(cfg, f, xs);
        double sup = 0.0;
        for (int i = 0; i < xs.size(); ++i) sup = std::max(sup, std::abs(m(i) - xs(i)));
        if (prev >= 0.0) {
            if (sup >= prev) ok = false;
            worst_ratio = std::max(worst_ratio, sup / prev);
        }
        prev = sup;
    }
    ok = ok && worst_ratio <= 0.75;
    std::ostringstream detail;
    detail << "identity error " << worst_id << ", worst ratio " << worst_ratio;
    report(9, "approximation-operator identities and monotone convergence", ok, detail.str());
}

// --- criterion 10 --------------------------------------------------------
void criterion_10() {
    std::mt19937_64 rng(1010);
    bool ok = true;
    double worst_dev = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const Matrix a = adjacency(oracle::random_kirchhoff_graph(n, rng)).get();
        worst_dev = std::max(worst_dev, std::abs(spectral_radius(a, 1e-10) - 1.0));
    }
    ok = worst_dev <= 1e-9;

    // strict monotonicity of r(A(mu)) across the probe grid
    TransportSystem ts(cycle(4), Vector::Constant(4, 1.0), Vector::Zero(4),
                       PositiveMatrix(Matrix::Identity(4, 4)));
    TransportFamily tf(ts);
    Matrix cyc = Matrix::Zero(3, 3);
    cyc(1, 0) = cyc(2, 1) = cyc(0, 2) = 0.8;
    HeatFamily hf(HeatNetwork(Vector::Constant(3, 1.0), Vector::Constant(3, 1.0), cyc,
                              Matrix::Zero(3, 1)));
    for (const BoundaryFamily* fam : {static_cast<const BoundaryFamily*>(&tf),
                                      static_cast<const BoundaryFamily*>(&hf)}) {
        const FrequencyProbe probe = make_probe(*fam, ProbeParams{});
        double prev = 1e300;
        for (double mu : probe.mus) {
            const double r = spectral_radius(fam->transfer(mu), 1e-10);
            if (r >= prev) ok = false;
            prev = r;
        }
    }
    std::ostringstream detail;
    detail << "stochastic radius deviation " << worst_dev << ", r(A(mu)) strictly decreasing";
    report(10, "spectral radius normalization and monotonicity", ok, detail.str());
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::cout << (g_failures == 0 ? "acceptance: PASS" : "acceptance: FAIL") << " ("
              << seconds_since(t0) << " s)\n";
    return g_failures;
}
