// Serial vs OpenMP timing for the data-parallel kernels: spectral analysis
// and synthesis, Szasz grid evaluation, and pooled cone memberships.

#include "posnet/cone.hpp"
#include "posnet/heat.hpp"
#include "posnet/parallel.hpp"
#include "posnet/szasz.hpp"

#include <chrono>
#include <functional>
#include <iostream>

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const std::string& name, double serial_ms, double parallel_ms) {
    std::cout << name << ": serial " << serial_ms << " ms, parallel " << parallel_ms
              << " ms, speedup " << serial_ms / parallel_ms << "x\n";
}

}  // namespace

int main() {
    using namespace posnet;
    std::cout << "threads: " << max_threads() << "\n";

    {
        const int edges = 16, points = 801, k_max = 256;
        HeatNetwork net(Vector::Constant(edges, 1.0), Vector::Constant(edges, 1.0),
                        Matrix::Zero(edges, edges), Matrix::Zero(edges, 1));
        SpectralBasis basis = make_spectral_basis(k_max, points);
        GridFunction h(edges, points, 2);
        for (int j = 0; j < edges; ++j)
            for (int p = 0; p < points; ++p) h.values(j, p) = std::sin(0.01 * (j + 1) * p) + 1.5;
        Matrix coeffs = spectral_analyze(basis, h);
        const double ts = time_ms([&] { spectral_analyze_serial(basis, h); }, 5);
        const double tp = time_ms([&] { spectral_analyze(basis, h); }, 5);
        report("spectral_analyze", ts, tp);
        const double ss = time_ms([&] { spectral_synthesize_serial(basis, coeffs); }, 5);
        const double sp = time_ms([&] { spectral_synthesize(basis, coeffs); }, 5);
        report("spectral_synthesize", ss, sp);

        Matrix a = spectral_analyze(basis, h);
        Matrix b = spectral_analyze_serial(basis, h);
        if ((a - b).cwiseAbs().maxCoeff() != 0.0) {
            std::cout << "WARNING: spectral kernels disagree\n";
            return 1;
        }
    }

    {
        MirakjanEval cfg{512, 1.0};
        const Vector xs = uniform_grid(2001);
        auto f = [](double x) { return x * x + 0.5; };
        const double ts = time_ms([&] { mirakjan_apply_grid_serial(cfg, f, xs); }, 3);
        const double tp = time_ms([&] { mirakjan_apply_grid(cfg, f, xs); }, 3);
        report("szasz_grid", ts, tp);
        if ((mirakjan_apply_grid(cfg, f, xs) - mirakjan_apply_grid_serial(cfg, f, xs))
                .cwiseAbs()
                .maxCoeff() != 0.0) {
            std::cout << "WARNING: szasz kernels disagree\n";
            return 1;
        }
    }

    {
        // pooled memberships: one LP per orthant direction
        const int d = 48;
        std::vector<Vector> gens;
        for (int i = 0; i < d; ++i) {
            Vector g = Vector::Zero(d);
            g(i) = 1.0;
            if (i + 1 < d) g(i + 1) = 0.5;
            gens.push_back(g);
        }
        const double tp = time_ms([&] { cone_equals_positive_orthant(gens, d, 1e-9); }, 3);
        std::cout << "cone_orthant(d=" << d << "): " << tp
                  << " ms (membership LPs run in parallel)\n";
    }
    return 0;
}
