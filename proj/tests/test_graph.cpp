#include "posnet/graph.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace posnet;

namespace {

NetworkGraph cycle(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    return NetworkGraph(n, edges);
}

}  // namespace

TEST_CASE("incidence matrices on the 3-cycle") {
    const IncidenceMatrices inc = incidence_matrices(cycle(3));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(inc.out(i, j) == (i == j ? 1.0 : 0.0));
            CHECK(inc.in(i, j) == (i == (j + 1) % 3 ? 1.0 : 0.0));
        }
    }
    CHECK((inc.out_weighted.get() - inc.out.get()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single self-loop gives 1x1 incidence and adjacency") {
    NetworkGraph g(1, {{0, 0, 1.0}});
    const IncidenceMatrices inc = incidence_matrices(g);
    CHECK(inc.out.rows() == 1);
    CHECK(inc.out(0, 0) == 1.0);
    CHECK(inc.in(0, 0) == 1.0);
    CHECK(adjacency(g)(0, 0) == 1.0);
}

TEST_CASE("incidence entries are 0/1 and out_weighted never exceeds out") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const IncidenceMatrices inc = incidence_matrices(oracle::random_kirchhoff_graph(n, rng));
        for (Eigen::Index i = 0; i < inc.out.rows(); ++i) {
            for (Eigen::Index j = 0; j < inc.out.cols(); ++j) {
                CHECK((inc.out(i, j) == 0.0 || inc.out(i, j) == 1.0));
                CHECK((inc.in(i, j) == 0.0 || inc.in(i, j) == 1.0));
                CHECK(inc.out_weighted(i, j) <= inc.out(i, j));
            }
        }
    }
}

TEST_CASE("zero-weight edge appears in out but not out_weighted") {
    NetworkGraph g(2, {{0, 1, 0.0}, {0, 1, 1.0}, {1, 0, 1.0}});
    const IncidenceMatrices inc = incidence_matrices(g);
    CHECK(inc.out(0, 0) == 1.0);
    CHECK(inc.out_weighted(0, 0) == 0.0);
    CHECK(inc.out_weighted(0, 1) == 1.0);
}

TEST_CASE("N-cycle adjacency is the cyclic permutation") {
    for (int n : {3, 5, 8}) {
        const Matrix a = adjacency(cycle(n)).get();
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < n; ++k) {
                CHECK(a(i, k) == ((i == (k + 1) % n) ? 1.0 : 0.0));
            }
        }
    }
}

TEST_CASE("star with split weights is column stochastic") {
    // v1 -> v2 (0.5), v1 -> v3 (0.5), v2 -> v1, v3 -> v1
    NetworkGraph g(3, {{0, 1, 0.5}, {0, 2, 0.5}, {1, 0, 1.0}, {2, 0, 1.0}});
    const Matrix a = adjacency(g).get();
    for (int k = 0; k < 3; ++k) CHECK(a.col(k).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Kirchhoff validation rejects bad graphs") {
    CHECK_THROWS_AS(NetworkGraph(2, {{0, 1, 0.5}, {1, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(NetworkGraph(2, {{0, 1, 1.0}}), std::invalid_argument);        // v2 dangling
    CHECK_THROWS_AS(NetworkGraph(2, {{0, 2, 1.0}, {1, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(NetworkGraph(1, {{0, 0, 1.5}}), std::invalid_argument);        // weight > 1
    CHECK_NOTHROW(NetworkGraph(2, {{0, 1, 0.5}}, /*kirchhoff=*/false));
}

TEST_CASE("strong connectivity") {
    CHECK(is_strongly_connected(cycle(3)));
    NetworkGraph path(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 2, 1.0}}, false);
    CHECK_FALSE(is_strongly_connected(path));
    // two disjoint cycles
    NetworkGraph two(4, {{0, 1, 1.0}, {1, 0, 1.0}, {2, 3, 1.0}, {3, 2, 1.0}});
    CHECK_FALSE(is_strongly_connected(two));
    // zero-weight edge does not transmit
    NetworkGraph weak(2, {{0, 1, 0.0}, {0, 0, 1.0}, {1, 0, 1.0}}, false);
    CHECK_FALSE(is_strongly_connected(weak));
}

TEST_CASE("connectivity matches the matrix-power oracle on random graphs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        NetworkGraph g = oracle::random_kirchhoff_graph(n, rng);
        CHECK(is_strongly_connected(g) == oracle::strongly_connected_matrix_oracle(g));
        // random graphs from the helper are strongly connected by design
        CHECK(is_strongly_connected(g));
        const Matrix a = adjacency(g).get();
        for (int k = 0; k < n; ++k) {
            CHECK(a.col(k).sum() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("non-Kirchhoff subgraphs can fail the oracle comparison too") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> vertex(0, 3);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Edge> edges;
        const int m = 3 + static_cast<int>(rng() % 5);
        for (int e = 0; e < m; ++e) edges.push_back({vertex(rng), vertex(rng), 0.5});
        NetworkGraph g(4, edges, /*kirchhoff=*/false);
        CHECK(is_strongly_connected(g) == oracle::strongly_connected_matrix_oracle(g));
    }
}
