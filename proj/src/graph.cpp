#include "posnet/graph.hpp"

#include <cmath>
#include <stdexcept>

namespace posnet {

namespace {

constexpr double kKirchhoffTol = 1e-12;

void validate(int n_vertices, const std::vector<Edge>& edges, bool kirchhoff) {
    if (n_vertices <= 0) throw std::invalid_argument("NetworkGraph: need at least one vertex");
    std::vector<double> out_sum(static_cast<std::size_t>(n_vertices), 0.0);
    std::vector<int> out_deg(static_cast<std::size_t>(n_vertices), 0);
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const Edge& e = edges[j];
        if (e.tail < 0 || e.tail >= n_vertices || e.head < 0 || e.head >= n_vertices) {
            throw std::invalid_argument("NetworkGraph: edge " + std::to_string(j) +
                                        " has vertex index out of range");
        }
        if (!(e.weight >= 0.0) || e.weight > 1.0) {
            throw std::invalid_argument("NetworkGraph: edge " + std::to_string(j) +
                                        " weight outside [0,1]");
        }
        out_sum[static_cast<std::size_t>(e.tail)] += e.weight;
        out_deg[static_cast<std::size_t>(e.tail)] += 1;
    }
    if (kirchhoff) {
        for (int i = 0; i < n_vertices; ++i) {
            if (out_deg[static_cast<std::size_t>(i)] == 0) {
                throw std::invalid_argument("NetworkGraph: vertex " + std::to_string(i + 1) +
                                            " has no outgoing edge (Kirchhoff mode)");
            }
            if (std::abs(out_sum[static_cast<std::size_t>(i)] - 1.0) > kKirchhoffTol) {
                throw std::invalid_argument("NetworkGraph: outgoing weights at vertex " +
                                            std::to_string(i + 1) + " do not sum to 1");
            }
        }
    }
}

}  // namespace

NetworkGraph::NetworkGraph(int n_vertices, std::vector<Edge> edges, bool kirchhoff)
    : n_vertices_(n_vertices), edges_(std::move(edges)), kirchhoff_(kirchhoff) {
    validate(n_vertices_, edges_, kirchhoff_);
}

IncidenceMatrices incidence_matrices(const NetworkGraph& g) {
    const int n = g.n_vertices();
    const int m = g.n_edges();
    Matrix out = Matrix::Zero(n, m);
    Matrix in = Matrix::Zero(n, m);
    Matrix outw = Matrix::Zero(n, m);
    for (int j = 0; j < m; ++j) {
        const Edge& e = g.edge(j);
        out(e.tail, j) = 1.0;
        in(e.head, j) = 1.0;
        outw(e.tail, j) = e.weight;
    }
    return {PositiveMatrix(std::move(out)), PositiveMatrix(std::move(in)),
            PositiveMatrix(std::move(outw))};
}

PositiveMatrix adjacency(const NetworkGraph& g) {
    const IncidenceMatrices inc = incidence_matrices(g);
    return PositiveMatrix(inc.in.get() * inc.out_weighted.get().transpose());
}

namespace {

void dfs(int start, const std::vector<std::vector<int>>& adj, std::vector<char>& seen) {
    std::vector<int> stack{start};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
    }
}

}  // namespace

bool is_strongly_connected(const NetworkGraph& g) {
    const int n = g.n_vertices();
    std::vector<std::vector<int>> fwd(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> rev(static_cast<std::size_t>(n));
    for (const Edge& e : g.edges()) {
        if (e.weight <= 0.0) continue;  // zero-weight edges carry no flow
        fwd[static_cast<std::size_t>(e.tail)].push_back(e.head);
        rev[static_cast<std::size_t>(e.head)].push_back(e.tail);
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    dfs(0, fwd, seen);
    for (char s : seen)
        if (!s) return false;
    std::fill(seen.begin(), seen.end(), 0);
    dfs(0, rev, seen);
    for (char s : seen)
        if (!s) return false;
    return true;
}

}  // namespace posnet
