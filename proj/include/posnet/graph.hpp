#pragma once

#include "posnet/common.hpp"

#include <tuple>
#include <vector>

namespace posnet {

struct Edge {
    int tail = 0;   // 0-based vertex the edge leaves
    int head = 0;   // 0-based vertex the edge enters
    double weight = 1.0;
};

/// Directed weighted multigraph. Edges are parameterized so that material
/// flows from x=1 (tail vertex) to x=0 (head vertex). Self-loops and
/// parallel edges are allowed. In Kirchhoff mode every vertex must have at
/// least one outgoing edge and its outgoing weights must sum to one, which
/// makes the weighted transposed adjacency matrix column stochastic.
class NetworkGraph {
public:
    NetworkGraph(int n_vertices, std::vector<Edge> edges, bool kirchhoff = true);

    int n_vertices() const { return n_vertices_; }
    int n_edges() const { return static_cast<int>(edges_.size()); }
    bool kirchhoff() const { return kirchhoff_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int j) const { return edges_[static_cast<std::size_t>(j)]; }

private:
    int n_vertices_;
    std::vector<Edge> edges_;
    bool kirchhoff_;
};

struct IncidenceMatrices {
    PositiveMatrix out;           // N x M, out(i,j)=1 iff edge j leaves vertex i
    PositiveMatrix in;            // N x M, in(i,j)=1 iff edge j enters vertex i
    PositiveMatrix out_weighted;  // N x M, weight(j) * out(i,j)
};

IncidenceMatrices incidence_matrices(const NetworkGraph& g);

/// Weighted transposed adjacency matrix  A = I_in * (I_out_w)^T  (N x N).
/// Column stochastic in Kirchhoff mode.
PositiveMatrix adjacency(const NetworkGraph& g);

/// Strong connectivity of the flow-carrying graph (edges of weight zero do
/// not transmit and are ignored). Depth-first search on the graph and on its
/// reverse; equivalent to irreducibility of adjacency(g).
bool is_strongly_connected(const NetworkGraph& g);

}  // namespace posnet
