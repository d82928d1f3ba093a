#pragma once

#include <string>
#include <vector>

namespace spectral {

/// Finite connected metric graph: unit-length edges, no loops or multi-edges.
/// Edges are stored once, oriented (lower index, higher index); a point
/// (uv, t) equals (vu, 1-t).
struct Graph {
    std::vector<std::string> vertices;          // index = file order
    std::vector<std::pair<int, int>> edges;     // canonical orientation, file order
    std::vector<int> degree;                    // m0(x), per vertex

    int num_vertices() const { return int(vertices.size()); }
    int num_edges() const { return int(edges.size()); }
    /// Edge indices incident to each vertex.
    std::vector<std::vector<int>> incidence() const;
    std::vector<double> weights() const;        // degree as double, the vertex measure
};

/// Parse and validate the JSON graph format:
///   {"vertices": ["a", ...], "edges": [["a","b"], ...]}
/// Unknown keys are rejected.
Graph load_graph(const std::string& text);

enum class GraphFamily { cycle, star, path, complete };
GraphFamily parse_family(const std::string& name);

/// Deterministic test fixtures with vertex labels v0..v(n-1).
Graph builtin_graph(GraphFamily family, int n);

/// Build a validated graph from explicit data (labels optional).
Graph make_graph(std::vector<std::string> vertices, std::vector<std::pair<int, int>> edges);

}  // namespace spectral
