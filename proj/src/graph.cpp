#include "spectral/graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "spectral/errors.hpp"

namespace spectral {

std::vector<std::vector<int>> Graph::incidence() const {
    std::vector<std::vector<int>> inc(vertices.size());
    for (int e = 0; e < num_edges(); ++e) {
        inc[edges[e].first].push_back(e);
        inc[edges[e].second].push_back(e);
    }
    return inc;
}

std::vector<double> Graph::weights() const {
    std::vector<double> w(degree.size());
    for (std::size_t i = 0; i < degree.size(); ++i) w[i] = double(degree[i]);
    return w;
}

Graph make_graph(std::vector<std::string> vertices, std::vector<std::pair<int, int>> edges) {
    Graph g;
    g.vertices = std::move(vertices);
    const int n = g.num_vertices();
    if (n == 0) throw ParseError("graph has no vertices");

    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u == v) throw LoopEdge(g.vertices[u]);
        if (u > v) std::swap(u, v);
        if (!seen.insert({u, v}).second)
            throw DuplicateEdge(g.vertices[u], g.vertices[v]);
        g.edges.emplace_back(u, v);
    }

    g.degree.assign(n, 0);
    for (auto [u, v] : g.edges) {
        ++g.degree[u];
        ++g.degree[v];
    }

    // reachability from vertex 0
    std::vector<char> reach(n, 0);
    std::vector<int> stack{0};
    reach[0] = 1;
    auto inc = g.incidence();
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (int e : inc[x]) {
            const int y = g.edges[e].first == x ? g.edges[e].second : g.edges[e].first;
            if (!reach[y]) {
                reach[y] = 1;
                stack.push_back(y);
            }
        }
    }
    for (int x = 0; x < n; ++x)
        if (!reach[x] || g.degree[x] == 0) throw Disconnected(g.vertices[x]);
    return g;
}

Graph load_graph(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph file: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("graph file: top level must be an object");
    for (auto& [key, _] : j.items())
        if (key != "vertices" && key != "edges")
            throw ParseError("graph file: unknown key '" + key + "'");
    if (!j.contains("vertices") || !j.contains("edges"))
        throw ParseError("graph file: need 'vertices' and 'edges'");
    if (!j["vertices"].is_array() || !j["edges"].is_array())
        throw ParseError("graph file: 'vertices' and 'edges' must be arrays");

    std::vector<std::string> vertices;
    std::map<std::string, int> index;
    for (const auto& v : j["vertices"]) {
        if (!v.is_string()) throw ParseError("graph file: vertex labels must be strings");
        const std::string s = v.get<std::string>();
        if (index.count(s)) throw ParseError("graph file: duplicate vertex '" + s + "'");
        index[s] = int(vertices.size());
        vertices.push_back(s);
    }

    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw ParseError("graph file: each edge must be a pair of vertex labels");
        const std::string a = e[0].get<std::string>(), b = e[1].get<std::string>();
        auto ia = index.find(a);
        if (ia == index.end()) throw UnknownVertex(a);
        auto ib = index.find(b);
        if (ib == index.end()) throw UnknownVertex(b);
        edges.emplace_back(ia->second, ib->second);
    }
    return make_graph(std::move(vertices), std::move(edges));
}

GraphFamily parse_family(const std::string& name) {
    if (name == "cycle") return GraphFamily::cycle;
    if (name == "star") return GraphFamily::star;
    if (name == "path") return GraphFamily::path;
    if (name == "complete") return GraphFamily::complete;
    throw InvalidSize("unknown graph family '" + name + "'");
}

Graph builtin_graph(GraphFamily family, int n) {
    const int min_n = (family == GraphFamily::cycle || family == GraphFamily::complete) ? 3 : 2;
    if (n < min_n)
        throw InvalidSize("graph family needs at least " + std::to_string(min_n) + " vertices");

    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = "v" + std::to_string(i);

    std::vector<std::pair<int, int>> edges;
    switch (family) {
        case GraphFamily::cycle:
            for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
            break;
        case GraphFamily::star:
            for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
            break;
        case GraphFamily::path:
            for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
            break;
        case GraphFamily::complete:
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
            break;
    }
    return make_graph(std::move(labels), std::move(edges));
}

}  // namespace spectral
