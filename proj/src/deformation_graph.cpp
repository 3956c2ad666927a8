#include "pathfinder/deformation_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "pathfinder/errors.hpp"

namespace pathfinder {

Graph build_graph(const NonOscRegion& region, const std::vector<ExitPoint>& exit_points,
                  const std::vector<Complex>& finite_endpoints, const std::vector<double>& valley_angles,
                  const std::vector<SDPath>& paths, const std::vector<TraceSource>& sources,
                  GraphVertexIds* ids_out) {
    if (paths.size() != sources.size())
        throw InputError("build_graph: paths/sources size mismatch");

    Graph graph;
    GraphVertexIds ids;

    for (size_t i = 0; i < region.balls.size(); ++i) {
        ids.stationary.push_back(static_cast<int>(graph.vertices.size()));
        graph.vertices.push_back({VertexKind::Stationary, region.balls[i].center, 0.0, static_cast<int>(i)});
    }
    for (const Complex& e : finite_endpoints) {
        ids.endpoints.push_back(static_cast<int>(graph.vertices.size()));
        graph.vertices.push_back({VertexKind::FiniteEndpoint, e, 0.0, -1});
    }
    for (const ExitPoint& x : exit_points) {
        ids.exits.push_back(static_cast<int>(graph.vertices.size()));
        graph.vertices.push_back({VertexKind::Exit, x.location, 0.0, x.owner});
    }
    for (const SDPath& path : paths) {
        if (path.terminal.kind == SDTerminal::Kind::Entrance) {
            ids.entrances.push_back(static_cast<int>(graph.vertices.size()));
            graph.vertices.push_back(
                {VertexKind::Entrance, path.terminal.point, 0.0, path.terminal.ball});
        } else {
            ids.entrances.push_back(-1);
        }
    }
    std::vector<int> valley_vertex(valley_angles.size());
    for (size_t i = 0; i < valley_angles.size(); ++i) {
        valley_vertex[i] = static_cast<int>(graph.vertices.size());
        ids.valleys.push_back(valley_vertex[i]);
        graph.vertices.push_back({VertexKind::Valley, Complex{}, valley_angles[i], -1});
    }

    std::set<std::pair<int, int>> line_pairs;
    auto add_line = [&](int u, int v) {
        if (u == v)
            return;
        const auto key = std::minmax(u, v);
        if (!line_pairs.insert(key).second)
            return;
        const double len = std::abs(graph.vertices[u].location - graph.vertices[v].location);
        graph.edges.push_back({EdgeKind::BallLine, u, v, -1, len});
    };

    // Rule (a): clique over the members of each ball. An entrance refined to
    // just outside its ball still counts as a member of that ball.
    for (size_t bi = 0; bi < region.balls.size(); ++bi) {
        std::vector<int> members;
        for (size_t vi = 0; vi < graph.vertices.size(); ++vi) {
            const Vertex& v = graph.vertices[vi];
            if (v.kind == VertexKind::Valley)
                continue;
            if (v.ball == static_cast<int>(bi) || region.balls[bi].contains(v.location))
                members.push_back(static_cast<int>(vi));
        }
        for (size_t i = 0; i < members.size(); ++i)
            for (size_t j = i + 1; j < members.size(); ++j)
                add_line(members[i], members[j]);
    }

    // Rule (b): centre-centre edge for overlapping ball pairs.
    for (size_t i = 0; i < region.balls.size(); ++i)
        for (size_t j = i + 1; j < region.balls.size(); ++j)
            if (std::abs(region.balls[i].center - region.balls[j].center) <=
                region.balls[i].radius + region.balls[j].radius)
                add_line(ids.stationary[i], ids.stationary[j]);

    // Rule (c): one SD edge per traced path.
    for (size_t pi = 0; pi < paths.size(); ++pi) {
        const TraceSource& src = sources[pi];
        const int u = src.kind == TraceSource::Kind::Exit ? ids.exits[src.index] : ids.endpoints[src.index];
        int v;
        if (paths[pi].terminal.kind == SDTerminal::Kind::Entrance) {
            v = ids.entrances[pi];
        } else {
            v = -1;
            for (size_t k = 0; k < valley_angles.size(); ++k)
                if (valley_angles[k] == paths[pi].terminal.valley_angle)
                    v = valley_vertex[k];
            if (v < 0)
                throw NumericalError("build_graph: path terminal valley not in the valley list");
        }
        graph.edges.push_back({EdgeKind::SDContour, u, v, static_cast<int>(pi), paths[pi].arc_length()});
    }

    graph.adjacency.assign(graph.vertices.size(), {});
    for (size_t ei = 0; ei < graph.edges.size(); ++ei) {
        graph.adjacency[graph.edges[ei].u].push_back(static_cast<int>(ei));
        graph.adjacency[graph.edges[ei].v].push_back(static_cast<int>(ei));
    }
    if (ids_out)
        *ids_out = ids;
    return graph;
}

QuasiSDDeformation shortest_path(const Graph& graph, int start_vertex, int end_vertex) {
    const int n = static_cast<int>(graph.vertices.size());
    if (start_vertex < 0 || start_vertex >= n || end_vertex < 0 || end_vertex >= n)
        throw InputError("shortest_path: endpoint vertex out of range");

    QuasiSDDeformation deformation;
    if (start_vertex == end_vertex)
        return deformation;

    using Dist = std::pair<int, double>; // (hops, length), lexicographic
    const Dist inf{std::numeric_limits<int>::max(), std::numeric_limits<double>::infinity()};
    std::vector<Dist> dist(n, inf);
    std::vector<int> via_edge(n, -1);
    std::vector<bool> done(n, false);

    using Item = std::pair<Dist, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    dist[start_vertex] = {0, 0.0};
    queue.push({dist[start_vertex], start_vertex});

    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (done[u])
            continue;
        done[u] = true;
        if (u == end_vertex)
            break;
        for (int ei : graph.adjacency[u]) {
            const Edge& e = graph.edges[ei];
            const int v = e.u == u ? e.v : e.u;
            if (done[v])
                continue;
            const Dist alt{d.first + 1, d.second + e.length};
            if (alt < dist[v]) {
                dist[v] = alt;
                via_edge[v] = ei;
                queue.push({alt, v});
            }
        }
    }

    if (via_edge[end_vertex] < 0)
        throw NumericalError("shortest_path: deformation not found (graph disconnected)");

    std::vector<int> edge_chain;
    std::vector<int> vertex_chain{end_vertex};
    int cur = end_vertex;
    while (cur != start_vertex) {
        const int ei = via_edge[cur];
        edge_chain.push_back(ei);
        cur = graph.edges[ei].u == cur ? graph.edges[ei].v : graph.edges[ei].u;
        vertex_chain.push_back(cur);
    }
    std::reverse(edge_chain.begin(), edge_chain.end());
    std::reverse(vertex_chain.begin(), vertex_chain.end());

    for (int ei : edge_chain)
        deformation.edges.push_back({ei, +1});
    deformation.vertices = vertex_chain;
    return deformation;
}

void orient(QuasiSDDeformation& deformation, const Graph& graph, int start_vertex) {
    int cur = start_vertex;
    for (OrientedEdge& oe : deformation.edges) {
        const Edge& e = graph.edges[oe.edge];
        if (e.u == cur) {
            oe.sign = +1;
            cur = e.v;
        } else if (e.v == cur) {
            oe.sign = -1;
            cur = e.u;
        } else {
            throw NumericalError("orient: chain is not contiguous");
        }
    }
}

} // namespace pathfinder
