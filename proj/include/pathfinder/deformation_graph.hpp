#pragma once

#include <vector>

#include "pathfinder/sd_tracer.hpp"

namespace pathfinder {

enum class VertexKind { Stationary, FiniteEndpoint, Exit, Entrance, Valley };

struct Vertex {
    VertexKind kind;
    Complex location{};  // unused for Valley
    double angle = 0.0;  // Valley only
    int ball = -1;       // Stationary: own ball; Exit/Entrance: owning ball
};

enum class EdgeKind { BallLine, SDContour };

/// Stored direction is u -> v; for SD edges u is the trace origin and v the
/// terminal (entrance or valley). `length` is the Euclidean length (polyline
/// arc length for SD edges) and only breaks ties between equal-hop paths.
struct Edge {
    EdgeKind kind;
    int u = -1;
    int v = -1;
    int path = -1; // SDContour: index into the traced paths
    double length = 0.0;
};

struct Graph {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> adjacency; // edge ids incident to each vertex
};

/// Which traced path came from which launch point.
struct TraceSource {
    enum class Kind { Exit, Endpoint };
    Kind kind;
    int index; // into the exits list or the finite-endpoints list
};

struct OrientedEdge {
    int edge;
    int sign; // +1 along the stored direction, -1 against it
};

/// Ordered, oriented chain of contours equivalent to the original contour.
struct QuasiSDDeformation {
    std::vector<OrientedEdge> edges;
    std::vector<int> vertices; // visited vertex ids, size edges.size()+1 (or empty)
};

struct GraphVertexIds {
    std::vector<int> stationary;
    std::vector<int> endpoints;
    std::vector<int> exits;
    std::vector<int> entrances; // one per Entrance-terminated path, in path order
    std::vector<int> valleys;
};

/// Builds the connection graph: (a) a clique over the members of each ball,
/// (b) a centre-centre edge for each overlapping ball pair, (c) one SD edge
/// per traced path to its terminal. Duplicate ball-line edges are removed.
Graph build_graph(const NonOscRegion& region, const std::vector<ExitPoint>& exit_points,
                  const std::vector<Complex>& finite_endpoints, const std::vector<double>& valley_angles,
                  const std::vector<SDPath>& paths, const std::vector<TraceSource>& sources,
                  GraphVertexIds* ids_out = nullptr);

/// Dijkstra with lexicographic weight (edge count, total length). Throws
/// NumericalError when no path exists. start == end yields an empty chain.
QuasiSDDeformation shortest_path(const Graph& graph, int start_vertex, int end_vertex);

/// Assigns traversal signs along the chain starting at start_vertex.
void orient(QuasiSDDeformation& deformation, const Graph& graph, int start_vertex);

} // namespace pathfinder
