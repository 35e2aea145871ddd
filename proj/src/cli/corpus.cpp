#include "kacward/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace kw {

EmbeddedGraph polygon_graph(int n, double x) {
    std::vector<Point> pos;
    std::vector<std::pair<int, int>> edges;
    std::vector<double> w;
    for (int k = 0; k < n; ++k) {
        const double a = 2 * kPi * k / n + 0.1;
        pos.push_back({std::cos(a), std::sin(a)});
        edges.push_back({k, (k + 1) % n});
        w.push_back(x * (1.0 + 0.1 * k));
    }
    return EmbeddedGraph::planar(pos, edges, w);
}

EmbeddedGraph lattice_block(int n, int m, double x0) {
    std::vector<Point> pos;
    std::vector<std::pair<int, int>> edges;
    std::vector<double> w;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) pos.push_back({double(i), double(j)});
    int k = 0;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
            if (i + 1 < n) {
                edges.push_back({j * n + i, j * n + i + 1});
                w.push_back(x0 + 0.03 * (k++ % 7));
            }
            if (j + 1 < m) {
                edges.push_back({j * n + i, (j + 1) * n + i});
                w.push_back(x0 + 0.03 * (k++ % 7));
            }
        }
    return EmbeddedGraph::planar(pos, edges, w);
}

EmbeddedGraph decorated_block(int n, int m, double x0, double tail_weight) {
    const EmbeddedGraph base = lattice_block(n, m, x0);
    std::vector<Point> pos = base.positions();
    std::vector<std::pair<int, int>> edges;
    std::vector<double> w = base.weights();
    for (int g = 0; g < base.num_edges(); ++g) edges.push_back(base.endpoints(g));
    std::vector<int> boundary;
    const double cx = (n - 1) / 2.0, cy = (m - 1) / 2.0;
    int k = 0;
    for (int v = 0; v < base.num_vertices(); ++v) {
        const Point p = base.position(v);
        if (p.x > 0 && p.x < n - 1 && p.y > 0 && p.y < m - 1) continue;
        // Tail direction: away from the centre, turned by 0.15 rad.
        const cplx d = std::polar(1.0, 0.15) * cplx(p.x - cx + 1e-3, p.y - cy + 2e-3);
        const cplx t = cplx(p.x, p.y) + 0.6 * d / std::abs(d);
        pos.push_back({t.real(), t.imag()});
        boundary.push_back(static_cast<int>(pos.size()) - 1);
        edges.push_back({v, boundary.back()});
        w.push_back(tail_weight + 0.05 * (k++ % 3));
    }
    return EmbeddedGraph::planar(pos, edges, w, boundary);
}

EmbeddedGraph random_plane_graph(int vertices, int max_edges, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, 1.0), weight(0.15, 0.9);
    std::vector<Point> pos(vertices);
    for (auto& p : pos) p = {coord(rng), coord(rng)};
    std::vector<std::pair<int, int>> candidates;
    for (int a = 0; a < vertices; ++a)
        for (int b = a + 1; b < vertices; ++b) candidates.push_back({a, b});
    auto length = [&](std::pair<int, int> e) {
        return std::hypot(pos[e.first].x - pos[e.second].x, pos[e.first].y - pos[e.second].y);
    };
    std::sort(candidates.begin(), candidates.end(),
              [&](auto l, auto r) { return length(l) < length(r); });

    // Spanning-tree edges in Kruskal order, then the shortest remaining edges.
    std::vector<int> parent(vertices);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::vector<std::pair<int, int>> edges;
    auto crosses_any = [&](std::pair<int, int> e) {
        for (auto f : edges) {
            if (f.first == e.first || f.first == e.second || f.second == e.first || f.second == e.second) continue;
            if (segments_cross(pos[e.first], pos[e.second], pos[f.first], pos[f.second])) return true;
        }
        return false;
    };
    for (auto e : candidates)
        if (find(e.first) != find(e.second) && !crosses_any(e)) {
            parent[find(e.first)] = find(e.second);
            edges.push_back(e);
        }
    for (auto e : candidates) {
        if (static_cast<int>(edges.size()) >= max_edges) break;
        if (std::find(edges.begin(), edges.end(), e) == edges.end() && !crosses_any(e)) edges.push_back(e);
    }
    std::vector<double> w(edges.size());
    for (auto& x : w) x = weight(rng);
    return EmbeddedGraph::planar(pos, edges, w);
}

std::vector<CorpusGraph> standard_corpus() {
    std::vector<CorpusGraph> c;
    auto add = [&](std::string name, EmbeddedGraph g) { c.push_back({std::move(name), std::move(g)}); };
    add("triangle", polygon_graph(3, 0.4));
    add("square", polygon_graph(4, 0.5));
    add("pentagon", polygon_graph(5, 0.6));
    add("hexagon", polygon_graph(6, 0.7));
    add("octagon", polygon_graph(8, 0.8));
    add("block-2x2", lattice_block(2, 2, 0.35));
    add("block-2x3", lattice_block(2, 3, 0.3));
    add("block-3x3", lattice_block(3, 3, 0.25));
    add("decorated-square", decorated_block(2, 2, 0.4, 0.6));
    add("decorated-2x3", decorated_block(2, 3, 0.3, 0.5));

    // Triangle with a degree-1 tail.
    add("triangle-tail", EmbeddedGraph::planar({{0, 0}, {1, 0}, {0.5, 0.9}, {0.5, 1.8}},
                                               {{0, 1}, {1, 2}, {2, 0}, {2, 3}}, {0.4, 0.5, 0.6, 0.7}));
    // 3x3 block with two tails.
    {
        const EmbeddedGraph b = lattice_block(3, 3, 0.2);
        std::vector<Point> pos = b.positions();
        std::vector<std::pair<int, int>> edges;
        for (int g = 0; g < b.num_edges(); ++g) edges.push_back(b.endpoints(g));
        std::vector<double> w = b.weights();
        pos.push_back({3, 3});
        edges.push_back({8, 9});
        w.push_back(0.4);
        pos.push_back({-1, 0.2});
        edges.push_back({0, 10});
        w.push_back(0.7);
        add("block-3x3-tails", EmbeddedGraph::planar(pos, edges, w));
    }
    // K4 drawn with one vertex inside the triangle.
    add("k4", EmbeddedGraph::planar({{0, 0}, {2, 0}, {1, 1.8}, {1, 0.6}},
                                    {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}, {2, 3}},
                                    {0.3, 0.4, 0.5, 0.6, 0.7, 0.8}));
    // Wheel with five spokes.
    {
        std::vector<Point> pos{{0, 0}};
        std::vector<std::pair<int, int>> edges;
        std::vector<double> w;
        for (int k = 0; k < 5; ++k) {
            const double a = 2 * kPi * k / 5 + 0.2;
            pos.push_back({std::cos(a), std::sin(a)});
        }
        for (int k = 0; k < 5; ++k) {
            edges.push_back({0, k + 1});
            w.push_back(0.3 + 0.05 * k);
            edges.push_back({k + 1, (k + 1) % 5 + 1});
            w.push_back(0.5 + 0.04 * k);
        }
        add("wheel-5", EmbeddedGraph::planar(pos, edges, w));
    }
    // House: a square with a triangular roof.
    add("house", EmbeddedGraph::planar({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 1.7}},
                                       {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {2, 4}, {4, 3}},
                                       {0.6, 0.5, 0.4, 0.55, 0.45, 0.65}));
    // Theta graph: two vertices joined by three paths.
    add("theta", EmbeddedGraph::planar({{0, 0}, {2, 0}, {1, 1}, {1, 0.1}, {1, -1}},
                                       {{0, 2}, {2, 1}, {0, 3}, {3, 1}, {0, 4}, {4, 1}},
                                       {0.5, 0.6, 0.7, 0.8, 0.45, 0.35}));
    // A star: every even subgraph is empty.
    add("star", EmbeddedGraph::planar({{0, 0}, {1, 0.1}, {-0.2, 1}, {-0.9, -0.4}},
                                      {{0, 1}, {0, 2}, {0, 3}}, {0.5, 0.6, 0.7}));
    // Bowtie: two triangles sharing a vertex.
    add("bowtie", EmbeddedGraph::planar({{0, 0}, {-1, 0.6}, {-1, -0.6}, {1, 0.6}, {1, -0.6}},
                                        {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}},
                                        {0.7, 0.6, 0.5, 0.4, 0.3, 0.8}));
    // Non-convex face with a reflex vertex.
    add("arrowhead", EmbeddedGraph::planar({{0, 0}, {2, 1}, {0, 2}, {0.8, 1}},
                                           {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 3}},
                                           {0.5, 0.6, 0.7, 0.8, 0.9}));
    for (unsigned s = 1; s <= 6; ++s)
        add("random-" + std::to_string(s), random_plane_graph(7 + static_cast<int>(s % 3), 10 + static_cast<int>(s % 5), s));
    return c;
}

} // namespace kw
