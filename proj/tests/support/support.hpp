#pragma once

#include "kacward/corpus.hpp"
#include "kacward/embedded_graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace kwtest {

using kw::EmbeddedGraph;
using kw::Point;

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// 4-cycle with a degree-1 tail at every vertex; the tail ends are boundary vertices.
inline EmbeddedGraph decorated_square(double x) {
    return EmbeddedGraph::planar({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {-0.7, -0.6}, {1.6, -0.5}, {1.7, 1.6}, {-0.5, 1.7}},
                                 {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {1, 5}, {2, 6}, {3, 7}},
                                 {x, x * 1.1, x * 0.9, x * 1.2, 0.6, 0.7, 0.8, 0.5}, {4, 5, 6, 7});
}

// 2x3 block (7 bulk edges) with 5 tails.
inline EmbeddedGraph decorated_2x3() {
    return EmbeddedGraph::planar(
        {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}, {-0.6, -0.5}, {1, -0.8}, {2.6, -0.5}, {2.6, 1.5}, {-0.6, 1.5}},
        {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}, {0, 6}, {1, 7}, {2, 8}, {5, 9}, {3, 10}},
        {0.3, 0.4, 0.35, 0.45, 0.5, 0.25, 0.33, 0.6, 0.55, 0.7, 0.65, 0.42}, {6, 7, 8, 9, 10});
}

inline EmbeddedGraph corpus_graph(const std::string& name) {
    for (auto& cg : kw::standard_corpus())
        if (cg.name == name) return cg.graph;
    throw std::invalid_argument("no corpus graph " + name);
}

inline bool has_degree_one(const EmbeddedGraph& g) {
    for (int v = 0; v < g.num_vertices(); ++v)
        if (g.degree(v) == 1) return true;
    return false;
}

// `size` distinct oriented edges drawn uniformly.
inline std::vector<int> random_oriented(const EmbeddedGraph& g, int size, std::mt19937& rng) {
    std::vector<int> all(g.num_oriented());
    for (int e = 0; e < g.num_oriented(); ++e) all[e] = e;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min<int>(size, g.num_oriented()));
    return all;
}

// Random polygon with `n` vertices in the unit square.
inline std::vector<Point> random_polygon(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> p(n);
    for (auto& q : p) q = {u(rng), u(rng)};
    return p;
}

} // namespace kwtest
