#pragma once

#include "kacward/embedded_graph.hpp"

#include <string>
#include <vector>

namespace kw {

struct CorpusGraph {
    std::string name;
    EmbeddedGraph graph;
};

// Small plane graphs used by the verification suite: polygons, lattice blocks,
// graphs with degree-1 tails, decorated graphs with boundary vertices and random
// plane graphs with at most 14 edges.
std::vector<CorpusGraph> standard_corpus();

// Regular graphs used throughout.
EmbeddedGraph polygon_graph(int n, double x);
// n x m vertices with unit spacing; weights cycle through x0 + 0.03 k.
EmbeddedGraph lattice_block(int n, int m, double x0);
// Lattice block with a degree-1 tail attached at every outer vertex; the tail
// ends are the boundary vertices.
EmbeddedGraph decorated_block(int n, int m, double x0, double tail_weight);
// Random plane graph: greedy non-crossing edges between random points, cut off
// at `max_edges`.  Connected by construction.
EmbeddedGraph random_plane_graph(int vertices, int max_edges, unsigned seed);

} // namespace kw
