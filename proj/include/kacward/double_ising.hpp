#pragma once

#include "kacward/ising_engine.hpp"

#include <vector>

namespace kw {

// Boundary data of a decorated graph: every boundary vertex is univalent.
struct BoundaryDecoration {
    std::vector<int> inward;   // inward boundary edges in counterclockwise order
    std::vector<int> outward;  // their reversals
    std::vector<int> vertices; // boundary vertices in counterclockwise order
};

// Throws GraphError when the graph has no boundary vertex or a boundary vertex
// that is not univalent.
BoundaryDecoration boundary_decoration(const EmbeddedGraph& g);

// K~ = K + i x_e on the diagonal at inward boundary edges.
CMatrix double_kacward(const EmbeddedGraph& g, const CutSet* cut = nullptr);

struct DoublePartition {
    double value = 0.0;
    double imaginary_residue = 0.0;
};
// (-1)^|E| det K~
DoublePartition double_partition_details(const EmbeddedGraph& g);
double double_partition(const EmbeddedGraph& g);

// det K~_[u1..um] / det K~
double double_spin_correlation(const EmbeddedGraph& g, const std::vector<int>& faces, unsigned seed = 0);
double double_spin_correlation_with_cut(const EmbeddedGraph& g, const CutSet& cut);

// det of K with the rows and columns indexed by `removed` deleted.
cplx principal_minor_det(const EmbeddedGraph& g, const std::vector<int>& removed);

// Inward boundary edges strictly inside the counterclockwise arc from a to b.
std::vector<int> boundary_arc(const EmbeddedGraph& g, int a, int b);
// K~^[a,b] with row a and column b removed; column a sits where column b was.
CMatrix dobrushin_matrix(const EmbeddedGraph& g, int a, int b);

// Simple paths of oriented edges from `from` to `to` (both included), found by
// randomised depth-first search; at most `count` distinct paths.
std::vector<std::vector<int>> simple_edge_paths(const EmbeddedGraph& g, int from, int to, int count,
                                                unsigned seed = 0);
// w_{b, rev a} = exp(i wind(gamma) / 2) along a simple path from b to rev a.
cplx dobrushin_winding(const EmbeddedGraph& g, int a, int b, const std::vector<int>& path);

struct DobrushinResult {
    double value = 0.0;  // Z^[a,b]
    cplx raw;            // conj(w) (-1)^{|E|-1} det K~^[a,b]
    cplx winding;        // w_{b, rev a}
    double path_spread = 0.0;  // largest phase difference of w over the sampled paths
    int paths = 0;
};
DobrushinResult dobrushin_partition(const EmbeddedGraph& g, int a, int b, int sample_paths = 3);

// F~_a(z_e) = t_e e^{-i pi/4} conj(eta_a) (K~^-1_{e,a} + K~^-1_{rev e,a}) and the
// matching corner values.
Observable double_observable(const EmbeddedGraph& g, int a, const CutSet* cut = nullptr);
// Largest s-holomorphicity residual over pairs whose corner is neither at the
// source vertex o(a) nor at a boundary vertex; at boundary vertices the
// relation is replaced by the boundary condition below.
double double_s_hol_max_residual(const EmbeddedGraph& g, const Observable& f);
// Largest |Im(F~(z_e) e^{i theta_e / 2 + i pi/4} eta_e)| over outward boundary edges e != rev a.
double double_boundary_residual(const EmbeddedGraph& g, const Observable& f);

} // namespace kw
