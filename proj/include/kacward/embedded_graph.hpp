#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kw {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

class GraphError : public std::runtime_error {
public:
    enum class Kind { Crossing, Disconnected, Degenerate, Backtracking, NonAdjacent, Infeasible, Invalid };
    GraphError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

std::string to_string(GraphError::Kind kind);

enum class Geometry { Plane, Torus };

// Oriented edge 2g is u -> v for the unoriented edge g = (u, v); 2g + 1 is v -> u.
struct OrientedEdge {
    int id = 0;
    int edge = 0;
    int origin = 0;
    int terminus = 0;
    cplx dir;         // unit direction
    cplx disp;        // displacement from origin to terminus (unrolled on the torus)
    Point mid;        // midpoint z_e, in the fundamental domain for the plane
};

struct Face {
    std::vector<int> boundary;  // oriented edges, face to the left
    double area = 0.0;          // signed area of the boundary walk
    bool outer = false;
};

// The corner between two consecutive (counterclockwise) out-edges e_k, e_{k+1}
// at a vertex.  It is c+(e_k) (left of e_k) and c-(e_{k+1}) (right of e_{k+1}).
// Degree-1 vertices carry a single corner that is both c+ and c- of the edge.
struct Corner {
    int id = 0;
    int vertex = 0;
    int face = 0;
    int left_edge = 0;   // e with c = c+(e)
    int right_edge = 0;  // e with c = c-(e)
    double opening = 0.0;  // angle of the wedge in (0, 2pi]
    cplx decoration;       // unit direction pointing towards the vertex
    cplx eta;              // principal square root of the decoration
};

cplx principal_sqrt_phase(cplx unit_dir);
double turn_angle(cplx from, cplx to);

class EmbeddedGraph {
public:
    static EmbeddedGraph planar(std::vector<Point> positions, std::vector<std::pair<int, int>> edges,
                                std::vector<double> weights, std::vector<int> boundary_vertices = {});
    // Square-lattice torus of width x height vertices with unit spacing.
    static EmbeddedGraph torus(int width, int height, double weight);
    static EmbeddedGraph torus(int width, int height, std::vector<double> weights);

    EmbeddedGraph with_weights(std::vector<double> weights) const;

    Geometry geometry() const { return geometry_; }
    int num_vertices() const { return static_cast<int>(pos_.size()); }
    int num_edges() const { return static_cast<int>(ends_.size()); }
    int num_oriented() const { return 2 * num_edges(); }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    int num_corners() const { return static_cast<int>(corners_.size()); }

    const Point& position(int v) const { return pos_.at(v); }
    const std::vector<Point>& positions() const { return pos_; }
    std::pair<int, int> endpoints(int g) const { return ends_.at(g); }
    double weight(int g) const { return weights_.at(g); }
    const std::vector<double>& weights() const { return weights_; }
    bool has_nonpositive_weight() const;

    static int reverse(int e) { return e ^ 1; }
    static int edge_of(int e) { return e >> 1; }
    const OrientedEdge& oriented(int e) const { return oe_.at(e); }
    int origin(int e) const { return oe_[e].origin; }
    int terminus(int e) const { return oe_[e].terminus; }
    cplx direction(int e) const { return oe_[e].dir; }
    cplx eta(int e) const { return eta_[e]; }
    double oriented_weight(int e) const { return weights_[e >> 1]; }

    int degree(int v) const { return static_cast<int>(out_.at(v).size()); }
    const std::vector<int>& out_edges(int v) const { return out_.at(v); }  // counterclockwise
    int rotation_index(int e) const { return rot_index_[e]; }
    int next_in_face(int e) const { return next_[e]; }

    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(int f) const { return faces_.at(f); }
    int outer_face() const { return outer_; }
    int face_left(int e) const { return face_left_[e]; }
    int face_containing(Point p) const;
    std::vector<int> inner_faces() const;

    const std::vector<Corner>& corners() const { return corners_; }
    const Corner& corner(int c) const { return corners_.at(c); }
    int corner_plus(int e) const { return corner_plus_[e]; }
    int corner_minus(int e) const { return corner_minus_[e]; }
    const std::vector<int>& corners_at(int v) const { return corners_at_.at(v); }

    const std::vector<int>& boundary_vertices() const { return boundary_; }
    bool is_boundary_vertex(int v) const;
    bool is_boundary_edge(int g) const;
    // Oriented boundary edges pointing from a boundary vertex into the bulk.
    std::vector<int> inward_boundary_edges() const;

    // Turning angle from e to e2 in (-pi, pi); requires t(e) = o(e2), e2 != reverse(e).
    double turning_angle(int e, int e2) const;
    // Sum of turning angles along consecutive oriented edges.  When `closed`,
    // the turn from the last edge back to the first is included.
    double winding(const std::vector<int>& path, bool closed = false) const;

    // Torus data: crossing counts of edge g with the vertical (x-wrap) and
    // horizontal (y-wrap) cut lines of the fundamental domain.
    int torus_width() const { return width_; }
    int torus_height() const { return height_; }
    std::array<int, 2> wrap(int g) const { return wrap_.empty() ? std::array<int, 2>{0, 0} : wrap_.at(g); }

    // Dual graph: face adjacency through edge g (face left of 2g, face left of 2g+1).
    std::pair<int, int> dual_edge(int g) const { return {face_left_[2 * g], face_left_[2 * g + 1]}; }

private:
    EmbeddedGraph() = default;
    void finish(bool validate_planarity);
    void validate_plane() const;
    void build_rotation();
    void build_faces();
    void build_corners();

    Geometry geometry_ = Geometry::Plane;
    std::vector<Point> pos_;
    std::vector<std::pair<int, int>> ends_;
    std::vector<double> weights_;
    std::vector<int> boundary_;
    std::vector<char> is_boundary_;
    std::vector<OrientedEdge> oe_;
    std::vector<cplx> eta_;
    std::vector<std::vector<int>> out_;
    std::vector<int> rot_index_;
    std::vector<int> next_;
    std::vector<Face> faces_;
    std::vector<int> face_left_;
    int outer_ = -1;
    std::vector<Corner> corners_;
    std::vector<int> corner_plus_, corner_minus_;
    std::vector<std::vector<int>> corners_at_;
    int width_ = 0, height_ = 0;
    std::vector<std::array<int, 2>> wrap_;
};

// ----- cuts -------------------------------------------------------------------

enum class CutKind { Dual, Primal };

struct CutSet {
    CutKind kind = CutKind::Dual;
    std::vector<int> targets;             // faces (dual) or vertices (primal)
    std::vector<std::vector<int>> paths;  // unoriented edge ids of each path
    std::vector<uint8_t> crosses;         // per unoriented edge, parity of use

    int size() const;
    bool crosses_edge(int g) const { return !crosses.empty() && crosses[g]; }
    // Sign (-1)^{kappa . e} of an oriented edge.
    int sign(int e) const { return crosses_edge(e >> 1) ? -1 : 1; }
};

CutSet empty_cut(const EmbeddedGraph& g, CutKind kind = CutKind::Dual);

// Edge-disjoint shortest paths linking consecutive target pairs; for an odd
// number of dual targets the outer face is appended.  seed = 0 is the
// canonical BFS; other seeds shuffle pairing and neighbour order.
CutSet find_cut_set(const EmbeddedGraph& g, CutKind kind, std::vector<int> targets, unsigned seed = 0);

// True when the parity of every dual (primal) vertex in the cut matches the targets.
bool cut_parity_ok(const EmbeddedGraph& g, const CutSet& cut);

// Adds the star of vertex v (dual cycle around v) to a dual cut.
CutSet toggle_vertex_star(const EmbeddedGraph& g, const CutSet& cut, int v);

int intersection_parity(const CutSet& cut, const std::vector<int>& edges);
int intersection_parity_mask(const CutSet& cut, uint64_t edge_mask);

// ----- derived graphs ----------------------------------------------------------

struct DerivedEdge {
    int a = 0;
    int b = 0;
    double weight = 1.0;
    int multiplicity = 1;
    bool is_long = false;
};

struct DerivedGraphs {
    // Terminal graph: vertex i is oriented edge i.
    std::vector<DerivedEdge> terminal;
    std::vector<Point> terminal_pos;
    // Corner graph on corner ids.
    std::vector<DerivedEdge> corner;
    // Fisher graph: vertices [0, nc) are corners, [nc, nc + 2|E|) oriented edges.
    int fisher_corner_count = 0;
    std::vector<Point> fisher_pos;
    std::vector<DerivedEdge> fisher;
    // Midedge graph: vertices [0, |V|) are graph vertices, |V| + g is z_g.
    std::vector<Point> diamond_pos;
    std::vector<DerivedEdge> diamond;
};

// Length scale for drawing decorated graphs without creating crossings.
double decoration_radius(const EmbeddedGraph& g);
DerivedGraphs build_derived_graphs(const EmbeddedGraph& g);

// ----- plane geometry helpers ---------------------------------------------------

// Total turning of a closed polygon (sum of exterior angles in (-pi, pi)).
double polygon_winding(const std::vector<Point>& poly);
// Number of transversal self-intersections of a closed polygon.
int polygon_self_intersections(const std::vector<Point>& poly);
// Exact segment intersection test on coordinates scaled to a 2^-24 grid.
bool segments_cross(Point a, Point b, Point c, Point d);

} // namespace kw
