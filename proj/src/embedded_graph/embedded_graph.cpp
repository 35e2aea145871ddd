#include "kacward/embedded_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace kw {

std::string to_string(GraphError::Kind kind) {
    switch (kind) {
    case GraphError::Kind::Crossing: return "crossing-segments";
    case GraphError::Kind::Disconnected: return "disconnected-graph";
    case GraphError::Kind::Degenerate: return "degenerate-embedding";
    case GraphError::Kind::Backtracking: return "backtracking";
    case GraphError::Kind::NonAdjacent: return "non-adjacent";
    case GraphError::Kind::Infeasible: return "infeasible-cut";
    case GraphError::Kind::Invalid: return "invalid-input";
    }
    return "unknown";
}

cplx principal_sqrt_phase(cplx d) {
    double a = std::atan2(d.imag(), d.real());
    if (d.imag() == 0.0 && d.real() < 0.0) a = kPi;
    return std::polar(1.0, a / 2.0);
}

double turn_angle(cplx from, cplx to) {
    cplx r = to / from;
    return std::atan2(r.imag(), r.real());
}

namespace {

using i64 = long long;
using i128 = __int128;

struct GridPoint {
    i64 x, y;
};

GridPoint to_grid(Point p) {
    constexpr double scale = 16777216.0;  // 2^24
    return {static_cast<i64>(std::llround(p.x * scale)), static_cast<i64>(std::llround(p.y * scale))};
}

int orient(GridPoint a, GridPoint b, GridPoint c) {
    i128 v = static_cast<i128>(b.x - a.x) * (c.y - a.y) - static_cast<i128>(b.y - a.y) * (c.x - a.x);
    return (v > 0) - (v < 0);
}

bool on_segment(GridPoint a, GridPoint b, GridPoint p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection (touching counts).
bool grid_segments_meet(GridPoint a, GridPoint b, GridPoint c, GridPoint d) {
    int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double point_segment_distance(Point p, Point a, Point b) {
    double dx = b.x - a.x, dy = b.y - a.y;
    double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    double qx = a.x + t * dx - p.x, qy = a.y + t * dy - p.y;
    return std::hypot(qx, qy);
}

} // namespace

bool segments_cross(Point a, Point b, Point c, Point d) {
    return grid_segments_meet(to_grid(a), to_grid(b), to_grid(c), to_grid(d));
}

// ----- construction ----------------------------------------------------------------

EmbeddedGraph EmbeddedGraph::planar(std::vector<Point> positions, std::vector<std::pair<int, int>> edges,
                                    std::vector<double> weights, std::vector<int> boundary_vertices) {
    EmbeddedGraph g;
    g.geometry_ = Geometry::Plane;
    g.pos_ = std::move(positions);
    g.ends_ = std::move(edges);
    g.weights_ = std::move(weights);
    g.boundary_ = std::move(boundary_vertices);
    const int nv = g.num_vertices();
    if (nv == 0) throw GraphError(GraphError::Kind::Invalid, "graph has no vertices");
    if (g.weights_.size() != g.ends_.size())
        throw GraphError(GraphError::Kind::Invalid, "weight count does not match edge count");
    for (auto [u, v] : g.ends_) {
        if (u < 0 || v < 0 || u >= nv || v >= nv)
            throw GraphError(GraphError::Kind::Invalid, "edge endpoint out of range");
        if (u == v) throw GraphError(GraphError::Kind::Degenerate, "self-loop at vertex " + std::to_string(u));
    }
    g.oe_.resize(2 * g.ends_.size());
    for (int e = 0; e < g.num_edges(); ++e) {
        auto [u, v] = g.ends_[e];
        Point a = g.pos_[u], b = g.pos_[v];
        cplx d(b.x - a.x, b.y - a.y);
        if (std::abs(d) == 0.0)
            throw GraphError(GraphError::Kind::Degenerate, "zero-length edge " + std::to_string(e));
        Point mid{(a.x + b.x) / 2, (a.y + b.y) / 2};
        g.oe_[2 * e] = {2 * e, e, u, v, d / std::abs(d), d, mid};
        g.oe_[2 * e + 1] = {2 * e + 1, e, v, u, -d / std::abs(d), -d, mid};
    }
    g.finish(true);
    return g;
}

EmbeddedGraph EmbeddedGraph::torus(int width, int height, double weight) {
    return torus(width, height, std::vector<double>(2 * static_cast<size_t>(std::max(width, 0) * std::max(height, 0)), weight));
}

EmbeddedGraph EmbeddedGraph::torus(int width, int height, std::vector<double> weights) {
    if (width < 2 || height < 2)
        throw GraphError(GraphError::Kind::Invalid, "torus dimensions must be at least 2x2");
    EmbeddedGraph g;
    g.geometry_ = Geometry::Torus;
    g.width_ = width;
    g.height_ = height;
    auto id = [&](int i, int j) { return j * width + i; };
    for (int j = 0; j < height; ++j)
        for (int i = 0; i < width; ++i) g.pos_.push_back({double(i), double(j)});
    for (int j = 0; j < height; ++j)
        for (int i = 0; i < width; ++i) {
            g.ends_.push_back({id(i, j), id((i + 1) % width, j)});
            g.wrap_.push_back({i == width - 1 ? 1 : 0, 0});
            g.ends_.push_back({id(i, j), id(i, (j + 1) % height)});
            g.wrap_.push_back({0, j == height - 1 ? 1 : 0});
        }
    if (weights.size() != g.ends_.size())
        throw GraphError(GraphError::Kind::Invalid, "torus weight count does not match edge count");
    g.weights_ = std::move(weights);
    g.oe_.resize(2 * g.ends_.size());
    for (int e = 0; e < g.num_edges(); ++e) {
        auto [u, v] = g.ends_[e];
        cplx d = (e % 2 == 0) ? cplx(1, 0) : cplx(0, 1);
        Point a = g.pos_[u];
        Point mid{a.x + d.real() / 2, a.y + d.imag() / 2};
        g.oe_[2 * e] = {2 * e, e, u, v, d, d, mid};
        g.oe_[2 * e + 1] = {2 * e + 1, e, v, u, -d, -d, mid};
    }
    g.finish(false);
    return g;
}

EmbeddedGraph EmbeddedGraph::with_weights(std::vector<double> weights) const {
    if (weights.size() != weights_.size())
        throw GraphError(GraphError::Kind::Invalid, "weight count does not match edge count");
    EmbeddedGraph g = *this;
    g.weights_ = std::move(weights);
    return g;
}

bool EmbeddedGraph::has_nonpositive_weight() const {
    return std::any_of(weights_.begin(), weights_.end(), [](double x) { return !(x > 0.0); });
}

void EmbeddedGraph::finish(bool validate_planarity) {
    const int nv = num_vertices();
    eta_.resize(oe_.size());
    for (size_t e = 0; e < oe_.size(); ++e) eta_[e] = principal_sqrt_phase(oe_[e].dir);

    // connectivity
    std::vector<std::vector<int>> adj(nv);
    for (auto [u, v] : ends_) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<char> seen(nv, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int w : adj[u])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    if (count != nv) throw GraphError(GraphError::Kind::Disconnected, "graph is not connected");

    if (validate_planarity) validate_plane();
    build_rotation();
    build_faces();

    is_boundary_.assign(nv, 0);
    for (int v : boundary_) {
        if (v < 0 || v >= nv) throw GraphError(GraphError::Kind::Invalid, "boundary vertex out of range");
        if (degree(v) != 1)
            throw GraphError(GraphError::Kind::Invalid,
                             "boundary vertex " + std::to_string(v) + " must have degree 1");
        if (face_left(out_[v][0]) != outer_)
            throw GraphError(GraphError::Kind::Invalid,
                             "boundary vertex " + std::to_string(v) + " must lie on the outer face");
        is_boundary_[v] = 1;
    }
    build_corners();
}

void EmbeddedGraph::validate_plane() const {
    const int nv = num_vertices();
    std::vector<GridPoint> gp(nv);
    for (int v = 0; v < nv; ++v) gp[v] = to_grid(pos_[v]);
    {
        std::map<std::pair<i64, i64>, int> where;
        for (int v = 0; v < nv; ++v) {
            auto [it, ok] = where.emplace(std::make_pair(gp[v].x, gp[v].y), v);
            if (!ok)
                throw GraphError(GraphError::Kind::Degenerate,
                                 "vertices " + std::to_string(it->second) + " and " + std::to_string(v) +
                                     " coincide");
        }
    }
    const int ne = num_edges();
    for (int a = 0; a < ne; ++a) {
        auto [p, q] = ends_[a];
        for (int b = a + 1; b < ne; ++b) {
            auto [r, s] = ends_[b];
            int shared = -1, pa = -1, pb = -1;
            if (p == r) shared = p, pa = q, pb = s;
            else if (p == s) shared = p, pa = q, pb = r;
            else if (q == r) shared = q, pa = p, pb = s;
            else if (q == s) shared = q, pa = p, pb = r;
            if (shared >= 0) {
                if (pa == pb)
                    throw GraphError(GraphError::Kind::Degenerate,
                                     "parallel edges " + std::to_string(a) + " and " + std::to_string(b));
                // Sharing an endpoint is fine unless the segments overlap.
                if (orient(gp[shared], gp[pa], gp[pb]) == 0) {
                    i128 dot = static_cast<i128>(gp[pa].x - gp[shared].x) * (gp[pb].x - gp[shared].x) +
                               static_cast<i128>(gp[pa].y - gp[shared].y) * (gp[pb].y - gp[shared].y);
                    if (dot > 0)
                        throw GraphError(GraphError::Kind::Crossing,
                                         "edges " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
                }
                continue;
            }
            if (grid_segments_meet(gp[p], gp[q], gp[r], gp[s]))
                throw GraphError(GraphError::Kind::Crossing,
                                 "edges " + std::to_string(a) + " and " + std::to_string(b) + " intersect");
        }
    }
}

void EmbeddedGraph::build_rotation() {
    const int nv = num_vertices();
    out_.assign(nv, {});
    for (int e = 0; e < num_oriented(); ++e) out_[oe_[e].origin].push_back(e);
    rot_index_.assign(num_oriented(), 0);
    for (int v = 0; v < nv; ++v) {
        auto& lst = out_[v];
        auto angle = [&](int e) {
            cplx d = oe_[e].dir;
            double a = std::atan2(d.imag(), d.real());
            if (d.imag() == 0.0 && d.real() < 0.0) a = kPi;
            return a;
        };
        std::sort(lst.begin(), lst.end(), [&](int a, int b) { return angle(a) < angle(b); });
        for (size_t k = 0; k < lst.size(); ++k) {
            rot_index_[lst[k]] = static_cast<int>(k);
            if (k > 0 && std::abs(oe_[lst[k]].dir - oe_[lst[k - 1]].dir) < 1e-14)
                throw GraphError(GraphError::Kind::Degenerate,
                                 "two edges leave vertex " + std::to_string(v) + " in the same direction");
        }
    }
    next_.assign(num_oriented(), 0);
    for (int e = 0; e < num_oriented(); ++e) {
        int w = oe_[e].terminus;
        const auto& lst = out_[w];
        int d = static_cast<int>(lst.size());
        int r = rot_index_[reverse(e)];
        next_[e] = lst[(r - 1 + d) % d];
    }
}

void EmbeddedGraph::build_faces() {
    face_left_.assign(num_oriented(), -1);
    faces_.clear();
    for (int e0 = 0; e0 < num_oriented(); ++e0) {
        if (face_left_[e0] >= 0) continue;
        Face f;
        int fid = static_cast<int>(faces_.size());
        cplx p(0, 0);
        double area2 = 0.0;
        int e = e0;
        do {
            face_left_[e] = fid;
            f.boundary.push_back(e);
            cplx q = p + oe_[e].disp;
            area2 += cross(p, q);
            p = q;
            e = next_[e];
        } while (e != e0);
        f.area = area2 / 2.0;
        faces_.push_back(std::move(f));
    }
    const int nf = num_faces();
    if (geometry_ == Geometry::Plane) {
        if (num_vertices() - num_edges() + nf != 2)
            throw GraphError(GraphError::Kind::Crossing, "Euler relation fails: embedding is not planar");
        int outer = 0;
        for (int f = 1; f < nf; ++f)
            if (faces_[f].area < faces_[outer].area) outer = f;
        for (int f = 0; f < nf; ++f)
            if (f != outer && !(faces_[f].area > 0.0))
                throw GraphError(GraphError::Kind::Degenerate, "inner face with non-positive area");
        outer_ = outer;
        faces_[outer].outer = true;
    } else {
        if (num_vertices() - num_edges() + nf != 0)
            throw GraphError(GraphError::Kind::Degenerate, "Euler relation fails on the torus");
        outer_ = -1;
    }
}

void EmbeddedGraph::build_corners() {
    const int nv = num_vertices();
    corners_.clear();
    corners_at_.assign(nv, {});
    corner_plus_.assign(num_oriented(), -1);
    corner_minus_.assign(num_oriented(), -1);
    for (int v = 0; v < nv; ++v) {
        const auto& lst = out_[v];
        const int d = static_cast<int>(lst.size());
        for (int k = 0; k < d; ++k) {
            int ek = lst[k], ek1 = lst[(k + 1) % d];
            double alpha;
            if (d == 1) {
                alpha = 2 * kPi;
            } else {
                alpha = turn_angle(oe_[ek].dir, oe_[ek1].dir);
                if (alpha <= 0) alpha += 2 * kPi;
                if (d == 2 && std::abs(alpha - kPi) < 1e-15) alpha = kPi;
            }
            Corner c;
            c.id = static_cast<int>(corners_.size());
            c.vertex = v;
            c.face = face_left_[ek];
            c.left_edge = ek;
            c.right_edge = ek1;
            c.opening = alpha;
            c.decoration = -oe_[ek].dir * std::polar(1.0, alpha / 2);
            c.eta = principal_sqrt_phase(c.decoration);
            corner_plus_[ek] = c.id;
            corner_minus_[ek1] = c.id;
            corners_at_[v].push_back(c.id);
            corners_.push_back(c);
        }
    }
}

// ----- queries -----------------------------------------------------------------------

bool EmbeddedGraph::is_boundary_vertex(int v) const { return !is_boundary_.empty() && is_boundary_.at(v); }

bool EmbeddedGraph::is_boundary_edge(int g) const {
    auto [u, v] = ends_.at(g);
    return is_boundary_vertex(u) || is_boundary_vertex(v);
}

std::vector<int> EmbeddedGraph::inward_boundary_edges() const {
    std::vector<int> res;
    for (int e = 0; e < num_oriented(); ++e)
        if (is_boundary_vertex(oe_[e].origin)) res.push_back(e);
    return res;
}

double EmbeddedGraph::turning_angle(int e, int e2) const {
    if (oe_.at(e).terminus != oe_.at(e2).origin)
        throw GraphError(GraphError::Kind::NonAdjacent,
                         "edges " + std::to_string(e) + " and " + std::to_string(e2) + " are not consecutive");
    if (e2 == reverse(e))
        throw GraphError(GraphError::Kind::Backtracking, "turning angle undefined for a reversed edge");
    return turn_angle(oe_[e].dir, oe_[e2].dir);
}

double EmbeddedGraph::winding(const std::vector<int>& path, bool closed) const {
    double w = 0.0;
    for (size_t k = 0; k + 1 < path.size(); ++k) w += turning_angle(path[k], path[k + 1]);
    if (closed && path.size() > 1) w += turning_angle(path.back(), path.front());
    return w;
}

std::vector<int> EmbeddedGraph::inner_faces() const {
    std::vector<int> res;
    for (int f = 0; f < num_faces(); ++f)
        if (f != outer_) res.push_back(f);
    return res;
}

int EmbeddedGraph::face_containing(Point p) const {
    if (geometry_ != Geometry::Plane)
        throw GraphError(GraphError::Kind::Invalid, "point location is only available in the plane");
    for (int g = 0; g < num_edges(); ++g) {
        auto [u, v] = ends_[g];
        if (point_segment_distance(p, pos_[u], pos_[v]) < 1e-12)
            throw GraphError(GraphError::Kind::Invalid, "point lies on edge " + std::to_string(g));
    }
    for (int f = 0; f < num_faces(); ++f) {
        if (f == outer_) continue;
        // Winding number of the boundary walk around p.
        double total = 0.0;
        for (int e : faces_[f].boundary) {
            Point a = pos_[oe_[e].origin], b = pos_[oe_[e].terminus];
            cplx da(a.x - p.x, a.y - p.y), db(b.x - p.x, b.y - p.y);
            total += std::arg(db / da);
        }
        if (std::abs(total) > kPi) return f;
    }
    return outer_;
}

// ----- cuts ----------------------------------------------------------------------------

int CutSet::size() const {
    int n = 0;
    for (auto c : crosses) n += c;
    return n;
}

CutSet empty_cut(const EmbeddedGraph& g, CutKind kind) {
    CutSet c;
    c.kind = kind;
    c.crosses.assign(g.num_edges(), 0);
    return c;
}

namespace {

// Edge-disjoint BFS on an abstract multigraph given by endpoints per edge.
std::vector<int> bfs_path(int nodes, const std::vector<std::pair<int, int>>& ends, const std::vector<char>& used,
                          int s, int t, std::mt19937* rng) {
    if (s == t) return {};
    std::vector<std::vector<std::pair<int, int>>> adj(nodes);
    for (int g = 0; g < static_cast<int>(ends.size()); ++g) {
        if (used[g]) continue;
        auto [a, b] = ends[g];
        if (a == b) continue;
        adj[a].push_back({b, g});
        adj[b].push_back({a, g});
    }
    if (rng)
        for (auto& l : adj) std::shuffle(l.begin(), l.end(), *rng);
    std::vector<int> prev_edge(nodes, -1), prev_node(nodes, -1);
    std::vector<char> seen(nodes, 0);
    std::vector<int> queue{s};
    seen[s] = 1;
    for (size_t h = 0; h < queue.size(); ++h) {
        int u = queue[h];
        if (u == t) break;
        for (auto [w, g] : adj[u])
            if (!seen[w]) {
                seen[w] = 1;
                prev_edge[w] = g;
                prev_node[w] = u;
                queue.push_back(w);
            }
    }
    if (!seen[t]) return {-1};
    std::vector<int> path;
    for (int u = t; u != s; u = prev_node[u]) path.push_back(prev_edge[u]);
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace

CutSet find_cut_set(const EmbeddedGraph& g, CutKind kind, std::vector<int> targets, unsigned seed) {
    CutSet cut = empty_cut(g, kind);
    const int nodes = kind == CutKind::Dual ? g.num_faces() : g.num_vertices();
    for (size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < 0 || targets[i] >= nodes)
            throw GraphError(GraphError::Kind::Invalid, "cut target out of range");
        for (size_t j = 0; j < i; ++j)
            if (targets[i] == targets[j]) throw GraphError(GraphError::Kind::Invalid, "repeated cut target");
    }
    cut.targets = targets;
    std::vector<int> ordered = targets;
    if (kind == CutKind::Dual) {
        if (g.geometry() != Geometry::Plane)
            throw GraphError(GraphError::Kind::Invalid, "dual cuts need a planar graph");
        if (ordered.size() % 2 == 1) {
            auto it = std::find(ordered.begin(), ordered.end(), g.outer_face());
            if (it != ordered.end()) ordered.erase(it);
            else ordered.push_back(g.outer_face());
        }
    } else if (ordered.size() % 2 == 1) {
        throw GraphError(GraphError::Kind::Invalid, "primal cut needs an even number of vertices");
    }
    if (ordered.empty()) return cut;

    std::vector<std::pair<int, int>> ends(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e)
        ends[e] = kind == CutKind::Dual ? g.dual_edge(e) : g.endpoints(e);

    std::mt19937 rng(seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<int> order = ordered;
        bool randomized = seed != 0 || attempt > 0;
        if (randomized) std::shuffle(order.begin(), order.end(), rng);
        std::vector<char> used(g.num_edges(), 0);
        std::vector<std::vector<int>> paths;
        bool ok = true;
        for (size_t k = 0; k + 1 < order.size(); k += 2) {
            auto p = bfs_path(nodes, ends, used, order[k], order[k + 1], randomized ? &rng : nullptr);
            if (p.size() == 1 && p[0] == -1) {
                ok = false;
                break;
            }
            for (int e : p) used[e] = 1;
            paths.push_back(std::move(p));
        }
        if (!ok) continue;
        cut.paths = std::move(paths);
        for (int e = 0; e < g.num_edges(); ++e) cut.crosses[e] = used[e];
        return cut;
    }
    throw GraphError(GraphError::Kind::Infeasible, "edge-disjoint cut paths could not be found");
}

bool cut_parity_ok(const EmbeddedGraph& g, const CutSet& cut) {
    const bool dual = cut.kind == CutKind::Dual;
    const int nodes = dual ? g.num_faces() : g.num_vertices();
    std::vector<int> parity(nodes, 0);
    for (int e = 0; e < g.num_edges(); ++e) {
        if (!cut.crosses_edge(e)) continue;
        auto [a, b] = dual ? g.dual_edge(e) : g.endpoints(e);
        parity[a] ^= 1;
        parity[b] ^= 1;
    }
    std::vector<int> want(nodes, 0);
    for (int t : cut.targets) want[t] ^= 1;
    if (dual && cut.targets.size() % 2 == 1) want[g.outer_face()] ^= 1;
    return parity == want;
}

CutSet toggle_vertex_star(const EmbeddedGraph& g, const CutSet& cut, int v) {
    if (cut.kind != CutKind::Dual) throw GraphError(GraphError::Kind::Invalid, "vertex stars apply to dual cuts");
    CutSet res = cut;
    if (res.crosses.empty()) res.crosses.assign(g.num_edges(), 0);
    std::vector<int> star;
    for (int e : g.out_edges(v)) {
        res.crosses[e >> 1] ^= 1;
        star.push_back(e >> 1);
    }
    res.paths.push_back(std::move(star));
    return res;
}

int intersection_parity(const CutSet& cut, const std::vector<int>& edges) {
    int p = 0;
    for (int e : edges) p ^= cut.crosses_edge(e) ? 1 : 0;
    return p;
}

int intersection_parity_mask(const CutSet& cut, uint64_t mask) {
    int p = 0;
    for (int e = 0; mask; ++e, mask >>= 1)
        if ((mask & 1) && cut.crosses_edge(e)) p ^= 1;
    return p;
}

// ----- derived graphs -------------------------------------------------------------------

double decoration_radius(const EmbeddedGraph& g) {
    if (g.geometry() == Geometry::Torus) return 0.1;
    double best = std::numeric_limits<double>::infinity();
    const int nv = g.num_vertices();
    for (int a = 0; a < nv; ++a)
        for (int b = a + 1; b < nv; ++b)
            best = std::min(best, std::hypot(g.position(a).x - g.position(b).x, g.position(a).y - g.position(b).y));
    for (int v = 0; v < nv; ++v)
        for (int e = 0; e < g.num_edges(); ++e) {
            auto [p, q] = g.endpoints(e);
            if (p == v || q == v) continue;
            best = std::min(best, point_segment_distance(g.position(v), g.position(p), g.position(q)));
        }
    if (!std::isfinite(best)) best = 1.0;
    return 0.2 * best;
}

DerivedGraphs build_derived_graphs(const EmbeddedGraph& g) {
    DerivedGraphs d;
    const double r = decoration_radius(g);
    const int noe = g.num_oriented();
    auto offset = [](Point p, cplx dir, double len) { return Point{p.x + len * dir.real(), p.y + len * dir.imag()}; };

    d.terminal_pos.resize(noe);
    for (int e = 0; e < noe; ++e) d.terminal_pos[e] = offset(g.position(g.origin(e)), g.direction(e), r);
    for (int e = 0; e < g.num_edges(); ++e) d.terminal.push_back({2 * e, 2 * e + 1, 1.0, 1, true});
    for (int v = 0; v < g.num_vertices(); ++v) {
        const auto& lst = g.out_edges(v);
        for (size_t i = 0; i < lst.size(); ++i)
            for (size_t j = i + 1; j < lst.size(); ++j)
                d.terminal.push_back(
                    {lst[i], lst[j], std::sqrt(g.oriented_weight(lst[i]) * g.oriented_weight(lst[j])), 1, false});
    }

    const int nc = g.num_corners();
    for (int v = 0; v < g.num_vertices(); ++v) {
        const auto& cs = g.corners_at(v);
        const int k = static_cast<int>(cs.size());
        if (k == 2) d.corner.push_back({cs[0], cs[1], 1.0, 2, false});
        else if (k >= 3)
            for (int i = 0; i < k; ++i) d.corner.push_back({cs[i], cs[(i + 1) % k], 1.0, 1, false});
    }
    for (int e = 0; e < g.num_edges(); ++e) {
        int a = 2 * e, b = 2 * e + 1;
        std::vector<int> ca{g.corner_plus(a)}, cb{g.corner_plus(b)};
        if (g.corner_minus(a) != ca[0]) ca.push_back(g.corner_minus(a));
        if (g.corner_minus(b) != cb[0]) cb.push_back(g.corner_minus(b));
        for (int x : ca)
            for (int y : cb) d.corner.push_back({x, y, 1.0, 1, true});
    }

    d.fisher_corner_count = nc;
    d.fisher_pos.resize(nc + noe);
    for (int c = 0; c < nc; ++c) {
        const Corner& cc = g.corner(c);
        d.fisher_pos[c] = offset(g.position(cc.vertex), -cc.decoration, r);
    }
    for (int e = 0; e < noe; ++e) d.fisher_pos[nc + e] = offset(g.position(g.origin(e)), g.direction(e), 2 * r);
    for (int v = 0; v < g.num_vertices(); ++v) {
        const auto& cs = g.corners_at(v);
        const int k = static_cast<int>(cs.size());
        if (k == 2) d.fisher.push_back({cs[0], cs[1], 1.0, 2, false});
        else if (k >= 3)
            for (int i = 0; i < k; ++i) d.fisher.push_back({cs[i], cs[(i + 1) % k], 1.0, 1, false});
    }
    for (int e = 0; e < noe; ++e) {
        double w = 1.0 / std::sqrt(g.oriented_weight(e));
        d.fisher.push_back({g.corner_plus(e), nc + e, w, 1, false});
        if (g.corner_minus(e) != g.corner_plus(e)) d.fisher.push_back({g.corner_minus(e), nc + e, w, 1, false});
    }
    for (int e = 0; e < g.num_edges(); ++e) d.fisher.push_back({nc + 2 * e, nc + 2 * e + 1, 1.0, 1, true});

    const int nv = g.num_vertices();
    d.diamond_pos = g.positions();
    for (int e = 0; e < g.num_edges(); ++e) {
        d.diamond_pos.push_back(g.oriented(2 * e).mid);
        auto [u, v] = g.endpoints(e);
        double w = std::sqrt(g.weight(e));
        d.diamond.push_back({u, nv + e, w, 1, false});
        d.diamond.push_back({v, nv + e, w, 1, false});
    }
    return d;
}

// ----- polygon helpers --------------------------------------------------------------------

double polygon_winding(const std::vector<Point>& poly) {
    const size_t n = poly.size();
    double w = 0.0;
    for (size_t i = 0; i < n; ++i) {
        Point a = poly[i], b = poly[(i + 1) % n], c = poly[(i + 2) % n];
        w += turn_angle(cplx(b.x - a.x, b.y - a.y), cplx(c.x - b.x, c.y - b.y));
    }
    return w;
}

int polygon_self_intersections(const std::vector<Point>& poly) {
    const size_t n = poly.size();
    int count = 0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) ++count;
        }
    return count;
}

} // namespace kw
