#include "kacward/double_ising.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace kw {

namespace {

const cplx I(0.0, 1.0);

cplx phase(double angle) { return std::polar(1.0, angle); }

int position_in(const std::vector<int>& v, int x) {
    auto it = std::find(v.begin(), v.end(), x);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

} // namespace

BoundaryDecoration boundary_decoration(const EmbeddedGraph& g) {
    if (g.boundary_vertices().empty())
        throw GraphError(GraphError::Kind::Invalid, "the double-Ising model needs boundary vertices");
    // The outer face lies to the left of its boundary walk, so the walk runs
    // clockwise around the graph.
    BoundaryDecoration d;
    const auto& walk = g.face(g.outer_face()).boundary;
    for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
        const int e = *it;
        if (g.is_boundary_vertex(g.origin(e)) && position_in(d.inward, e) < 0) {
            d.inward.push_back(e);
            d.outward.push_back(e ^ 1);
            d.vertices.push_back(g.origin(e));
        }
    }
    if (d.inward.size() != g.boundary_vertices().size())
        throw GraphError(GraphError::Kind::Invalid, "boundary vertices must lie on the outer face");
    return d;
}

CMatrix double_kacward(const EmbeddedGraph& g, const CutSet* cut) {
    const BoundaryDecoration d = boundary_decoration(g);
    CMatrix k = cut ? build_twisted(g, *cut).K : build_kacward(g).K;
    for (int e : d.inward) k(e, e) += I * g.oriented_weight(e);
    return k;
}

DoublePartition double_partition_details(const EmbeddedGraph& g) {
    cplx d = det(double_kacward(g));
    if (g.num_edges() % 2) d = -d;
    return {d.real(), std::abs(d.imag())};
}

double double_partition(const EmbeddedGraph& g) { return double_partition_details(g).value; }

double double_spin_correlation_with_cut(const EmbeddedGraph& g, const CutSet& cut) {
    const cplx r = det(double_kacward(g, &cut)) / det(double_kacward(g));
    return r.real();
}

double double_spin_correlation(const EmbeddedGraph& g, const std::vector<int>& faces, unsigned seed) {
    if (faces.empty()) return 1.0;
    for (int f : faces)
        if (f == g.outer_face()) throw GraphError(GraphError::Kind::Invalid, "faces must be inner faces");
    return double_spin_correlation_with_cut(g, find_cut_set(g, CutKind::Dual, faces, seed));
}

cplx principal_minor_det(const EmbeddedGraph& g, const std::vector<int>& removed) {
    const CMatrix k = build_kacward(g).K;
    std::vector<int> keep;
    for (int e = 0; e < g.num_oriented(); ++e)
        if (position_in(removed, e) < 0) keep.push_back(e);
    CMatrix m(keep.size(), keep.size());
    for (size_t i = 0; i < keep.size(); ++i)
        for (size_t j = 0; j < keep.size(); ++j) m(i, j) = k(keep[i], keep[j]);
    return det(m);
}

std::vector<int> boundary_arc(const EmbeddedGraph& g, int a, int b) {
    const BoundaryDecoration d = boundary_decoration(g);
    const int ia = position_in(d.inward, a), ib = position_in(d.inward, b);
    if (ia < 0 || ib < 0 || a == b)
        throw GraphError(GraphError::Kind::Invalid, "a and b must be distinct inward boundary edges");
    std::vector<int> arc;
    const int n = static_cast<int>(d.inward.size());
    for (int k = (ia + 1) % n; k != ib; k = (k + 1) % n) arc.push_back(d.inward[k]);
    return arc;
}

CMatrix dobrushin_matrix(const EmbeddedGraph& g, int a, int b) {
    const std::vector<int> ab = boundary_arc(g, a, b), ba = boundary_arc(g, b, a);
    CMatrix k = build_kacward(g).K;
    for (int e : ab) k(e, e) += I * g.oriented_weight(e);
    for (int e : ba) k(e, e) -= I * g.oriented_weight(e);
    std::vector<int> rows;
    for (int e = 0; e < g.num_oriented(); ++e)
        if (e != a) rows.push_back(e);
    const int n = static_cast<int>(rows.size());
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const int col = rows[i] == b ? a : rows[i];
        for (int r = 0; r < n; ++r) m(r, i) = k(rows[r], col);
    }
    return m;
}

std::vector<std::vector<int>> simple_edge_paths(const EmbeddedGraph& g, int from, int to, int count,
                                                unsigned seed) {
    std::vector<std::vector<int>> found;
    std::mt19937 rng(seed);
    const int target = g.terminus(to);
    for (int attempt = 0; attempt < 50 * count && static_cast<int>(found.size()) < count; ++attempt) {
        std::vector<char> seen(g.num_vertices(), 0);
        std::vector<int> path{from};
        seen[g.origin(from)] = seen[g.terminus(from)] = 1;
        // Depth-first search with shuffled neighbour order and backtracking.
        std::vector<std::vector<int>> options;
        auto push_options = [&](int e) {
            std::vector<int> opts;
            for (int f : g.out_edges(g.terminus(e)))
                if (f == to || !seen[g.terminus(f)]) opts.push_back(f);
            std::shuffle(opts.begin(), opts.end(), rng);
            options.push_back(opts);
        };
        if (from == to) {
            found.push_back(path);
            break;
        }
        push_options(from);
        bool ok = false;
        while (!options.empty()) {
            auto& opts = options.back();
            if (opts.empty()) {
                options.pop_back();
                seen[g.terminus(path.back())] = 0;
                path.pop_back();
                if (path.empty()) break;
                continue;
            }
            const int f = opts.back();
            opts.pop_back();
            if (f == to) {
                path.push_back(f);
                ok = true;
                break;
            }
            if (g.terminus(f) == target || seen[g.terminus(f)]) continue;
            path.push_back(f);
            seen[g.terminus(f)] = 1;
            push_options(f);
        }
        if (ok && std::find(found.begin(), found.end(), path) == found.end()) found.push_back(path);
    }
    return found;
}

cplx dobrushin_winding(const EmbeddedGraph& g, int a, int b, const std::vector<int>& path) {
    if (path.empty() || path.front() != b || path.back() != (a ^ 1))
        throw GraphError(GraphError::Kind::Invalid, "path must run from b to the reversal of a");
    return phase(0.5 * g.winding(path));
}

DobrushinResult dobrushin_partition(const EmbeddedGraph& g, int a, int b, int sample_paths) {
    DobrushinResult r;
    const auto paths = simple_edge_paths(g, b, a ^ 1, std::max(1, sample_paths));
    if (paths.empty()) throw GraphError(GraphError::Kind::Disconnected, "no path from b to a");
    r.paths = static_cast<int>(paths.size());
    r.winding = dobrushin_winding(g, a, b, paths[0]);
    for (const auto& p : paths) r.path_spread = std::max(r.path_spread, std::abs(dobrushin_winding(g, a, b, p) - r.winding));
    cplx d = det(dobrushin_matrix(g, a, b));
    if ((g.num_edges() - 1) % 2) d = -d;
    r.raw = std::conj(r.winding) * d;
    r.value = 2.0 * std::sqrt(g.oriented_weight(a) * g.oriented_weight(b)) * r.raw.real();
    return r;
}

Observable double_observable(const EmbeddedGraph& g, int a, const CutSet* cut) {
    const CMatrix kt = double_kacward(g, cut);
    const MatrixBundle mb = build_kacward(g);
    const int n = g.num_oriented();
    CMatrix khat(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) khat(i, j) = I * mb.U(i) * kt(i, j) * std::conj(mb.U(j));
    const CMatrix kinv = invert(khat);
    const CornerBundle cb = build_corner_bundle(g, cut);
    const CMatrix chi_phi = 2.0 * invert(CMatrix(cb.Bhat.transpose().cast<cplx>())) * kinv;

    Observable f;
    f.source_edge = a;
    for (int e = 0; e < n; ++e) {
        const double s = cut && cut->crosses_edge(e >> 1) ? -1.0 : 1.0;
        f.edge_values.push_back(edge_scale(g.oriented_weight(e)) * phase(M_PI / 4) *
                                (std::conj(g.eta(e)) * kinv(e, a) + s * std::conj(g.eta(e ^ 1)) * kinv(e ^ 1, a)));
    }
    for (int c = 0; c < g.num_corners(); ++c)
        f.corner_values.push_back(phase(M_PI / 4) * std::conj(g.corner(c).eta) * chi_phi(c, a));
    return f;
}

double double_s_hol_max_residual(const EmbeddedGraph& g, const Observable& f) {
    double worst = 0.0;
    for (const auto& p : s_hol_residual(g, f)) {
        const int v = g.corner(p.corner).vertex;
        if (g.is_boundary_vertex(v) || (f.source_edge >= 0 && v == g.origin(f.source_edge))) continue;
        worst = std::max(worst, p.residual);
    }
    return worst;
}

double double_boundary_residual(const EmbeddedGraph& g, const Observable& f) {
    const BoundaryDecoration d = boundary_decoration(g);
    double worst = 0.0;
    for (int e : d.outward) {
        if (f.source_edge == (e ^ 1)) continue;
        const double theta = edge_angles(g.oriented_weight(e)).theta;
        const cplx v = f.edge_values.at(e) * phase(theta / 2 + M_PI / 4) * g.eta(e);
        worst = std::max(worst, std::abs(v.imag()));
    }
    return worst;
}

} // namespace kw
