#include "kacward/surface.hpp"

#include <algorithm>
#include <cmath>

namespace kw {

namespace {

std::vector<int> twist_of(const EmbeddedGraph& g, const std::vector<uint8_t>& phi) {
    if (static_cast<int>(phi.size()) != g.num_edges())
        throw std::invalid_argument("connection has the wrong length");
    std::vector<int> twist(g.num_oriented());
    for (int e = 0; e < g.num_oriented(); ++e) twist[e] = phi[e >> 1] ? -1 : 1;
    return twist;
}

void require_torus(const EmbeddedGraph& g) {
    if (g.geometry() != Geometry::Torus) throw GraphError(GraphError::Kind::Invalid, "expected a torus graph");
}

double signed_root_sum(const PuncturedDisk& d, const std::vector<uint8_t>& extra) {
    double total = 0.0;
    for (const SpinStructure& s : punctured_spin_structures(d)) {
        std::vector<uint8_t> phi = s.phi;
        for (size_t k = 0; k < extra.size(); ++k) phi[k] ^= extra[k];
        total += structure_root(d.graph, phi);
    }
    return total;
}

} // namespace

std::vector<SpinStructure> torus_spin_structures(const EmbeddedGraph& g) {
    require_torus(g);
    std::vector<SpinStructure> out;
    for (int k = 0; k < 4; ++k) {
        SpinStructure s;
        s.kind = SurfaceKind::Torus;
        s.bits = {k & 1, k >> 1 & 1};
        s.phi.resize(g.num_edges());
        for (int e = 0; e < g.num_edges(); ++e) {
            const auto w = g.wrap(e);
            s.phi[e] = static_cast<uint8_t>((s.bits[0] * w[0] + s.bits[1] * w[1]) & 1);
        }
        out.push_back(std::move(s));
    }
    return out;
}

PuncturedDisk make_punctured_disk(const EmbeddedGraph& g, std::vector<int> punctures, unsigned seed) {
    if (g.geometry() != Geometry::Plane) throw GraphError(GraphError::Kind::Invalid, "expected a plane graph");
    std::vector<int> sorted = punctures;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw GraphError(GraphError::Kind::Invalid, "punctures must be distinct");
    PuncturedDisk d{g, std::move(punctures), {}};
    for (int f : d.punctures) {
        if (f < 0 || f >= g.num_faces() || f == g.outer_face())
            throw GraphError(GraphError::Kind::Invalid, "punctures must be inner faces");
        d.cuts.push_back(find_cut_set(g, CutKind::Dual, {f}, seed));
    }
    return d;
}

std::vector<SpinStructure> punctured_spin_structures(const PuncturedDisk& d) {
    const int m = static_cast<int>(d.punctures.size());
    std::vector<SpinStructure> out;
    for (int k = 0; k < (1 << m); ++k) {
        SpinStructure s;
        s.kind = SurfaceKind::PuncturedDisk;
        s.phi.assign(d.graph.num_edges(), 0);
        for (int j = 0; j < m; ++j) {
            s.bits.push_back(k >> j & 1);
            if (!(k >> j & 1)) continue;
            for (int e = 0; e < d.graph.num_edges(); ++e)
                if (d.cuts[j].crosses_edge(e)) s.phi[e] ^= 1;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<int> curvature_defects(const EmbeddedGraph& g, const SpinStructure& s,
                                   const std::vector<int>& removed_faces) {
    std::vector<int> bad;
    for (int f = 0; f < g.num_faces(); ++f) {
        if (g.geometry() == Geometry::Plane && f == g.outer_face()) continue;
        if (std::find(removed_faces.begin(), removed_faces.end(), f) != removed_faces.end()) continue;
        int sum = 0;
        for (int e : g.face(f).boundary) sum += s.phi.at(e >> 1);
        if (sum % 2) bad.push_back(f);
    }
    return bad;
}

CMatrix build_kacward_lambda(const EmbeddedGraph& g, const SpinStructure& s,
                             const std::vector<int>& removed_faces) {
    if (!curvature_defects(g, s, removed_faces).empty()) throw SurfaceError("the connection is not flat");
    const std::vector<int> twist = twist_of(g, s.phi);
    CMatrix kw = build_kacward_signed(g, twist).KW;
    for (int e = 0; e < g.num_oriented(); ++e) kw.row(e) *= double(twist[e]);
    return kw;
}

int QuadraticForm::operator()(int alpha) const {
    const int a = alpha & 1, b = alpha >> 1 & 1;
    return (a * basis[0] + b * basis[1] + a * b) & 1;
}

int QuadraticForm::arf() const {
    int sum = 0;
    for (int alpha = 0; alpha < 4; ++alpha) sum += (*this)(alpha) ? -1 : 1;
    return sum < 0 ? 1 : 0;
}

QuadraticForm quadratic_form(const EmbeddedGraph& g, const SpinStructure& s) {
    require_torus(g);
    const int w = g.torus_width(), h = g.torus_height();
    std::vector<int> horizontal, vertical;
    for (int i = 0; i < w; ++i) horizontal.push_back(2 * (2 * i));
    for (int j = 0; j < h; ++j) vertical.push_back(2 * (2 * j * w + 1));
    QuadraticForm q;
    int k = 0;
    for (const auto* loop : {&horizontal, &vertical}) {
        int crossings = 0;
        for (int e : *loop) crossings += s.phi.at(e >> 1);
        const cplx v = -std::polar(1.0, 0.5 * g.winding(*loop, true)) * (crossings % 2 ? -1.0 : 1.0);
        q.basis[k++] = v.real() < 0 ? 1 : 0;
    }
    return q;
}

int arf(const EmbeddedGraph& g, const SpinStructure& s) { return quadratic_form(g, s).arf(); }

double structure_root(const EmbeddedGraph& g, const std::vector<uint8_t>& phi) {
    const std::vector<int> twist = twist_of(g, phi);
    const MatrixBundle b = build_kacward_signed(g, twist);
    const double pf = b.real ? pfaffian(b.Khat) : pfaffian_dense(b.KhatC).real();
    // At x = 0 the matrix is block diagonal on the pairs (2g, 2g+1).
    double pf0 = 1.0;
    for (int k = 0; k < g.num_edges(); ++k)
        pf0 *= (cplx(0, 1) * g.eta(2 * k) * double(twist[2 * k + 1]) * std::conj(g.eta(2 * k + 1))).real();
    const double root = pf / pf0;
    if (root * root < 1e-14) throw SurfaceError("det KW_lambda vanishes; the square root has no sign");
    return root;
}

double structure_root(const EmbeddedGraph& g, const SpinStructure& s) { return structure_root(g, s.phi); }

double torus_partition_high(const EmbeddedGraph& g) {
    double total = 0.0;
    for (const SpinStructure& s : torus_spin_structures(g)) {
        const double r = structure_root(g, s);
        total += arf(g, s) ? -r : r;
    }
    return 0.5 * total;
}

double torus_partition_low(const EmbeddedGraph& g) {
    double total = 0.0;
    for (const SpinStructure& s : torus_spin_structures(g)) total += structure_root(g, s);
    return 0.25 * total;
}

double surface_partition_low(const PuncturedDisk& d) {
    return signed_root_sum(d, {}) / double(1 << d.punctures.size());
}

double surface_spin_correlation(const PuncturedDisk& d, const std::vector<int>& faces, unsigned seed) {
    if (faces.empty()) return 1.0;
    for (int f : faces)
        if (f == d.graph.outer_face() || std::find(d.punctures.begin(), d.punctures.end(), f) != d.punctures.end())
            throw GraphError(GraphError::Kind::Invalid, "faces must be inner faces other than the punctures");
    const CutSet cut = find_cut_set(d.graph, CutKind::Dual, faces, seed);
    std::vector<uint8_t> extra(d.graph.num_edges(), 0);
    for (int e = 0; e < d.graph.num_edges(); ++e) extra[e] = cut.crosses_edge(e);
    return signed_root_sum(d, extra) / signed_root_sum(d, {});
}

} // namespace kw
