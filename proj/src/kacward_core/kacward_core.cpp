#include "kacward/kacward_core.hpp"

#include <cmath>
#include <string>

namespace kw {

cplx weight_root(double x) { return x >= 0.0 ? cplx(std::sqrt(x), 0.0) : cplx(0.0, std::sqrt(-x)); }

CMatrix transition_matrix(const EmbeddedGraph& g) {
    const int n = g.num_oriented();
    CMatrix t = CMatrix::Zero(n, n);
    for (int e = 0; e < n; ++e) {
        const cplx re = weight_root(g.oriented_weight(e));
        for (int e2 : g.out_edges(g.terminus(e))) {
            if (e2 == EmbeddedGraph::reverse(e)) continue;
            t(e, e2) = std::polar(1.0, g.turning_angle(e, e2) / 2.0) * re * weight_root(g.oriented_weight(e2));
        }
    }
    return t;
}

CMatrix reversal_matrix(int n) {
    CMatrix j = CMatrix::Zero(n, n);
    for (int e = 0; e < n; ++e) j(e, e ^ 1) = 1.0;
    return j;
}

SkewMatrix hat_matrix(const CMatrix& m, const CVector& u, const char* what) {
    const int n = static_cast<int>(m.rows());
    RMatrix re(n, n);
    const double scale = std::max(1.0, max_abs(m));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            cplx h = cplx(0, 1) * u(i) * m(i, j) * std::conj(u(j));
            if (std::abs(h.imag()) > 1e-12 * scale)
                throw ConventionError(std::string(what) + ": entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") has imaginary part " + std::to_string(h.imag()));
            re(i, j) = h.real();
        }
    return SkewMatrix::from_dense(re, 1e-12);
}

namespace {

CVector edge_etas(const EmbeddedGraph& g) {
    CVector u(g.num_oriented());
    for (int e = 0; e < g.num_oriented(); ++e) u(e) = g.eta(e);
    return u;
}

bool any_negative(const EmbeddedGraph& g) {
    for (double x : g.weights())
        if (x < 0.0) return true;
    return false;
}

} // namespace

MatrixBundle build_kacward_signed(const EmbeddedGraph& g, const std::vector<int>& twist) {
    const int n = g.num_oriented();
    if (static_cast<int>(twist.size()) != n) throw std::invalid_argument("twist vector has the wrong length");
    MatrixBundle b;
    b.twist = twist;
    b.T = transition_matrix(g);
    b.KW = -b.T;
    for (int e = 0; e < n; ++e) b.KW(e, e) += double(twist[e]);
    b.K.resize(n, n);
    for (int e = 0; e < n; ++e) b.K.row(e) = b.KW.row(e ^ 1);
    b.U = edge_etas(g);
    b.KhatC.resize(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) b.KhatC(i, j) = cplx(0, 1) * b.U(i) * b.K(i, j) * std::conj(b.U(j));
    b.real = !any_negative(g);
    if (b.real) b.Khat = hat_matrix(b.K, b.U, "Khat");
    return b;
}

MatrixBundle build_kacward(const EmbeddedGraph& g) {
    return build_kacward_signed(g, std::vector<int>(g.num_oriented(), 1));
}

MatrixBundle build_twisted(const EmbeddedGraph& g, const CutSet& cut) {
    if (cut.kind != CutKind::Dual) throw GraphError(GraphError::Kind::Invalid, "spin twists need a dual cut");
    if (!cut_parity_ok(g, cut)) throw GraphError(GraphError::Kind::Invalid, "cut does not satisfy its parity rule");
    std::vector<int> twist(g.num_oriented());
    for (int e = 0; e < g.num_oriented(); ++e) twist[e] = cut.sign(e);
    return build_kacward_signed(g, twist);
}

double epsilon_d0(const EmbeddedGraph& g) {
    double eps = 1.0;
    for (int k = 0; k < g.num_edges(); ++k) {
        cplx v = cplx(0, 1) * g.eta(2 * k) * std::conj(g.eta(2 * k + 1));
        eps *= v.real() > 0 ? 1.0 : -1.0;
    }
    return eps;
}

// ----- corners -------------------------------------------------------------------------

double corner_edge_angle(const EmbeddedGraph& g, int c, int e) {
    const Corner& cc = g.corner(c);
    if (cc.vertex != g.origin(e))
        throw GraphError(GraphError::Kind::NonAdjacent, "corner is not at the origin of the edge");
    return turn_angle(cc.decoration, g.direction(e));
}

double corner_pair_angle(const EmbeddedGraph& g, int c, int c2, int e) {
    const Corner& a = g.corner(c);
    const Corner& b = g.corner(c2);
    if (e < 0) {
        if (a.vertex != b.vertex) throw GraphError(GraphError::Kind::NonAdjacent, "corners at different vertices");
        return turn_angle(a.decoration, -b.decoration);
    }
    if (a.vertex != g.origin(e) || b.vertex != g.terminus(e))
        throw GraphError(GraphError::Kind::NonAdjacent, "corners do not sit at the ends of the edge");
    return turn_angle(a.decoration, g.direction(e)) + turn_angle(g.direction(e), -b.decoration);
}

double expected_det_b(const EmbeddedGraph& g) {
    double v = 1.0;
    for (int u = 0; u < g.num_vertices(); ++u)
        if (g.degree(u) >= 2) v *= 2.0;
    for (double x : g.weights()) v /= x;
    return v;
}

CornerBundle build_corner_bundle(const EmbeddedGraph& g, const CutSet* cut) {
    if (g.has_nonpositive_weight())
        throw std::invalid_argument("corner matrices need strictly positive weights");
    const int n = g.num_oriented();
    const int nc = g.num_corners();
    CornerBundle cb;
    cb.B = CMatrix::Zero(nc, n);
    for (int e = 0; e < n; ++e) {
        const double s = 1.0 / std::sqrt(g.oriented_weight(e));
        for (int c : {g.corner_plus(e), g.corner_minus(e)})
            cb.B(c, e) = std::polar(1.0, corner_edge_angle(g, c, e) / 2.0) * s;
    }
    MatrixBundle kb = cut ? build_twisted(g, *cut) : build_kacward(g);
    cb.C = cb.B * kb.K * cb.B.adjoint();

    CMatrix jt = CMatrix::Zero(n, n);
    for (int e = 0; e < n; ++e) jt(e, e ^ 1) = double(kb.twist[e ^ 1]);
    cb.F = CMatrix::Zero(nc + n, nc + n);
    cb.F.topLeftCorner(nc, nc) = cb.C - cb.B * jt * cb.B.adjoint();
    cb.F.topRightCorner(nc, n) = -cb.B;
    cb.F.bottomLeftCorner(n, nc) = -cb.B.adjoint();
    cb.F.bottomRightCorner(n, n) = -jt;

    cb.UC.resize(nc);
    for (int c = 0; c < nc; ++c) cb.UC(c) = g.corner(c).eta;
    CVector uf(nc + n);
    uf << cb.UC, cplx(0, 1) * kb.U;

    cb.Bhat.resize(nc, n);
    for (int c = 0; c < nc; ++c)
        for (int e = 0; e < n; ++e) {
            cplx v = cb.UC(c) * cb.B(c, e) * std::conj(kb.U(e));
            if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v)))
                throw ConventionError("Bhat is not real at (" + std::to_string(c) + "," + std::to_string(e) + ")");
            cb.Bhat(c, e) = v.real();
        }
    cb.Chat = hat_matrix(cb.C, cb.UC, "Chat");
    cb.Fhat = hat_matrix(cb.F, uf, "Fhat");
    return cb;
}

KasteleynReport check_kasteleyn(const EmbeddedGraph& g, const RMatrix& fhat) {
    DerivedGraphs dg = build_derived_graphs(g);
    const int nf = static_cast<int>(fhat.rows());
    const double tol = 1e-12 * std::max(1.0, max_abs(fhat));
    std::vector<std::pair<int, int>> edges;
    for (int p = 0; p < nf; ++p)
        for (int q = p + 1; q < nf; ++q)
            if (std::abs(fhat(p, q)) > tol) edges.push_back({p, q});
    EmbeddedGraph fisher = EmbeddedGraph::planar(dg.fisher_pos, edges, std::vector<double>(edges.size(), 1.0));
    KasteleynReport rep;
    for (int f : fisher.inner_faces()) {
        const auto& walk = fisher.face(f).boundary;
        KasteleynFace kf;
        for (int e : walk) {
            if (fisher.face_left(EmbeddedGraph::reverse(e)) == f) continue;  // bridge
            int p = fisher.origin(e), q = fisher.terminus(e);
            kf.vertices.push_back(p);
            if (fhat(p, q) < 0) ++kf.clockwise;
        }
        rep.faces.push_back(std::move(kf));
    }
    int fail_direct = 0, fail_reversed = 0;
    for (const auto& kf : rep.faces) {
        const int len = static_cast<int>(kf.vertices.size());
        if (kf.clockwise % 2 == 0) ++fail_direct;
        if ((len - kf.clockwise) % 2 == 0) ++fail_reversed;
    }
    rep.reversed = fail_reversed < fail_direct;
    for (auto& kf : rep.faces) {
        const int len = static_cast<int>(kf.vertices.size());
        const int cw = rep.reversed ? len - kf.clockwise : kf.clockwise;
        kf.ok = cw % 2 == 1;
        if (!kf.ok) ++rep.failures;
    }
    return rep;
}

// ----- propagation -------------------------------------------------------------------------

EdgeAngles edge_angles(double x) {
    double th = 2.0 * std::atan(x);
    return {th, std::cos(th), std::sin(th)};
}

PropagationBundle build_propagation(const EmbeddedGraph& g, const CutSet* cut, bool verify) {
    for (int v = 0; v < g.num_vertices(); ++v)
        if (g.degree(v) < 2)
            throw GraphError(GraphError::Kind::Invalid,
                             "propagation matrices are defined only without degree-1 vertices");
    const int nc = g.num_corners();
    const int n = g.num_oriented();
    const cplx I(0, 1);
    PropagationBundle pb;
    CornerBundle cb = build_corner_bundle(g, cut);
    pb.C = cb.C;
    for (int k = 0; k < g.num_edges(); ++k) {
        EdgeAngles a = edge_angles(g.weight(k));
        pb.theta.push_back(a.theta);
        pb.p.push_back(a.p);
        pb.q.push_back(a.q);
    }
    auto ph = [](double w) { return std::polar(1.0, w / 2.0); };
    auto sign = [&](int e) { return cut ? double(cut->sign(e)) : 1.0; };

    pb.Y = CMatrix::Zero(nc, nc);
    for (int v = 0; v < g.num_vertices(); ++v)
        for (int c : g.corners_at(v))
            for (int c2 : g.corners_at(v))
                if (c != c2) pb.Y(c, c2) = ph(corner_pair_angle(g, c, c2));

    pb.D = CMatrix::Zero(nc, nc);
    pb.S = CMatrix::Zero(nc, nc);
    pb.W = CMatrix::Zero(nc, nc);
    for (int c = 0; c < nc; ++c) {
        pb.D(c, c) = -I;
        pb.S(c, c) = -1.0;
    }
    for (int e = 0; e < n; ++e) {
        const int k = e >> 1;
        const int re = e ^ 1;
        const int cp = g.corner_plus(e), cm = g.corner_minus(e);
        const double x = g.oriented_weight(e);
        pb.D(cp, cm) = pb.p[k] * ph(corner_pair_angle(g, cp, cm));
        pb.D(cp, g.corner_minus(re)) = pb.q[k] * sign(e) * ph(corner_pair_angle(g, cp, g.corner_minus(re), e));
        pb.S(cm, cp) = -I * ph(corner_pair_angle(g, cm, cp));
        for (int c2 : {g.corner_plus(re), g.corner_minus(re)})
            pb.S(cm, c2) = I * ph(corner_pair_angle(g, cm, c2, e)) * sign(e) / x;
        pb.W(cm, cp) = ph(corner_pair_angle(g, cm, cp));
        pb.W(cm, g.corner_plus(re)) = -ph(corner_pair_angle(g, cm, g.corner_plus(re), e)) * sign(e) / x;
    }

    CMatrix id = CMatrix::Identity(nc, nc);
    CMatrix half_plus = 0.5 * (pb.Y + I * id) * pb.C;
    CMatrix half_minus = 0.5 * (pb.Y - I * id) * pb.C;
    CMatrix wd = pb.W * pb.D;
    CMatrix wdstar = pb.W.adjoint() * pb.D.adjoint();
    pb.residual_s = max_abs(CMatrix(pb.S - half_plus));
    pb.residual_wd = max_abs(CMatrix(half_plus - wd));
    pb.residual_ic = max_abs(CMatrix(I * pb.C - (wd - wdstar)));
    pb.residual_minus = max_abs(CMatrix(half_minus - wdstar));
    if (verify) {
        const double tol = 1e-10 * std::max(1.0, max_abs(pb.C));
        if (pb.residual_s > tol || pb.residual_wd > tol || pb.residual_ic > tol || pb.residual_minus > tol)
            throw ConventionError("propagation identities violated: S " + std::to_string(pb.residual_s) + ", WD " +
                                  std::to_string(pb.residual_wd) + ", iC " + std::to_string(pb.residual_ic) +
                                  ", W*D* " + std::to_string(pb.residual_minus));
    }
    return pb;
}

} // namespace kw
