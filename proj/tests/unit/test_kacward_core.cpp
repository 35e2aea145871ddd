#include "kacward/ising_engine.hpp"
#include "support/support.hpp"

#include <doctest.h>

using namespace kw;

TEST_SUITE("kacward_core") {

TEST_CASE("K is the row-reversed KW, self-adjoint, and Khat is real antisymmetric") {
    for (const auto& cg : standard_corpus()) {
        CAPTURE(cg.name);
        const EmbeddedGraph& g = cg.graph;
        const MatrixBundle b = build_kacward(g);
        const CMatrix j = reversal_matrix(g.num_oriented());
        CHECK(max_abs(CMatrix(b.K - j * b.KW)) < 1e-14);
        CHECK(max_abs(CMatrix(b.K - b.K.adjoint())) < 1e-12);
        CHECK(max_abs(CMatrix(b.KhatC.imag().cast<cplx>())) < 1e-12);
        CHECK(max_abs(RMatrix(b.Khat.dense() + b.Khat.dense().transpose())) == 0.0);
        for (int e = 0; e < g.num_oriented(); ++e) CHECK(b.K(e, e) == cplx(0, 0));
    }
}

TEST_CASE("Kac-Ward determinant is the squared even-subgraph sum") {
    for (const auto& cg : standard_corpus()) {
        CAPTURE(cg.name);
        const double z = brute_even_sum(cg.graph);
        CHECK(kwtest::rel_err(det(build_kacward(cg.graph).KW).real(), z * z) < 1e-9);
    }
}

TEST_CASE("epsilon times Pf Khat is the signed dimer sum") {
    for (const auto& cg : standard_corpus()) {
        CAPTURE(cg.name);
        const EmbeddedGraph& g = cg.graph;
        const double pf = pfaffian(build_kacward(g).Khat);
        CHECK(kwtest::rel_err(epsilon_d0(g) * pf, signed_dimer_sum(g)) < 1e-9);
    }
}

TEST_CASE("twisted matrices") {
    const EmbeddedGraph g = lattice_block(3, 3, 0.3);
    const CutSet cut = find_cut_set(g, CutKind::Dual, {g.inner_faces()[1]});
    const MatrixBundle t = build_twisted(g, cut);
    const MatrixBundle b = build_kacward(g);
    for (int e = 0; e < g.num_oriented(); ++e) {
        CHECK(t.twist[e] == cut.sign(e));
        CHECK(t.KW(e, e) == cplx(double(cut.sign(e)), 0));
    }
    CHECK(max_abs(CMatrix(t.T - b.T)) == 0.0);
    CHECK(kwtest::rel_err(epsilon_d0(g) * pfaffian(t.Khat) * (cut.size() % 2 ? -1 : 1),
                          brute_even_sum_twisted(g, cut)) < 1e-12);
    CutSet primal = find_cut_set(g, CutKind::Primal, {0, 8});
    CHECK_THROWS_AS(build_twisted(g, primal), GraphError);
}

TEST_CASE("corner chain: |Pf Fhat| = |Pf Chat| = |det B| |Pf Khat| and the Fisher dimer sum") {
    for (const auto& cg : standard_corpus()) {
        CAPTURE(cg.name);
        const EmbeddedGraph& g = cg.graph;
        const CornerBundle cb = build_corner_bundle(g);
        const double pk = std::abs(pfaffian(build_kacward(g).Khat));
        const double db = std::abs(det(cb.Bhat));
        CHECK(kwtest::rel_err(db, expected_det_b(g)) < 1e-10);
        CHECK(kwtest::rel_err(std::abs(pfaffian(cb.Chat)), db * pk) < 1e-8);
        CHECK(kwtest::rel_err(std::abs(pfaffian(cb.Fhat)), db * pk) < 1e-8);
        CHECK(kwtest::rel_err(fisher_dimer_sum(g), db * partition_function(g)) < 1e-8);
        const KasteleynReport k = check_kasteleyn(g, cb.Fhat.dense());
        CHECK(k.all_ok());
        CHECK(!k.faces.empty());
        CHECK(max_abs(CMatrix(cb.C - cb.C.adjoint())) < 1e-10);
    }
}

TEST_CASE("propagation identities, plain and twisted") {
    for (const auto& cg : standard_corpus()) {
        const EmbeddedGraph& g = cg.graph;
        if (kwtest::has_degree_one(g)) {
            CHECK_THROWS_AS(build_propagation(g), GraphError);
            continue;
        }
        CAPTURE(cg.name);
        const auto inner = g.inner_faces();
        const CutSet cut = find_cut_set(g, CutKind::Dual, {inner[0]});
        for (const CutSet* c : {static_cast<const CutSet*>(nullptr), &cut}) {
            const PropagationBundle p = build_propagation(g, c, false);
            CHECK(p.residual_s < 1e-9);
            CHECK(p.residual_wd < 1e-9);
            CHECK(p.residual_ic < 1e-9);
            CHECK(p.residual_minus < 1e-9);
            CHECK(max_abs(CMatrix(p.Y - p.Y.adjoint())) < 1e-12);
            const int nc = g.num_corners();
            const CMatrix ww = p.W * p.W.adjoint();
            for (int e = 0; e < g.num_oriented(); ++e) {
                const double x = g.oriented_weight(e);
                const int corner = g.corner_minus(e);
                CHECK(std::abs(ww(corner, corner) - (1.0 + 1.0 / (x * x))) < 1e-9);
            }
            CHECK(max_abs(CMatrix(ww - CMatrix(ww.diagonal().asDiagonal()))) < 1e-9);
            const CMatrix id = CMatrix::Identity(nc, nc);
            const CMatrix lemma = 4.0 * invert(p.C) + p.Y + cplx(0, 1) * id - 2.0 * invert(p.D);
            CHECK(max_abs(lemma) < 1e-9);
        }
    }
}

TEST_CASE("edge angle parametrisation") {
    for (double x : {0.1, 0.5, 1.0, 2.0}) {
        const EdgeAngles a = edge_angles(x);
        CHECK(a.p * a.p + a.q * a.q == doctest::Approx(1.0));
        CHECK(std::tan(a.theta / 2) == doctest::Approx(x));
    }
}

}
