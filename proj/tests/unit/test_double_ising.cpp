#include "kacward/double_ising.hpp"
#include "support/support.hpp"

#include <doctest.h>

using namespace kw;

TEST_SUITE("double_ising") {

TEST_CASE("boundary decoration runs counterclockwise") {
    const EmbeddedGraph g = kwtest::decorated_square(0.5);
    const BoundaryDecoration d = boundary_decoration(g);
    REQUIRE(d.vertices.size() == 4);
    // Tails sit at angles increasing counterclockwise around the square.
    double total = 0.0;
    for (size_t k = 0; k < 4; ++k) {
        const Point a = g.position(d.vertices[k]), b = g.position(d.vertices[(k + 1) % 4]);
        total += std::arg(cplx(b.x - 0.5, b.y - 0.5) / cplx(a.x - 0.5, a.y - 0.5));
    }
    CHECK(total == doctest::Approx(2 * kPi));
    for (size_t k = 0; k < 4; ++k) CHECK(d.outward[k] == (d.inward[k] ^ 1));
    CHECK_THROWS_AS(boundary_decoration(lattice_block(2, 2, 0.3)), GraphError);
}

TEST_CASE("double-Ising partition function and spin correlations") {
    for (const EmbeddedGraph& g : {kwtest::decorated_square(0.5), kwtest::decorated_2x3(),
                                   decorated_block(2, 3, 0.3, 0.5)}) {
        const DoublePartition p = double_partition_details(g);
        CHECK(kwtest::rel_err(p.value, double_ising_sum(g)) < 1e-10);
        CHECK(p.imaginary_residue < 1e-10 * p.value);
        for (int f : g.inner_faces()) {
            const CutSet cut = find_cut_set(g, CutKind::Dual, {f});
            CHECK(double_spin_correlation(g, {f}) == doctest::Approx(double_ising_sum(g, &cut) / double_ising_sum(g)));
        }
    }
}

TEST_CASE("principal minors with an odd number of removed rows vanish") {
    const EmbeddedGraph g = kwtest::decorated_2x3();
    CHECK(std::abs(principal_minor_det(g, {0})) < 1e-12);
    CHECK(std::abs(principal_minor_det(g, {1, 4, 7})) < 1e-12);
}

TEST_CASE("Dobrushin partition functions for every ordered boundary pair") {
    for (const EmbeddedGraph& g : {kwtest::decorated_square(0.5), kwtest::decorated_2x3()}) {
        const BoundaryDecoration d = boundary_decoration(g);
        for (int a : d.inward)
            for (int b : d.inward) {
                if (a == b) continue;
                const DobrushinResult r = dobrushin_partition(g, a, b, 6);
                const double o = 2 * std::sqrt(g.oriented_weight(a) * g.oriented_weight(b)) * dobrushin_sum(g, a, b);
                CHECK(kwtest::rel_err(r.value, o) < 1e-10);
                CHECK(r.path_spread < 1e-10);
                CHECK(std::abs(r.raw.imag()) < 1e-10 * std::max(1.0, std::abs(r.raw)));
            }
    }
}

TEST_CASE("boundary arcs partition the boundary") {
    const EmbeddedGraph g = kwtest::decorated_2x3();
    const BoundaryDecoration d = boundary_decoration(g);
    const int a = d.inward[0], b = d.inward[2];
    const auto ab = boundary_arc(g, a, b), ba = boundary_arc(g, b, a);
    CHECK(ab.size() + ba.size() + 2 == d.inward.size());
    CHECK(ab == std::vector<int>{d.inward[1]});
    CHECK_THROWS_AS(boundary_arc(g, a, a), GraphError);
}

TEST_CASE("double-Ising observable") {
    for (const EmbeddedGraph& g : {kwtest::decorated_square(0.5), kwtest::decorated_2x3()}) {
        const CutSet cut = find_cut_set(g, CutKind::Dual, {g.inner_faces()[0]});
        for (int a = 0; a < g.num_oriented(); ++a) {
            const Observable f = double_observable(g, a);
            CHECK(double_s_hol_max_residual(g, f) < 1e-9);
            CHECK(double_boundary_residual(g, f) < 1e-9);
            CHECK(double_s_hol_max_residual(g, double_observable(g, a, &cut)) < 1e-9);
        }
    }
}

}
