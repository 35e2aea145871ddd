#include "kacward/surface.hpp"
#include "support/support.hpp"

#include <doctest.h>

using namespace kw;

namespace {

double signed_bins(const std::array<double, 4>& bins, const QuadraticForm& q) {
    double s = 0.0;
    for (int a = 0; a < 4; ++a) s += q(a) ? -bins[a] : bins[a];
    return s;
}

} // namespace

TEST_SUITE("surface") {

TEST_CASE("torus spin structures, quadratic forms and Arf invariants") {
    const EmbeddedGraph t = EmbeddedGraph::torus(2, 2, 0.3);
    const auto all = torus_spin_structures(t);
    REQUIRE(all.size() == 4);
    int arf_one = 0;
    for (const auto& s : all) {
        CHECK(curvature_defects(t, s).empty());
        arf_one += arf(t, s);
    }
    CHECK(arf_one == 1);
    const QuadraticForm q0 = quadratic_form(t, all[0]);
    CHECK(q0.basis == std::array<int, 2>{1, 1});
    CHECK(q0.arf() == 1);
    for (int alpha = 0; alpha < 4; ++alpha) {
        // Orthogonality over the four forms and the Arf identity.
        int sum = 0, arf_sum = 0;
        for (const auto& s : all) {
            const QuadraticForm q = quadratic_form(t, s);
            sum += q(alpha) ? -1 : 1;
            arf_sum += (q.arf() + q(alpha)) % 2 ? -1 : 1;
        }
        CHECK(sum == (alpha == 0 ? 4 : 0));
        CHECK(arf_sum == 2);
    }
    // q(a + b) = q(a) + q(b) + a . b
    for (const auto& s : all) {
        const QuadraticForm q = quadratic_form(t, s);
        CHECK(q(3) == (q(1) + q(2) + 1) % 2);
    }
}

TEST_CASE("twisting a structure flips exactly the crossing entries") {
    const EmbeddedGraph t = EmbeddedGraph::torus(3, 2, 0.3);
    const auto all = torus_spin_structures(t);
    const CMatrix k0 = build_kacward_lambda(t, all[0]), k1 = build_kacward_lambda(t, all[1]);
    const CMatrix id = CMatrix::Identity(k0.rows(), k0.cols());
    for (int e = 0; e < t.num_oriented(); ++e) {
        const double s = all[1].phi[e >> 1] ? -1.0 : 1.0;
        CHECK(max_abs(CMatrix((id - k1).row(e) - s * (id - k0).row(e))) < 1e-14);
    }
}

TEST_CASE("non-flat connections are rejected") {
    const EmbeddedGraph t = EmbeddedGraph::torus(2, 2, 0.3);
    SpinStructure s = torus_spin_structures(t)[0];
    s.phi[0] = 1;
    CHECK_FALSE(curvature_defects(t, s).empty());
    CHECK_THROWS_AS(build_kacward_lambda(t, s), SurfaceError);
}

TEST_CASE("torus partition functions against homology-resolved enumeration") {
    for (auto [w, h, x] : std::vector<std::tuple<int, int, double>>{{2, 2, 0.3}, {3, 2, 0.5}, {2, 2, 0.9}}) {
        const EmbeddedGraph t = EmbeddedGraph::torus(w, h, x);
        const auto bins = homology_bins(t);
        for (const auto& s : torus_spin_structures(t)) {
            const double r = structure_root(t, s);
            CHECK(kwtest::rel_err(r, signed_bins(bins, quadratic_form(t, s))) < 1e-10);
            CHECK(kwtest::rel_err(det(build_kacward_lambda(t, s)).real(), r * r) < 1e-10);
        }
        CHECK(kwtest::rel_err(torus_partition_high(t), bins[0] + bins[1] + bins[2] + bins[3]) < 1e-10);
        CHECK(kwtest::rel_err(torus_partition_low(t), bins[0]) < 1e-10);
    }
    CHECK(torus_partition_high(EmbeddedGraph::torus(2, 2, 0.0)) == doctest::Approx(1.0));
}

TEST_CASE("punctured disks") {
    const EmbeddedGraph g = lattice_block(3, 3, 0.3);
    const auto inner = g.inner_faces();
    const PuncturedDisk none = make_punctured_disk(g, {});
    CHECK(punctured_spin_structures(none).size() == 1);
    CHECK(surface_partition_low(none) == doctest::Approx(partition_function(g)));

    for (int m = 1; m <= 3; ++m) {
        const std::vector<int> pun(inner.begin(), inner.begin() + m);
        const PuncturedDisk d = make_punctured_disk(g, pun);
        const auto all = punctured_spin_structures(d);
        CHECK(all.size() == (1u << m));
        for (const auto& s : all) {
            CHECK(curvature_defects(g, s, pun).empty());
            CutSet c = empty_cut(g);
            c.crosses.assign(s.phi.begin(), s.phi.end());
            CHECK(kwtest::rel_err(structure_root(g, s), brute_even_sum_twisted(g, c)) < 1e-10);
        }
        // Z_low of the surface over Z_low = E+[prod (1 + sigma_u) / 2]
        double mix = 0.0;
        for (int k = 0; k < (1 << m); ++k) {
            std::vector<int> faces;
            for (int j = 0; j < m; ++j)
                if (k >> j & 1) faces.push_back(pun[j]);
            mix += spin_correlation(g, faces);
        }
        CHECK(surface_partition_low(d) / partition_function(g) == doctest::Approx(mix / (1 << m)));
    }
}

TEST_CASE("one puncture in the 4-cycle") {
    const double x = 0.4;
    const EmbeddedGraph sq = EmbeddedGraph::planar({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}},
                                                   {x, x, x, x});
    const PuncturedDisk d = make_punctured_disk(sq, {sq.inner_faces()[0]});
    CHECK(surface_partition_low(d) / partition_function(sq) == doctest::Approx(1.0 / (1.0 + std::pow(x, 4))));
}

TEST_CASE("spin correlations with + on every boundary component") {
    const EmbeddedGraph g = lattice_block(3, 3, 0.35);
    const auto inner = g.inner_faces();
    for (int m = 1; m <= 2; ++m) {
        const std::vector<int> pun(inner.begin(), inner.begin() + m);
        const PuncturedDisk d = make_punctured_disk(g, pun);
        std::vector<int> fixed = pun;
        fixed.push_back(g.outer_face());
        for (const auto& faces : std::vector<std::vector<int>>{{inner[3]}, {inner[2], inner[3]}}) {
            if (std::find(pun.begin(), pun.end(), faces[0]) != pun.end()) continue;
            CHECK(surface_spin_correlation(d, faces) ==
                  doctest::Approx(dual_spin_correlation(g, faces, fixed)).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(make_punctured_disk(g, {g.outer_face()}), GraphError);
}

}
