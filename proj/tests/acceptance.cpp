// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "kacward/cli.hpp"
#include "kacward/double_ising.hpp"
#include "kacward/surface.hpp"
#include "support/support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace kw;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Tracks the worst deviation seen and whether every check stayed under its tolerance.
struct Tally {
    double worst = 0.0;
    int checks = 0;
    int failures = 0;
    void add(double delta, double tol) {
        ++checks;
        worst = std::max(worst, delta);
        if (!(delta <= tol)) ++failures;
    }
    void require(bool ok) {
        ++checks;
        if (!ok) ++failures;
    }
    std::string summary() const {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%d checks, %d failed, worst delta %.3g", checks, failures, worst);
        return buf;
    }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <typename F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string with_time(const Tally& t, double s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ", %.2f s", s);
    return t.summary() + buf;
}

Outcome kac_ward_determinant() {
    Tally t;
    const auto corpus = standard_corpus();
    const double s = seconds([&] {
        for (const auto& cg : corpus) {
            const double z = brute_even_sum(cg.graph);
            t.add(rel(det(build_kacward(cg.graph).KW).real(), z * z), 1e-9);
        }
    });
    return {t.failures == 0 && s < 60.0 && corpus.size() >= 20, std::to_string(corpus.size()) + " graphs, " + with_time(t, s)};
}

Outcome pfaffian_sign() {
    Tally t;
    for (const auto& cg : standard_corpus()) {
        const EmbeddedGraph& g = cg.graph;
        t.add(rel(epsilon_d0(g) * pfaffian(build_kacward(g).Khat), signed_dimer_sum(g)), 1e-9);
    }
    return {t.failures == 0, t.summary()};
}

Outcome fermion_minors() {
    Tally t;
    std::mt19937 rng(2024);
    int skipped = 0;
    for (const auto& cg : standard_corpus()) {
        const EmbeddedGraph& g = cg.graph;
        const double z = partition_function(g);
        const bool has_face = !g.inner_faces().empty();
        const CutSet cut = has_face ? find_cut_set(g, CutKind::Dual, {g.inner_faces()[0]}) : empty_cut(g);
        const double zt = twisted_partition(g, cut);
        for (int trial = 0; trial < 50; ++trial) {
            const int size = std::min(2 + 2 * (trial % 3), g.num_oriented());
            const std::vector<int> e = kwtest::random_oriented(g, size, rng);
            t.add(std::abs(fermion_pfaffian(g, e) * z - edge_class_sum(g, e, tau_rule(g)).real()) / z, 1e-9);
            if (!has_face) continue;
            // An edge and its reversal on a cut edge sit on opposite sheets.
            bool split = false;
            for (int x : e)
                split = split || (cut.crosses_edge(x >> 1) && std::find(e.begin(), e.end(), x ^ 1) != e.end());
            if (split) {
                ++skipped;
                continue;
            }
            t.add(std::abs(fermion_pfaffian(g, e, &cut) * zt - edge_class_sum(g, e, tau_rule(g), &cut).real()) / z,
                  1e-9);
        }
    }
    return {t.failures == 0, t.summary() + ", " + std::to_string(skipped) + " twisted sets with a split edge pair"};
}

Outcome spin_correlations() {
    Tally t;
    const EmbeddedGraph g = lattice_block(3, 3, 0.3);
    const auto f = g.inner_faces();
    const int n = static_cast<int>(f.size());
    for (int mask = 0; mask < (1 << n); ++mask) {
        if (__builtin_popcount(mask) > 3) continue;
        std::vector<int> set;
        for (int k = 0; k < n; ++k)
            if (mask >> k & 1) set.push_back(f[k]);
        const double o = dual_spin_correlation(g, set);
        for (unsigned seed = 0; seed < 3; ++seed) t.add(std::abs(spin_correlation(g, set, seed) - o), 1e-10);
    }
    return {t.failures == 0, t.summary()};
}

Outcome energy_correlations() {
    Tally t;
    const EmbeddedGraph g = lattice_block(3, 3, 0.3);
    const double z = brute_even_sum(g);
    for (int a = 0; a < g.num_edges(); ++a)
        for (int b = a + 1; b < g.num_edges(); ++b) {
            const EnergyResult r = energy_correlation(g, {a, b});
            const auto in = [&](uint64_t m, int e) { return (m >> e & 1u) != 0; };
            const double prod = brute_even_sum_functional(g, [&](uint64_t m) {
                return subgraph_weight(g, m) * (in(m, a) ? -1.0 : 1.0) * (in(m, b) ? -1.0 : 1.0);
            }) / z;
            const double ind = brute_even_sum_functional(g, [&](uint64_t m) {
                return in(m, a) || in(m, b) ? 0.0 : subgraph_weight(g, m);
            }) / z;
            t.add(std::abs(r.product - prod), 1e-10);
            t.add(std::abs(r.indicator - ind), 1e-10);
            t.add(r.inclusion_exclusion_residual, 1e-10);
        }
    return {t.failures == 0, t.summary()};
}

Outcome corner_chain() {
    Tally t;
    for (const auto& cg : standard_corpus()) {
        const EmbeddedGraph& g = cg.graph;
        const CornerBundle cb = build_corner_bundle(g);
        const double pk = std::abs(pfaffian(build_kacward(g).Khat));
        const double db = std::abs(det(cb.Bhat));
        t.add(rel(std::abs(pfaffian(cb.Chat)), db * pk), 1e-8);
        t.add(rel(std::abs(pfaffian(cb.Fhat)), db * pk), 1e-8);
        t.add(rel(fisher_dimer_sum(g), db * partition_function(g)), 1e-8);
        t.require(check_kasteleyn(g, cb.Fhat.dense()).all_ok());
    }
    return {t.failures == 0, t.summary()};
}

Outcome propagation() {
    Tally t;
    int graphs = 0;
    for (const auto& cg : standard_corpus()) {
        const EmbeddedGraph& g = cg.graph;
        if (kwtest::has_degree_one(g)) continue;
        ++graphs;
        const CutSet cut = find_cut_set(g, CutKind::Dual, {g.inner_faces()[0]});
        for (const CutSet* c : {static_cast<const CutSet*>(nullptr), &cut}) {
            const PropagationBundle p = build_propagation(g, c, false);
            t.add(p.residual_s, 1e-9);
            t.add(p.residual_wd, 1e-9);
            t.add(p.residual_ic, 1e-9);
            t.add(p.residual_minus, 1e-9);
            const CMatrix ww = p.W * p.W.adjoint();
            double diag = 0.0;
            for (int e = 0; e < g.num_oriented(); ++e) {
                const double x = g.oriented_weight(e);
                const int corner = g.corner_minus(e);
                diag = std::max(diag, std::abs(ww(corner, corner) - (1.0 + 1.0 / (x * x))));
            }
            t.add(diag, 1e-9);
            t.add(max_abs(CMatrix(ww - CMatrix(ww.diagonal().asDiagonal()))), 1e-9);
            const CMatrix id = CMatrix::Identity(g.num_corners(), g.num_corners());
            t.add(max_abs(CMatrix(4.0 * invert(p.C) + p.Y + cplx(0, 1) * id - 2.0 * invert(p.D))), 1e-9);
        }
    }
    return {t.failures == 0, std::to_string(graphs) + " graphs without tails, " + t.summary()};
}

Outcome observables() {
    Tally t;
    for (const auto& cg : standard_corpus()) {
        const EmbeddedGraph& g = cg.graph;
        for (int a = 0; a < g.num_oriented(); ++a) {
            const Observable f = edge_observable(g, a);
            t.add(s_hol_max_residual(g, f), 1e-9);
            t.add(boundary_residual(g, f), 1e-9);
        }
        for (int c = 0; c < g.num_corners(); ++c) {
            const Observable f = corner_observable(g, c);
            t.add(s_hol_max_residual(g, f), 1e-9);
            t.add(boundary_residual(g, f), 1e-9);
        }
    }
    for (const char* name : {"block-3x3", "house", "random-2", "decorated-square"}) {
        const EmbeddedGraph g = kwtest::corpus_graph(name);
        for (int e = 0; e < g.num_edges(); ++e)
            for (int a = 0; a < g.num_edges(); ++a) {
                if (a == e) continue;
                const PsiPair p = psi_correlators(g, e, a), q = psi_correlators(g, a, e);
                t.add(std::abs(p.psi + q.psi), 1e-10);
                t.add(std::abs(p.psi_dagger + std::conj(q.psi_dagger)), 1e-10);
            }
    }
    return {t.failures == 0, t.summary()};
}

Outcome double_ising() {
    Tally t;
    for (const EmbeddedGraph& g : {kwtest::decorated_square(0.5), kwtest::decorated_2x3(),
                                   decorated_block(2, 3, 0.3, 0.5)}) {
        const double z = double_ising_sum(g);
        t.add(rel(double_partition(g), z), 1e-9);
        const auto inner = g.inner_faces();
        for (size_t i = 0; i < inner.size(); ++i)
            for (size_t j = i; j < inner.size(); ++j) {
                std::vector<int> faces{inner[i]};
                if (j != i) faces.push_back(inner[j]);
                const CutSet cut = find_cut_set(g, CutKind::Dual, faces);
                t.add(std::abs(double_spin_correlation(g, faces) - double_ising_sum(g, &cut) / z), 1e-9);
            }
        const BoundaryDecoration d = boundary_decoration(g);
        for (int a : d.inward)
            for (int b : d.inward) {
                if (a == b) continue;
                const DobrushinResult r = dobrushin_partition(g, a, b, 6);
                const double o = 2 * std::sqrt(g.oriented_weight(a) * g.oriented_weight(b)) * dobrushin_sum(g, a, b);
                t.add(rel(r.value, o), 1e-9);
                t.add(r.path_spread, 1e-10);
            }
        for (int a = 0; a < g.num_oriented(); ++a) {
            const Observable f = double_observable(g, a);
            t.add(double_s_hol_max_residual(g, f), 1e-9);
            t.add(double_boundary_residual(g, f), 1e-9);
        }
    }
    return {t.failures == 0, t.summary()};
}

Outcome surfaces() {
    Tally t;
    const double s = seconds([&] {
        for (int n : {2, 3}) {
            const EmbeddedGraph tor = EmbeddedGraph::torus(n, n, 0.35);
            const auto bins = homology_bins(tor);
            const auto all = torus_spin_structures(tor);
            int arf_one = 0;
            for (const auto& st : all) {
                const QuadraticForm q = quadratic_form(tor, st);
                double signed_sum = 0.0;
                for (int a = 0; a < 4; ++a) signed_sum += q(a) ? -bins[a] : bins[a];
                t.add(rel(structure_root(tor, st), signed_sum), 1e-9);
                arf_one += q.arf();
                int gauss = 0;
                for (int a = 0; a < 4; ++a) gauss += q(a) ? -1 : 1;
                t.require(gauss == (q.arf() ? -2 : 2));
                t.require(q(3) == (q(1) + q(2) + 1) % 2);
                t.require(q(0) == 0);
            }
            t.require(arf_one == 1);
            t.add(rel(torus_partition_high(tor), bins[0] + bins[1] + bins[2] + bins[3]), 1e-9);
            t.add(rel(torus_partition_low(tor), bins[0]), 1e-9);
        }
        const EmbeddedGraph g = lattice_block(4, 4, 0.35);
        const auto inner = g.inner_faces();
        for (int m = 1; m <= 2; ++m) {
            const std::vector<int> pun(inner.begin() + 4, inner.begin() + 4 + m);
            const PuncturedDisk d = make_punctured_disk(g, pun);
            std::vector<int> fixed = pun;
            fixed.push_back(g.outer_face());
            for (const auto& faces : std::vector<std::vector<int>>{{inner[0]}, {inner[0], inner[8]},
                                                                   {inner[1], inner[2], inner[7]}}) {
                t.add(std::abs(surface_spin_correlation(d, faces) - dual_spin_correlation(g, faces, fixed)), 1e-10);
            }
        }
    });
    return {t.failures == 0 && s < 120.0, with_time(t, s)};
}

Outcome whitney() {
    Tally t;
    std::mt19937 rng(11);
    for (int k = 0; k < 200; ++k) {
        const auto p = kwtest::random_polygon(4 + k % 9, rng);
        const int crossings = polygon_self_intersections(p);
        t.add(std::abs(-std::polar(1.0, polygon_winding(p) / 2) - cplx(crossings % 2 ? -1 : 1, 0)), 1e-9);
    }
    return {t.failures == 0, t.summary()};
}

Outcome performance() {
    cli::CommandRequest r;
    r.command = "bench";
    const cli::CommandOutcome out = cli::run(r);
    if (out.exit_code != cli::Success) return {false, "bench exited with " + std::to_string(out.exit_code)};
    const auto& rows = out.doc["components"]["rows"];
    double t20 = -1.0;
    int largest_oracle = 0;
    for (const auto& row : rows) {
        if (row["n"] == 20) t20 = row["pfaffian_seconds"].get<double>();
        if (row["oracle_seconds"].is_number()) largest_oracle = std::max(largest_oracle, row["edges"].get<int>());
    }
    const double slope = out.doc["value"].is_number() ? out.doc["value"].get<double>() : std::nan("");
    char buf[160];
    std::snprintf(buf, sizeof buf, "N=20 in %.2f s, fitted exponent %.2f, oracle run up to %d edges", t20, slope,
                  largest_oracle);
    return {t20 >= 0 && t20 < 30.0 && slope >= 4.5 && slope <= 7.0, buf};
}

} // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{
        kac_ward_determinant, pfaffian_sign, fermion_minors, spin_correlations, energy_correlations, corner_chain,
        propagation,          observables,   double_ising,   surfaces,          whitney,             performance};
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("criterion %zu: %s %s\n", k + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
