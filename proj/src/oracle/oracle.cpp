#include "kacward/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>

namespace kw {

void EnumerationBudget::check_edges(const EmbeddedGraph& g, int free_edges) const {
    const int limit = g.geometry() == Geometry::Torus ? max_torus_edges : max_edges;
    if (free_edges > limit || free_edges > 62)
        throw BudgetExceeded("enumeration over " + std::to_string(free_edges) + " free edges exceeds the budget of " +
                             std::to_string(limit));
}

int worker_count() {
    if (const char* env = std::getenv("KACWARD_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_chunks(int chunks, const std::function<void(int)>& body) {
    const int workers = std::min(worker_count(), chunks);
    if (workers <= 1) {
        for (int c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int c = next++; c < chunks; c = next++) {
                try {
                    body(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = chunks;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

uint64_t edge_parity_bits(const EmbeddedGraph& g, int edge) {
    auto [u, v] = g.endpoints(edge);
    return (uint64_t(1) << u) ^ (uint64_t(1) << v);
}

double subgraph_weight(const EmbeddedGraph& g, uint64_t edges) {
    double w = 1.0;
    for (int e = 0; e < g.num_edges(); ++e)
        if (edges >> e & 1u) w *= g.weight(e);
    return w;
}

namespace {

uint64_t all_edges(const EmbeddedGraph& g) {
    if (g.num_edges() > 63) throw BudgetExceeded("enumeration supports at most 63 edges");
    return g.num_edges() == 64 ? ~uint64_t(0) : (uint64_t(1) << g.num_edges()) - 1;
}

uint64_t cut_mask(const EmbeddedGraph& g, const CutSet* cut) {
    uint64_t m = 0;
    if (!cut) return m;
    for (int e = 0; e < g.num_edges(); ++e)
        if (cut->crosses_edge(e)) m |= uint64_t(1) << e;
    return m;
}

// Edges at a degree-1 vertex are determined by the parity required there.
void settle_tails(const EmbeddedGraph& g, uint64_t target, uint64_t& free_edges, uint64_t& fixed_edges) {
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.degree(v) != 1) continue;
        const int e = g.out_edges(v)[0] >> 1;
        const uint64_t bit = uint64_t(1) << e;
        if (!(free_edges & bit)) continue;
        free_edges &= ~bit;
        if (target >> v & 1u) fixed_edges |= bit;
    }
}

struct ClassSetup {
    uint64_t free_edges = 0;
    uint64_t fixed_edges = 0;
    uint64_t target = 0;
    std::vector<int> halves;
    double half_weight = 1.0;
    int half_cut_parity = 0;
};

} // namespace

double brute_even_sum_functional(const EmbeddedGraph& g, const std::function<double(uint64_t)>& f,
                                 const EnumerationBudget& budget) {
    uint64_t free_edges = all_edges(g), fixed = 0;
    settle_tails(g, 0, free_edges, fixed);
    return sum_over_parity_class<double>(g, free_edges, fixed, 0, f, budget);
}

double brute_even_sum(const EmbeddedGraph& g, const EnumerationBudget& budget) {
    return brute_even_sum_functional(g, [&](uint64_t m) { return subgraph_weight(g, m); }, budget);
}

double brute_even_sum_twisted(const EmbeddedGraph& g, const CutSet& cut, const EnumerationBudget& budget) {
    const uint64_t km = cut_mask(g, &cut);
    return brute_even_sum_functional(
        g,
        [&](uint64_t m) {
            double w = subgraph_weight(g, m);
            return __builtin_popcountll(m & km) % 2 ? -w : w;
        },
        budget);
}

int homology_class(const EmbeddedGraph& g, uint64_t edges) {
    int a = 0, b = 0;
    for (int e = 0; e < g.num_edges(); ++e)
        if (edges >> e & 1u) {
            auto w = g.wrap(e);
            a += w[0];
            b += w[1];
        }
    return (a & 1) | ((b & 1) << 1);
}

namespace {
struct Bins {
    std::array<double, 4> v{0, 0, 0, 0};
    Bins& operator+=(const Bins& o) {
        for (int i = 0; i < 4; ++i) v[i] += o.v[i];
        return *this;
    }
};
} // namespace

std::array<double, 4> homology_bins(const EmbeddedGraph& g, const EnumerationBudget& budget) {
    uint64_t free_edges = all_edges(g), fixed = 0;
    settle_tails(g, 0, free_edges, fixed);
    Bins b = sum_over_parity_class<Bins>(
        g, free_edges, fixed, 0,
        [&](uint64_t m) {
            Bins r;
            r.v[homology_class(g, m)] = subgraph_weight(g, m);
            return r;
        },
        budget);
    return b.v;
}

// ----- spins -----------------------------------------------------------------------------

SpinSums dual_spin_sums(const EmbeddedGraph& g, const std::function<double(const std::vector<int>&)>& observable,
                        std::vector<int> fixed_plus, const EnumerationBudget& budget) {
    if (g.geometry() != Geometry::Plane) throw GraphError(GraphError::Kind::Invalid, "dual spins need a plane graph");
    if (fixed_plus.empty()) fixed_plus.push_back(g.outer_face());
    const int nf = g.num_faces();
    std::vector<char> fixed(nf, 0);
    for (int f : fixed_plus) fixed.at(f) = 1;
    std::vector<int> free_faces;
    for (int f = 0; f < nf; ++f)
        if (!fixed[f]) free_faces.push_back(f);
    const int n = static_cast<int>(free_faces.size());
    if (n > budget.max_spins) throw BudgetExceeded("spin enumeration over " + std::to_string(n) + " faces");

    const uint64_t total = uint64_t(1) << n;
    const int chunks = static_cast<int>(std::min<uint64_t>(total, 64));
    const uint64_t per = total / chunks;
    std::vector<SpinSums> partial(chunks);
    parallel_chunks(chunks, [&](int c) {
        std::vector<int> s(nf, 1);
        SpinSums acc;
        for (uint64_t cfg = per * c; cfg < per * (c + 1); ++cfg) {
            for (int k = 0; k < n; ++k) s[free_faces[k]] = (cfg >> k & 1u) ? -1 : 1;
            double w = 1.0;
            for (int e = 0; e < g.num_edges(); ++e) {
                auto [f1, f2] = g.dual_edge(e);
                if (s[f1] != s[f2]) w *= g.weight(e);
            }
            acc.Z += w;
            acc.weighted += w * observable(s);
        }
        partial[c] = acc;
    });
    SpinSums out;
    for (const auto& p : partial) {
        out.Z += p.Z;
        out.weighted += p.weighted;
    }
    return out;
}

double dual_spin_correlation(const EmbeddedGraph& g, const std::vector<int>& faces, std::vector<int> fixed_plus,
                             const EnumerationBudget& budget) {
    auto r = dual_spin_sums(
        g,
        [&](const std::vector<int>& s) {
            int p = 1;
            for (int f : faces) p *= s.at(f);
            return double(p);
        },
        std::move(fixed_plus), budget);
    return r.expectation();
}

double vertex_spin_partition(const EmbeddedGraph& g, double beta, const std::vector<double>& couplings,
                             const EnumerationBudget& budget) {
    const int n = g.num_vertices();
    if (n > budget.max_spins) throw BudgetExceeded("spin enumeration over " + std::to_string(n) + " vertices");
    double Z = 0.0;
    for (uint64_t cfg = 0; cfg < (uint64_t(1) << n); ++cfg) {
        double energy = 0.0;
        for (int e = 0; e < g.num_edges(); ++e) {
            auto [u, v] = g.endpoints(e);
            const int su = (cfg >> u & 1u) ? -1 : 1, sv = (cfg >> v & 1u) ? -1 : 1;
            energy += couplings.at(e) * su * sv;
        }
        Z += std::exp(beta * energy);
    }
    return Z;
}

// ----- dimers ------------------------------------------------------------------------------

namespace {

struct MatchingSearch {
    int n = 0;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbour, derived edge index)
    std::vector<char> used;
    std::vector<int> chosen;
    std::function<double(const std::vector<int>&)> score;
    double total = 0.0;
    long long visited = 0;
    long long limit = 50'000'000;

    // Branches on the unmatched vertex with the fewest free neighbours and
    // abandons branches that leave a vertex without any.
    void run() {
        int v = -1, best = n + 1;
        for (int u = 0; u < n; ++u) {
            if (used[u]) continue;
            int free = 0;
            for (auto [w, idx] : adj[u]) free += !used[w];
            if (free < best) {
                best = free;
                v = u;
            }
        }
        if (v < 0) {
            total += score(chosen);
            return;
        }
        if (best == 0) return;
        if (++visited > limit) throw BudgetExceeded("dimer enumeration exceeds the budget");
        used[v] = 1;
        for (auto [w, idx] : adj[v]) {
            if (used[w]) continue;
            used[w] = 1;
            chosen.push_back(idx);
            run();
            chosen.pop_back();
            used[w] = 0;
        }
        used[v] = 0;
    }
};

} // namespace

double signed_dimer_sum(const EmbeddedGraph& g, const CutSet* cut, const std::vector<int>& removed,
                        const EnumerationBudget& budget) {
    budget.check_edges(g, g.num_edges());
    const DerivedGraphs d = build_derived_graphs(g);
    MatchingSearch ms;
    ms.n = g.num_oriented();
    ms.adj.resize(ms.n);
    ms.used.assign(ms.n, 0);
    for (int v : removed) ms.used.at(v) = 1;
    for (size_t i = 0; i < d.terminal.size(); ++i) {
        const auto& de = d.terminal[i];
        ms.adj[de.a].push_back({de.b, int(i)});
        ms.adj[de.b].push_back({de.a, int(i)});
    }
    ms.score = [&](const std::vector<int>& dimers) {
        double w = 1.0;
        int sign = 0;
        for (size_t i = 0; i < dimers.size(); ++i) {
            const auto& de = d.terminal[dimers[i]];
            w *= de.weight;
            if (de.is_long) {
                if (cut && cut->crosses_edge(de.a >> 1)) ++sign;
                continue;
            }
            for (size_t j = i + 1; j < dimers.size(); ++j) {
                const auto& df = d.terminal[dimers[j]];
                if (df.is_long) continue;
                if (de.a == df.a || de.a == df.b || de.b == df.a || de.b == df.b) continue;
                if (segments_cross(d.terminal_pos[de.a], d.terminal_pos[de.b], d.terminal_pos[df.a],
                                   d.terminal_pos[df.b]))
                    ++sign;
            }
        }
        return sign % 2 ? -w : w;
    };
    ms.run();
    return ms.total;
}

int clique_sign_sum(int n) {
    const int m = 2 * n;
    std::vector<Point> pos(m);
    for (int k = 0; k < m; ++k) {
        const double a = 2.0 * M_PI * k / m;
        pos[k] = {std::cos(a), std::sin(a)};
    }
    std::vector<std::pair<int, int>> edges;
    MatchingSearch ms;
    ms.n = m;
    ms.adj.resize(m);
    ms.used.assign(m, 0);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            ms.adj[a].push_back({b, int(edges.size())});
            ms.adj[b].push_back({a, int(edges.size())});
            edges.push_back({a, b});
        }
    ms.score = [&](const std::vector<int>& dimers) {
        int t = 0;
        for (size_t i = 0; i < dimers.size(); ++i)
            for (size_t j = i + 1; j < dimers.size(); ++j) {
                auto [a, b] = edges[dimers[i]];
                auto [c, e] = edges[dimers[j]];
                if (segments_cross(pos[a], pos[b], pos[c], pos[e])) ++t;
            }
        return t % 2 ? -1.0 : 1.0;
    };
    ms.run();
    return static_cast<int>(std::lround(ms.total));
}

double fisher_dimer_sum(const EmbeddedGraph& g, const EnumerationBudget& budget) {
    budget.check_edges(g, g.num_edges());
    const DerivedGraphs d = build_derived_graphs(g);
    MatchingSearch ms;
    ms.n = static_cast<int>(d.fisher_pos.size());
    ms.adj.resize(ms.n);
    ms.used.assign(ms.n, 0);
    for (size_t i = 0; i < d.fisher.size(); ++i) {
        const auto& de = d.fisher[i];
        ms.adj[de.a].push_back({de.b, int(i)});
        ms.adj[de.b].push_back({de.a, int(i)});
    }
    ms.score = [&](const std::vector<int>& dimers) {
        double w = 1.0;
        for (int i : dimers) w *= d.fisher[i].weight * d.fisher[i].multiplicity;
        return w;
    };
    ms.run();
    return ms.total;
}

// ----- configuration classes ------------------------------------------------------------------

namespace {

cplx class_sum(const EmbeddedGraph& g, const ClassSetup& s, Configuration base, const SignRule& sign,
               const CutSet* cut, const EnumerationBudget& budget) {
    const uint64_t km = cut_mask(g, cut);
    base.half_edges = s.halves;
    return sum_over_parity_class<cplx>(
        g, s.free_edges, s.fixed_edges, s.target,
        [&](uint64_t m) {
            Configuration c = base;
            c.edges = m;
            c.weight = subgraph_weight(g, m) * s.half_weight;
            const int parity = (__builtin_popcountll(m & km) + s.half_cut_parity) % 2;
            cplx v = sign ? sign(c) : cplx(1.0);
            return (parity ? -c.weight : c.weight) * v;
        },
        budget);
}

} // namespace

cplx edge_class_sum(const EmbeddedGraph& g, const std::vector<int>& edges, const SignRule& sign, const CutSet* cut,
                    const EnumerationBudget& budget) {
    std::vector<char> in(g.num_oriented(), 0);
    for (int e : edges) {
        if (in.at(e)) throw GraphError(GraphError::Kind::Invalid, "repeated oriented edge in the terminal set");
        in[e] = 1;
    }
    ClassSetup s;
    s.free_edges = all_edges(g);
    for (int e = 0; e < g.num_oriented(); ++e) {
        if (!in[e]) continue;
        s.free_edges &= ~(uint64_t(1) << (e >> 1));
        if (in[e ^ 1]) continue;
        s.halves.push_back(e);
        s.target ^= uint64_t(1) << g.terminus(e);
        s.half_weight *= std::sqrt(g.oriented_weight(e));
        if (cut && cut->crosses_edge(e >> 1)) ++s.half_cut_parity;
    }
    settle_tails(g, s.target, s.free_edges, s.fixed_edges);
    Configuration base;
    base.edge_terminals = edges;
    return class_sum(g, s, base, sign, cut, budget);
}

cplx corner_class_sum(const EmbeddedGraph& g, const std::vector<int>& corners, const SignRule& sign,
                      const CutSet* cut, const EnumerationBudget& budget) {
    ClassSetup s;
    s.free_edges = all_edges(g);
    for (int c : corners) s.target ^= uint64_t(1) << g.corner(c).vertex;
    settle_tails(g, s.target, s.free_edges, s.fixed_edges);
    Configuration base;
    base.corner_terminals = corners;
    return class_sum(g, s, base, sign, cut, budget);
}

double vertex_class_sum(const EmbeddedGraph& g, const std::vector<int>& vertices, const CutSet* cut,
                        const EnumerationBudget& budget) {
    ClassSetup s;
    s.free_edges = all_edges(g);
    for (int v : vertices) s.target ^= uint64_t(1) << v;
    settle_tails(g, s.target, s.free_edges, s.fixed_edges);
    return class_sum(g, s, Configuration{}, nullptr, cut, budget).real();
}

cplx brute_config_class_sum(const EmbeddedGraph& g, const ClassSpec& spec, const SignRule& sign, const CutSet* cut,
                            const EnumerationBudget& budget) {
    switch (spec.kind) {
    case ClassKind::Edges: return edge_class_sum(g, spec.items, sign, cut, budget);
    case ClassKind::Corners: return corner_class_sum(g, spec.items, sign, cut, budget);
    case ClassKind::Vertices: return vertex_class_sum(g, spec.items, cut, budget);
    case ClassKind::Boundary: {
        const auto inward = g.inward_boundary_edges();
        for (int e : spec.items)
            if (std::find(inward.begin(), inward.end(), e) == inward.end())
                throw GraphError(GraphError::Kind::Invalid, "edge is not an inward boundary edge");
        return edge_class_sum(g, spec.items, nullptr, cut, budget);
    }
    }
    return 0.0;
}

// ----- double-Ising ---------------------------------------------------------------------------

double double_ising_sum(const EmbeddedGraph& g, const CutSet* cut, const EnumerationBudget& budget) {
    const auto inward = g.inward_boundary_edges();
    const int nb = static_cast<int>(inward.size());
    if (nb > 20) throw BudgetExceeded("too many boundary edges");
    double total = 0.0;
    for (uint64_t sub = 0; sub < (uint64_t(1) << nb); ++sub) {
        std::vector<int> E;
        double xE = 1.0;
        for (int k = 0; k < nb; ++k)
            if (sub >> k & 1u) {
                E.push_back(inward[k]);
                xE *= g.oriented_weight(inward[k]);
            }
        const double s = edge_class_sum(g, E, nullptr, cut, budget).real();
        total += xE * s * s;
    }
    return total;
}

double dobrushin_sum(const EmbeddedGraph& g, int a, int b, const EnumerationBudget& budget) {
    const auto inward = g.inward_boundary_edges();
    auto is_inward = [&](int e) { return std::find(inward.begin(), inward.end(), e) != inward.end(); };
    if (a == b || !is_inward(a) || !is_inward(b))
        throw GraphError(GraphError::Kind::Invalid, "Dobrushin edges must be distinct inward boundary edges");
    std::vector<int> rest;
    for (int e : inward)
        if (e != a && e != b) rest.push_back(e);
    const int nr = static_cast<int>(rest.size());
    auto S = [&](std::vector<int> E) { return edge_class_sum(g, E, nullptr, nullptr, budget).real(); };
    double total = 0.0;
    for (uint64_t sub = 0; sub < (uint64_t(1) << nr); ++sub) {
        std::vector<int> E;
        double xE = 1.0;
        for (int k = 0; k < nr; ++k)
            if (sub >> k & 1u) {
                E.push_back(rest[k]);
                xE *= g.oriented_weight(rest[k]);
            }
        auto with = [&](std::vector<int> extra) {
            std::vector<int> r = E;
            r.insert(r.end(), extra.begin(), extra.end());
            return r;
        };
        total += xE * (S(E) * S(with({a, b})) + S(with({a})) * S(with({b})));
    }
    return total;
}

} // namespace kw
