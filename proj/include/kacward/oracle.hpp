#pragma once

#include "kacward/embedded_graph.hpp"

#include <array>
#include <chrono>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace kw {

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EnumerationBudget {
    int max_edges = 14;         // free edges in a planar enumeration
    int max_torus_edges = 18;   // free edges on the torus
    int max_spins = 20;         // free spins in a spin enumeration
    double timeout_seconds = 300.0;

    // Throws BudgetExceeded when `free_edges` is above the limit for the geometry.
    void check_edges(const EmbeddedGraph& g, int free_edges) const;
};

// Worker count from KACWARD_THREADS (default: hardware concurrency, at least 1).
int worker_count();

// Runs body(chunk) for chunk in [0, chunks) on the worker pool.  Each chunk
// writes its own slot, so reductions done afterwards in chunk order are
// independent of the thread count.
void parallel_chunks(int chunks, const std::function<void(int)>& body);

// Vertex-parity bit pattern of an unoriented edge (requires at most 64 vertices).
uint64_t edge_parity_bits(const EmbeddedGraph& g, int edge);

// Visits every subset S of `free_edges` (bit mask over unoriented edges) for
// which parity(S) equals `target` and accumulates f(S | fixed_edges).
// Subsets are walked in Gray-code order within 64 fixed chunks.
template <typename T>
T sum_over_parity_class(const EmbeddedGraph& g, uint64_t free_edges, uint64_t fixed_edges, uint64_t target,
                        const std::function<T(uint64_t)>& f, const EnumerationBudget& budget) {
    std::vector<int> ids;
    for (int e = 0; e < g.num_edges(); ++e)
        if (free_edges >> e & 1u) ids.push_back(e);
    budget.check_edges(g, static_cast<int>(ids.size()));
    if (g.num_vertices() > 64) throw BudgetExceeded("enumeration supports at most 64 vertices");
    std::vector<uint64_t> bits(ids.size());
    for (size_t k = 0; k < ids.size(); ++k) bits[k] = edge_parity_bits(g, ids[k]);
    uint64_t fixed_parity = 0;
    for (int e = 0; e < g.num_edges(); ++e)
        if (fixed_edges >> e & 1u) fixed_parity ^= edge_parity_bits(g, e);
    const uint64_t want = target ^ fixed_parity;

    const uint64_t total = uint64_t(1) << ids.size();
    const int chunks = static_cast<int>(std::min<uint64_t>(total, 64));
    const uint64_t per = total / chunks;
    std::vector<T> partial(chunks, T{});
    const auto start = std::chrono::steady_clock::now();
    auto to_mask = [&](uint64_t gray) {
        uint64_t m = fixed_edges;
        for (size_t k = 0; k < ids.size(); ++k)
            if (gray >> k & 1u) m |= uint64_t(1) << ids[k];
        return m;
    };
    parallel_chunks(chunks, [&](int c) {
        const uint64_t lo = per * c, hi = per * (c + 1);
        uint64_t gray = lo ^ (lo >> 1);
        uint64_t parity = 0, mask = to_mask(gray);
        for (size_t k = 0; k < ids.size(); ++k)
            if (gray >> k & 1u) parity ^= bits[k];
        T acc{};
        for (uint64_t i = lo; i < hi; ++i) {
            if (parity == want) acc += f(mask);
            if (i + 1 == hi) break;
            const int k = __builtin_ctzll(i + 1);
            parity ^= bits[k];
            mask ^= uint64_t(1) << ids[k];
            if (((i - lo) & 0xFFFF) == 0xFFFF) {
                double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                if (el > budget.timeout_seconds) throw BudgetExceeded("enumeration timed out");
            }
        }
        partial[c] = acc;
    });
    T sum{};
    for (const T& p : partial) sum += p;
    return sum;
}

// ----- even subgraphs ------------------------------------------------------------------

// x(P) for a bit mask of full edges.
double subgraph_weight(const EmbeddedGraph& g, uint64_t edges);

// Z_high = sum of x(P) over even subgraphs.
double brute_even_sum(const EmbeddedGraph& g, const EnumerationBudget& budget = {});
// Sum of (-1)^{kappa.P} x(P) over even subgraphs.
double brute_even_sum_twisted(const EmbeddedGraph& g, const CutSet& cut, const EnumerationBudget& budget = {});
// Sum of f(P) over even subgraphs.
double brute_even_sum_functional(const EmbeddedGraph& g, const std::function<double(uint64_t)>& f,
                                 const EnumerationBudget& budget = {});

// Torus homology class of an edge set: bit 0 = parity of x-wrap crossings,
// bit 1 = parity of y-wrap crossings.
int homology_class(const EmbeddedGraph& g, uint64_t edges);
// Even-subgraph weights split by homology class (index = class bits).
std::array<double, 4> homology_bins(const EmbeddedGraph& g, const EnumerationBudget& budget = {});

// ----- spin enumeration -----------------------------------------------------------------

struct SpinSums {
    double Z = 0.0;         // sum of weights
    double weighted = 0.0;  // sum of weight * observable
    double expectation() const { return weighted / Z; }
};

// Ising model on faces of a planar graph: each edge separating faces of opposite
// spin contributes x_e.  The faces in `fixed_plus` (the outer face when empty)
// are fixed to +1.  The observable receives the spin vector indexed by face.
SpinSums dual_spin_sums(const EmbeddedGraph& g, const std::function<double(const std::vector<int>&)>& observable,
                        std::vector<int> fixed_plus = {}, const EnumerationBudget& budget = {});
// Convenience: E+[sigma_u1 ... sigma_um] by face enumeration.
double dual_spin_correlation(const EmbeddedGraph& g, const std::vector<int>& faces,
                             std::vector<int> fixed_plus = {}, const EnumerationBudget& budget = {});

// Ising model on vertices with couplings J_e at inverse temperature beta.
double vertex_spin_partition(const EmbeddedGraph& g, double beta, const std::vector<double>& couplings,
                             const EnumerationBudget& budget = {});

// ----- dimers ---------------------------------------------------------------------------

// Sum over perfect matchings D of the terminal graph (minus the vertices in
// `removed`) of (-1)^{t(D)} (-1)^{kappa.D} x^K(D); t(D) is the number of
// crossing pairs of short dimers in the chord drawing.
double signed_dimer_sum(const EmbeddedGraph& g, const CutSet* cut = nullptr, const std::vector<int>& removed = {},
                        const EnumerationBudget& budget = {});
// Sum over perfect matchings of K_{2n} with vertices on a circle of (-1)^{crossings}.
int clique_sign_sum(int n);
// Unsigned weighted dimer sum on the Fisher graph (edge multiplicities included).
double fisher_dimer_sum(const EmbeddedGraph& g, const EnumerationBudget& budget = {});

// ----- configuration classes --------------------------------------------------------------

struct Configuration {
    uint64_t edges = 0;                 // full edges of G
    std::vector<int> half_edges;        // oriented e with the half (z_e, t(e)) present
    std::vector<int> edge_terminals;    // the oriented edges e_1..e_2n, in input order
    std::vector<int> corner_terminals;  // the corners c_1..c_2n, in input order
    double weight = 1.0;                // x(P) with half edges weighted x^{1/2}
};

using SignRule = std::function<cplx(const Configuration&)>;

// Sum over P in C(e_1..e_2n) of sign(P) (-1)^{kappa.P} x(P); half edges crossing
// kappa are counted.  A null sign rule means sign 1.
cplx edge_class_sum(const EmbeddedGraph& g, const std::vector<int>& edges, const SignRule& sign = nullptr,
                    const CutSet* cut = nullptr, const EnumerationBudget& budget = {});
// Sum over Q in C(c_1..c_2n) of sign(Q) (-1)^{kappa.Q} x(P_Q).
cplx corner_class_sum(const EmbeddedGraph& g, const std::vector<int>& corners, const SignRule& sign = nullptr,
                      const CutSet* cut = nullptr, const EnumerationBudget& budget = {});
// Sum over P with odd degree exactly at v_1..v_2n of (-1)^{kappa.P} x(P).
double vertex_class_sum(const EmbeddedGraph& g, const std::vector<int>& vertices, const CutSet* cut = nullptr,
                        const EnumerationBudget& budget = {});

enum class ClassKind { Edges, Vertices, Corners, Boundary };
struct ClassSpec {
    ClassKind kind = ClassKind::Edges;
    std::vector<int> items;
};
// Dispatches to the class sums above; Boundary uses inward boundary edges and sign 1.
cplx brute_config_class_sum(const EmbeddedGraph& g, const ClassSpec& spec, const SignRule& sign = nullptr,
                            const CutSet* cut = nullptr, const EnumerationBudget& budget = {});

// ----- double-Ising -----------------------------------------------------------------------

// Sum over E of inward boundary edges of x(E) [sum_{P in C(E)} (-1)^{kappa.P} x(P)]^2.
double double_ising_sum(const EmbeddedGraph& g, const CutSet* cut = nullptr, const EnumerationBudget& budget = {});
// Two-term expansion of (1/2)(x_a x_b)^{-1/2} Z^{[a,b]} for inward boundary edges a != b.
double dobrushin_sum(const EmbeddedGraph& g, int a, int b, const EnumerationBudget& budget = {});

} // namespace kw
