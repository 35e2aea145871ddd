#include "kacward/ising_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kw {

namespace {

const cplx I(0.0, 1.0);

cplx phase(double angle) { return std::polar(1.0, angle); }

RMatrix khat_dense(const EmbeddedGraph& g, const CutSet* cut) {
    MatrixBundle b = cut ? build_twisted(g, *cut) : build_kacward(g);
    if (!b.real) throw std::invalid_argument("correlations require positive weights");
    return b.Khat.dense();
}

double pf_khat(const EmbeddedGraph& g, const CutSet* cut) {
    MatrixBundle b = cut ? build_twisted(g, *cut) : build_kacward(g);
    if (!b.real) throw std::invalid_argument("correlations require positive weights");
    return pfaffian(b.Khat);
}

int permutation_parity(const std::vector<int>& seq) {
    int inv = 0;
    for (size_t i = 0; i < seq.size(); ++i)
        for (size_t j = i + 1; j < seq.size(); ++j)
            if (seq[i] > seq[j]) ++inv;
    return inv % 2;
}

void require_distinct(const std::vector<int>& items, const char* what) {
    std::vector<int> s = items;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
        throw LabelError(std::string("repeated ") + what);
}

double pair_constant(const EmbeddedGraph& g, int edge) {
    return (I * std::conj(g.eta(2 * edge)) * g.eta(2 * edge + 1)).real();
}

} // namespace

// ----- weights -------------------------------------------------------------------------------

IsingWeights IsingWeights::high(double beta, std::vector<double> couplings) {
    IsingWeights w;
    w.mode = WeightMode::High;
    w.beta = beta;
    for (double j : couplings) w.x.push_back(std::tanh(beta * j));
    w.couplings = std::move(couplings);
    return w;
}

IsingWeights IsingWeights::low(double beta_star, std::vector<double> couplings) {
    IsingWeights w;
    w.mode = WeightMode::Low;
    w.beta = beta_star;
    for (double j : couplings) w.x.push_back(std::exp(-2.0 * beta_star * j));
    w.couplings = std::move(couplings);
    return w;
}

IsingWeights IsingWeights::direct(std::vector<double> x) {
    IsingWeights w;
    w.x = std::move(x);
    return w;
}

std::vector<double> IsingWeights::reduced_couplings() const {
    std::vector<double> r;
    for (double v : x) {
        if (mode == WeightMode::High) r.push_back(std::atanh(v));
        else if (mode == WeightMode::Low) r.push_back(-0.5 * std::log(v));
        else throw std::logic_error("direct weights carry no couplings");
    }
    return r;
}

double dual_reduced_coupling(double beta_j) { return -0.5 * std::log(std::tanh(beta_j)); }

double kramers_wannier_defect(double beta_j, double beta_star_j_star) {
    return std::abs(std::sinh(2.0 * beta_j) * std::sinh(2.0 * beta_star_j_star) - 1.0);
}

double high_temperature_prefactor(const EmbeddedGraph& g, double beta, const std::vector<double>& couplings) {
    double f = std::pow(2.0, g.num_vertices());
    for (double j : couplings) f *= std::cosh(beta * j);
    return f;
}

// ----- partition function --------------------------------------------------------------------

PartitionResult partition_details(const EmbeddedGraph& g) {
    PartitionResult r;
    r.epsilon = epsilon_d0(g);
    MatrixBundle b = build_kacward(g);
    r.negative_weights = !b.real;
    if (b.real) {
        r.pfaffian = pfaffian(b.Khat);
        r.complex_value = r.epsilon * r.pfaffian;
        r.value = std::abs(r.pfaffian);
    } else {
        r.complex_value = r.epsilon * pfaffian_dense(b.KhatC);
        r.value = r.complex_value.real();
    }
    return r;
}

double partition_function(const EmbeddedGraph& g) { return partition_details(g).value; }

double partition_function_low(const EmbeddedGraph& g) { return partition_function(g); }

// ----- spins ------------------------------------------------------------------------------------

double spin_correlation_with_cut(const EmbeddedGraph& g, const CutSet& cut) {
    const double ratio = pf_khat(g, &cut) / pf_khat(g, nullptr);
    return cut.size() % 2 ? -ratio : ratio;
}

double spin_correlation(const EmbeddedGraph& g, const std::vector<int>& faces, unsigned seed) {
    if (faces.empty()) return 1.0;
    require_distinct(faces, "face");
    for (int f : faces)
        if (f == g.outer_face()) throw GraphError(GraphError::Kind::Invalid, "the outer face spin is fixed");
    return spin_correlation_with_cut(g, find_cut_set(g, CutKind::Dual, faces, seed));
}

double twisted_partition(const EmbeddedGraph& g, const CutSet& cut) {
    const double z = epsilon_d0(g) * pf_khat(g, &cut);
    return cut.size() % 2 ? -z : z;
}

// ----- energy -----------------------------------------------------------------------------------

double energy_product(const EmbeddedGraph& g, const std::vector<int>& edges) {
    require_distinct(edges, "edge");
    RMatrix k = khat_dense(g, nullptr);
    const double base = pfaffian_dense(k);
    for (int e : edges) {
        const double j = (I * g.eta(2 * e) * std::conj(g.eta(2 * e + 1))).real();
        k(2 * e, 2 * e + 1) -= 2.0 * j;
        k(2 * e + 1, 2 * e) += 2.0 * j;
    }
    const double r = pfaffian_dense(k) / base;
    return edges.size() % 2 ? -r : r;
}

double energy_indicator(const EmbeddedGraph& g, const std::vector<int>& edges) {
    require_distinct(edges, "edge");
    if (edges.empty()) return 1.0;
    const RMatrix inv = invert(khat_dense(g, nullptr));
    std::vector<int> rows;
    double tau = 1.0;
    for (int e : edges) {
        rows.push_back(2 * e);
        rows.push_back(2 * e + 1);
        tau *= pair_constant(g, e);
    }
    return pfaffian_minor_indices(inv, rows) / tau;
}

EnergyResult energy_correlation(const EmbeddedGraph& g, const std::vector<int>& edges) {
    EnergyResult r;
    r.product = energy_product(g, edges);
    r.indicator = energy_indicator(g, edges);
    const int n = static_cast<int>(edges.size());
    if (n <= 12) {
        double sum = 0.0;
        for (uint32_t s = 0; s < (1u << n); ++s) {
            std::vector<int> sub;
            for (int k = 0; k < n; ++k)
                if (s >> k & 1u) sub.push_back(edges[k]);
            sum += energy_product(g, sub);
        }
        r.inclusion_exclusion_residual = std::abs(std::ldexp(sum, -n) - r.indicator);
    }
    return r;
}

// ----- disorder ---------------------------------------------------------------------------------

namespace {

// x(kappa) and the weights with x -> 1/x on the edges of a primal cut.
std::pair<double, EmbeddedGraph> flipped_weights(const EmbeddedGraph& g, const CutSet& primal) {
    if (primal.kind != CutKind::Primal) throw GraphError(GraphError::Kind::Invalid, "disorder needs a primal cut");
    std::vector<double> w = g.weights();
    double xk = 1.0;
    for (int e = 0; e < g.num_edges(); ++e)
        if (primal.crosses_edge(e)) {
            xk *= w[e];
            w[e] = 1.0 / w[e];
        }
    return {xk, g.with_weights(w)};
}

} // namespace

double disorder_correlation_with_cut(const EmbeddedGraph& g, const CutSet& primal) {
    auto [xk, flipped] = flipped_weights(g, primal);
    return xk * partition_function(flipped) / partition_function(g);
}

double disorder_correlation(const EmbeddedGraph& g, const std::vector<int>& vertices, unsigned seed) {
    if (vertices.empty()) return 1.0;
    require_distinct(vertices, "vertex");
    if (vertices.size() % 2) throw GraphError(GraphError::Kind::Infeasible, "disorder needs an even vertex count");
    return disorder_correlation_with_cut(g, find_cut_set(g, CutKind::Primal, vertices, seed));
}

double disorder_spin_correlation(const EmbeddedGraph& g, const std::vector<int>& vertices,
                                 const std::vector<int>& faces, unsigned seed) {
    CutSet kv = vertices.empty() ? empty_cut(g, CutKind::Primal) : find_cut_set(g, CutKind::Primal, vertices, seed);
    CutSet kf = faces.empty() ? empty_cut(g, CutKind::Dual) : find_cut_set(g, CutKind::Dual, faces, seed);
    auto [xk, flipped] = flipped_weights(g, kv);
    int overlap = 0;
    for (int e = 0; e < g.num_edges(); ++e)
        if (kv.crosses_edge(e) && kf.crosses_edge(e)) ++overlap;
    const double num = xk * twisted_partition(flipped, kf);
    return (overlap % 2 ? -num : num) / partition_function(g);
}

// ----- tau ----------------------------------------------------------------------------------------

namespace {

enum class ItemKind { Full, Half, Decoration };

struct Item {
    ItemKind kind;
    cplx out;       // direction leaving the vertex
    int edge = -1;  // oriented edge leaving the vertex (Full)
    int terminal = -1;
};

// Random non-crossing perfect matching of the cyclically ordered slots [lo, hi).
void random_noncrossing(std::vector<int>& p, int lo, int hi, std::mt19937& rng) {
    if (hi <= lo) return;
    const int choices = (hi - lo) / 2;
    const int j = lo + 1 + 2 * static_cast<int>(rng() % choices);
    p[lo] = j;
    p[j] = lo;
    random_noncrossing(p, lo + 1, j, rng);
    random_noncrossing(p, j + 1, hi, rng);
}

} // namespace

TauResult tau_sign_details(const EmbeddedGraph& g, const Configuration& cfg, const TauOptions& opt) {
    const int ne = static_cast<int>(cfg.edge_terminals.size());
    const int nt = ne + static_cast<int>(cfg.corner_terminals.size());
    if (nt % 2) throw GraphError(GraphError::Kind::Invalid, "odd number of terminals");
    std::vector<int> term_of_edge(g.num_oriented(), -1);
    for (int k = 0; k < ne; ++k) {
        int e = cfg.edge_terminals[k];
        if (term_of_edge.at(e) >= 0) throw GraphError(GraphError::Kind::Invalid, "repeated edge terminal");
        term_of_edge[e] = k;
    }

    std::vector<std::vector<Item>> items(g.num_vertices());
    for (int e = 0; e < g.num_edges(); ++e) {
        if (!(cfg.edges >> e & 1u)) continue;
        if (term_of_edge[2 * e] >= 0 || term_of_edge[2 * e + 1] >= 0)
            throw GraphError(GraphError::Kind::Invalid, "terminal edge used as a full edge");
        for (int o : {2 * e, 2 * e + 1}) items[g.origin(o)].push_back({ItemKind::Full, g.direction(o), o, -1});
    }
    for (int k = 0; k < ne; ++k) {
        int e = cfg.edge_terminals[k];
        if (term_of_edge[e ^ 1] >= 0) continue;
        items[g.terminus(e)].push_back({ItemKind::Half, -g.direction(e), -1, k});
    }
    for (int k = ne; k < nt; ++k) {
        const Corner& c = g.corner(cfg.corner_terminals[k - ne]);
        items[c.vertex].push_back({ItemKind::Decoration, -c.decoration, -1, k});
    }

    // Smoothing: pair the items at each vertex.
    std::mt19937 rng(opt.seed);
    std::vector<std::vector<int>> partner(g.num_vertices());
    std::vector<std::vector<int>> slot_of_edge_at(g.num_vertices());
    std::vector<std::pair<int, int>> terminal_slot(nt, {-1, -1});
    std::vector<int> arrival_slot(g.num_oriented(), -1);  // slot of edge e at t(e) (item of rev e)
    for (int v = 0; v < g.num_vertices(); ++v) {
        auto& it = items[v];
        const int m = static_cast<int>(it.size());
        if (m % 2) throw GraphError(GraphError::Kind::Invalid, "configuration has odd degree at a vertex");
        std::sort(it.begin(), it.end(), [](const Item& a, const Item& b) { return std::arg(a.out) < std::arg(b.out); });
        std::vector<int>& p = partner[v];
        p.assign(m, -1);
        if (m == 0) continue;
        if (opt.smoothing == Smoothing::Random) {
            random_noncrossing(p, 0, m, rng);
        } else {
            const int off = opt.smoothing == Smoothing::Offset1 ? 1 : 0;
            for (int i = 0; i < m; i += 2) {
                int a = (i + off) % m, b = (i + off + 1) % m;
                p[a] = b;
                p[b] = a;
            }
        }
        for (int i = 0; i < m; ++i) {
            if (it[i].kind == ItemKind::Full) arrival_slot[it[i].edge ^ 1] = i;
            else terminal_slot[it[i].terminal] = {v, i};
        }
    }

    auto start_dir = [&](int k) {
        return k < ne ? g.direction(cfg.edge_terminals[k]) : g.corner(cfg.corner_terminals[k - ne]).decoration;
    };
    auto eta_of = [&](int k) {
        return k < ne ? g.eta(cfg.edge_terminals[k]) : g.corner(cfg.corner_terminals[k - ne]).eta;
    };

    TauResult res;
    std::vector<char> done(nt, 0);
    std::vector<int> seq;
    cplx value = 1.0;
    // Terminal pairs (e, rev e) form empty paths.
    for (int k = 0; k < ne; ++k) {
        const int e = cfg.edge_terminals[k];
        const int j = term_of_edge[e ^ 1];
        if (j < 0 || done[k]) continue;
        int s = std::min(k, j), t = std::max(k, j);
        if (opt.reverse_paths) std::swap(s, t);
        done[s] = done[t] = 1;
        res.pairs.push_back({s, t});
        res.winds.push_back(0.0);
    }
    std::vector<int> order(nt);
    std::iota(order.begin(), order.end(), 0);
    if (opt.reverse_paths) std::reverse(order.begin(), order.end());
    for (int k : order) {
        if (done[k]) continue;
        auto [v, slot] = terminal_slot[k];
        cplx in = start_dir(k);
        double wind = 0.0;
        int end = -1;
        for (int steps = 0; steps <= 4 * g.num_edges() + 4; ++steps) {
            const int j = partner[v][slot];
            const Item& out = items[v][j];
            wind += turn_angle(in, out.out);
            if (out.kind != ItemKind::Full) {
                end = out.terminal;
                break;
            }
            in = g.direction(out.edge);
            v = g.terminus(out.edge);
            slot = arrival_slot[out.edge];
        }
        if (end < 0) throw GraphError(GraphError::Kind::Invalid, "path from a terminal does not terminate");
        done[k] = done[end] = 1;
        res.pairs.push_back({k, end});
        res.winds.push_back(wind);
    }
    for (size_t p = 0; p < res.pairs.size(); ++p) {
        auto [s, t] = res.pairs[p];
        seq.push_back(s);
        seq.push_back(t);
        value *= I * std::conj(eta_of(s)) * eta_of(t) * phase(-0.5 * res.winds[p]);
    }
    res.value = permutation_parity(seq) ? -value : value;
    return res;
}

cplx tau_sign(const EmbeddedGraph& g, const Configuration& cfg, const TauOptions& opt) {
    return tau_sign_details(g, cfg, opt).value;
}

SignRule tau_rule(const EmbeddedGraph& g, const TauOptions& opt) {
    return [&g, opt](const Configuration& c) { return tau_sign(g, c, opt); };
}

double fermion_pfaffian(const EmbeddedGraph& g, const std::vector<int>& edges, const CutSet* cut) {
    if (edges.empty()) return 1.0;
    require_distinct(edges, "oriented edge");
    if (edges.size() % 2) return 0.0;
    return pfaffian_minor_indices(invert(khat_dense(g, cut)), edges);
}

// ----- corners --------------------------------------------------------------------------------------

double chi_correlator(const EmbeddedGraph& g, const std::vector<int>& corners, const CutSet* cut) {
    if (corners.empty()) return 1.0;
    require_distinct(corners, "corner");
    std::vector<int> vs;
    for (int c : corners) vs.push_back(g.corner(c).vertex);
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
        throw GraphError(GraphError::Kind::Invalid, "corners must sit at pairwise distinct vertices");
    if (corners.size() % 2) return 0.0;
    CornerBundle cb = build_corner_bundle(g, cut);
    const RMatrix inv = 4.0 * invert(RMatrix(cb.Chat.dense()));
    return pfaffian_minor_indices(inv, corners);
}

// ----- observables ----------------------------------------------------------------------------------

double edge_scale(double x) { return std::sqrt(x + 1.0 / x); }

namespace {

struct Kernels {
    RMatrix kinv;     // Khat^-1
    RMatrix chi_phi;  // <chi_c phi_e> = 2 (Chat^-1 Bhat)_{c,e}
    RMatrix chi_chi;  // <chi_c chi_c'> = 4 Chat^-1
};

Kernels kernels(const EmbeddedGraph& g, const CutSet* cut) {
    Kernels k;
    k.kinv = invert(khat_dense(g, cut));
    CornerBundle cb = build_corner_bundle(g, cut);
    const RMatrix cinv = invert(RMatrix(cb.Chat.dense()));
    k.chi_phi = 2.0 * cinv * cb.Bhat;
    k.chi_chi = 4.0 * cinv;
    return k;
}

// Value at z_e on the sheet of o(e): the reverse term changes sign when the
// edge crosses the cut.
cplx edge_value(const EmbeddedGraph& g, int e, double ve, double vr, const CutSet* cut) {
    const double s = cut && cut->crosses_edge(e >> 1) ? -1.0 : 1.0;
    return edge_scale(g.oriented_weight(e)) * phase(M_PI / 4) *
           (std::conj(g.eta(e)) * ve + s * std::conj(g.eta(e ^ 1)) * vr);
}

} // namespace

Observable edge_observable(const EmbeddedGraph& g, int a, const CutSet* cut) {
    const Kernels k = kernels(g, cut);
    Observable f;
    f.source_edge = a;
    for (int e = 0; e < g.num_oriented(); ++e)
        f.edge_values.push_back(edge_value(g, e, k.kinv(e, a), k.kinv(e ^ 1, a), cut));
    for (int c = 0; c < g.num_corners(); ++c)
        f.corner_values.push_back(phase(M_PI / 4) * std::conj(g.corner(c).eta) * k.chi_phi(c, a));
    return f;
}

Observable corner_observable(const EmbeddedGraph& g, int c, const CutSet* cut) {
    const Kernels k = kernels(g, cut);
    Observable f;
    f.source_corner = c;
    for (int e = 0; e < g.num_oriented(); ++e)
        f.edge_values.push_back(edge_value(g, e, -k.chi_phi(c, e), -k.chi_phi(c, e ^ 1), cut));
    for (int c2 = 0; c2 < g.num_corners(); ++c2)
        f.corner_values.push_back(phase(M_PI / 4) * std::conj(g.corner(c2).eta) * k.chi_chi(c2, c));
    return f;
}

std::vector<SHolPair> s_hol_residual(const EmbeddedGraph& g, const Observable& f) {
    std::vector<SHolPair> out;
    for (int e = 0; e < g.num_oriented(); ++e) {
        const double theta = edge_angles(g.oriented_weight(e)).theta;
        const cplx fz = f.edge_values.at(e);
        for (bool plus : {true, false}) {
            const int c = plus ? g.corner_plus(e) : g.corner_minus(e);
            const double s = plus ? 1.0 : -1.0;
            const cplx nu = phase(-M_PI / 4 - s * theta / 2) * std::conj(g.eta(e));
            const cplx proj = 0.5 * (fz + nu * nu * std::conj(fz));
            const cplx rhs = phase(0.5 * (corner_edge_angle(g, c, e) - s * (M_PI - theta))) * proj;
            const double share = g.degree(g.origin(e)) == 1 ? 0.5 : 1.0;
            out.push_back({e, c, plus, std::abs(share * f.corner_values.at(c) - rhs)});
        }
    }
    return out;
}

namespace {

int source_vertex(const EmbeddedGraph& g, const Observable& f) {
    if (f.source_edge >= 0) return g.origin(f.source_edge);
    if (f.source_corner >= 0) return g.corner(f.source_corner).vertex;
    return -1;
}

} // namespace

double s_hol_max_residual(const EmbeddedGraph& g, const Observable& f) {
    const int sv = source_vertex(g, f);
    double worst = 0.0;
    for (const auto& p : s_hol_residual(g, f))
        if (g.corner(p.corner).vertex != sv) worst = std::max(worst, p.residual);
    return worst;
}

double s_hol_matrix_residual(const EmbeddedGraph& g, const Observable& f, const CutSet* cut) {
    const PropagationBundle pb = build_propagation(g, cut, false);
    const int nc = g.num_corners();
    CVector fc(nc);
    for (int c = 0; c < nc; ++c) fc(c) = f.corner_values[c];
    const CVector minus = pb.S * fc;
    const CVector plus = (pb.S - I * pb.C) * fc;
    const int sv = source_vertex(g, f);
    double worst = 0.0;
    for (int c = 0; c < nc; ++c) {
        if (g.corner(c).vertex == sv) continue;
        worst = std::max({worst, std::abs(minus(c)), std::abs(plus(c))});
    }
    return worst;
}

double boundary_residual(const EmbeddedGraph& g, const Observable& f) {
    double worst = 0.0;
    for (int e = 0; e < g.num_oriented(); ++e) {
        if (g.degree(g.terminus(e)) != 1 || g.degree(g.origin(e)) == 1) continue;
        if (f.source_edge == (e ^ 1)) continue;
        if (f.source_corner >= 0 && g.corner(f.source_corner).vertex == g.terminus(e)) continue;
        const cplx v = f.edge_values.at(e) * phase(M_PI / 4) * g.eta(e);
        worst = std::max(worst, std::abs(v.imag()));
    }
    return worst;
}

PsiPair psi_correlators(const EmbeddedGraph& g, int e, int a) {
    const Observable fa = edge_observable(g, 2 * a);
    const Observable fb = edge_observable(g, 2 * a + 1);
    const double ta = edge_scale(g.weight(a));
    const cplx va = fa.edge_values[2 * e], vb = fb.edge_values[2 * e];
    PsiPair p;
    p.psi = ta * phase(M_PI / 4) * (std::conj(g.eta(2 * a)) * va + std::conj(g.eta(2 * a + 1)) * vb);
    p.psi_dagger = ta * phase(-M_PI / 4) * (g.eta(2 * a) * va + g.eta(2 * a + 1) * vb);
    return p;
}

PsiPair psi_correlators_matrix(const EmbeddedGraph& g, int e, int a) {
    const RMatrix kinv = invert(khat_dense(g, nullptr));
    Eigen::Matrix2cd left, mid, right;
    const int e0 = 2 * e, a0 = 2 * a;
    left << phase(M_PI / 4) * std::conj(g.eta(e0)), phase(M_PI / 4) * std::conj(g.eta(e0 + 1)),
        phase(-M_PI / 4) * g.eta(e0), phase(-M_PI / 4) * g.eta(e0 + 1);
    mid << kinv(e0, a0), kinv(e0, a0 + 1), kinv(e0 + 1, a0), kinv(e0 + 1, a0 + 1);
    right << phase(M_PI / 4) * std::conj(g.eta(a0)), phase(-M_PI / 4) * g.eta(a0),
        phase(M_PI / 4) * std::conj(g.eta(a0 + 1)), phase(-M_PI / 4) * g.eta(a0 + 1);
    const Eigen::Matrix2cd m = edge_scale(g.weight(e)) * edge_scale(g.weight(a)) * left * mid * right;
    return {m(0, 0), m(0, 1)};
}

} // namespace kw
