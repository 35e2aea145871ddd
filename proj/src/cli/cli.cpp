#include "kacward/cli.hpp"

#include "kacward/corpus.hpp"
#include "kacward/double_ising.hpp"
#include "kacward/ising_engine.hpp"
#include "kacward/surface.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

namespace kw::cli {

using nlohmann::json;

namespace {

constexpr double kOracleTolerance = 1e-8;

double relative_delta(double value, double oracle) {
    return std::abs(value - oracle) / std::max(1.0, std::abs(oracle));
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

Point parse_point(const std::string& text) {
    std::istringstream in(text);
    Point p;
    char comma = 0;
    if (!(in >> p.x >> comma >> p.y) || comma != ',' || !(in >> std::ws).eof())
        throw SchemaError("expected a point \"x,y\", got \"" + text + "\"");
    return p;
}

json read_json(const std::string& path) {
    if (path.empty()) throw SchemaError("this command needs --input");
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path);
        if (!in) throw SchemaError("cannot read " + path);
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON: ") + e.what());
    }
}

// Weights from the input are couplings J when a beta is given.
LoadedGraph load(const CommandRequest& r) {
    LoadedGraph lg = graph_from_json(read_json(r.input));
    if (r.mode != "direct" && r.mode != "high" && r.mode != "low")
        throw SchemaError("--mode must be direct, high or low");
    if (!r.beta) {
        if (r.mode != "direct") throw SchemaError("--mode " + r.mode + " needs --beta");
        return lg;
    }
    if (r.mode == "direct") throw SchemaError("--beta needs --mode high or --mode low");
    const std::vector<double>& j = lg.graph.weights();
    IsingWeights w = r.mode == "high" ? IsingWeights::high(*r.beta, j) : IsingWeights::low(*r.beta, j);
    lg.graph = lg.graph.with_weights(w.x);
    return lg;
}

const EmbeddedGraph& plane(const LoadedGraph& lg, const std::string& cmd) {
    if (lg.graph.geometry() != Geometry::Plane) throw SchemaError(cmd + " needs a plane graph");
    return lg.graph;
}

std::vector<int> resolve_faces(const EmbeddedGraph& g, const std::vector<std::string>& points) {
    std::vector<int> faces;
    for (const auto& s : points) {
        const int f = g.face_containing(parse_point(s));
        if (f == g.outer_face()) throw SchemaError("point " + s + " lies in the outer face");
        faces.push_back(f);
    }
    return faces;
}

std::vector<int> resolve_vertices(const LoadedGraph& lg, const std::vector<int>& ids) {
    std::vector<int> v;
    for (int id : ids) v.push_back(lg.vertex(id));
    return v;
}

void check_ids(const std::vector<int>& ids, int limit, const char* what) {
    for (int e : ids)
        if (e < 0 || e >= limit) throw SchemaError(std::string(what) + " id " + std::to_string(e) + " out of range");
}

json base_doc(const std::string& cmd) {
    return json{{"command", cmd}, {"value", nullptr}, {"components", json::object()}, {"verify", nullptr}};
}

// Runs the oracle and records the comparison; over-budget inputs are marked
// as skipped.
void attach_verify(json& doc, int& exit_code, double value, const std::function<double()>& oracle) {
    try {
        const double o = oracle();
        const double d = relative_delta(value, o);
        doc["verify"] = {{"oracle", o}, {"delta", d}};
        if (!(d <= kOracleTolerance)) exit_code = OracleMismatch;
    } catch (const BudgetExceeded& e) {
        doc["verify"] = {{"oracle", "skipped"}, {"delta", nullptr}, {"reason", e.what()}};
    }
}

CutSet face_cut(const EmbeddedGraph& g, const std::vector<int>& faces, unsigned seed) {
    return faces.empty() ? empty_cut(g, CutKind::Dual) : find_cut_set(g, CutKind::Dual, faces, seed);
}

// ----- commands ---------------------------------------------------------------------------

using Handler = std::function<void(const CommandRequest&, json&, int&)>;

void cmd_partition(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = plane(lg, r.command);
    const PartitionResult p = partition_details(g);
    doc["value"] = p.value;
    auto& c = doc["components"];
    c["pfaffian"] = p.negative_weights ? json(complex_json(p.complex_value)) : json(p.pfaffian);
    c["epsilon"] = p.epsilon;
    c["det_kw"] = det(build_kacward(g).KW).real();
    c["negative_weights"] = p.negative_weights;
    c["sign_determined"] = !p.negative_weights;
    c["vertices"] = g.num_vertices();
    c["edges"] = g.num_edges();
    if (r.beta && r.mode == "high") {
        const LoadedGraph raw = graph_from_json(read_json(r.input));
        c["spin_partition"] = high_temperature_prefactor(g, *r.beta, raw.graph.weights()) * p.value;
    }
    if (r.verify) attach_verify(doc, code, p.value, [&] { return brute_even_sum(g); });
}

void cmd_spin_corr(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = plane(lg, r.command);
    const std::vector<int> faces = resolve_faces(g, r.faces);
    const double v = spin_correlation(g, faces, r.seed);
    doc["value"] = v;
    doc["components"]["faces"] = faces;
    doc["components"]["cut_size"] = faces.empty() ? 0 : find_cut_set(g, CutKind::Dual, faces, r.seed).size();
    if (r.verify) attach_verify(doc, code, v, [&] { return dual_spin_correlation(g, faces); });
}

void cmd_energy_corr(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = plane(lg, r.command);
    check_ids(r.edges, g.num_edges(), "edge");
    const EnergyResult e = energy_correlation(g, r.edges);
    doc["value"] = e.product;
    doc["components"]["indicator"] = e.indicator;
    doc["components"]["inclusion_exclusion_residual"] = e.inclusion_exclusion_residual;
    if (r.verify)
        attach_verify(doc, code, e.product, [&] {
            const double z = brute_even_sum(g);
            return brute_even_sum_functional(g, [&](uint64_t m) {
                       double s = subgraph_weight(g, m);
                       for (int k : r.edges)
                           if (m >> k & 1u) s = -s;
                       return s;
                   }) / z;
        });
}

void cmd_fermion(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = plane(lg, r.command);
    check_ids(r.oriented, g.num_oriented(), "oriented edge");
    const std::vector<int> faces = resolve_faces(g, r.faces);
    const CutSet cut = face_cut(g, faces, r.seed);
    const CutSet* cp = faces.empty() ? nullptr : &cut;
    const double v = fermion_pfaffian(g, r.oriented, cp);
    doc["value"] = v;
    doc["components"]["twist_faces"] = faces;
    if (r.verify)
        attach_verify(doc, code, v, [&] {
            const double z = cp ? brute_even_sum_twisted(g, cut) : brute_even_sum(g);
            return edge_class_sum(g, r.oriented, tau_rule(g), cp).real() / z;
        });
}

void cmd_disorder(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = plane(lg, r.command);
    const std::vector<int> vs = resolve_vertices(lg, r.vertices);
    const std::vector<int> faces = resolve_faces(g, r.faces);
    const double v = faces.empty() ? disorder_correlation(g, vs, r.seed) : disorder_spin_correlation(g, vs, faces, r.seed);
    doc["value"] = v;
    doc["components"]["vertices"] = r.vertices;
    doc["components"]["faces"] = faces;
    if (r.verify)
        attach_verify(doc, code, v, [&] {
            const CutSet cut = face_cut(g, faces, r.seed);
            return vertex_class_sum(g, vs, faces.empty() ? nullptr : &cut) / brute_even_sum(g);
        });
}

void observable_components(const EmbeddedGraph& g, const Observable& f, json& c) {
    json ev = json::array(), cv = json::array();
    for (cplx z : f.edge_values) ev.push_back(complex_json(z));
    for (cplx z : f.corner_values) cv.push_back(complex_json(z));
    c["edge_values"] = ev;
    c["corner_values"] = cv;
    c["boundary_residual"] = boundary_residual(g, f);
}

void cmd_observable(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = plane(lg, r.command);
    const std::vector<int> faces = resolve_faces(g, r.faces);
    const CutSet cut = face_cut(g, faces, r.seed);
    const CutSet* cp = faces.empty() ? nullptr : &cut;
    if ((r.source < 0) == (r.corner_source < 0)) throw SchemaError("give exactly one of --source and --corner");
    Observable f;
    if (r.source >= 0) {
        check_ids({r.source}, g.num_oriented(), "oriented edge");
        f = edge_observable(g, r.source, cp);
    } else {
        check_ids({r.corner_source}, g.num_corners(), "corner");
        f = corner_observable(g, r.corner_source, cp);
    }
    const double res = s_hol_max_residual(g, f);
    doc["value"] = res;
    observable_components(g, f, doc["components"]);
    if (r.verify) attach_verify(doc, code, std::max(res, doc["components"]["boundary_residual"].get<double>()),
                                [] { return 0.0; });
}

void cmd_double_partition(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = plane(lg, r.command);
    const DoublePartition d = double_partition_details(g);
    doc["value"] = d.value;
    doc["components"]["imaginary_residue"] = d.imaginary_residue;
    doc["components"]["boundary_vertices"] = static_cast<int>(g.boundary_vertices().size());
    if (r.verify) attach_verify(doc, code, d.value, [&] { return double_ising_sum(g); });
}

void cmd_double_spin_corr(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = plane(lg, r.command);
    const std::vector<int> faces = resolve_faces(g, r.faces);
    const double v = double_spin_correlation(g, faces, r.seed);
    doc["value"] = v;
    doc["components"]["faces"] = faces;
    if (r.verify)
        attach_verify(doc, code, v, [&] {
            const CutSet cut = face_cut(g, faces, r.seed);
            return double_ising_sum(g, &cut) / double_ising_sum(g);
        });
}

void cmd_dobrushin(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = plane(lg, r.command);
    if (r.boundary.size() != 2) throw SchemaError("--boundary needs two boundary vertex ids");
    int edge[2];
    for (int k = 0; k < 2; ++k) {
        const int v = lg.vertex(r.boundary[k]);
        if (!g.is_boundary_vertex(v) || g.degree(v) != 1)
            throw SchemaError("vertex " + std::to_string(r.boundary[k]) + " is not a univalent boundary vertex");
        edge[k] = g.out_edges(v)[0];
    }
    const DobrushinResult d = dobrushin_partition(g, edge[0], edge[1]);
    doc["value"] = d.value;
    auto& c = doc["components"];
    c["a"] = edge[0];
    c["b"] = edge[1];
    c["winding"] = complex_json(d.winding);
    c["raw"] = complex_json(d.raw);
    c["path_spread"] = d.path_spread;
    if (r.verify)
        attach_verify(doc, code, d.value, [&] {
            return 2.0 * std::sqrt(g.oriented_weight(edge[0]) * g.oriented_weight(edge[1])) *
                   dobrushin_sum(g, edge[0], edge[1]);
        });
}

void cmd_torus_partition(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = lg.graph;
    if (g.geometry() != Geometry::Torus) throw SchemaError("torus-partition needs a torus input");
    static const std::map<std::string, int> selectors{{"00", 0}, {"10", 1}, {"01", 2}, {"11", 3}};
    if (r.structure != "all" && !selectors.count(r.structure))
        throw SchemaError("--structure must be all, 00, 10, 01 or 11");
    json structures = json::array();
    const auto all = torus_spin_structures(g);
    for (int k = 0; k < 4; ++k) {
        const QuadraticForm q = quadratic_form(g, all[k]);
        structures.push_back({{"phi", std::to_string(all[k].bits[0]) + std::to_string(all[k].bits[1])},
                              {"q", {q.basis[0], q.basis[1]}},
                              {"arf", q.arf()},
                              {"root", structure_root(g, all[k])}});
    }
    auto& c = doc["components"];
    c["structures"] = structures;
    c["Z_low"] = torus_partition_low(g);
    if (r.structure == "all") {
        const double z = torus_partition_high(g);
        doc["value"] = z;
        c["Z_high"] = z;
        if (r.verify)
            attach_verify(doc, code, z, [&] {
                const auto bins = homology_bins(g);
                return bins[0] + bins[1] + bins[2] + bins[3];
            });
    } else {
        const int k = selectors.at(r.structure);
        const double root = structures[k]["root"].get<double>();
        doc["value"] = root;
        if (r.verify)
            attach_verify(doc, code, root, [&] {
                const auto bins = homology_bins(g);
                const QuadraticForm q = quadratic_form(g, all[k]);
                double s = 0.0;
                for (int a = 0; a < 4; ++a) s += q(a) ? -bins[a] : bins[a];
                return s;
            });
    }
}

void cmd_surface_corr(const CommandRequest& r, json& doc, int& code) {
    const LoadedGraph lg = load(r);
    const EmbeddedGraph& g = plane(lg, r.command);
    const std::vector<int> punctures = resolve_faces(g, r.punctures);
    const std::vector<int> faces = resolve_faces(g, r.faces);
    const PuncturedDisk d = make_punctured_disk(g, punctures, r.seed);
    const double v = surface_spin_correlation(d, faces, r.seed);
    doc["value"] = v;
    doc["components"]["punctures"] = punctures;
    doc["components"]["faces"] = faces;
    doc["components"]["Z_low"] = surface_partition_low(d);
    if (r.verify)
        attach_verify(doc, code, v, [&] {
            std::vector<int> fixed = punctures;
            fixed.push_back(g.outer_face());
            return dual_spin_correlation(g, faces, fixed);
        });
}

// ----- verification suite -------------------------------------------------------------------

struct Check {
    std::string name;
    std::function<double()> value;
    std::function<double()> oracle;
};

std::vector<Check> suite_for(const EmbeddedGraph& g) {
    std::vector<Check> checks;
    if (g.geometry() == Geometry::Torus) {
        checks.push_back({"torus_partition_high", [&g] { return torus_partition_high(g); }, [&g] {
                              const auto b = homology_bins(g);
                              return b[0] + b[1] + b[2] + b[3];
                          }});
        checks.push_back({"torus_partition_low", [&g] { return torus_partition_low(g); },
                          [&g] { return homology_bins(g)[0]; }});
        return checks;
    }
    checks.push_back({"kac_ward_determinant", [&g] { return det(build_kacward(g).KW).real(); }, [&g] {
                          const double z = brute_even_sum(g);
                          return z * z;
                      }});
    checks.push_back({"pfaffian_partition", [&g] { return partition_details(g).complex_value.real(); },
                      [&g] { return brute_even_sum(g); }});
    checks.push_back({"signed_dimer_sum", [&g] { return partition_details(g).complex_value.real(); },
                      [&g] { return signed_dimer_sum(g); }});
    for (int f : g.inner_faces())
        checks.push_back({"spin_face_" + std::to_string(f), [&g, f] { return spin_correlation(g, {f}); },
                          [&g, f] { return dual_spin_correlation(g, {f}); }});
    for (int e = 0; e < g.num_edges(); ++e)
        checks.push_back({"energy_edge_" + std::to_string(e), [&g, e] { return energy_product(g, {e}); }, [&g, e] {
                              return brute_even_sum_functional(g, [&g, e](uint64_t m) {
                                         return (m >> e & 1u ? -1.0 : 1.0) * subgraph_weight(g, m);
                                     }) / brute_even_sum(g);
                          }});
    if (g.num_vertices() >= 2) {
        const int last = g.num_vertices() - 1;
        checks.push_back({"disorder_0_" + std::to_string(last), [&g, last] { return disorder_correlation(g, {0, last}); },
                          [&g, last] { return vertex_class_sum(g, {0, last}) / brute_even_sum(g); }});
    }
    if (g.num_edges() >= 2)
        checks.push_back({"fermion_0_2", [&g] { return fermion_pfaffian(g, {0, 2}); },
                          [&g] { return edge_class_sum(g, {0, 2}, tau_rule(g)).real() / brute_even_sum(g); }});
    if (!g.boundary_vertices().empty())
        checks.push_back({"double_partition", [&g] { return double_partition(g); },
                          [&g] { return double_ising_sum(g); }});
    return checks;
}

void cmd_verify(const CommandRequest& r, json& doc, int& code) {
    std::vector<CorpusGraph> graphs;
    if (r.input.empty()) {
        graphs = standard_corpus();
    } else {
        graphs.push_back({r.input, load(r).graph});
    }
    json results = json::array();
    double worst = 0.0;
    int skipped = 0;
    for (const auto& cg : graphs) {
        for (const Check& ch : suite_for(cg.graph)) {
            json row{{"graph", cg.name}, {"check", ch.name}};
            const double v = ch.value();
            row["value"] = v;
            try {
                const double o = ch.oracle();
                const double d = relative_delta(v, o);
                row["oracle"] = o;
                row["delta"] = d;
                row["pass"] = d <= kOracleTolerance;
                worst = std::max(worst, d);
                if (!(d <= kOracleTolerance)) code = OracleMismatch;
            } catch (const BudgetExceeded& e) {
                row["oracle"] = "skipped";
                row["delta"] = nullptr;
                row["reason"] = e.what();
                ++skipped;
            }
            results.push_back(row);
        }
    }
    doc["value"] = worst;
    doc["components"]["checks"] = results;
    doc["components"]["skipped"] = skipped;
    doc["verify"] = {{"oracle", "suite"}, {"delta", worst}};
}

// ----- benchmark ----------------------------------------------------------------------------

template <typename F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void cmd_bench(const CommandRequest& r, json& doc, int&) {
    std::vector<int> sizes = r.sizes;
    if (sizes.empty()) sizes = {2, 3, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    json rows = json::array();
    std::vector<double> lx, ly;
    for (int n : sizes) {
        if (n < 2) throw SchemaError("bench sizes must be at least 2");
        const EmbeddedGraph g = lattice_block(n, n, 0.3);
        double z = 0.0;
        const double t = seconds([&] { z = partition_function(g); });
        json row{{"n", n}, {"edges", g.num_edges()}, {"matrix_dim", g.num_oriented()}, {"Z", z}, {"pfaffian_seconds", t}};
        try {
            EnumerationBudget budget;
            budget.check_edges(g, g.num_edges());
            double o = 0.0;
            row["oracle_seconds"] = seconds([&] { o = brute_even_sum(g, budget); });
            row["oracle_delta"] = relative_delta(z, o);
        } catch (const BudgetExceeded&) {
            row["oracle_seconds"] = "skipped";
            row["oracle_subsets_log2"] = g.num_edges();
        }
        rows.push_back(row);
        if (n >= 8 && t > 0) {
            lx.push_back(std::log(double(n)));
            ly.push_back(std::log(t));
        }
    }
    // Least-squares slope of log time against log N over N >= 8.
    double slope = std::nan("");
    if (lx.size() >= 2) {
        double mx = 0, my = 0;
        for (size_t k = 0; k < lx.size(); ++k) mx += lx[k], my += ly[k];
        mx /= lx.size();
        my /= ly.size();
        double sxy = 0, sxx = 0;
        for (size_t k = 0; k < lx.size(); ++k) sxy += (lx[k] - mx) * (ly[k] - my), sxx += (lx[k] - mx) * (lx[k] - mx);
        slope = sxy / sxx;
    }
    doc["value"] = std::isnan(slope) ? json(nullptr) : json(slope);
    doc["components"]["rows"] = rows;
    doc["components"]["scaling_exponent"] = doc["value"];
    doc["components"]["threads"] = worker_count();
}

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h{
        {"partition", cmd_partition},
        {"spin-corr", cmd_spin_corr},
        {"energy-corr", cmd_energy_corr},
        {"fermion", cmd_fermion},
        {"disorder", cmd_disorder},
        {"observable", cmd_observable},
        {"double-partition", cmd_double_partition},
        {"double-spin-corr", cmd_double_spin_corr},
        {"dobrushin", cmd_dobrushin},
        {"torus-partition", cmd_torus_partition},
        {"surface-corr", cmd_surface_corr},
        {"verify", cmd_verify},
        {"bench", cmd_bench},
    };
    return h;
}

bool finite_value(const json& v) {
    return !v.is_number_float() || std::isfinite(v.get<double>());
}

// ----- output ---------------------------------------------------------------------------------

void write_json(std::ostringstream& out, const json& j, int indent, int depth) {
    const std::string pad = indent > 0 ? std::string((depth + 1) * indent, ' ') : "";
    const std::string close = indent > 0 ? std::string(depth * indent, ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    const char* sep = indent > 0 ? ": " : ":";
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out << "{}";
            return;
        }
        out << "{" << nl;
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out << "," << nl;
            first = false;
            out << pad << json(it.key()).dump() << sep;
            write_json(out, it.value(), indent, depth + 1);
        }
        out << nl << close << "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out << "[]";
            return;
        }
        bool scalar = std::none_of(j.begin(), j.end(), [](const json& v) { return v.is_structured(); });
        if (scalar) {
            out << "[";
            for (size_t k = 0; k < j.size(); ++k) {
                if (k) out << (indent > 0 ? ", " : ",");
                write_json(out, j[k], indent, depth + 1);
            }
            out << "]";
            return;
        }
        out << "[" << nl;
        for (size_t k = 0; k < j.size(); ++k) {
            if (k) out << "," << nl;
            out << pad;
            write_json(out, j[k], indent, depth + 1);
        }
        out << nl << close << "]";
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out << "null";
            return;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        std::string s = buf;
        if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
        out << s;
        return;
    }
    default:
        out << j.dump();
    }
}

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), rows);
    } else if (j.is_array()) {
        for (size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "[" + std::to_string(k) + "]", rows);
    } else if (j.is_string()) {
        rows.push_back({prefix, j.get<std::string>()});
    } else {
        rows.push_back({prefix, format_json(j, 0)});
    }
}

} // namespace

// ----- graph JSON -----------------------------------------------------------------------------

int LoadedGraph::vertex(int id) const {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw SchemaError("unknown vertex id " + std::to_string(id));
    return static_cast<int>(it - ids.begin());
}

LoadedGraph graph_from_json(const json& j) {
    try {
        if (!j.is_object()) throw SchemaError("graph JSON must be an object");
        if (j.contains("torus")) {
            const json& t = j.at("torus");
            const int w = t.at("width").get<int>(), h = t.at("height").get<int>();
            LoadedGraph lg{EmbeddedGraph::torus(w, h, t.at("weight").get<double>()), {}};
            for (int v = 0; v < lg.graph.num_vertices(); ++v) lg.ids.push_back(v);
            return lg;
        }
        std::vector<int> ids;
        std::vector<Point> pos;
        for (const json& v : j.at("vertices")) {
            const int id = v.at("id").get<int>();
            if (std::find(ids.begin(), ids.end(), id) != ids.end())
                throw SchemaError("duplicate vertex id " + std::to_string(id));
            ids.push_back(id);
            pos.push_back({v.at("x").get<double>(), v.at("y").get<double>()});
        }
        auto index = [&](int id) {
            auto it = std::find(ids.begin(), ids.end(), id);
            if (it == ids.end()) throw SchemaError("edge refers to unknown vertex " + std::to_string(id));
            return static_cast<int>(it - ids.begin());
        };
        std::vector<std::pair<int, int>> edges;
        std::vector<double> weights;
        for (const json& e : j.at("edges")) {
            edges.push_back({index(e.at("u").get<int>()), index(e.at("v").get<int>())});
            weights.push_back(e.at("weight").get<double>());
        }
        std::vector<int> boundary;
        if (j.contains("boundary_vertices"))
            for (const json& b : j.at("boundary_vertices")) boundary.push_back(index(b.get<int>()));
        return {EmbeddedGraph::planar(pos, edges, weights, boundary), ids};
    } catch (const json::exception& e) {
        throw SchemaError(std::string("graph schema: ") + e.what());
    }
}

json graph_to_json(const EmbeddedGraph& g) {
    if (g.geometry() == Geometry::Torus)
        return {{"torus", {{"width", g.torus_width()}, {"height", g.torus_height()}, {"weight", g.weight(0)}}}};
    json vs = json::array(), es = json::array();
    for (int v = 0; v < g.num_vertices(); ++v)
        vs.push_back({{"id", v}, {"x", g.position(v).x}, {"y", g.position(v).y}});
    for (int e = 0; e < g.num_edges(); ++e)
        es.push_back({{"u", g.endpoints(e).first}, {"v", g.endpoints(e).second}, {"weight", g.weight(e)}});
    json out{{"vertices", vs}, {"edges", es}};
    if (!g.boundary_vertices().empty()) out["boundary_vertices"] = g.boundary_vertices();
    return out;
}

// ----- dispatch ---------------------------------------------------------------------------------

CommandOutcome run(const CommandRequest& request) {
    CommandOutcome out;
    out.doc = base_doc(request.command);
    auto fail = [&](int code, const char* reason, const std::string& message) {
        out.exit_code = code;
        out.doc["value"] = nullptr;
        out.doc["error"] = {{"reason", reason}, {"message", message}};
    };
    const auto it = handlers().find(request.command);
    if (it == handlers().end()) {
        fail(SchemaFailure, "schema", "unknown command " + request.command);
        return out;
    }
    try {
        it->second(request, out.doc, out.exit_code);
        if (!finite_value(out.doc["value"])) fail(NumericalFailure, "numerical", "result is not finite");
        if (out.exit_code == OracleMismatch)
            out.doc["error"] = {{"reason", "oracle_mismatch"}, {"message", "result differs from the oracle"}};
    } catch (const SchemaError& e) {
        fail(SchemaFailure, "schema", e.what());
    } catch (const GraphError& e) {
        fail(SchemaFailure, "schema", to_string(e.kind()) + ": " + e.what());
    } catch (const json::exception& e) {
        fail(SchemaFailure, "schema", e.what());
    } catch (const std::invalid_argument& e) {
        fail(SchemaFailure, "schema", e.what());
    } catch (const BudgetExceeded& e) {
        fail(NumericalFailure, "budget", e.what());
    } catch (const std::exception& e) {
        fail(NumericalFailure, "numerical", e.what());
    }
    return out;
}

std::string format_json(const json& j, int indent) {
    std::ostringstream out;
    write_json(out, j, indent, 0);
    return out.str();
}

std::string render(const json& doc, const std::string& format) {
    if (format == "json") return format_json(doc) + "\n";
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(doc, "", rows);
    std::ostringstream out;
    if (format == "csv") {
        out << "key,value\n";
        for (const auto& [k, v] : rows) {
            const bool quote = v.find_first_of(",\"") != std::string::npos;
            std::string s = v;
            if (quote) {
                std::string q;
                for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                s = "\"" + q + "\"";
            }
            out << k << "," << s << "\n";
        }
        return out.str();
    }
    size_t width = 0;
    for (const auto& row : rows) width = std::max(width, row.first.size());
    for (const auto& [k, v] : rows) out << k << std::string(width - k.size() + 2, ' ') << v << "\n";
    return out.str();
}

} // namespace kw::cli
