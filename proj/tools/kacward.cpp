#include "kacward/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Command {
    const char* name;
    const char* help;
};

const Command kCommands[] = {
    {"partition", "Ising partition function Z from the Pfaffian"},
    {"spin-corr", "spin correlation E+[sigma_u1 ... sigma_um] for faces given by interior points"},
    {"energy-corr", "energy correlation E+[eps_e1 ... eps_en] for edge ids"},
    {"fermion", "Pfaffian of Khat^-1 on oriented edges, optionally twisted by faces"},
    {"disorder", "disorder correlation <mu_v1 ... mu_v2n>, mixed with spins when faces are given"},
    {"observable", "fermionic observable from an oriented edge or corner source"},
    {"double-partition", "double-Ising partition function"},
    {"double-spin-corr", "double-Ising spin correlation"},
    {"dobrushin", "double-Ising partition function with Dobrushin boundary conditions"},
    {"torus-partition", "torus partition function from the four spin structures"},
    {"surface-corr", "spin correlation on a punctured disk with + on every boundary component"},
    {"verify", "oracle suite on the input graph, or on the built-in corpus"},
    {"bench", "timing of the Pfaffian path on N x N blocks against the oracle"},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact 2D Ising computations with Kac-Ward and Pfaffian formulas"};
    app.require_subcommand(1);
    kw::cli::CommandRequest req;
    double beta = 0.0;

    for (const Command& c : kCommands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->callback([&req, name = std::string(c.name)] { req.command = name; });
        sub->add_option("-i,--input", req.input, "graph JSON file, - for stdin");
        sub->add_option("--face", req.faces, "interior point x,y of a face (repeatable)");
        sub->add_option("--puncture", req.punctures, "interior point x,y of a puncture face (repeatable)");
        sub->add_option("--edges", req.edges, "unoriented edge ids");
        sub->add_option("--oriented", req.oriented, "oriented edge ids (2k: u->v of edge k, 2k+1: v->u)");
        sub->add_option("--vertices", req.vertices, "vertex ids");
        sub->add_option("--boundary", req.boundary, "two boundary vertex ids a b")->expected(2);
        sub->add_option("--source", req.source, "oriented source edge of the observable");
        sub->add_option("--corner", req.corner_source, "source corner of the observable");
        sub->add_option("--mode", req.mode, "weights: direct (x), high (tanh(beta J)) or low (exp(-2 beta J))")
            ->check(CLI::IsMember({"direct", "high", "low"}));
        sub->add_option("--beta", beta, "inverse temperature for --mode high or low");
        sub->add_option("--structure", req.structure, "torus spin structure: all, 00, 10, 01 or 11");
        sub->add_option("--format", req.format, "output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
        sub->add_flag("--verify", req.verify, "compare with the brute-force oracle when within budget");
        sub->add_option("--sizes", req.sizes, "block sizes for bench");
        sub->add_option("--seed", req.seed, "seed for cut-path selection");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kw::cli::SchemaFailure;
    }
    for (CLI::App* sub : app.get_subcommands())
        if (sub->count("--beta")) req.beta = beta;

    const kw::cli::CommandOutcome out = kw::cli::run(req);
    std::cout << kw::cli::render(out.doc, req.format);
    if (out.doc.contains("error")) std::cerr << out.doc["error"]["message"].get<std::string>() << "\n";
    return out.exit_code;
}
