#pragma once

#include "kacward/embedded_graph.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kw::cli {

enum ExitCode { Success = 0, SchemaFailure = 2, NumericalFailure = 3, OracleMismatch = 4 };

// Malformed input: unreadable file, invalid JSON, missing fields, bad parameters.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommandRequest {
    std::string command;
    std::string input;                    // graph JSON path, "-" for stdin
    std::vector<std::string> faces;       // interior points "x,y"
    std::vector<std::string> punctures;   // interior points "x,y"
    std::vector<int> edges;               // unoriented edge ids (input order)
    std::vector<int> oriented;            // oriented edge ids: 2k is u -> v of edge k
    std::vector<int> vertices;            // vertex ids as given in the input
    std::vector<int> boundary;            // two boundary vertex ids
    int source = -1;                      // oriented source edge of an observable
    int corner_source = -1;               // corner source of an observable
    std::string mode = "direct";          // direct | high | low
    std::optional<double> beta;           // x = tanh(beta J) or exp(-2 beta J)
    std::string structure = "all";        // torus spin structure: all | 00 | 10 | 01 | 11
    std::string format = "json";          // json | csv | pretty
    bool verify = false;
    std::vector<int> sizes;               // bench block sizes
    unsigned seed = 0;
};

struct CommandOutcome {
    int exit_code = Success;
    nlohmann::json doc;
};

// A graph read from JSON together with the input vertex ids.
struct LoadedGraph {
    EmbeddedGraph graph;
    std::vector<int> ids;  // input id of each internal vertex
    int vertex(int id) const;
};

// Schema: {"vertices":[{"id","x","y"}], "edges":[{"u","v","weight"}],
// "boundary_vertices":[...]} or {"torus":{"width","height","weight"}}.
LoadedGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const EmbeddedGraph& g);

CommandOutcome run(const CommandRequest& request);

// Deterministic JSON with 17 significant digits for floating-point numbers.
std::string format_json(const nlohmann::json& j, int indent = 2);
// Renders a result document as json, csv or pretty text.
std::string render(const nlohmann::json& doc, const std::string& format);

} // namespace kw::cli
