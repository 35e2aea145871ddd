#include "kacward/cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <string>
#include <sys/wait.h>

using namespace kw::cli;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(KW_FIXTURES) + "/" + name; }

CommandRequest request(const std::string& cmd, const std::string& file) {
    CommandRequest r;
    r.command = cmd;
    if (!file.empty()) r.input = fixture(file);
    return r;
}

int tool(const std::string& args) {
    const std::string cmd = std::string(KACWARD_TOOL) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("partition on the triangle") {
    CommandRequest r = request("partition", "triangle.json");
    r.verify = true;
    const CommandOutcome out = run(r);
    CHECK(out.exit_code == Success);
    CHECK(out.doc["command"] == "partition");
    CHECK(out.doc["value"].get<double>() == doctest::Approx(1.0 + 0.5 * 0.4 * 0.25));
    CHECK(out.doc["verify"]["delta"].get<double>() < 1e-12);
    CHECK(out.doc["components"]["sign_determined"] == true);
}

TEST_CASE("spin correlation with verification on the 3x3 block") {
    CommandRequest r = request("spin-corr", "block3.json");
    r.faces = {"0.5,0.5", "1.5,1.5"};
    r.verify = true;
    const CommandOutcome out = run(r);
    CHECK(out.exit_code == Success);
    CHECK(out.doc["verify"]["oracle"].is_number());
    CHECK(out.doc["verify"]["delta"].get<double>() < 1e-10);
}

TEST_CASE("every subcommand runs on a suitable input") {
    struct Case {
        std::string cmd, file;
        std::function<void(CommandRequest&)> setup;
    };
    const std::vector<Case> cases{
        {"energy-corr", "block3.json", [](CommandRequest& r) { r.edges = {0, 5}; }},
        {"fermion", "block3.json", [](CommandRequest& r) { r.oriented = {0, 7}; r.faces = {"1.5,0.5"}; }},
        {"disorder", "block3.json", [](CommandRequest& r) { r.vertices = {0, 8}; }},
        {"disorder", "block3.json", [](CommandRequest& r) { r.vertices = {0, 8}; r.faces = {"0.5,1.5"}; }},
        {"observable", "block3.json", [](CommandRequest& r) { r.source = 3; }},
        {"observable", "decorated_square.json", [](CommandRequest& r) { r.corner_source = 2; }},
        {"double-partition", "decorated_square.json", nullptr},
        {"double-spin-corr", "decorated_square.json", [](CommandRequest& r) { r.faces = {"0.5,0.5"}; }},
        {"dobrushin", "decorated_square.json", [](CommandRequest& r) { r.boundary = {4, 6}; }},
        {"torus-partition", "torus3.json", nullptr},
        {"torus-partition", "torus3.json", [](CommandRequest& r) { r.structure = "10"; }},
        {"surface-corr", "block3.json", [](CommandRequest& r) { r.punctures = {"0.5,0.5"}; r.faces = {"1.5,1.5"}; }},
        {"partition", "block3.json", [](CommandRequest& r) { r.mode = "high"; r.beta = 0.4; }},
    };
    for (const Case& c : cases) {
        CAPTURE(c.cmd);
        CommandRequest r = request(c.cmd, c.file);
        r.verify = true;
        if (c.setup) c.setup(r);
        const CommandOutcome out = run(r);
        CHECK(out.exit_code == Success);
        CHECK_FALSE(out.doc.contains("error"));
        REQUIRE(out.doc["verify"].is_object());
        CHECK(out.doc["verify"]["delta"].get<double>() < 1e-9);
    }
}

TEST_CASE("schema errors exit with 2") {
    CHECK(run(request("partition", "malformed.json")).exit_code == SchemaFailure);
    CHECK(run(request("partition", "missing.json")).exit_code == SchemaFailure);
    CHECK(run(request("no-such-command", "triangle.json")).exit_code == SchemaFailure);
    CommandRequest r = request("spin-corr", "block3.json");
    r.faces = {"9,9"};
    const CommandOutcome out = run(r);
    CHECK(out.exit_code == SchemaFailure);
    CHECK(out.doc["error"]["reason"] == "schema");
    r.faces = {"not a point"};
    CHECK(run(r).exit_code == SchemaFailure);
    CommandRequest t = request("partition", "torus3.json");
    CHECK(run(t).exit_code == SchemaFailure);
    CommandRequest m = request("partition", "triangle.json");
    m.mode = "high";
    CHECK(run(m).exit_code == SchemaFailure);
}

TEST_CASE("graph JSON round trip") {
    const LoadedGraph lg = graph_from_json(json::parse(R"({"vertices":[{"id":7,"x":0,"y":0},{"id":3,"x":1,"y":0},
        {"id":5,"x":0,"y":1}],"edges":[{"u":7,"v":3,"weight":0.5},{"u":3,"v":5,"weight":0.5},{"u":5,"v":7,"weight":0.5}]})"));
    CHECK(lg.vertex(3) == 1);
    CHECK_THROWS_AS(lg.vertex(4), SchemaError);
    const LoadedGraph again = graph_from_json(graph_to_json(lg.graph));
    CHECK(again.graph.num_edges() == 3);
    CHECK(again.graph.num_faces() == 2);
    CHECK_THROWS_AS(graph_from_json(json::parse(R"({"vertices":[]})")), SchemaError);
}

TEST_CASE("over-budget verification is marked as skipped") {
    CommandRequest r = request("partition", "block4.json");
    r.verify = true;
    const CommandOutcome out = run(r);
    CHECK(out.exit_code == Success);
    CHECK(out.doc["verify"]["oracle"] == "skipped");
    CHECK(out.doc["verify"]["delta"].is_null());
}

TEST_CASE("output is byte-stable and uses 17 significant digits") {
    CommandRequest r = request("spin-corr", "block3.json");
    r.faces = {"0.5,0.5"};
    const std::string a = render(run(r).doc, "json"), b = render(run(r).doc, "json");
    CHECK(a == b);
    CHECK(format_json(json(0.1), 0) == "0.10000000000000001");
    CHECK(format_json(json(2.0), 0) == "2.0");
    CHECK(format_json(json::array({1, 2}), 2) == "[1, 2]");
    const std::string csv = render(run(r).doc, "csv");
    CHECK(csv.rfind("key,value\n", 0) == 0);
    CHECK(csv.find("command,spin-corr") != std::string::npos);
    CHECK(render(run(r).doc, "pretty").find("value") != std::string::npos);
}

TEST_CASE("verify suite on the built-in corpus") {
    CommandRequest r;
    r.command = "verify";
    const CommandOutcome out = run(r);
    CHECK(out.exit_code == Success);
    CHECK(out.doc["value"].get<double>() < 1e-9);
    CHECK(out.doc["components"]["checks"].size() > 100);
}

TEST_CASE("bench reports a table") {
    CommandRequest r;
    r.command = "bench";
    r.sizes = {2, 3, 8, 10};
    const CommandOutcome out = run(r);
    CHECK(out.exit_code == Success);
    const json& rows = out.doc["components"]["rows"];
    REQUIRE(rows.size() == 4);
    CHECK(rows[0]["oracle_delta"].get<double>() < 1e-12);
    CHECK(rows[3]["oracle_seconds"] == "skipped");
    CHECK(rows[3]["matrix_dim"] == 2 * 2 * 10 * 9);
}

TEST_CASE("command-line exit codes") {
    CHECK(tool("partition -i " + fixture("triangle.json") + " --verify") == 0);
    CHECK(tool("partition -i " + fixture("malformed.json")) == 2);
    CHECK(tool("partition --no-such-flag") == 2);
    CHECK(tool("spin-corr -i " + fixture("block3.json") + " --face 0.5,0.5 --verify --format csv") == 0);
    CHECK(tool("torus-partition -i " + fixture("torus3.json") + " --verify") == 0);
}

}
