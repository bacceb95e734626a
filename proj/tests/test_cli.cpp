#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(SUBSPEC_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string graph(const std::string& name) {
    return std::string(SUBSPEC_DATA_DIR) + "/graphs/" + name;
}
std::string cell(const std::string& name) {
    return std::string(SUBSPEC_DATA_DIR) + "/cells/" + name;
}

nlohmann::json parse(const RunResult& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("norm subcommand") {
    auto r = run("norm --graph " + graph("e10.json"));
    CHECK(r.exit_code == 0);
    auto j = parse(r);
    CHECK(j.at("tool") == "subspec");
    CHECK(j.contains("version"));
    CHECK(j.at("inputs").size() == 1);
    CHECK(std::abs(j.at("norm_squared").get<double>() - 4.0265) <= 5e-4);
    CHECK(j.at("certified") == true);
}

TEST_CASE("reports are deterministic") {
    auto a = run("norm --graph " + graph("e10.json"));
    auto b = run("norm --graph " + graph("e10.json"));
    CHECK(a.out == b.out);
    auto c = run("folner-search --graph " + graph("ainf4.json") + " --epsilon 0.5 --max-size 200");
    auto d = run("folner-search --graph " + graph("ainf4.json") + " --epsilon 0.5 --max-size 200");
    CHECK(c.out == d.out);
}

TEST_CASE("markov subcommand verifies the spin row file") {
    auto r = run("markov --graph " + graph("spinrow.json"));
    CHECK(r.exit_code == 0);
    auto j = parse(r);
    CHECK(j.at("mode") == "verify");
    CHECK(j.at("pass") == true);
}

TEST_CASE("folner-check exit codes distinguish pass and fail") {
    auto pass = run("folner-check --graph " + graph("ainf4.json") + " --set 0..12 --epsilon 0.5");
    CHECK(pass.exit_code == 0);
    auto j = parse(pass);
    CHECK(j.at("certificate").at("ratio").get<double>() == Catch::Approx(0.49923).margin(1e-4));

    auto fail = run("folner-check --graph " + graph("ainf4.json") + " --set 0..11 --epsilon 0.5");
    CHECK(fail.exit_code == 1);  // semantically valid, check failed
}

TEST_CASE("schema violations exit 2") {
    std::string bad = std::string(SUBSPEC_DATA_DIR) + "/../build_bad_graph.json";
    {
        std::ofstream out(bad);
        out << R"({"odd":["i"],"even":["j","k"],"edges":[["i","j",1]]})";  // isolated vertex
    }
    auto r = run("norm --graph " + bad);
    CHECK(r.exit_code == 2);
    std::remove(bad.c_str());

    auto missing = run("norm --graph /does/not/exist.json");
    CHECK(missing.exit_code == 2);

    auto unknown = run("frobnicate --graph x");
    CHECK(unknown.exit_code == 2);
}

TEST_CASE("cell-verify on the shipped corpus") {
    auto r = run("cell-verify --cell " + cell("spin.json") + " --depth 8");
    CHECK(r.exit_code == 0);
    auto j = parse(r);
    CHECK(j.at("csq_ok") == true);
    CHECK(j.at("nondegenerate_ok") == true);
    CHECK(j.at("rows_markov_ok") == true);
    CHECK(j.at("graphs_irreducible_ok") == true);
    CHECK(j.at("subfactor_index").get<double>() == Catch::Approx(2.0).margin(1e-9));
    CHECK(j.at("tower_preview").at("composition_identity") == true);
}

TEST_CASE("tower subcommand emits per-level dims and traces") {
    auto r = run("tower --graph " + graph("spinrow.json") + " --depth 8");
    CHECK(r.exit_code == 0);
    auto j = parse(r);
    REQUIRE(j.at("levels").size() == 9);
    CHECK(j.at("levels")[0].at("total_dim") == "1");
    CHECK(j.at("levels")[8].at("dims").size() >= 1);
    CHECK(j.at("growth_rate").get<double>() == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("tlj and couplings subcommands") {
    auto r = run("tlj --n 3 --lambda 1/4");
    CHECK(r.exit_code == 0);
    auto j = parse(r);
    CHECK(j.at("coefficients") == nlohmann::json({"1", "-3", "1"}));
    CHECK(j.at("value") == "5/32");  // (3+2)/2^4

    auto c = run("couplings --lambda 1/4 --nmax 6");
    CHECK(c.exit_code == 0);
    auto cj = parse(c);
    CHECK(cj.at("d")[0].get<double>() == Catch::Approx(2.0).margin(1e-9));
    CHECK(cj.at("eigen_diagnostic").contains("note"));

    auto lt = run("couplings --lambda 21/100 --mode locally-trivial --range-lo -1 --range-hi 2");
    CHECK(lt.exit_code == 0);
    auto lj = parse(lt);
    CHECK(lj.at("t").get<double>() == Catch::Approx(0.3).margin(1e-12));
    CHECK(lj.at("d_even").at("2").get<double>() == Catch::Approx(7.0 / 3.0).margin(1e-12));
}

TEST_CASE("index and basic-construction subcommands") {
    std::string scene = std::string(SUBSPEC_DATA_DIR) + "/../build_scene.json";
    {
        std::ofstream out(scene);
        out << R"({"blocks":[2],"trace_weights":["1/2"],
                   "subalgebras":{"B":[[[["1","0"],["0","0"]],[["0","0"],["1","0"]]]]}})";
    }
    auto r = run("index --scene " + scene + " --role B");
    CHECK(r.exit_code == 0);
    auto j = parse(r);
    CHECK(j.at("ind_ob").get<double>() == Catch::Approx(4.0).margin(1e-8));
    CHECK(j.at("lambda_E").get<double>() == Catch::Approx(0.5).margin(1e-6));

    auto bc = run("basic-construction --scene " + scene + " --role B");
    CHECK(bc.exit_code == 0);
    auto bj = parse(bc);
    CHECK(bj.at("m1_dimension") == 16);
    CHECK(bj.at("transpose_law_exact") == true);
    std::remove(scene.c_str());
}

TEST_CASE("query-e2 finds and misses") {
    auto hit = run("query-e2 --alpha 5 --max-vertices 6");
    CHECK(hit.exit_code == 0);
    auto j = parse(hit);
    CHECK(j.at("found") == true);
    CHECK(j.at("witness").at("cols") == 5);

    auto miss = run("query-e2 --alpha 3.5 --tol 1e-6 --max-vertices 6");
    CHECK(miss.exit_code == 1);
}

TEST_CASE("enumerate writes a resumable atlas") {
    std::string atlas = std::string(SUBSPEC_DATA_DIR) + "/../build_cli_atlas.jsonl";
    std::remove(atlas.c_str());
    auto r = run("enumerate --max-vertices 4 --atlas " + atlas);
    CHECK(r.exit_code == 0);
    auto j = parse(r);
    CHECK(j.at("graph_count").get<int>() > 0);
    CHECK(j.at("atlas_new_records").get<int>() == j.at("graph_count").get<int>());
    auto again = parse(run("enumerate --max-vertices 4 --atlas " + atlas));
    CHECK(again.at("atlas_new_records").get<int>() == 0);  // resumed, nothing new
    std::remove(atlas.c_str());
}

TEST_CASE("emit-dot") {
    auto r = run("emit-dot --graph " + graph("spinrow.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("graph G {") == 0);
}
