#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "gla/declfile.hpp"

#ifndef GLA_CLI_PATH
#error "GLA_CLI_PATH must point at the built CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(GLA_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    return RunResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, std::move(out)};
}

std::string write_temp(const char* name, const std::string& content) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

}  // namespace

TEST_CASE("ids-check on the Heisenberg distribution fails with a witness") {
    RunResult r = run_cli("ids-check --fixture HEIS --ids main --method all");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("[S1,S2] = T3") != std::string::npos);
    CHECK(r.out.find("verdict: not involutive") != std::string::npos);
}

TEST_CASE("mc-check passes on so(3)") {
    RunResult r = run_cli("mc-check --fixture SO3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("verdict: pass") != std::string::npos);
}

TEST_CASE("validate rejects an antisymmetry violation") {
    std::string path = write_temp("gla_bad_antisym.json", R"({
        "coordinates": ["x1"],
        "rank": 2,
        "anchor": [],
        "structure": [
            {"gamma": 1, "alpha": 1, "beta": 2, "expr": "1"},
            {"gamma": 1, "alpha": 2, "beta": 1, "expr": "1"}
        ]
    })");
    RunResult r = run_cli("validate " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("antisymmetry: FAIL") != std::string::npos);
}

TEST_CASE("input errors exit with code 2") {
    CHECK(run_cli("validate /tmp/gla_no_such_file.json").exit_code == 2);
    CHECK(run_cli("validate --fixture NOPE").exit_code == 2);
    CHECK(run_cli("ids-check --fixture HEIS --ids missing").exit_code == 2);
    std::string path = write_temp("gla_bad_syntax.json", "{ not json");
    CHECK(run_cli("validate " + path).exit_code == 2);
    std::string bad_expr = write_temp("gla_bad_expr.json", R"({
        "coordinates": ["x1"], "rank": 1,
        "anchor": [{"i": 1, "alpha": 1, "expr": "y9 +"}]
    })");
    CHECK(run_cli("validate " + bad_expr).exit_code == 2);
}

TEST_CASE("json and text modes agree on verdicts") {
    for (const char* fixture : {"TB1", "TB2", "TB3", "SO3", "HEIS", "SO3H"}) {
        std::string base = std::string("validate --fixture ") + fixture;
        CHECK(run_cli(base).exit_code == run_cli(base + " --json").exit_code);
        std::string mc = std::string("mc-check --fixture ") + fixture;
        CHECK(run_cli(mc).exit_code == run_cli(mc + " --json").exit_code);
    }
    RunResult a = run_cli("ids-check --fixture HEIS --ids main --json");
    RunResult b = run_cli("ids-check --fixture HEIS --ids main");
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out.find("\"verdict\": \"not involutive\"") != std::string::npos);
}

TEST_CASE("conn-check runs the so(3) connections") {
    CHECK(run_cli("conn-check --fixture SO3 --connection zero").exit_code == 0);
    CHECK(run_cli("conn-check --fixture SO3 --connection torsionfree "
                  "--identities cartan,bianchi").exit_code == 0);
    CHECK(run_cli("conn-check --fixture SO3 --connection nope").exit_code == 2);
    CHECK(run_cli("conn-check --fixture SO3 --connection zero --identities frobnicate")
              .exit_code == 2);
}

TEST_CASE("deterministic output: reruns are byte-identical") {
    for (const char* cmd : {"validate --fixture SO3H --json",
                            "ids-check --fixture HEIS --ids main --method all --json",
                            "mc-check --fixture TB2"}) {
        RunResult a = run_cli(cmd);
        RunResult b = run_cli(cmd);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("declaration round trip on the fixture set") {
    using nlohmann::json;
    for (const char* name : {"TB1", "TB2", "TB3", "SO3", "HEIS", "SO3H"}) {
        gla::Declaration d = gla::declaration_from_fixture(gla::builtin(name));
        json once = gla::export_declaration(d);
        json twice = gla::export_declaration(gla::parse_declaration(once));
        CHECK(once == twice);
    }
}

TEST_CASE("file-driven computation: bracket, d, wedge, ip, lie") {
    std::string path = write_temp("gla_tb2.json", R"({
        "coordinates": ["x1", "x2"],
        "rank": 2,
        "anchor": [{"i": 1, "alpha": 1, "expr": "1"}, {"i": 2, "alpha": 2, "expr": "1"}],
        "structure": [],
        "sections": {"u": ["1", "0"], "v": ["0", "x1"]},
        "forms": {
            "f": {"degree": 0, "terms": [{"indices": [], "expr": "x1*x2"}]},
            "w": {"degree": 1, "terms": [{"indices": [2], "expr": "x1"}]}
        }
    })");
    RunResult br = run_cli("bracket " + path + " --u u --v v");
    CHECK(br.exit_code == 0);
    CHECK(br.out.find("[u,v] = T2") != std::string::npos);

    RunResult df = run_cli("d " + path + " --form f");
    CHECK(df.exit_code == 0);
    CHECK(df.out.find("x2*t1 + x1*t2") != std::string::npos);

    RunResult wd = run_cli("wedge " + path + " --a w --b w --json");
    CHECK(wd.exit_code == 0);
    CHECK(wd.out.find("\"terms\": []") != std::string::npos);

    RunResult ip = run_cli("ip " + path + " --section v --form w");
    CHECK(ip.exit_code == 0);
    CHECK(ip.out.find("= x1^2") != std::string::npos);

    RunResult lie = run_cli("lie " + path + " --section u --form w");
    CHECK(lie.exit_code == 0);
    CHECK(lie.out.find("= t2") != std::string::npos);
}

TEST_CASE("pullback along a declared morphism") {
    std::string target = write_temp("gla_pb_target.json", R"({
        "coordinates": ["x1", "x2"],
        "rank": 2,
        "anchor": [{"i": 1, "alpha": 1, "expr": "1"}, {"i": 2, "alpha": 2, "expr": "1"}],
        "structure": [],
        "forms": {"w": {"degree": 2, "terms": [{"indices": [1, 2], "expr": "1"}]}}
    })");
    std::string map = write_temp("gla_pb_map.json", R"({
        "source": {
            "coordinates": ["x1", "x2"],
            "rank": 2,
            "anchor": [{"i": 1, "alpha": 1, "expr": "1"}, {"i": 2, "alpha": 2, "expr": "1"}],
            "structure": []
        },
        "matrix": [{"row": 1, "col": 1, "expr": "2"}, {"row": 2, "col": 2, "expr": "3"}],
        "base_map": ["x1", "x2"],
        "base_inverse": ["x1", "x2"]
    })");
    RunResult r = run_cli("pullback " + target + " --map " + map + " --form w");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("6*t1*t2") != std::string::npos);
}
