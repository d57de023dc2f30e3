#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "diagphase/circuit.hpp"
#include "diagphase/cli.hpp"

using namespace diagphase;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "diagphase");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("params prints the quadratic exponent") {
    Run r = run({"params", "--coulomb", "1,0.5,20", "--delta", "1e-3", "--degree", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("m_2 = 7") != std::string::npos);
    Run j = run({"params", "--coulomb", "1,0.5,20", "--delta", "1e-3", "--format", "json"});
    CHECK(nlohmann::json::parse(j.out)["m_2"] == 7);
}

TEST_CASE("verify an exact quadratic") {
    Run r = run({"verify", "--expr", "x*x", "--L", "1", "--n", "6", "--method", "ppp", "--degree", "2", "--delta", "1e-6",
                 "--format", "json"});
    CHECK(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["max_error"].get<double>() <= 1e-10);
    CHECK(j["ancilla_clean"] == true);
}

TEST_CASE("verify methods and failures") {
    for (const char* m : {"wal", "liu", "mliu", "ppp"}) {
        Run r = run({"verify", "--coulomb", "1,0.5,20", "--n", "8", "--method", m, "--delta", "1e-1"});
        INFO(m << ": " << r.out << r.err);
        CHECK(r.code == 0);
        CHECK(r.out.find("PASS") != std::string::npos);
    }
    // Periodic interpolation of a potential with different end values misses delta.
    Run bad = run({"verify", "--expr", "x", "--L", "4", "--n", "8", "--method", "liu", "--delta", "1e-1"});
    CHECK(bad.code == 2);
    Run wide = run({"verify", "--coulomb", "1,0.5,20", "--n", "15", "--method", "wal", "--delta", "1e-1"});
    CHECK(wide.code == 1);
    CHECK(wide.err.find("limited") != std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 1);
    CHECK(run({"params", "--delta", "1e-3"}).code == 1);
    CHECK(run({"params", "--coulomb", "1,0.5,20", "--expr", "x", "--L", "1", "--delta", "1e-3"}).code == 1);
    CHECK(run({"params", "--expr", "x", "--delta", "1e-3"}).code == 1);
    CHECK(run({"params", "--expr", "x +", "--L", "1", "--delta", "1e-3"}).code == 1);
    CHECK(run({"synth", "--coulomb", "1,0.5,20", "--n", "6", "--method", "nope"}).code == 1);
    CHECK(run({"bogus"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("synth writes a circuit that imports back") {
    Run r = run({"synth", "--coulomb", "1,0.5,20", "--n", "6", "--method", "mliu", "--delta", "1e-1"});
    REQUIRE(r.code == 0);
    Circuit c = import_circuit(r.out, CircuitFormat::Json);
    CHECK(c.n_sys() == 6);
    Run q = run({"synth", "--coulomb", "1,0.5,20", "--n", "6", "--method", "ppp", "--degree", "1", "--delta", "1e-1",
                 "--format", "qasm"});
    CHECK(q.code == 0);
    CHECK(q.out.rfind("OPENQASM 2.0;", 0) == 0);
}

TEST_CASE("counts agree between formula and circuit") {
    Run r = run({"counts", "--coulomb", "1,0.5,20", "--n", "9", "--delta", "1e-2", "--format", "json"});
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    int compared = 0;
    for (const auto& row : j["rows"]) {
        if (row["method"] == "PPP3") continue;
        REQUIRE(row.contains("built"));
        CHECK(row["analytic"]["cnot"] == row["built"]["cnot"]);
        CHECK(row["analytic"]["rz"] == row["built"]["rz"]);
        CHECK(row["analytic"]["h"] == row["built"]["h"]);
        ++compared;
    }
    CHECK(compared >= 5);
    Run t = run({"counts", "--coulomb", "1,0.5,20", "--n", "9", "--delta", "1e-2"});
    CHECK(t.out.find("selected:") != std::string::npos);

    Run x = run({"counts", "--coulomb", "1,0.5,20", "--n", "9", "--delta", "1e-2", "--crossover"});
    CHECK(nlohmann::json::parse(x.out)["in_delta"] == true);
}

TEST_CASE("sweep row at n = 19") {
    Run r = run({"sweep", "--coulomb", "1,0.5,20", "--delta", "1e-1", "--n", "19"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("delta,n,method,cnot,rz,h,depth_bound,ancilla,m,M_tilde", 0) == 0);
    CHECK(r.out.find(",19,PPP1,3586,") != std::string::npos);
    CHECK(r.out.find(",19,PPP2,11584,") != std::string::npos);
}

TEST_CASE("estimate and schedule") {
    Run e = run({"estimate", "--Ne", "2", "--Nnuc", "1", "--d", "3", "--n", "8", "--L", "4", "--t", "1", "--eps", "1e-2",
                 "--format", "json"});
    REQUIRE(e.code == 0);
    nlohmann::json j = nlohmann::json::parse(e.out);
    CHECK(j["estimate"]["total_qubits"] == 67);
    CHECK(j["estimate"]["n_dis"] == 18);

    const std::string path = "test_cli_config.json";
    {
        std::ofstream f(path);
        f << R"J({"Ne": 2, "Nnuc": 1, "d": 3, "n": 8, "L": 2, "t": 10, "eps": 1e-3, "variant": "arith_sequential",
                 "v_en": {"coulomb": {"charge": -1, "a2": 1}}, "v_ee": {"expr": "1/sqrt(x+1)"}})J";
    }
    Run c = run({"estimate", "--config", path});
    std::remove(path.c_str());
    CHECK(c.code == 0);
    CHECK(c.out.find("arith_sequential") != std::string::npos);
    CHECK(run({"estimate", "--variant", "sideways"}).code == 1);

    Run s = run({"schedule", "--N", "4"});
    CHECK(s.code == 0);
    CHECK(s.out.find("[4] (1,1) (2,2) (3,3) (4,4)") != std::string::npos);
    CHECK(s.out.find("cover ok, disjoint ok, no reuse ok") != std::string::npos);
    CHECK(run({"schedule", "--N", "0"}).code == 1);
}
