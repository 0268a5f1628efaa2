// End-to-end checks of the command-line binary: exit codes, report shape,
// and byte-level determinism. The binary path and data directory come in
// through compile definitions.

#include "test_helpers.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#if defined(__unix__) || defined(__APPLE__)
#include <sys/wait.h>
#endif

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RELKIT_CLI_PATH) + " " + args;
    int status = std::system(cmd.c_str());
#if defined(__unix__) || defined(__APPLE__)
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
#else
    return status;
#endif
}

std::string data_file(const std::string& name) {
    return std::string(RELKIT_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("\"timestamp\"") == std::string::npos) out << line << "\n";
    return out.str();
}

}  // namespace

TEST_CASE("classify commands succeed on valid documents") {
    CHECK(run_cli("classify --input " + data_file("r3.json") + " --out /tmp/relkit_c1.json") == 0);
    relkit::json rep = relkit::json::parse(slurp("/tmp/relkit_c1.json"));
    CHECK(rep["results"]["is_operator"] == false);
    CHECK(rep["results"]["is_singular"] == false);
    CHECK(rep["results"]["mul_dim"] == 1);

    CHECK(run_cli("classify --input " + data_file("operator.json") +
                  " --out /tmp/relkit_c2.json") == 0);
    relkit::json rep2 = relkit::json::parse(slurp("/tmp/relkit_c2.json"));
    CHECK(rep2["results"]["is_regular"] == true);

    CHECK(run_cli("classify --input " + data_file("product.json") +
                  " --out /tmp/relkit_c3.json") == 0);
    relkit::json rep3 = relkit::json::parse(slurp("/tmp/relkit_c3.json"));
    CHECK(rep3["results"]["is_singular"] == true);
}

TEST_CASE("emitted relation frames reload into equal relations") {
    REQUIRE(run_cli("decompose --input " + data_file("r3.json") +
                    " --mode lebesgue --out /tmp/relkit_d1.json") == 0);
    relkit::json rep = relkit::json::parse(slurp("/tmp/relkit_d1.json"));
    relkit::linear_relation t1 = relkit::relation_from_json(rep["results"]["t1"]);
    relkit::linear_relation t2 = relkit::relation_from_json(rep["results"]["t2"]);
    relkit::lebesgue_split expected = relkit::lebesgue(relkit_test::make_mixed_relation());
    CHECK(relkit::relations_equal(t1, expected.t1));
    CHECK(relkit::relations_equal(t2, expected.t2));
}

TEST_CASE("invalid inputs exit with code two") {
    CHECK(run_cli("classify --input /nonexistent/nope.json") == 2);
    const std::string bad = "/tmp/relkit_bad.json";
    std::ofstream(bad) << "{ this is not json";
    CHECK(run_cli("classify --input " + bad) == 2);
    std::ofstream(bad) << "{\"kind\":\"operator\",\"dim_h\":2,\"dim_k\":2,"
                          "\"payload\":{\"matrix\":[[1,0,0],[0,1,0]]}}";
    CHECK(run_cli("classify --input " + bad) == 2);
}

TEST_CASE("violated decomposition preconditions exit with code three") {
    const std::string m = "/tmp/relkit_m.json";
    std::ofstream(m) << "{\"ambient_dim\":2,\"vectors\":[[0,1]]}";
    CHECK(run_cli("decompose --input " + data_file("r3.json") + " --mode type --input2 " + m) == 3);
}

TEST_CASE("verify reports are deterministic modulo timestamps") {
    REQUIRE(run_cli("verify --seed 11 --count 10 --dims 4 --out /tmp/relkit_v1.json") == 0);
    REQUIRE(run_cli("verify --seed 11 --count 10 --dims 4 --out /tmp/relkit_v2.json") == 0);
    CHECK(strip_timestamp(slurp("/tmp/relkit_v1.json")) ==
          strip_timestamp(slurp("/tmp/relkit_v2.json")));
}

TEST_CASE("a corrupted rank tolerance makes verify exit nonzero") {
    CHECK(run_cli("verify --seed 42 --count 8 --dims 4 --tol-rank 0.5"
                  " --out /tmp/relkit_v3.json") == 1);
}

TEST_CASE("point-eval emits growth ratios and pair mode emits the psd split") {
    REQUIRE(run_cli("point-eval --levels 10 100 --points 0.37 --out /tmp/relkit_p1.json") == 0);
    relkit::json rep = relkit::json::parse(slurp("/tmp/relkit_p1.json"));
    CHECK(rep["results"]["norm_ratios"][0].get<double>() > 2.0);

    REQUIRE(run_cli("pair --input " + data_file("psd_a.json") + " --input2 " +
                    data_file("psd_b.json") + " --mode psd --out /tmp/relkit_p2.json") == 0);
    relkit::json prep = relkit::json::parse(slurp("/tmp/relkit_p2.json"));
    CHECK(prep["results"]["oracle_gap"].get<double>() <= 1e-6);
}

TEST_CASE("environment variable sets the rank tolerance unless a flag wins") {
    // An absurd env tolerance breaks verify; the flag restores the default.
    setenv("RELKIT_TOL_RANK", "0.5", 1);
    CHECK(run_cli("verify --seed 42 --count 5 --dims 3 --out /tmp/relkit_v4.json") == 1);
    CHECK(run_cli("verify --seed 42 --count 5 --dims 3 --tol-rank 1e-10"
                  " --out /tmp/relkit_v5.json") == 0);
    unsetenv("RELKIT_TOL_RANK");
}
