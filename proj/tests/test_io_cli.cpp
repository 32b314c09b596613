#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conelab/json_io.hpp"
#include "conelab/random.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

using namespace conelab;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string cmd =
        env_prefix + std::string(CONELAB_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/conelab_test_") + name;
}

}  // namespace

TEST_CASE("matrix json round trip is exact") {
    const HermitianMatrix h = random_hermitian(4, 50);
    const Matrix back = matrix_from_json(matrix_to_json(h.mat()));
    CHECK((back - h.mat()).norm() == 0.0);

    const BipartiteOperator x(2, 3, random_hermitian(6, 51));
    const BipartiteOperator y = bipartite_from_json(bipartite_to_json(x));
    CHECK(y.bitwise_equal(x));
}

TEST_CASE("matrix json rejects malformed input") {
    CHECK_THROWS_AS(matrix_from_json(Json{{"n", 2}}), InputError);
    const Json inf_entry{
        {"n", 1},
        {"entries", Json::array({Json::array(
                        {Json::array({std::numeric_limits<double>::infinity(), 0.0})})})}};
    CHECK_THROWS_AS(matrix_from_json(inf_entry), InputError);
    const Json nan_entry{
        {"n", 1},
        {"entries", Json::array({Json::array(
                        {Json::array({std::numeric_limits<double>::quiet_NaN(), 0.0})})})}};
    CHECK_THROWS_AS(matrix_from_json(nan_entry), InputError);

    Json bad_dim = bipartite_to_json(BipartiteOperator::identity(2, 2));
    bad_dim["s"] = 3;  // mat is 4x4 but d*s = 6
    CHECK_THROWS_AS(bipartite_from_json(bad_dim), InputError);

    // non-Hermitian beyond tolerance
    Json skew = Json::parse(R"({"d":1,"s":2,"mat":{"n":2,"entries":
        [[[0,0],[1,0]],[[-1,0],[0,0]]]}})");
    CHECK_THROWS_AS(bipartite_from_json(skew), InputError);

    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"n":1,"entries":[[[0]]]})")), InputError);
}

TEST_CASE("verdict json carries status, residual and tagged certificate") {
    ToleranceConfig cfg;
    const BipartiteOperator m = slice_matrix({3.0, 0.0});
    const Json j = verdict_to_json(member_decomp(m, cfg));
    CHECK(j.contains("status"));
    CHECK(j.contains("residual"));
    CHECK(j.contains("certificate"));
    CHECK(j["status"] == "out");
    CHECK(j["certificate"]["kind"] == "dual_witness");
    CHECK(j["certificate"]["w"]["d"] == 2);

    const Json in = verdict_to_json(member_psd(BipartiteOperator::identity(2, 2), cfg));
    CHECK(in["status"] == "in");
    CHECK(in["certificate"]["kind"] == "none");
}

TEST_CASE("cone json round trip") {
    const PolyhedralCone square = PolyhedralCone::square_cone();
    const PolyhedralCone back = cone_from_json(cone_to_json(square));
    CHECK(back.dim == 3);
    CHECK(back.rays.size() == 4);
    CHECK(back.dual_rays.size() == 4);

    Json bad = cone_to_json(square);
    bad["order_unit"] = Json::array({0.0, 0.0, -1.0});
    CHECK_THROWS_AS(cone_from_json(bad), InputError);
}

TEST_CASE("cli membership via slice parameters") {
    CHECK(run_cli("membership --cone decomp --slice 3 0").exit_code == 1);
    CHECK(run_cli("membership --cone decomp --slice 0 1").exit_code == 0);
    CHECK(run_cli("membership --cone psd --slice 0 1").exit_code == 0);
    CHECK(run_cli("membership --cone bpsd --slice 3 0").exit_code == 1);

    const RunResult out = run_cli("membership --cone decomp --slice 3 0");
    const Json j = Json::parse(out.output);
    CHECK(j["status"] == "out");
    CHECK(j["certificate"]["kind"] == "dual_witness");
}

TEST_CASE("cli membership via file input and input errors") {
    const std::string path = temp_path("psd_input.json");
    {
        std::ofstream f(path);
        f << bipartite_to_json(BipartiteOperator(2, 2, random_psd(4, 62))).dump();
    }
    CHECK(run_cli("membership --cone psd --input " + path).exit_code == 0);
    CHECK(run_cli("membership --cone sep --input " + path).exit_code == 0);

    const std::string bad = temp_path("broken.json");
    {
        std::ofstream f(bad);
        f << "{\"d\": 2, ";
    }
    CHECK(run_cli("membership --cone psd --input " + bad).exit_code == 3);
    CHECK(run_cli("membership --cone psd --input /nonexistent.json").exit_code == 3);
    CHECK(run_cli("membership --cone sep --slice 3 0 --tol 1e-9").exit_code == 1);
}

TEST_CASE("cli slice summary") {
    const RunResult res = run_cli("slice 0 1");
    CHECK(res.exit_code == 0);
    const Json j = Json::parse(res.output);
    CHECK(j["region"] == "s1");
    CHECK(j["psd_slice"] == true);
    CHECK(j["psd"] == "in");
    CHECK(j["decomp"] == "in");
    CHECK(j["brute_force"] == true);
}

TEST_CASE("cli scan emits the exact header and is seed deterministic") {
    const std::string out1 = temp_path("scan1.csv");
    const std::string out2 = temp_path("scan2.csv");
    const std::string grid = "--grid -2 2 -0.5 2 9 7 ";
    CHECK(run_cli("--seed 11 scan " + grid + "--out " + out1).exit_code == 0);
    // CONELAB_SEED is the fallback seed; threads must not change the bytes
    CHECK(run_cli("--threads 2 scan " + grid + "--out " + out2, "CONELAB_SEED=11 ").exit_code ==
          0);

    std::ifstream f1(out1), f2(out2);
    const std::string text1((std::istreambuf_iterator<char>(f1)),
                            std::istreambuf_iterator<char>());
    const std::string text2((std::istreambuf_iterator<char>(f2)),
                            std::istreambuf_iterator<char>());
    CHECK(text1 == text2);
    CHECK(text1.rfind("a,b,region,psd_slice,psd,ppt,decomp,decomp_residual,brute_force\n", 0) ==
          0);
    CHECK(std::count(text1.begin(), text1.end(), '\n') == 1 + 9 * 7);
}

TEST_CASE("cli kraus") {
    const std::string path = temp_path("choi.json");
    {
        std::ofstream f(path);
        f << bipartite_to_json(BipartiteOperator(2, 2, random_psd(4, 63))).dump();
    }
    const RunResult res = run_cli("kraus --input " + path);
    CHECK(res.exit_code == 0);
    const Json j = Json::parse(res.output);
    CHECK(j["reconstruction_error"].get<double>() <= 1e-8);

    // not psd: precondition violation is an input error
    const std::string swap_path = temp_path("swap.json");
    {
        std::ofstream f(swap_path);
        f << bipartite_to_json(choi_matrix(LinearMapSpec::transposition(2))).dump();
    }
    CHECK(run_cli("kraus --input " + swap_path).exit_code == 3);
}

TEST_CASE("cli liftcheck and minmax") {
    const std::string pts = temp_path("points.json");
    {
        std::ofstream f(pts);
        f << "[[0.0, 1.0], [3.0, 0.0]]";
    }
    CHECK(run_cli("liftcheck --d 3 --s 3 --points " + pts).exit_code == 0);

    const std::string cone = temp_path("square.json");
    {
        std::ofstream f(cone);
        f << cone_to_json(PolyhedralCone::square_cone()).dump();
    }
    const RunResult res = run_cli("--seed 3 minmax --input " + cone + " --count 20");
    CHECK(res.exit_code == 0);
    const Json j = Json::parse(res.output);
    CHECK(j["passed"] == true);
    CHECK(j["gap_element_found"] == true);
}
