#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lpe/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = lpe::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("energy") {
    const auto r = run({"energy", "--d", "3", "--m", "1", "--s", "2", "--k", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "90\n");
    CHECK(run({"energy", "--d", "3", "--m", "1", "--k", "3"}).out == "318\n");
}

TEST_CASE("enumerate") {
    CHECK(run({"enumerate", "--d", "3", "--m", "7"}).out == "3 7 sphere 0\n");
    const auto r = run({"enumerate", "--d", "3", "--m", "1"});
    CHECK(r.out.rfind("3 1 sphere 6\n-1 0 0\n", 0) == 0);
}

TEST_CASE("intersect") {
    const auto r = run({"intersect", "--family", "paraboloid4", "--m", "5", "--shifts", "(0,0,0,0);(1,0,0,3);(0,1,0,3)"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("count 11\n", 0) == 0);
    CHECK(run({"intersect", "--family", "paraboloid4", "--m", "5", "--shifts", "(0,0,0,0);(0,0,0,0)"}).code == 2);
    CHECK(run({"intersect", "--family", "paraboloid4", "--m", "5", "--shifts", "(0,x,0,0)"}).code == 2);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"energy", "--nope"}).code == 2);
    CHECK(run({"energy", "--d", "5", "--m", "1"}).code == 2);
    CHECK(run({"energy", "--m", "abc"}).code == 2);
    CHECK(run({"scan", "--m-min", "1", "--m-max", "3", "--format", "xml"}).code == 2);
    CHECK(run({"decompose", "--d", "3", "--m", "1", "--delta", "1/0"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("assertion failures exit 1") {
    // max_{n != 0} r_2(S_{3,2}) = 4 exceeds 2^0.49.
    CHECK(run({"check", "--d", "3", "--m", "2", "--tags", "trives"}).code == 1);
    CHECK(run({"check", "--d", "3", "--m", "2", "--tags", "trives", "--trives-exponent", "3"}).code == 0);
    CHECK(run({"decompose", "--d", "3", "--m", "1", "--threshold", "1"}).code == 0);
}

TEST_CASE("decompose json") {
    const auto r = run({"decompose", "--d", "3", "--m", "1", "--threshold", "1"});
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verification"] == "pass");
    CHECK(j["X"] == 0);
    CHECK(j["peels"].size() == 1);
    CHECK(j["delta"] == "1/1392");
}

TEST_CASE("scan and dft-check") {
    const auto r = run({"scan", "--family", "sphere4", "--m-min", "1", "--m-max", "5", "--odd", "--format", "json"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).size() == 3);
    const auto d = run({"dft-check", "--d", "3", "--m", "2", "--s", "2"});
    CHECK(d.code == 0);
    CHECK(d.out.find("match") != std::string::npos);
}

TEST_CASE("incidences from files") {
    const auto dir = std::filesystem::temp_directory_path() / "lpe_cli_test";
    std::filesystem::create_directories(dir);
    const auto pts = (dir / "p.txt").string();
    const auto var = (dir / "v.txt").string();
    CHECK(run({"enumerate", "--d", "3", "--m", "1", "--out", pts}).code == 0);
    std::ofstream(var) << "plane 1 0 0 1\nplane 0 1 0 0\nsphere-translate 3 1 0 0 0\n";
    const auto r = run({"incidences", "--points", pts, "--varieties", var, "--kst", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("total 11\n", 0) == 0);
    CHECK(run({"incidences", "--points", (dir / "missing").string(), "--varieties", var}).code == 2);
    std::filesystem::remove_all(dir);
}
