#include "nexp/cli.hpp"
#include "nexp/json_io.hpp"
#include "nexp/workloads.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace nexp;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
    Json report() const { return Json::parse(out); }
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "nexp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("nexp_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("expansivity certificate") {
    const auto r = invoke({"expansivity", "--n", "3", "--c", "1/4", "--k-hi", "20", "--seed", "7"});
    REQUIRE(r.code == cli::exit_ok);
    const auto rep = r.report();
    CHECK(rep["command"] == "expansivity");
    CHECK(rep["passed"] == true);
    CHECK(rep["config"]["system"]["n"] == 3);
    CHECK(rep["exactness"] == "exact");
    CHECK(rep["universe"].get<std::string>() != "n/a");
    for (const auto& [name, ok] : rep["checks"].items()) CHECK_MESSAGE(ok == true, name);
}

TEST_CASE("singleton ball at radius 0") {
    const auto r = invoke({"ball", "--center", "extra:1,5,0", "--radius", "0"});
    REQUIRE(r.code == cli::exit_ok);
    const auto ball = r.report()["result"];
    CHECK(ball["size"] == 1);
    CHECK(ball["members"][0]["point"] == Json(AugPoint::extra(1, 5, 0)));
    CHECK(ball["members"][0]["sup_distance"] == "0/1");
}

TEST_CASE("chain classes with CSV output") {
    const auto dir = scratch("classes");
    const auto r = invoke({"classes", "--n", "3", "--k-hi", "12", "--eps", "1/24", "--csv", "--out", dir.string()});
    REQUIRE(r.code == cli::exit_ok);
    const auto res = r.report()["result"];
    CHECK(res["extra_orbit_classes"].get<std::int64_t>() >= 24);
    CHECK(slurp(dir / "classes.json") == r.out);
    const auto csv = slurp(dir / "classes_edges.csv");
    CHECK(csv.rfind("u_index,v_index\n", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("identical config and seed give identical reports") {
    const std::vector<std::string> args{"shadow", "--seed", "11", "--count", "30"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    REQUIRE(a.code == cli::exit_ok);
    CHECK(a.out == b.out);
    const auto c = invoke({"shadow", "--seed", "12", "--count", "30"});
    CHECK(c.out != a.out);
    const std::vector<std::string> threaded{"classes", "--k-hi", "8", "--eps", "1/16", "--threads", "3"};
    const auto t3 = invoke(threaded);
    const auto t1 = invoke({"classes", "--k-hi", "8", "--eps", "1/16", "--threads", "1"});
    CHECK(t3.report()["result"] == t1.report()["result"]);
}

TEST_CASE("config file overrides flags") {
    const auto dir = scratch("config");
    std::ofstream(dir / "cfg.json") << R"({"system": {"n": 5}, "radius": "1/7", "center": "base:00000001||00000001@0"})";
    const auto r = invoke({"ball", "--n", "2", "--radius", "1/3", "--config", (dir / "cfg.json").string()});
    REQUIRE(r.code == cli::exit_ok);
    const auto rep = r.report();
    CHECK(rep["config"]["system"]["n"] == 5);
    CHECK(rep["config"]["radius"] == "1/7");
    CHECK(rep["result"]["size"] == 5);
    fs::remove_all(dir);
}

TEST_CASE("invalid input exits with 2") {
    CHECK(invoke({"expansivity", "--n", "3", "--c", "1/4"}).code == cli::exit_invalid_input);
    CHECK(invoke({"ball", "--radius", "one half"}).code == cli::exit_invalid_input);
    CHECK(invoke({"ball", "--radius", "1/2"}).code == cli::exit_invalid_input);
    CHECK(invoke({"ball", "--center", "extra:4,5,0"}).code == cli::exit_invalid_input);
    CHECK(invoke({"nonsense"}).code == cli::exit_invalid_input);
    CHECK(invoke({}).code == cli::exit_invalid_input);
    CHECK(invoke({"ball", "--config", "/nonexistent/cfg.json"}).code == cli::exit_invalid_input);

    const auto dir = scratch("input");
    PseudoOrbit broken{{AugPoint::extra(1, 4, 0), AugPoint::extra(1, 4, 3)}, Rat::dyadic(7)};
    std::ofstream(dir / "po.json") << Json(broken).dump();
    CHECK(invoke({"shadow", "--input", (dir / "po.json").string()}).code == cli::exit_invalid_input);
    fs::remove_all(dir);
}

TEST_CASE("a failed engine reports exit 1") {
    const auto r = invoke({"limit-shadow", "--prefix-exp", "5"});
    CHECK(r.code == cli::exit_check_failed);
    const auto rep = r.report();
    CHECK(rep["passed"] == false);
    CHECK(rep["checks"]["engine_completed"] == false);
}

TEST_CASE("shadowing a pseudo-orbit from a file") {
    const auto dir = scratch("shadow_input");
    const AugSystem sys{3, Variant::standard, 64};
    PseudoOrbit po{{}, Rat::dyadic(6)};
    po.points.push_back(AugPoint::base(BiSeq("0", "11", "01", 0)));
    for (int t = 0; t < 20; ++t) po.points.push_back(aug_map(sys, po.points.back()));
    po.points[10] = AugPoint::base(flip_at(po.points[10].seq(), 9));
    std::ofstream(dir / "po.json") << Json(po).dump();
    const auto r = invoke({"shadow", "--input", (dir / "po.json").string(), "--eps", "1/4"});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.report()["result"]["pseudo_orbits"] == 1);
    fs::remove_all(dir);
}

TEST_CASE("remaining subcommands pass") {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"construct", "--n", "3", "--k-hi", "10"},
             {"stable-count", "--k-hi", "10", "--seed", "1", "--samples", "20"},
             {"theorem-a", "--center", "base:0001||0001@0", "--eps", "1/3"},
             {"metric-axioms", "--seed", "3", "--triples", "2000"},
         }) {
        const auto r = invoke(args);
        CHECK_MESSAGE(r.code == cli::exit_ok, std::string(args.front() + ": " + r.err));
    }
}
