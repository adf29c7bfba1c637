#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "popcorn/cli.hpp"

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "popcorn");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = popcorn::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

} // namespace

TEST_CASE("formula command") {
    const Run r = run({"formula", "--t", "1", "--d", "2"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["box"] == "4/3");
    CHECK(j["assouad"] == "2/1");
    CHECK(j["profile"].size() == 101);
    CHECK(j["profile"][0][1] == "1/1");
    CHECK(j["profile"][25][1] == "1/1");
    CHECK(j["profile"][50][1] == "1/1");
    CHECK(j["profile"][75][1] == "6/5");
    CHECK(j["profile"][100][1] == "4/3");

    const auto collapsed = nlohmann::json::parse(run({"formula", "--t", "2", "--d", "2"}).out);
    CHECK(collapsed["box"] == "1/1");
    CHECK(collapsed["assouad"] == "1/1");
    for (const auto& p : collapsed["profile"]) CHECK(p[1] == "1/1");

    const Run csv = run({"formula", "--format", "csv"});
    CHECK(csv.out.rfind("theta,theta_decimal,dim,dim_decimal\n0/1,0,1/1,1\n", 0) == 0);
}

TEST_CASE("malformed input exits with 2") {
    CHECK(run({"formula", "--t", "0/3"}).code == 2);
    CHECK(run({"formula", "--t", "1/0"}).code == 2);
    CHECK(run({"formula", "--t", "x"}).code == 2);
    CHECK(run({"formula", "--d", "1"}).code == 2);
    CHECK(run({"formula", "--variant", "other"}).code == 2);
    CHECK(run({"formula", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"count", "--j-min", "5", "--j-max", "3"}).code == 2);
    CHECK(run({"estimate", "--target", "intermediate"}).code == 2); // theta missing
    CHECK(run({"estimate", "--target", "nothing"}).code == 2);
    CHECK(run({"verify", "--suite", "nothing"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("count command") {
    const Run r = run({"count", "--t", "1", "--d", "2", "--j-min", "2", "--j-max", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "j,delta,total,base_cells,popcorn_cells\n2,0.25,8,4,4\n");

    const Run many = run({"count", "--j-min", "1", "--j-max", "9", "--format", "json"});
    const auto rows = nlohmann::json::parse(many.out);
    REQUIRE(rows.size() == 9);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i]["total"] >= rows[i - 1]["total"]);

    CHECK(run({"count", "--d", "3", "--j-min", "7", "--j-max", "7"}).code == 0);
    const Run capped = run({"count", "--d", "3", "--j-min", "9", "--j-max", "9", "--max-points", "1000"});
    CHECK(capped.code == 3);
    CHECK(capped.err.find("predicted") != std::string::npos);
}

TEST_CASE("holder command") {
    const auto j = nlohmann::json::parse(run({"holder", "--d", "2", "--t1", "0.3", "--t2", "1"}).out);
    CHECK(j["alpha_bound"] == "13/20");
    CHECK(j["alpha_bound_decimal"] == 0.65);
    CHECK(j["theta_star"] == "1/2");
    CHECK(nlohmann::json::parse(run({"holder", "--d", "3", "--t1", "1", "--t2", "3/2"}).out)["alpha_bound"] == "8/9");
    CHECK(run({"holder", "--t1", "1", "--t2", "1"}).code == 2);
    CHECK(run({"holder", "--t1", "1"}).code == 2);
    const Run csv = run({"holder", "--t1", "3/10", "--t2", "1", "--format", "csv"});
    CHECK(csv.out.find("1/2,0.5,13/20,0.65000000000000002\n") != std::string::npos);
}

TEST_CASE("verify command") {
    const std::string bad = temp_path("popcorn_bad_matrix.json");
    std::ofstream(bad) << R"({"singles": [0.5, 0.5], "pairs": [[0.5, 0.6], [0.6, 0.5]]})";
    CHECK(run({"verify", "--suite", "chung-erdos", "--input", bad}).code == 2);
    std::ofstream(bad) << R"({"singles": [0.5, 0.5], "pairs": [[0.5, 0.1]]})";
    CHECK(run({"verify", "--suite", "chung-erdos", "--input", bad}).code == 2);
    std::ofstream(bad) << "not json";
    CHECK(run({"verify", "--suite", "chung-erdos", "--input", bad}).code == 2);

    const std::string good = temp_path("popcorn_good_matrix.json");
    std::ofstream(good) << R"({"singles": ["1/4", "1/4"], "pairs": [["1/4", "1/8"], ["1/8", "1/4"]]})";
    const Run ok = run({"verify", "--suite", "chung-erdos", "--input", good});
    CHECK(ok.code == 0);
    CHECK(nlohmann::json::parse(ok.out)["bound"] == "1/3");
    std::filesystem::remove(bad);
    std::filesystem::remove(good);

    const Run eps = run({"verify", "--suite", "epsilon", "--epsilon", "1/32"});
    CHECK(eps.code == 2);
    CHECK(eps.err.find("1/96") != std::string::npos);

    const Run coarse = run({"verify", "--suite", "epsilon", "--j-min", "1", "--j-max", "10"});
    CHECK(coarse.code == 1);
    CHECK_FALSE(nlohmann::json::parse(coarse.out)["counterexamples"].empty());

    CHECK(run({"verify", "--suite", "epsilon"}).code == 0);
    CHECK(run({"verify", "--suite", "layers"}).code == 0);
    CHECK(run({"verify", "--suite", "chung-erdos"}).code == 0);
    CHECK(run({"verify", "--suite", "totient"}).code == 0);
    CHECK(run({"verify", "--suite", "duffin-schaeffer"}).code == 0);
}

TEST_CASE("estimate command") {
    const auto box = nlohmann::json::parse(run({"estimate", "--target", "box", "--j-min", "8", "--j-max", "12"}).out);
    CHECK(box["formula_value"] == "4/3");
    CHECK(box["estimate"].get<double>() > 1.25);
    CHECK(box["scales"].size() == 5);
    CHECK(run({"estimate", "--target", "box", "--j-min", "8", "--j-max", "9"}).code == 3);

    const auto mid = nlohmann::json::parse(run({"estimate", "--target", "intermediate", "--theta", "3/4", "--j-max", "12"}).out);
    CHECK(mid["formula_value"] == "6/5");
    CHECK(std::abs(mid["gap"].get<double>()) < 0.1);
    CHECK(run({"estimate", "--target", "intermediate", "--theta", "1/4"}).code == 2);

    const auto asd = nlohmann::json::parse(run({"estimate", "--target", "assouad", "--t", "3"}).out);
    CHECK(asd["formula_value"] == "1/1");
    CHECK(asd["estimate"].get<double>() <= 1.1);
    CHECK(run({"estimate", "--target", "box", "--format", "csv"}).code == 2);
}

TEST_CASE("output is byte deterministic and --out writes a file") {
    const std::vector<std::string> args{"estimate", "--target", "assouad", "--t", "3", "--seed", "17"};
    CHECK(run(args).out == run(args).out);
    const std::vector<std::string> layers{"layers", "--j-max", "9"};
    CHECK(run(layers).out == run(layers).out);

    const std::string path = temp_path("popcorn_count.csv");
    const Run r = run({"count", "--j-min", "2", "--j-max", "3", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == run({"count", "--j-min", "2", "--j-max", "3"}).out);
    std::filesystem::remove(path);
}

TEST_CASE("layers and points commands") {
    const Run r = run({"layers", "--j-max", "8"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("k,l_low,l_high,sum_measure,pair_sum,ce_floor,cover_count\n6,36,42,", 0) == 0);
    const auto j = nlohmann::json::parse(run({"layers", "--j-max", "8", "--format", "json"}).out);
    CHECK(j.front()["k"] == 6);
    CHECK(run({"points", "--j-max", "2"}).out == "2 1\n3 1\n3 2\n4 1\n4 3\n");
    CHECK(run({"layers", "--t", "2"}).code == 2);
}
