#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "walsheq/cli.hpp"

using namespace walsheq;
using json = nlohmann::ordered_json;

namespace {
struct Invocation {
    int code;
    std::string out;
    std::string err;
    json report() const { return json::parse(out); }
};

Invocation invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("walsheq_cli_" + name)).string();
}

json without_timing(json j) {
    j.erase("timing");
    return j;
}
}  // namespace

TEST(Cli, CountWithVerdict) {
    const auto r = invoke({"count", "--set", "A", "--n", "4", "--ordering", "kaczmarz"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.report();
    EXPECT_EQ(j["command"], "count");
    EXPECT_EQ(j["tool_version"], tool_version);
    const auto& row = j["results"][0];
    EXPECT_EQ(row["count"], count_A(4, make_named_ordering(NamedOrdering::kaczmarz, 4)).count);
    EXPECT_EQ(row["verdict"], "pass");
    EXPECT_EQ(row["bound"], 1296);
}

TEST(Cli, CountAllSets) {
    for (const std::string set : {"A", "A_v", "A_tilde", "B", "A_hat", "psi"}) {
        const auto r = invoke({"count", "--set", set, "--n", "3", "--ordering", "walsh", "--v", "1"});
        EXPECT_EQ(r.code, 0) << set << r.err;
    }
    const auto psi = invoke({"count", "--set", "psi", "--n", "5", "--psi", "identity"});
    EXPECT_EQ(psi.report()["results"][0]["count"], 243);
    const auto tilde = invoke({"count", "--set", "A_tilde", "--n", "3", "--ordering", "kaczmarz"});
    EXPECT_EQ(tilde.report()["results"][0]["count"],
              count_A_tilde(3, make_named_ordering(NamedOrdering::kaczmarz, 4)).count);
}

TEST(Cli, NormBothMethodsAgree) {
    const auto r = invoke({"norm", "--n", "3", "--ordering", "paley", "--p", "4", "--method", "both"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.report();
    ASSERT_EQ(j["results"].size(), 2u);
    const double grid = j["results"][0]["value"], count = j["results"][1]["value"];
    EXPECT_LE(std::abs(std::pow(grid, 4) - std::pow(count, 4)) / std::pow(count, 4), 1e-9);
    EXPECT_EQ(j["results"][0]["agree"], true);
    const auto tail = invoke({"norm", "--n", "3", "--ordering", "kaczmarz", "--variant", "tail", "--method", "both",
                              "--rp-bound"});
    EXPECT_EQ(tail.code, 0) << tail.err;
    EXPECT_TRUE(tail.report()["results"][0].contains("rp_lower_bound"));
}

TEST(Cli, SearchExhaustive) {
    const auto r = invoke({"search", "--n", "3", "--mode", "exhaustive"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto row = r.report()["results"][0];
    EXPECT_EQ(row["max_count"], 27);
    EXPECT_EQ(row["conjecture_holds"], true);
    EXPECT_EQ(row["bound_3n"], 27);
    EXPECT_EQ(row["maximizer_count"], 168);
    for (const char* key : {"n", "mode", "max_count", "bound_3n", "conjecture_holds", "nodes_visited", "wall_seconds",
                            "witness"}) {
        EXPECT_TRUE(row.contains(key)) << key;
    }
}

TEST(Cli, SearchCheckpointResume) {
    const std::string path = temp_path("ckpt.json");
    std::filesystem::remove(path);
    int rounds = 0;
    json row;
    std::uint64_t budget = 0;
    do {
        budget += 5000;
        const auto r = invoke({"search", "--n", "4", "--checkpoint", path, "--node-budget", std::to_string(budget),
                               "--threads", "1"});
        ASSERT_EQ(r.code, 0) << r.err;
        row = r.report()["results"][0];
        ASSERT_LT(++rounds, 100);
    } while (!row["complete"].get<bool>());
    EXPECT_GT(rounds, 1);
    EXPECT_EQ(row["max_count"], 81);
    EXPECT_EQ(row["coverage"], 1.0);
    const auto full = invoke({"search", "--n", "4", "--threads", "1"}).report()["results"][0];
    EXPECT_EQ(row["nodes_visited"], full["nodes_visited"]);
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_TRUE(parse_checkpoint(text.str()).complete());

    std::ofstream(path) << "{\"version\": \"bsearch-0\"}";
    EXPECT_EQ(invoke({"search", "--n", "4", "--checkpoint", path}).code, 2);
    std::filesystem::remove(path);
}

TEST(Cli, VerifySuites) {
    for (const std::string suite : {"bounds", "perturbation", "identities", "subset"}) {
        const auto r = invoke({"verify", "--suite", suite, "--n", "3", "--samples", "3", "--seed", "5"});
        EXPECT_EQ(r.code, 0) << suite << r.err;
        for (const auto& row : r.report()["results"]) EXPECT_EQ(row["pass"], true) << suite;
    }
}

TEST(Cli, DecayTable) {
    const auto r = invoke({"decay", "--n-max", "6"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = r.report()["results"];
    ASSERT_EQ(rows.size(), 7u);
    EXPECT_EQ(rows[1]["ratio8"], 0.75);
    for (const auto& row : rows) EXPECT_EQ(row["nonincreasing"], true);
}

TEST(Cli, CsvMatchesJson) {
    const auto j = invoke({"decay", "--n-max", "4"}).report();
    const auto c = invoke({"decay", "--n-max", "4", "--format", "csv"});
    ASSERT_EQ(c.code, 0);
    std::istringstream lines(c.out);
    std::string header, line;
    std::getline(lines, header);
    EXPECT_EQ(header.substr(0, 15), "set_kind,n,v,co");
    std::size_t i = 0;
    while (std::getline(lines, line)) {
        const auto& row = j["results"][i++];
        const std::string expected_prefix = row["set_kind"].get<std::string>() + "," + row["n"].dump() + ",," +
                                            row["count"].dump() + ",";
        EXPECT_EQ(line.substr(0, expected_prefix.size()), expected_prefix);
    }
    EXPECT_EQ(i, j["results"].size());
}

TEST(Cli, DeterministicApartFromTiming) {
    const std::vector<std::string> args = {"verify", "--suite", "all", "--n", "3", "--samples", "2", "--seed", "9"};
    EXPECT_EQ(without_timing(invoke(args).report()).dump(), without_timing(invoke(args).report()).dump());
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "3"});
    EXPECT_EQ(without_timing(invoke(args).report())["results"].dump(),
              without_timing(invoke(threaded).report())["results"].dump());
}

TEST(Cli, OutFile) {
    const std::string path = temp_path("out.json");
    const auto r = invoke({"count", "--set", "B", "--n", "5", "--out", path});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    EXPECT_EQ(json::parse(in)["results"][0]["count"], 243);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"count", "--set", "A"}).code, 2);
    EXPECT_EQ(invoke({"count", "--n", "3", "--set", "Q"}).code, 2);
    EXPECT_EQ(invoke({"count", "--n", "3", "--ordering", "hadamard"}).code, 2);
    EXPECT_EQ(invoke({"count", "--n", "3", "--ordering", "table:missing.txt"}).code, 2);
    EXPECT_EQ(invoke({"count", "--n", "3", "--format", "xml"}).code, 2);
    EXPECT_EQ(invoke({"search", "--n", "4", "--mode", "exhaustive"}).code, 2);
    EXPECT_EQ(invoke({"norm", "--n", "3", "--p", "3", "--method", "count"}).code, 2);
    EXPECT_EQ(invoke({"--help"}).code, 0);
    EXPECT_EQ(invoke({"--version"}).code, 0);
}

TEST(Cli, NoApplicableBoundHasNoVerdict) {
    const auto r = invoke({"count", "--set", "A", "--n", "3", "--ordering", "subset:0,1,2:4"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.report()["results"][0]["verdict"].is_null());
}

TEST(Cli, FailedCrossCheckExitsOne) {
    // 8 s-points cannot integrate |F|^4 exactly at n = 3
    const auto r = invoke({"norm", "--n", "3", "--method", "both", "--grid-s", "8"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.report()["results"][0]["agree"], false);
}
