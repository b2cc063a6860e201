#include <doctest.h>

#include "cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using dokconst::run_cli;
using nlohmann::json;

namespace {

const std::string kDir = DOKCONST_FIXTURE_DIR;

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("relations") {
    auto r = cli({"relations", "D2q:3"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("group D2q:3\nrank 1\n", 0) == 0);
    auto j = cli({"relations", "D2q:5", "--json"});
    REQUIRE(j.code == 0);
    auto parsed = json::parse(j.out);
    CHECK(parsed["rank"] == 1);
    CHECK(cli({"relations", "D2q:15"}).out.find("rank 3") != std::string::npos);
    CHECK(cli({"relations", "bogus"}).code != 0);
}

TEST_CASE("dok") {
    auto r = cli({"dok", "--group", "D2q:3", "--lattice", "zoo:Aprime", "--method", "both"});
    CHECK(r.code == 0);
    CHECK(r.out.find("MISMATCH") == std::string::npos);
    auto j = cli({"dok", "--group", "D2q:3", "--lattice", "triv", "--method", "both", "--json"});
    REQUIRE(j.code == 0);
    auto arr = json::parse(j.out);
    REQUIRE(arr.size() == 2);
    for (const auto& rec : arr) {
        CHECK(rec["value"] == "1/3");
        CHECK(rec["factored"]["3"] == -1);
    }
    auto s = cli({"dok", "--group", "D2q:5", "--lattice", "sign", "--relation", "1 - 2*C2 - C5 + 2*G", "--json"});
    REQUIRE(s.code == 0);
    CHECK(json::parse(s.out)[0]["value"] == "5");
    CHECK(cli({"dok", "--group", "D2q:3", "--lattice", "zoo:B"}).code == 2);
    CHECK(cli({"dok", "--group", "D2q:3", "--relation", "1 - C2"}).code == 2);
}

TEST_CASE("zoo formats agree") {
    auto t = cli({"zoo", "--p", "5", "--table", "--format", "tsv"});
    auto j = cli({"zoo", "--p", "5", "--format", "json"});
    REQUIRE(t.code == 0);
    REQUIRE(j.code == 0);
    auto doc = json::parse(j.out);
    CHECK(doc["p"] == 5);
    std::istringstream lines(t.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "name\tconstant\tindex\tI\tstatus");
    std::size_t i = 0;
    while (std::getline(lines, line)) {
        REQUIRE(i < doc["rows"].size());
        const auto& row = doc["rows"][i++];
        std::istringstream cells(line);
        std::string name, c, idx, I, status;
        cells >> name >> c >> idx >> I >> status;
        CHECK(name == row["name"]);
        CHECK(c == row["constant"]);
        CHECK(idx == (row["index"].is_null() ? "-" : row["index"].get<std::string>()));
        CHECK(I == row["I"]);
        CHECK(status == row["status"]);
        CHECK(status != "mismatch");
    }
    CHECK(i == doc["rows"].size());
    CHECK(cli({"zoo", "--p", "17"}).code == 2);
    CHECK(cli({"zoo", "--p", "5", "--format", "xml"}).code == 2);
}

TEST_CASE("verify-fixture") {
    auto r = cli({"verify-fixture", kDir});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    auto j = cli({"verify-fixture", kDir + "/s3_x3-34x-6.json", "--json"});
    REQUIRE(j.code == 0);
    auto doc = json::parse(j.out);
    CHECK(doc[0]["pass"] == true);

    // a perturbed class number fails the audit
    std::ifstream in(kDir + "/s3_x3-34x-6.json");
    auto fx = json::parse(in);
    fx["fields"]["1"]["h_S"] = 36;
    auto tmp = std::filesystem::temp_directory_path() / "dokconst_perturbed.json";
    std::ofstream(tmp) << fx.dump();
    auto bad = cli({"verify-fixture", tmp.string()});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("FAIL") != std::string::npos);

    std::ofstream(tmp) << "{\"schema\": 1}";
    CHECK(cli({"verify-fixture", tmp.string()}).code == 1);
    std::filesystem::remove(tmp);
}

TEST_CASE("identify") {
    auto r = cli({"identify", kDir + "/s3_x3-34x-6.json", "--json"});
    REQUIRE(r.code == 0);
    auto doc = json::parse(r.out);
    REQUIRE(doc["final"].size() == 1);
    CHECK(doc["final"][0]["number"] == 2);
    auto plain = cli({"identify", kDir + "/s3_x3-34x-6.json", "--no-refinement", "--json"});
    REQUIRE(plain.code == 0);
    CHECK(json::parse(plain.out)["final"].size() == 2);
    CHECK(cli({"identify", kDir + "/d30_chain_synthetic.json"}).code != 0);
}

TEST_CASE("suite output is deterministic") {
    std::vector<std::string> args = {"suite", "--name", "multiplicativity", "--trials", "10", "--seed", "42", "--json"};
    auto a = cli(args), b = cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto doc = json::parse(a.out);
    CHECK(doc["passed"] == 10);
    CHECK(doc["seed"] == 42);
    auto c = cli({"suite", "--name", "multiplicativity", "--trials", "10", "--seed", "42", "--threads", "3", "--json"});
    CHECK(c.out == a.out);
    CHECK(cli({"suite", "--name", "nope"}).code == 2);
}

TEST_CASE("usage") {
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"zoo", "--p", "3", "--frobnicate"}).code == 2);
    CHECK(cli({}).code == 2);
    CHECK(cli({"relations"}).code == 2);
}
