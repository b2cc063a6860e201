#include <doctest.h>

#include "dokconst/identify.hpp"
#include "dokconst/ledger.hpp"
#include "dokconst/zoo.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dokconst;
using nlohmann::json;

namespace {

const std::filesystem::path kDir = DOKCONST_FIXTURE_DIR;

json raw(const std::string& name) {
    std::ifstream in(kDir / name);
    return json::parse(in);
}

FieldFixture from(const json& j) { return parse_fixture(j.dump(), kDir / "inline.json"); }

}  // namespace

TEST_CASE("bundled fixtures load") {
    auto f = load_fixture(kDir / "s3_x3-34x-6.json");
    CHECK(f.group_descriptor == "D2q:3");
    CHECK(f.group->order() == 6);
    CHECK(f.q == 3);
    CHECK(f.field("1").h_S == 18);
    CHECK(f.field("1").r_S == 5);
    CHECK(f.unit_logs->rows.size() == 5);
    CHECK(f.unit_action->size() == 2);
    REQUIRE(f.refinement.has_value());
    CHECK(std::filesystem::exists(*f.refinement));
    for (const auto& e : std::filesystem::directory_iterator(kDir)) CHECK_NOTHROW(load_fixture(e.path()));
    CHECK_THROWS_AS(load_fixture(kDir / "missing.json"), FixtureError);
    CHECK_THROWS_AS(parse_fixture("{not json"), FixtureError);
}

TEST_CASE("fixture rejections") {
    const json base = raw("s3_x3-34x-6.json");
    CHECK_NOTHROW(from(base));

    json j = base;
    j["fields"]["C2"]["w"] = 4;
    CHECK_THROWS_WITH_AS(from(j), doctest::Contains("w(L) must equal w(k)"), FixtureError);

    j = base;
    j["s_primes_of_k"] = json::array();
    CHECK_THROWS_AS(from(j), FixtureError);

    j = base;
    j["s_primes_of_k"][0]["archimedean"] = false;
    CHECK_THROWS_WITH_AS(from(j), doctest::Contains("Archimedean"), FixtureError);

    j = base;
    j["fields"]["C3"]["r_S"] = 2;
    CHECK_THROWS_WITH_AS(from(j), doctest::Contains("fields.C3.r_S"), FixtureError);

    j = base;
    j["case_flag"] = "sqrt_unit";
    CHECK_THROWS_WITH_AS(from(j), doctest::Contains("lambda"), FixtureError);

    j = base;
    j["schema"] = "dokchitser-fixture/0";
    CHECK_THROWS_AS(from(j), FixtureError);

    j = base;
    j["provenance"] = "";
    CHECK_THROWS_AS(from(j), FixtureError);

    j = base;
    j["fields"].erase("C3");
    CHECK_THROWS_AS(from(j), FixtureError);

    j = base;
    j["unit_logs"]["rows"].erase(0);
    CHECK_THROWS_AS(from(j), FixtureError);

    j = base;
    j["unit_action"]["a"][0][0] = 2;
    CHECK_THROWS_AS(from(j), FixtureError);

    j = base;
    j["group"] = "D2q:9";
    CHECK_THROWS_AS(from(j), FixtureError);
}

TEST_CASE("structural invariants") {
    auto f = load_fixture(kDir / "s3_x3-34x-6.json");
    auto s = structural_invariants(f);
    CHECK(s.a == 0);
    CHECK(s.delta == 1);
    auto s2 = structural_invariants(load_fixture(kDir / "s3_x3-34x-6_S2.json"));
    CHECK(s2.a == 1);

    auto g = dihedral(5);
    auto none = lambda_profile(g, CaseFlag::none);
    for (const auto& [label, v] : none) CHECK(v == 1);
    auto sq = lambda_profile(g, CaseFlag::sqrt_unit);
    CHECK(sq["C2"] == 2);
    CHECK(sq["G"] == 2);
    CHECK(sq["C5"] == 1);
    auto pl = lambda_profile(g, CaseFlag::proot_unit_L);
    CHECK(pl["C5"] == 5);
    CHECK(pl["G"] == 5);
    auto pn = lambda_profile(g, CaseFlag::proot_unit_notL);
    CHECK(pn["C5"] == 5);
    CHECK(pn["G"] == 1);
    CHECK(parse_case_flag(to_string(CaseFlag::proot_unit_L)) == CaseFlag::proot_unit_L);
    CHECK_THROWS_AS(parse_case_flag("other"), FixtureError);
}

TEST_CASE("class number identity") {
    auto f = load_fixture(kDir / "s3_x3-34x-6.json");
    auto th = dihedral_standard_relation(f.group);
    CHECK(class_number_quotient(f, th) == Rational(1, 3));
    auto r = class_number_identity_check(f, th, 1e-8);
    CHECK(r.pass);
    CHECK(r.relative_error <= 1e-8);

    auto zero = class_number_identity_check(f, Relation::verify(BurnsideElement(f.group)), 1e-8);
    CHECK(zero.pass);
    CHECK(*zero.exact_quotient == 1);

    f.fields["1"].h_S *= 2;
    CHECK_FALSE(class_number_identity_check(f, th, 1e-8).pass);
}

TEST_CASE("unit index prediction") {
    auto f = load_fixture(kDir / "s3_x3-34x-6.json");
    auto u = unit_index_prediction(f);
    CHECK(u.class_number_quotient == Rational(1, 3));
    CHECK(u.exponent == -2);
    REQUIRE(u.predicted_index.has_value());
    CHECK(*u.predicted_index == 3);
    CHECK(u.report.pass);

    // K imaginary: exponent (0 - 0 - 1 + 0 - 1)/2 = -1
    auto g = load_fixture(kDir / "s3_x3-x-1.json");
    auto v = unit_index_prediction(g);
    CHECK(v.exponent == -1);
    CHECK(*v.predicted_index == 1);

    // one added prime with decomposition group G shifts the exponent by a/2
    auto s = load_fixture(kDir / "s3_x3-34x-6_S2.json");
    auto w = unit_index_prediction(s);
    CHECK(w.a == 1);
    CHECK(*w.predicted_index == 1);
    CHECK(w.report.pass);

    f.observed_unit_index = Integer(9);
    CHECK_FALSE(unit_index_prediction(f).report.pass);
}

TEST_CASE("S-unit pairing") {
    auto f = load_fixture(kDir / "s3_x3-34x-6.json");
    CHECK(s_unit_pairing_check(f, 1e-8).pass);

    // rank one, two places: det = (e1 f1 + e2 f2)/(e1 f1 e2 f2) R^2 with R = |log at one place| * ...
    FieldFixture syn = f;
    UnitLogs logs;
    logs.places = {LogPlace{true, 1, 1, std::nullopt}, LogPlace{false, 1, 2, 2L}};
    const double x = 1.7627471740390860;
    logs.rows = {{x, -x}};
    syn.unit_logs = logs;
    // sum ef / prod ef = 3/2; the pairing gives x^2 + x^2/2 = 3x^2/2, so R = x
    syn.fields["1"].R_S = x;
    auto r = s_unit_pairing_check(syn, 1e-12);
    CHECK(r.pass);
    CHECK(r.lhs == doctest::Approx(1.5 * x * x).epsilon(1e-14));
    syn.fields["1"].R_S = x * 1.001;
    CHECK_FALSE(s_unit_pairing_check(syn, 1e-8).pass);
    // product formula broken
    syn.fields["1"].R_S = x;
    syn.unit_logs->rows = {{x, -x + 0.5}};
    CHECK_FALSE(s_unit_pairing_check(syn, 1e-8).pass);

    FieldFixture empty = f;
    empty.unit_logs = UnitLogs{{LogPlace{true, 1, 1, std::nullopt}}, {}};
    empty.fields["1"].R_S = 1.0;
    CHECK(s_unit_pairing_check(empty, 1e-8).pass);

    empty.unit_logs.reset();
    CHECK_THROWS_AS(s_unit_pairing_check(empty, 1e-8), FixtureError);
}

TEST_CASE("regulator quotient identity") {
    auto f = load_fixture(kDir / "s3_x3-34x-6.json");
    auto th = dihedral_standard_relation(f.group);
    auto u = unit_lattice(f);
    CHECK(u.rank() == 5);
    CHECK(rational_multiplicities_d2p(u) == D2pMultiplicities{0, 1, 2});
    CHECK(newreg_identity_check(f, th, 1e-6).pass);
    CHECK(dok_pairing(u, th).value == observed_unit_constant(f));
    CHECK(observed_unit_constant(f) == 3);

    auto s = load_fixture(kDir / "s3_x3-34x-6_S2.json");
    CHECK(newreg_identity_check(s, th, 1e-6).pass);
    CHECK(observed_unit_constant(s) == 9);

    f.fields["C2"].R_S *= 1.01;
    CHECK_FALSE(newreg_identity_check(f, th, 1e-6).pass);
}

TEST_CASE("chain evaluation") {
    auto c = load_fixture(kDir / "d30_chain_synthetic.json");
    auto r = d2q_chain_evaluation(c, 1e-8);
    CHECK(r.report.pass);
    REQUIRE(r.layers.size() == 2);
    CHECK(r.total_quotient == r.product_of_layers);
    CHECK(r.correction_identity);
    for (const auto& l : r.layers) CHECK(l.ok);

    // a single-layer chain reproduces the D_2p prediction
    auto f = load_fixture(kDir / "s3_x3-34x-6.json");
    auto single = d2q_chain_evaluation(f, 1e-8);
    auto u = unit_index_prediction(f);
    REQUIRE(single.layers.size() == 1);
    CHECK(single.layers[0].exponent == u.exponent);
    CHECK(single.layers[0].quotient == u.class_number_quotient);
    CHECK(single.layers[0].a == u.a);
    CHECK(single.report.pass);

    json j = raw("d30_chain_synthetic.json");
    j["layers"].erase(1);
    CHECK_THROWS_AS(from(j), FixtureError);

    j = raw("d30_chain_synthetic.json");
    j["layers"][1]["correction_index"] = 1;
    CHECK_FALSE(d2q_chain_evaluation(from(j), 1e-8).correction_identity);

    j = raw("d30_chain_synthetic.json");
    j["layers"][0]["unit_index"] = 1;
    CHECK_FALSE(d2q_chain_evaluation(from(j), 1e-8).report.pass);
}

TEST_CASE("no-p certificate") {
    for (const auto& e : std::filesystem::directory_iterator(kDir)) {
        auto f = load_fixture(e.path());
        auto n = noP_certificate_check(f);
        CHECK(n.pass);
        CHECK(std::find(n.checked.begin(), n.checked.end(), 2L) != n.checked.end());
    }
    auto f = load_fixture(kDir / "s3_x3-34x-6.json");
    f.fields["1"].h_S *= 2;
    auto n = noP_certificate_check(f);
    CHECK_FALSE(n.pass);
    CHECK(n.violations == std::vector<long>{2});
}

TEST_CASE("verify every fixture") {
    for (const auto& e : std::filesystem::directory_iterator(kDir)) {
        auto v = verify_fixture(load_fixture(e.path()));
        CHECK_MESSAGE(v.pass, v.fixture);
    }
}

TEST_CASE("Galois module identification") {
    auto f = load_fixture(kDir / "s3_x3-34x-6.json");
    CHECK(multiplicities_from_ranks(f) == D2pMultiplicities{0, 1, 2});
    auto plain = identify_galois_module(f, nullptr);
    // f names its refinement, so the plain run already refines; compare with h-data alone
    std::vector<int> from_h;
    for (const auto& c : plain.from_h) from_h.push_back(c.number.value_or(-1));
    CHECK(from_h == std::vector<int>{2, 4});
    REQUIRE(plain.final.size() == 1);
    CHECK(*plain.final[0].number == 2);
    CHECK(plain.s_observed_constant == Rational(9));

    f.refinement.reset();
    auto hs = identify_galois_module(f);
    CHECK(hs.final.size() == 2);

    // real K, quotient 1/p^2 gives C = p^3: only eps + A + A
    auto one = enumerate_candidates(3, {0, 1, 2}, Rational(27));
    REQUIRE(one.size() == 1);
    CHECK(*one[0].number == 1);
    CHECK(enumerate_candidates(3, {0, 1, 2}, std::nullopt).size() == 5);

    // imaginary K: character tau only
    auto g = load_fixture(kDir / "s3_x3-x-1.json");
    auto r = identify_galois_module(g);
    REQUIRE(r.final.size() == 1);
    CHECK(r.final[0].summands == std::vector<std::string>{"A"});
    auto ap = enumerate_candidates(3, {0, 0, 1}, Rational(1, 3));
    REQUIRE(ap.size() == 1);
    CHECK(ap[0].summands == std::vector<std::string>{"Aprime"});

    // 16 structures with character 1 + eps + 2 tau
    CHECK(enumerate_candidates(3, {1, 1, 2}, std::nullopt).size() == 16);
    CHECK_THROWS(enumerate_candidates(3, {-1, 0, 0}, std::nullopt));
}
