#include "dokconst/serialize.hpp"

#include <sstream>
#include <stdexcept>

namespace dokconst {

namespace {

Json matrix_json(const IntMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

IntMatrix matrix_from_json(const Json& j, std::size_t n) {
    if (!j.is_array() || j.size() != n) throw std::invalid_argument("generator matrix must have " + std::to_string(n) + " rows");
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n) throw std::invalid_argument("generator matrix row has the wrong length");
        for (std::size_t k = 0; k < n; ++k) {
            const auto& e = j[i][k];
            if (e.is_string()) m(i, k) = Integer(e.get<std::string>());
            else if (e.is_number_integer()) m(i, k) = Integer(e.get<long>());
            else throw std::invalid_argument("matrix entries must be decimal strings or integers");
        }
    }
    return m;
}

Json candidate_json(const IdentifyCandidate& c) {
    Json j;
    j["number"] = c.number ? Json(*c.number) : Json(nullptr);
    j["display"] = c.display;
    j["summands"] = c.summands;
    j["constant"] = to_string(c.constant);
    j["sign_split"] = c.sign_split;
    return j;
}

Json multiplicities_json(const D2pMultiplicities& m) { return Json{{"m1", m.m1}, {"meps", m.meps}, {"mtau", m.mtau}}; }

}  // namespace

Json lattice_to_json(const ZGLattice& l) {
    Json j;
    j["group"] = l.group()->descriptor();
    j["rank"] = l.rank();
    Json gens = Json::array();
    for (const auto& m : l.generator_matrices()) gens.push_back(matrix_json(m));
    j["generators"] = gens;
    return j;
}

ZGLattice lattice_from_json(const Json& j) {
    auto g = build_group(j.at("group").get<std::string>());
    const auto n = j.at("rank").get<std::size_t>();
    const auto& gens = j.at("generators");
    if (gens.size() != g->generators().size()) throw std::invalid_argument("lattice JSON has the wrong number of generators");
    std::vector<IntMatrix> ms;
    for (const auto& m : gens) ms.push_back(matrix_from_json(m, n));
    return ZGLattice::from_generators(g, ms);
}

Json relation_to_json(const Relation& r) {
    Json j = Json::object();
    const auto& cls = r.group()->subgroup_classes();
    for (std::size_t i = 0; i < cls.size(); ++i)
        if (long long c = r.element().coefficient(static_cast<int>(i)); c != 0) j[cls[i].label] = c;
    return j;
}

Relation relation_from_json(const GroupPtr& g, const Json& j) {
    std::map<std::string, long long> m;
    for (const auto& [k, v] : j.items()) m[k] = v.get<long long>();
    return Relation::verify(BurnsideElement::from_map(g, m));
}

Json factored_json(const Rational& x) {
    Json j = Json::object();
    for (const auto& [p, e] : factor_rational(x)) j[std::to_string(p)] = e;
    return j;
}

Json constant_record(const Relation& theta, const std::string& lattice, const DokchitserConstant& c) {
    Json j;
    j["relation"] = relation_to_json(theta);
    j["lattice"] = lattice;
    j["value"] = to_string(c.value);
    j["factored"] = factored_json(c.value);
    j["method"] = c.method == Method::pairing ? "pairing" : "injection";
    return j;
}

std::string row_status(const ZooRow& r) {
    if (r.predicted_only) return "predicted";
    return r.ok ? "ok" : "mismatch";
}

Json zoo_table_json(int p, const std::vector<ZooRow>& rows) {
    Json j;
    j["p"] = p;
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json row;
        row["name"] = r.name;
        row["constant"] = to_string(r.constant);
        row["index"] = r.index ? Json(to_string(*r.index)) : Json(nullptr);
        row["I"] = to_string(r.I);
        row["status"] = row_status(r);
        arr.push_back(row);
    }
    j["rows"] = arr;
    return j;
}

std::string zoo_table_tsv(const std::vector<ZooRow>& rows) {
    std::ostringstream out;
    out << "name\tconstant\tindex\tI\tstatus\n";
    for (const auto& r : rows)
        out << r.name << '\t' << to_string(r.constant) << '\t' << (r.index ? to_string(*r.index) : "-") << '\t'
            << to_string(r.I) << '\t' << row_status(r) << '\n';
    return out.str();
}

Json quotient_report_json(const QuotientReport& r) {
    Json j;
    j["check"] = r.check;
    j["pass"] = r.pass;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["relative_error"] = r.relative_error;
    j["tolerance"] = r.tolerance;
    j["exact_quotient"] = r.exact_quotient ? Json(to_string(*r.exact_quotient)) : Json(nullptr);
    j["detail"] = r.detail;
    return j;
}

Json verification_report_json(const VerificationReport& r) {
    Json j;
    j["fixture"] = r.fixture;
    j["pass"] = r.pass;
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(quotient_report_json(c));
    j["checks"] = checks;
    return j;
}

Json identify_json(const IdentifyResult& r) {
    Json j;
    j["p"] = r.p;
    j["character"] = multiplicities_json(r.character);
    j["observed_constant"] = to_string(r.observed_constant);
    Json from_h = Json::array();
    for (const auto& c : r.from_h) from_h.push_back(candidate_json(c));
    j["from_h"] = from_h;
    if (r.s_character) {
        j["s_character"] = multiplicities_json(*r.s_character);
        j["s_observed_constant"] = to_string(*r.s_observed_constant);
        Json trace = Json::array();
        for (const auto& t : r.refinement) {
            Json e;
            e["s_candidate"] = candidate_json(t.s_candidate);
            e["kernel_constant"] = to_string(t.kernel_constant);
            e["kernel_sign_split"] = t.kernel_sign_split;
            Json m = Json::array();
            for (const auto& c : t.kernel_matches) m.push_back(c.display);
            e["kernel_matches"] = m;
            trace.push_back(e);
        }
        j["refinement"] = trace;
    }
    Json fin = Json::array();
    for (const auto& c : r.final) fin.push_back(candidate_json(c));
    j["final"] = fin;
    return j;
}

Json suite_json(const SuiteResult& r) {
    Json j;
    j["suite"] = r.name;
    j["seed"] = r.seed;
    j["trials"] = r.trials;
    j["passed"] = r.passed;
    j["failed"] = r.failures.size();
    j["vacuous"] = r.vacuous;
    Json f = Json::array();
    for (const auto& x : r.failures) f.push_back(Json{{"trial", x.trial}, {"seed", x.seed}, {"message", x.message}});
    j["failures"] = f;
    return j;
}

}  // namespace dokconst
