#include "dokconst/ledger.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dokconst {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw FixtureError(where + ": " + what);
}

const json& require(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) fail(where, "missing key '" + key + "'");
    return j.at(key);
}

Integer as_integer(const json& v, const std::string& where) {
    if (v.is_number_integer()) return Integer(std::to_string(v.get<long long>()));
    if (v.is_string()) {
        Integer x;
        if (x.set_str(v.get<std::string>(), 10) != 0) fail(where, "not an integer: " + v.get<std::string>());
        return x;
    }
    fail(where, "expected an integer");
}

long as_long(const json& v, const std::string& where) {
    Integer x = as_integer(v, where);
    if (!x.fits_slong_p()) fail(where, "integer out of range");
    return x.get_si();
}

double as_decimal(const json& v, const std::string& where, std::string* text = nullptr) {
    std::string s;
    if (v.is_number()) {
        s = v.dump();
    } else if (v.is_string()) {
        s = v.get<std::string>();
    } else {
        fail(where, "expected a decimal");
    }
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(where, "not a decimal: " + s);
    }
    if (used != s.size() || !std::isfinite(x)) fail(where, "not a decimal: " + s);
    if (text) *text = s;
    return x;
}

bool as_bool(const json& v, const std::string& where) {
    if (!v.is_boolean()) fail(where, "expected a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
}

IntMatrix as_matrix(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of rows");
    std::vector<std::vector<Integer>> rows;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_array()) fail(where, "row " + std::to_string(i) + " is not an array");
        std::vector<Integer> row;
        for (const auto& x : v[i]) row.push_back(as_integer(x, where));
        if (!rows.empty() && row.size() != rows.front().size()) fail(where, "ragged matrix");
        rows.push_back(std::move(row));
    }
    return IntMatrix::from_rows(rows);
}

bool has_label(const FiniteGroup& g, const std::string& label) {
    for (const auto& c : g.subgroup_classes())
        if (c.label == label) return true;
    return false;
}

Rational pow_rat(const Rational& x, long e) {
    Rational r = 1;
    for (long k = 0; k < std::labs(e); ++k) r *= x;
    return e < 0 ? Rational(1) / r : r;
}

// Number of places of F^H above a prime of k with decomposition group D.
std::size_t places_above(const FiniteGroup& g, const ElementSet& h, const ElementSet& d) {
    return double_cosets(g, h, d).representatives.size();
}

int delta_of(CaseFlag c) { return c == CaseFlag::proot_unit_L ? 3 : 1; }

long layer_a(const FieldFixture& f, const ChainLayer& layer) {
    const FiniteGroup& g = *f.group;
    const ElementSet base = g.subgroup_class(layer.base).representative;
    const ElementSet top = g.subgroup_class(layer.top).representative;
    const int base_order = static_cast<int>(base.count());
    long a = 0;
    for (const auto& sp : f.s_primes_of_k) {
        const ElementSet d = g.subgroup_class(sp.decomposition_class).representative;
        for (int x : double_cosets(g, base, d).representatives) {
            ElementSet local = base & g.conjugate_set(d, g.inv(x));
            ElementSet span = g.closure(elements_of(local | top));
            if (static_cast<int>(span.count()) == base_order) ++a;
        }
    }
    return a;
}

Relation layer_relation(const FieldFixture& f, const ChainLayer& l) {
    std::map<std::string, long long> m;
    m[l.top] += 1;
    m[l.degree_p] -= 2;
    m[l.quadratic] -= 1;
    m[l.base] += 2;
    BurnsideElement x = BurnsideElement::from_map(f.group, m);
    if (!is_relation(x)) throw std::logic_error("layer relation " + format_element(x) + " is not a relation");
    return Relation::verify(x);
}

ChainLayer implicit_layer(const FieldFixture& f) {
    ChainLayer l;
    l.p = f.q;
    l.top = f.label_F();
    l.quadratic = f.label_K();
    l.degree_p = f.label_L();
    l.base = f.label_k();
    l.case_flag = f.case_flag;
    if (!f.observed_unit_index) fail(f.name, "single-layer chain needs observed_unit_index");
    l.unit_index = *f.observed_unit_index;
    return l;
}

// Twice the layer exponent of p as an exact rational.
Rational layer_exponent(const FieldFixture& f, const ChainLayer& l, long a) {
    const long r_top = f.field(l.top).r_S;
    const long r_quad = f.field(l.quadratic).r_S;
    const long r_base = f.field(l.base).r_S;
    if ((r_top - r_quad) % (l.p - 1) != 0)
        fail(f.name, "r_S(" + l.top + ") - r_S(" + l.quadratic + ") not divisible by p-1");
    const long twice = 2 * r_base - r_quad - (r_top - r_quad) / (l.p - 1) + a - delta_of(l.case_flag);
    Rational e(twice, 2);
    e.canonicalize();
    return e;
}

// x = p^e * idx with e possibly a half-integer, decided exactly on squares.
bool matches_power(const Rational& x, long p, const Rational& e, const Integer& idx) {
    if (x <= 0) return false;
    Rational twice = e * 2;
    if (twice.get_den() != 1) return false;
    return x * x == pow_rat(Rational(p), twice.get_num().get_si()) * Rational(idx * idx);
}

double pow_half(long p, const Rational& e) { return std::pow(static_cast<double>(p), e.get_d()); }

long double det_ld(std::vector<std::vector<long double>> m) {
    const std::size_t n = m.size();
    long double det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
        if (m[piv][c] == 0) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            long double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

}  // namespace

std::string to_string(CaseFlag c) {
    switch (c) {
        case CaseFlag::none: return "none";
        case CaseFlag::sqrt_unit: return "sqrt_unit";
        case CaseFlag::proot_unit_L: return "proot_unit_L";
        case CaseFlag::proot_unit_notL: return "proot_unit_notL";
    }
    return "none";
}

CaseFlag parse_case_flag(const std::string& s) {
    if (s == "none") return CaseFlag::none;
    if (s == "sqrt_unit") return CaseFlag::sqrt_unit;
    if (s == "proot_unit_L") return CaseFlag::proot_unit_L;
    if (s == "proot_unit_notL") return CaseFlag::proot_unit_notL;
    throw FixtureError("case_flag: unknown value '" + s + "'");
}

const FieldRecord& FieldFixture::field(const std::string& label) const {
    auto it = fields.find(label);
    if (it == fields.end()) throw FixtureError(name + ": missing field record for subgroup " + label);
    return it->second;
}

double relative_error(double lhs, double rhs) {
    const double scale = std::max(std::fabs(lhs), std::fabs(rhs));
    return scale == 0 ? 0.0 : std::fabs(lhs - rhs) / scale;
}

Relation dihedral_standard_relation(const GroupPtr& g) {
    const int q = dihedral_parameter(*g);
    if (q < 3 || q % 2 == 0) throw std::invalid_argument("standard relation needs D_2q with q odd");
    return Relation::verify(
        BurnsideElement::from_map(g, {{"1", 1}, {"C2", -2}, {"C" + std::to_string(q), -1}, {"G", 2}}));
}

std::map<std::string, Integer> lambda_profile(const GroupPtr& g, CaseFlag c) {
    const int q = dihedral_parameter(*g);
    std::map<std::string, Integer> out;
    for (const auto& cls : g->subgroup_classes()) out[cls.label] = 1;
    const std::string cq = "C" + std::to_string(q);
    switch (c) {
        case CaseFlag::none: break;
        case CaseFlag::sqrt_unit:
            out["C2"] = 2;
            out["G"] = 2;
            break;
        case CaseFlag::proot_unit_L:
            out[cq] = q;
            out["G"] = q;
            break;
        case CaseFlag::proot_unit_notL: out[cq] = q; break;
    }
    return out;
}

FieldFixture parse_fixture(const std::string& json_text, const std::filesystem::path& source) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FixtureError("fixture is not valid JSON: " + std::string(e.what()));
    }
    FieldFixture f;
    f.source = source;
    if (as_string(require(j, "schema", "fixture"), "schema") != kFixtureSchema)
        fail("schema", "expected " + std::string(kFixtureSchema));
    f.name = as_string(require(j, "name", "fixture"), "name");
    f.kind = as_string(require(j, "kind", f.name), "kind");
    if (f.kind != "d2p" && f.kind != "d2q_chain") fail("kind", "expected d2p or d2q_chain, got " + f.kind);
    f.provenance = as_string(require(j, "provenance", f.name), "provenance");
    f.group_descriptor = as_string(require(j, "group", f.name), "group");
    try {
        f.group = build_group(f.group_descriptor);
        f.q = dihedral_parameter(*f.group);
    } catch (const std::exception& e) {
        fail("group", e.what());
    }
    f.case_flag = parse_case_flag(as_string(require(j, "case_flag", f.name), "case_flag"));

    const json& fields = require(j, "fields", f.name);
    if (!fields.is_object()) fail("fields", "expected an object keyed by subgroup label");
    for (const auto& [label, rec] : fields.items()) {
        const std::string where = "fields." + label;
        if (!has_label(*f.group, label)) fail(where, "not a subgroup class of " + f.group_descriptor);
        FieldRecord r;
        r.h_S = as_integer(require(rec, "h_S", where), where + ".h_S");
        r.w = as_integer(require(rec, "w", where), where + ".w");
        r.r_S = as_long(require(rec, "r_S", where), where + ".r_S");
        r.R_S = as_decimal(require(rec, "R_S", where), where + ".R_S", &r.R_S_text);
        r.lambda = as_integer(require(rec, "lambda", where), where + ".lambda");
        f.fields[label] = r;
    }

    const json& sp = require(j, "s_primes_of_k", f.name);
    if (!sp.is_array()) fail("s_primes_of_k", "expected an array");
    for (std::size_t i = 0; i < sp.size(); ++i) {
        const std::string where = "s_primes_of_k[" + std::to_string(i) + "]";
        SPrime s;
        s.archimedean = as_bool(require(sp[i], "archimedean", where), where);
        s.e = as_long(require(sp[i], "e", where), where + ".e");
        s.f = as_long(require(sp[i], "f", where), where + ".f");
        s.decomposition_class = as_string(require(sp[i], "decomposition_class", where), where);
        if (sp[i].contains("label")) s.label = as_string(sp[i]["label"], where + ".label");
        f.s_primes_of_k.push_back(s);
    }

    if (j.contains("observed_unit_index") && !j["observed_unit_index"].is_null())
        f.observed_unit_index = as_integer(j["observed_unit_index"], "observed_unit_index");

    if (j.contains("unit_logs") && !j["unit_logs"].is_null()) {
        const json& ul = j["unit_logs"];
        UnitLogs logs;
        const json& places = require(ul, "places", "unit_logs");
        for (std::size_t i = 0; i < places.size(); ++i) {
            const std::string where = "unit_logs.places[" + std::to_string(i) + "]";
            LogPlace p;
            p.archimedean = as_bool(require(places[i], "archimedean", where), where);
            p.e = as_long(require(places[i], "e", where), where + ".e");
            p.f = as_long(require(places[i], "f", where), where + ".f");
            if (places[i].contains("prime")) p.prime = as_long(places[i]["prime"], where + ".prime");
            logs.places.push_back(p);
        }
        const json& rows = require(ul, "rows", "unit_logs");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string where = "unit_logs.rows[" + std::to_string(i) + "]";
            if (!rows[i].is_array() || rows[i].size() != logs.places.size())
                fail(where, "row length must equal the number of places");
            std::vector<double> row;
            for (const auto& x : rows[i]) row.push_back(as_decimal(x, where));
            logs.rows.push_back(std::move(row));
        }
        f.unit_logs = std::move(logs);
    }

    if (j.contains("unit_action") && !j["unit_action"].is_null()) {
        const json& ua = j["unit_action"];
        std::vector<IntMatrix> mats;
        for (int gen : f.group->generators()) {
            const std::string key = f.group->element_label(gen);
            mats.push_back(as_matrix(require(ua, key, "unit_action"), "unit_action." + key));
        }
        f.unit_action = std::move(mats);
    }

    if (j.contains("layers")) {
        const json& ls = j["layers"];
        if (!ls.is_array()) fail("layers", "expected an array");
        for (std::size_t i = 0; i < ls.size(); ++i) {
            const std::string where = "layers[" + std::to_string(i) + "]";
            ChainLayer l;
            l.p = as_long(require(ls[i], "p", where), where + ".p");
            l.top = as_string(require(ls[i], "top", where), where + ".top");
            l.quadratic = as_string(require(ls[i], "quadratic", where), where + ".quadratic");
            l.degree_p = as_string(require(ls[i], "degree_p", where), where + ".degree_p");
            l.base = as_string(require(ls[i], "base", where), where + ".base");
            if (ls[i].contains("case_flag")) l.case_flag = parse_case_flag(as_string(ls[i]["case_flag"], where));
            l.unit_index = as_integer(require(ls[i], "unit_index", where), where + ".unit_index");
            if (ls[i].contains("correction_index"))
                l.correction_index = as_integer(ls[i]["correction_index"], where + ".correction_index");
            f.layers.push_back(l);
        }
    }

    if (j.contains("refinement") && !j["refinement"].is_null()) {
        std::filesystem::path r = as_string(j["refinement"], "refinement");
        f.refinement = r.is_absolute() || source.empty() ? r : source.parent_path() / r;
    }

    validate_fixture(f);
    return f;
}

FieldFixture load_fixture(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FixtureError("cannot open fixture " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_fixture(ss.str(), path);
}

void validate_fixture(const FieldFixture& f) {
    const FiniteGroup& g = *f.group;
    if (f.provenance.empty()) fail("provenance", "must name the generating tool and inputs");
    if (f.q < 3 || f.q % 2 == 0) fail("group", "expected D_2q with q odd");
    if (f.kind == "d2p" && !is_prime(f.q)) fail("group", "kind d2p needs q prime");
    for (const auto& label : {f.label_F(), f.label_L(), f.label_K(), f.label_k()})
        if (!f.fields.count(label)) fail("fields", "missing record for subgroup " + label);

    for (const auto& [label, r] : f.fields) {
        const std::string where = "fields." + label;
        if (r.h_S < 1) fail(where + ".h_S", "must be positive");
        if (r.w < 1) fail(where + ".w", "must be positive");
        if (r.r_S < 0) fail(where + ".r_S", "must be non-negative");
        if (!(r.R_S > 0)) fail(where + ".R_S", "must be positive");
        if (r.lambda < 1) fail(where + ".lambda", "must be positive");
    }
    if (f.field(f.label_F()).w != f.field(f.label_K()).w) fail("fields", "w(F) must equal w(K)");
    if (f.field(f.label_L()).w != f.field(f.label_k()).w) fail("fields", "w(L) must equal w(k)");

    if (f.s_primes_of_k.empty()) fail("s_primes_of_k", "S must contain the Archimedean places");
    bool arch = false;
    for (std::size_t i = 0; i < f.s_primes_of_k.size(); ++i) {
        const auto& s = f.s_primes_of_k[i];
        const std::string where = "s_primes_of_k[" + std::to_string(i) + "]";
        if (!has_label(g, s.decomposition_class)) fail(where, "unknown decomposition class " + s.decomposition_class);
        const auto& d = g.subgroup_class(s.decomposition_class);
        if (s.e < 1 || s.f < 1) fail(where, "e and f must be positive");
        if (s.archimedean) {
            arch = true;
            if (d.order > 2) fail(where, "Archimedean decomposition group has order at most 2");
        }
    }
    if (!arch) fail("s_primes_of_k", "S must contain the Archimedean places");

    // r_S(F^H) = |S restricted to F^H| - 1
    for (const auto& [label, r] : f.fields) {
        const ElementSet h = g.subgroup_class(label).representative;
        std::size_t places = 0;
        for (const auto& s : f.s_primes_of_k)
            places += places_above(g, h, g.subgroup_class(s.decomposition_class).representative);
        if (static_cast<long>(places) - 1 != r.r_S)
            fail("fields." + label + ".r_S",
                 "expected " + std::to_string(static_cast<long>(places) - 1) + " from the S-prime decomposition, got " +
                     std::to_string(r.r_S));
    }

    if (f.kind == "d2p") {
        auto profile = lambda_profile(f.group, f.case_flag);
        for (const auto& [label, r] : f.fields)
            if (r.lambda != profile[label])
                fail("fields." + label + ".lambda", "inconsistent with case_flag " + to_string(f.case_flag) +
                                                        " (expected " + profile[label].get_str() + ")");
        if (!f.layers.empty()) fail("layers", "only allowed for kind d2q_chain");
    } else {
        if (f.case_flag != CaseFlag::none) fail("case_flag", "chain fixtures support case none only");
        for (const auto& [label, r] : f.fields)
            if (r.lambda != 1) fail("fields." + label + ".lambda", "must be 1 for case none");
        if (f.layers.empty()) fail("layers", "d2q_chain fixtures need layer records");
        long prod = 1;
        for (std::size_t i = 0; i < f.layers.size(); ++i) {
            const auto& l = f.layers[i];
            const std::string where = "layers[" + std::to_string(i) + "]";
            if (l.p < 3 || !is_prime(l.p)) fail(where + ".p", "must be an odd prime");
            prod *= l.p;
            for (const auto& label : {l.top, l.quadratic, l.degree_p, l.base}) {
                if (!has_label(g, label)) fail(where, "unknown subgroup " + label);
                if (!f.fields.count(label)) fail(where, "missing field record for subgroup " + label);
            }
            const int top = g.subgroup_class(l.top).order;
            if (g.subgroup_class(l.quadratic).order != l.p * top || g.subgroup_class(l.degree_p).order != 2 * top ||
                g.subgroup_class(l.base).order != 2 * l.p * top)
                fail(where, "subgroup orders do not form a D_2p layer");
            if (l.unit_index < 1 || l.correction_index < 1) fail(where, "indices must be positive");
            if (f.field(l.top).w != f.field(l.quadratic).w || f.field(l.degree_p).w != f.field(l.base).w)
                fail(where, "roots of unity inconsistent across the layer");
        }
        if (prod != f.q) fail("layers", "layer primes multiply to " + std::to_string(prod) + ", not q = " +
                                            std::to_string(f.q));
    }

    if (f.observed_unit_index && *f.observed_unit_index < 1) fail("observed_unit_index", "must be positive");

    const long rank_f = f.field(f.label_F()).r_S;
    if (f.unit_logs) {
        std::size_t places = 0;
        for (const auto& s : f.s_primes_of_k)
            places += static_cast<std::size_t>(g.order() / g.subgroup_class(s.decomposition_class).order);
        if (f.unit_logs->places.size() != places)
            fail("unit_logs.places", "expected " + std::to_string(places) + " places of F");
        if (static_cast<long>(f.unit_logs->rows.size()) != rank_f)
            fail("unit_logs.rows", "expected r_S(F) = " + std::to_string(rank_f) + " rows");
        for (const auto& p : f.unit_logs->places)
            if (p.e < 1 || p.f < 1) fail("unit_logs.places", "e and f must be positive");
    }
    if (f.unit_action) {
        for (const auto& m : *f.unit_action)
            if (static_cast<long>(m.rows()) != rank_f || static_cast<long>(m.cols()) != rank_f)
                fail("unit_action", "matrices must be r_S(F) x r_S(F)");
        try {
            (void)ZGLattice::from_generators(f.group, *f.unit_action);
        } catch (const std::exception& e) {
            fail("unit_action", e.what());
        }
    }
}

StructuralInvariants structural_invariants(const FieldFixture& f) {
    StructuralInvariants s;
    for (const auto& p : f.s_primes_of_k)
        if (p.decomposition_class == "G") ++s.a;
    s.delta = delta_of(f.case_flag);
    s.lambda_profile = lambda_profile(f.group, f.case_flag);
    return s;
}

Rational class_number_quotient(const FieldFixture& f, const Relation& theta) {
    Rational q = 1;
    const auto& classes = f.group->subgroup_classes();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const long long n = theta.element().coefficient(static_cast<int>(c));
        if (n != 0) q *= pow_rat(Rational(f.field(classes[c].label).h_S), n);
    }
    return q;
}

QuotientReport class_number_identity_check(const FieldFixture& f, const Relation& theta, double tol) {
    QuotientReport r;
    r.check = "class_number_identity";
    r.tolerance = tol;
    const auto& classes = f.group->subgroup_classes();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const long long n = theta.element().coefficient(static_cast<int>(c));
        if (n == 0) continue;
        const FieldRecord& rec = f.field(classes[c].label);
        const double term = rec.h_S.get_d() * rec.R_S / rec.w.get_d();
        (n > 0 ? r.lhs : r.rhs) *= std::pow(term, static_cast<double>(std::llabs(n)));
    }
    r.exact_quotient = class_number_quotient(f, theta);
    r.relative_error = relative_error(r.lhs, r.rhs);
    r.pass = r.relative_error <= tol;
    r.detail = "h-quotient " + to_string(*r.exact_quotient);
    return r;
}

UnitIndexPrediction unit_index_prediction(const FieldFixture& f) {
    if (f.kind != "d2p") throw std::invalid_argument("unit_index_prediction needs a d2p fixture");
    UnitIndexPrediction out;
    const long p = f.q;
    const Relation theta = dihedral_standard_relation(f.group);
    out.class_number_quotient = class_number_quotient(f, theta);
    const auto inv = structural_invariants(f);
    out.a = inv.a;
    out.delta = inv.delta;
    ChainLayer l;
    l.p = p;
    l.top = f.label_F();
    l.quadratic = f.label_K();
    l.base = f.label_k();
    l.case_flag = f.case_flag;
    out.exponent = layer_exponent(f, l, out.a);

    const Rational& q = out.class_number_quotient;
    if (out.exponent.get_den() == 1) {
        Rational idx = q / pow_rat(Rational(p), out.exponent.get_num().get_si());
        if (idx > 0 && idx.get_den() == 1) out.predicted_index = idx.get_num();
    }

    QuotientReport& r = out.report;
    r.check = "unit_index_prediction";
    r.exact_quotient = q;
    r.lhs = q.get_d();
    const Integer shown = f.observed_unit_index ? *f.observed_unit_index : out.predicted_index.value_or(Integer(0));
    r.rhs = pow_half(p, out.exponent) * shown.get_d();
    r.relative_error = relative_error(r.lhs, r.rhs);
    r.pass = out.predicted_index.has_value() &&
             (!f.observed_unit_index || *f.observed_unit_index == *out.predicted_index);
    std::ostringstream d;
    d << "exponent " << to_string(out.exponent) << ", a " << out.a << ", delta " << out.delta << ", predicted index "
      << (out.predicted_index ? out.predicted_index->get_str() : std::string("non-integral"));
    if (f.observed_unit_index) d << ", observed " << f.observed_unit_index->get_str();
    r.detail = d.str();
    return out;
}

QuotientReport s_unit_pairing_check(const FieldFixture& f, double tol) {
    if (!f.unit_logs) throw FixtureError(f.name + ": s_unit_pairing_check needs unit_logs");
    const UnitLogs& logs = *f.unit_logs;
    QuotientReport r;
    r.check = "s_unit_pairing";
    r.tolerance = tol;
    const std::size_t n = logs.rows.size();
    std::vector<std::vector<long double>> gram(n, std::vector<long double>(n, 0));
    long double sum_ef = 0, prod_ef = 1;
    for (const auto& p : logs.places) {
        sum_ef += p.e * p.f;
        prod_ef *= p.e * p.f;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < logs.places.size(); ++k)
                gram[i][j] += static_cast<long double>(logs.rows[i][k]) * logs.rows[j][k] /
                              (logs.places[k].e * logs.places[k].f);
    const double R = f.field(f.label_F()).R_S;
    r.lhs = static_cast<double>(det_ld(gram));
    r.rhs = static_cast<double>(sum_ef / prod_ef * static_cast<long double>(R) * R);
    r.relative_error = relative_error(r.lhs, r.rhs);
    double worst = 0;
    for (const auto& row : logs.rows) {
        long double s = 0, a = 0;
        for (double x : row) {
            s += x;
            a += std::fabs(x);
        }
        if (a > 0) worst = std::max(worst, static_cast<double>(std::fabs(s) / a));
    }
    r.pass = r.relative_error <= tol && worst <= tol;
    std::ostringstream d;
    d << "product formula residual " << worst;
    r.detail = d.str();
    return r;
}

ZGLattice unit_lattice(const FieldFixture& f) {
    if (!f.unit_action) throw FixtureError(f.name + ": no unit_action");
    return ZGLattice::from_generators(f.group, *f.unit_action);
}

QuotientReport newreg_identity_check(const FieldFixture& f, const Relation& theta, double tol) {
    QuotientReport r;
    r.check = "newreg_identity";
    r.tolerance = tol;
    const ZGLattice gamma = unit_lattice(f);
    const Rational lhs = dok_pairing(gamma, theta).value;
    Rational pre = dok_pairing(trivial_lattice(f.group), theta).value;
    for (const auto& s : f.s_primes_of_k)
        pre /= dok_pairing(permutation_lattice(f.group, f.group->subgroup_class(s.decomposition_class).representative),
                           theta)
                   .value;
    double reg = 1;
    const auto& classes = f.group->subgroup_classes();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const long long n = theta.element().coefficient(static_cast<int>(c));
        if (n == 0) continue;
        const FieldRecord& rec = f.field(classes[c].label);
        reg *= std::pow(rec.R_S / rec.lambda.get_d(), 2.0 * static_cast<double>(n));
    }
    r.exact_quotient = lhs;
    r.lhs = lhs.get_d();
    r.rhs = pre.get_d() * reg;
    r.relative_error = relative_error(r.lhs, r.rhs);
    r.pass = r.relative_error <= tol;
    r.detail = "C(U_S(F)) = " + to_string(lhs) + ", prefactor " + to_string(pre);
    return r;
}

Rational observed_unit_constant(const FieldFixture& f) {
    const Relation theta = dihedral_standard_relation(f.group);
    Rational pre = dok_pairing(trivial_lattice(f.group), theta).value;
    for (const auto& s : f.s_primes_of_k)
        pre /= dok_pairing(permutation_lattice(f.group, f.group->subgroup_class(s.decomposition_class).representative),
                           theta)
                   .value;
    Rational wq = 1, lq = 1;
    const auto& classes = f.group->subgroup_classes();
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const long long n = theta.element().coefficient(static_cast<int>(c));
        if (n == 0) continue;
        wq *= pow_rat(Rational(f.field(classes[c].label).w), n);
        lq *= pow_rat(Rational(f.field(classes[c].label).lambda), n);
    }
    const Rational x = wq / class_number_quotient(f, theta) / lq;
    return pre * x * x;
}

ChainReport d2q_chain_evaluation(const FieldFixture& f, double tol) {
    ChainReport out;
    std::vector<ChainLayer> layers = f.layers;
    if (layers.empty()) layers.push_back(implicit_layer(f));
    long prod = 1;
    for (const auto& l : layers) prod *= l.p;
    if (prod != f.q) throw FixtureError(f.name + ": chain layers do not cover q = " + std::to_string(f.q));

    const Relation theta = dihedral_standard_relation(f.group);
    out.total_quotient = class_number_quotient(f, theta);
    out.product_of_layers = 1;
    double predicted = 1;
    Integer index_product = 1, correction_product = 1;
    bool layers_ok = true;
    for (const auto& l : layers) {
        for (const auto& label : {l.top, l.quadratic, l.degree_p, l.base})
            if (!f.fields.count(label)) throw FixtureError(f.name + ": missing layer record for subgroup " + label);
        ChainLayerResult res;
        res.layer = l;
        res.a = layer_a(f, l);
        res.delta = delta_of(l.case_flag);
        res.exponent = layer_exponent(f, l, res.a);
        res.quotient = class_number_quotient(f, layer_relation(f, l));
        res.ok = matches_power(res.quotient, l.p, res.exponent, l.unit_index);
        layers_ok = layers_ok && res.ok;
        out.product_of_layers *= res.quotient;
        predicted *= pow_half(l.p, res.exponent) * l.unit_index.get_d();
        index_product *= l.unit_index;
        correction_product *= l.correction_index;
        out.layers.push_back(res);
    }
    out.full_unit_index = f.observed_unit_index;
    if (f.kind == "d2q_chain" && f.observed_unit_index)
        out.correction_identity = index_product == *f.observed_unit_index * correction_product;

    QuotientReport reg = class_number_identity_check(f, theta, tol);
    QuotientReport& r = out.report;
    r.check = "d2q_chain";
    r.tolerance = tol;
    r.exact_quotient = out.total_quotient;
    r.lhs = out.total_quotient.get_d();
    r.rhs = predicted;
    r.relative_error = reg.relative_error;
    r.pass = layers_ok && out.product_of_layers == out.total_quotient && out.correction_identity && reg.pass;
    std::ostringstream d;
    d << layers.size() << " layer(s), layers " << (layers_ok ? "ok" : "FAIL") << ", telescoping "
      << (out.product_of_layers == out.total_quotient ? "ok" : "FAIL") << ", correction "
      << (out.correction_identity ? "ok" : "FAIL") << ", regulator identity rel err " << reg.relative_error;
    r.detail = d.str();
    return out;
}

NoPReport noP_certificate_check(const FieldFixture& f) {
    NoPReport out;
    out.quotient = class_number_quotient(f, dihedral_standard_relation(f.group));
    const auto cert = trivial_prime_certificate(f.group);
    std::set<long> primes;
    for (int p : prime_factors(f.group->order())) primes.insert(p);
    for (const auto& [p, e] : factor_rational(out.quotient)) primes.insert(p);
    for (long p : primes) {
        if (!cert.certifies(p)) continue;
        out.checked.push_back(p);
        if (p_adic_order(out.quotient, p) != 0) out.violations.push_back(p);
    }
    out.pass = out.violations.empty();
    return out;
}

VerificationReport verify_fixture(const FieldFixture& f, const VerifyOptions& opt) {
    VerificationReport v;
    v.fixture = f.name;
    const Relation theta = dihedral_standard_relation(f.group);
    v.checks.push_back(class_number_identity_check(f, theta, opt.tol_class_number));
    if (f.kind == "d2p") {
        v.checks.push_back(unit_index_prediction(f).report);
    } else {
        v.checks.push_back(d2q_chain_evaluation(f, opt.tol_class_number).report);
    }
    if (f.unit_logs) v.checks.push_back(s_unit_pairing_check(f, opt.tol_pairing));
    if (f.unit_action) v.checks.push_back(newreg_identity_check(f, theta, opt.tol_newreg));
    NoPReport n = noP_certificate_check(f);
    QuotientReport nr;
    nr.check = "noP_certificate";
    nr.exact_quotient = n.quotient;
    nr.pass = n.pass;
    std::ostringstream d;
    d << "certified primes checked:";
    for (long p : n.checked) d << ' ' << p;
    if (!n.violations.empty()) {
        d << "; violations:";
        for (long p : n.violations) d << ' ' << p;
    }
    nr.detail = d.str();
    v.checks.push_back(nr);
    for (const auto& c : v.checks) v.pass = v.pass && c.pass;
    return v;
}

}  // namespace dokconst
