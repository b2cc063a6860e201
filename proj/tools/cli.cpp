#include "cli.hpp"

#include "dokconst/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace dokconst {

namespace {

namespace fs = std::filesystem;

// Distinguishes bad input (exit 2) from failed checks (exit 1).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
    if (const char* s = std::getenv("DOKCONST_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            throw UsageError(std::string("DOKCONST_SEED is not an unsigned integer: ") + s);
        }
    }
    return 1;
}

GroupPtr group_arg(const std::string& descriptor) {
    try {
        return build_group(descriptor);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

Relation oriented(const Relation& r) {
    for (long long c : r.element().coefficients())
        if (c != 0) return c < 0 ? r * -1 : r;
    return r;
}

bool odd_dihedral(const FiniteGroup& g) {
    try {
        return dihedral_parameter(g) % 2 == 1;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

Relation default_relation(const GroupPtr& g) {
    if (odd_dihedral(*g)) return dihedral_standard_relation(g);
    auto b = relation_lattice(g);
    if (b.basis.empty()) throw UsageError(g->descriptor() + " has no nonzero Brauer relations");
    return oriented(b.basis.front());
}

ZGLattice lattice_arg(const GroupPtr& g, const std::string& spec) {
    auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon), arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (kind == "triv") return trivial_lattice(g);
        if (kind == "sign") return sign_lattice(g);
        if (kind == "zoo") return zoo_lattice(g, arg);
        if (kind == "perm") return permutation_lattice(g, g->subgroup_class(arg).representative);
        if (kind == "ext") {
            auto l = genus_representative(dihedral_parameter(*g), "ext_" + arg);
            if (!l) throw std::invalid_argument("no extension witness for " + arg + " at this p");
            return ZGLattice::from_generators(g, l->generator_matrices());
        }
        if (kind == "file") {
            std::ifstream in(arg);
            if (!in) throw std::invalid_argument("cannot open " + arg);
            auto l = lattice_from_json(Json::parse(in));
            if (l.group()->descriptor() != g->descriptor())
                throw std::invalid_argument("lattice file is over " + l.group()->descriptor());
            return ZGLattice::from_generators(g, l.generator_matrices());
        }
    } catch (const std::exception& e) {
        throw UsageError("--lattice " + spec + ": " + e.what());
    }
    throw UsageError("--lattice must be triv, sign, zoo:NAME, perm:LABEL, ext:A_rho|Aprime_rho or file:PATH");
}

std::string fmt_double(double x) {
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
}

std::string candidate_label(const IdentifyCandidate& c) {
    return (c.number ? "(" + std::to_string(*c.number) + ") " : std::string()) + c.display;
}

std::string character_text(const D2pMultiplicities& m) {
    return "m1=" + std::to_string(m.m1) + " meps=" + std::to_string(m.meps) + " mtau=" + std::to_string(m.mtau);
}

std::vector<fs::path> fixture_paths(const std::string& arg) {
    fs::path p(arg);
    if (!fs::exists(p)) throw UsageError("no such file or directory: " + arg);
    if (!fs::is_directory(p)) return {p};
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw UsageError("no .json fixtures in " + arg);
    return out;
}

int cmd_relations(const std::string& descriptor, bool json, std::ostream& out) {
    auto g = group_arg(descriptor);
    auto b = relation_lattice(g);
    if (json) {
        Json j;
        j["group"] = g->descriptor();
        j["rank"] = b.rank;
        Json basis = Json::array();
        for (const auto& r : b.basis) basis.push_back(relation_to_json(oriented(r)));
        j["basis"] = basis;
        out << j.dump(2) << '\n';
        return 0;
    }
    out << "group " << g->descriptor() << "\nrank " << b.rank << '\n';
    for (const auto& r : b.basis) out << format_element(oriented(r).element()) << '\n';
    return 0;
}

int cmd_dok(const std::string& descriptor, const std::string& lattice, const std::string& relation,
            const std::string& method, bool json, std::ostream& out) {
    auto g = group_arg(descriptor);
    auto l = lattice_arg(g, lattice);
    Relation theta = [&] {
        if (relation.empty()) return default_relation(g);
        try {
            return Relation::verify(parse_element(g, relation));
        } catch (const std::exception& e) {
            throw UsageError("--relation: " + std::string(e.what()));
        }
    }();
    std::vector<DokchitserConstant> values;
    if (method == "pairing" || method == "both") values.push_back(dok_pairing(l, theta));
    if (method == "injection" || method == "both") values.push_back(dok_injection(l, theta));
    const bool agree = values.size() < 2 || values[0].value == values[1].value;
    if (json) {
        Json arr = Json::array();
        for (const auto& v : values) arr.push_back(constant_record(theta, lattice, v));
        out << arr.dump(2) << '\n';
    } else {
        out << "relation  " << format_element(theta.element()) << '\n';
        out << "lattice   " << lattice << " (rank " << l.rank() << ")\n";
        for (const auto& v : values)
            out << std::left << std::setw(10) << (v.method == Method::pairing ? "pairing" : "injection")
                << to_string(v.value) << "  " << format_factored(v.value) << '\n';
        if (!agree) out << "MISMATCH between the two definitions\n";
    }
    return agree ? 0 : 1;
}

int cmd_zoo(int p, const std::string& format, bool extensions, std::ostream& out) {
    if (p < 3 || !is_prime(p) || p > 13) throw UsageError("--p must be an odd prime <= 13");
    if (extensions && p != 3 && p != 5) throw UsageError("--extensions supports p in {3, 5}");
    std::vector<ZooRow> rows;
    try {
        rows = zoo_table(p);
    } catch (const std::runtime_error& e) {
        out << "FAIL " << e.what() << '\n';
        return 1;
    }
    std::optional<ExtensionSearchResult> ext;
    if (extensions) ext = cached_extension_search(p);
    if (format == "json") {
        Json j = zoo_table_json(p, rows);
        if (ext) {
            Json e;
            e["overlattices_A_rho"] = ext->overlattices_a_rho;
            e["overlattices_Aprime_rho"] = ext->overlattices_aprime_rho;
            e["witnesses_A_rho"] = ext->a_rho.size();
            e["witnesses_Aprime_rho"] = ext->aprime_rho.size();
            e["split_A_rho"] = to_string(ext->split_a_rho);
            e["split_Aprime_rho"] = to_string(ext->split_aprime_rho);
            j["extensions"] = e;
        }
        out << j.dump(2) << '\n';
    } else {
        out << zoo_table_tsv(rows);
        if (ext) {
            out << "# A+rho: " << ext->overlattices_a_rho << " overlattices, " << ext->a_rho.size()
                << " with constant 1/" << p << '\n';
            out << "# Aprime+rho: " << ext->overlattices_aprime_rho << " overlattices, " << ext->aprime_rho.size()
                << " with constant " << p << '\n';
        }
    }
    return 0;
}

int cmd_verify(const std::string& path, double tol, double tol_newreg, bool json, std::ostream& out) {
    VerifyOptions opt;
    opt.tol_class_number = opt.tol_pairing = tol;
    opt.tol_newreg = tol_newreg;
    bool all = true;
    Json arr = Json::array();
    for (const auto& p : fixture_paths(path)) {
        VerificationReport r;
        try {
            r = verify_fixture(load_fixture(p), opt);
        } catch (const FixtureError& e) {
            r.fixture = p.filename().string();
            r.pass = false;
            QuotientReport q;
            q.check = "load";
            q.pass = false;
            q.detail = e.what();
            r.checks.push_back(q);
        }
        all = all && r.pass;
        if (json) {
            arr.push_back(verification_report_json(r));
            continue;
        }
        out << "fixture " << r.fixture << '\n';
        for (const auto& c : r.checks) {
            out << "  " << (c.pass ? "PASS " : "FAIL ") << c.check;
            if (c.tolerance > 0)
                out << "  rel.err " << fmt_double(c.relative_error) << " (tol " << fmt_double(c.tolerance) << ")";
            if (c.exact_quotient) out << "  exact " << to_string(*c.exact_quotient);
            if (!c.detail.empty()) out << "  " << c.detail;
            out << '\n';
        }
        out << "  verdict " << (r.pass ? "PASS" : "FAIL") << '\n';
    }
    if (json) out << arr.dump(2) << '\n';
    return all ? 0 : 1;
}

int cmd_identify(const std::string& path, const std::string& refinement, bool no_refinement, bool json,
                 std::ostream& out) {
    auto f = load_fixture(path);
    if (no_refinement) f.refinement.reset();
    std::optional<FieldFixture> s;
    if (!refinement.empty()) s = load_fixture(refinement);
    auto r = identify_galois_module(f, s ? &*s : nullptr);
    if (json) {
        out << identify_json(r).dump(2) << '\n';
        return 0;
    }
    out << "p " << r.p << "  character " << character_text(r.character) << "  observed C " << to_string(r.observed_constant)
        << '\n';
    out << "from class numbers:\n";
    for (const auto& c : r.from_h) out << "  " << candidate_label(c) << '\n';
    if (r.s_character) {
        out << "S-refinement: character " << character_text(*r.s_character) << "  observed C "
            << to_string(*r.s_observed_constant) << '\n';
        for (const auto& t : r.refinement) {
            out << "  " << candidate_label(t.s_candidate) << " -> kernel C " << to_string(t.kernel_constant)
                << (t.kernel_sign_split ? ", eps splits" : ", eps does not split") << " ->";
            for (const auto& m : t.kernel_matches) out << ' ' << candidate_label(m) << ';';
            out << '\n';
        }
    }
    out << "final:\n";
    for (const auto& c : r.final) out << "  " << candidate_label(c) << '\n';
    return 0;
}

int cmd_suite(const std::string& name, std::size_t trials, std::uint64_t seed, unsigned threads, bool json,
              std::ostream& out) {
    std::vector<std::string> names;
    if (name == "all") names = suite_names();
    else if (std::find(suite_names().begin(), suite_names().end(), name) != suite_names().end()) names = {name};
    else throw UsageError("unknown suite " + name);
    bool ok = true;
    Json arr = Json::array();
    for (const auto& n : names) {
        auto r = run_suite(n, trials, seed, threads);
        ok = ok && r.ok();
        if (json) {
            arr.push_back(suite_json(r));
            continue;
        }
        out << n << ": " << r.passed << "/" << r.trials << " pass, " << r.failures.size() << " fail";
        if (r.vacuous) out << " (" << r.vacuous << " vacuous)";
        out << "  seed " << seed << '\n';
        for (const auto& f : r.failures) out << "  trial " << f.trial << " seed " << f.seed << ": " << f.message << '\n';
    }
    if (json) out << (names.size() == 1 ? arr[0] : arr).dump(2) << '\n';
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Brauer relations and Dokchitser constants of integral lattices"};
    app.name("dokconst");
    app.require_subcommand(1);

    std::string group, lattice = "triv", relation, method = "pairing", format = "tsv", path, refinement, suite;
    bool json = false, table = false, extensions = false, no_refinement = false;
    int p = 0;
    double tol = 1e-8, tol_newreg = 1e-6;
    std::size_t trials = 200;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    auto* rel = app.add_subcommand("relations", "Basis of the lattice of Brauer relations");
    rel->add_option("group", group, "Group descriptor, e.g. D2q:3, C:6, S:4, prod(D2q:3,C:2)")->required();
    rel->add_flag("--json", json, "JSON output");

    auto* dok = app.add_subcommand("dok", "Dokchitser constant of a lattice");
    dok->add_option("--group", group, "Group descriptor")->required();
    dok->add_option("--lattice", lattice, "triv, sign, zoo:NAME, perm:LABEL, ext:A_rho|Aprime_rho, file:PATH");
    dok->add_option("--relation", relation, "Relation such as '1 - 2*C2 - C3 + 2*G' (default: standard one)");
    dok->add_option("--method", method, "pairing, injection or both")
        ->check(CLI::IsMember({"pairing", "injection", "both"}));
    dok->add_flag("--json", json, "JSON output");

    auto* zoo = app.add_subcommand("zoo", "Constant and index table of the D_2p lattices");
    zoo->add_option("--p", p, "Odd prime <= 13")->required();
    zoo->add_flag("--table", table, "Print the table (default)");
    zoo->add_option("--format", format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
    zoo->add_flag("--extensions", extensions, "Also run the overlattice search over A+rho and Aprime+rho");

    auto* ver = app.add_subcommand("verify-fixture", "Audit a field fixture or a directory of fixtures");
    ver->add_option("path", path, "Fixture file or directory")->required();
    ver->add_option("--tol", tol, "Relative tolerance of the class-number and pairing checks");
    ver->add_option("--tol-newreg", tol_newreg, "Relative tolerance of the regulator-quotient check");
    ver->add_flag("--json", json, "JSON output");

    auto* idf = app.add_subcommand("identify", "Candidate Galois module structures of the S-units");
    idf->add_option("path", path, "d2p fixture")->required();
    idf->add_option("--refinement", refinement, "Fixture with a larger S (default: the one named in the fixture)");
    idf->add_flag("--no-refinement", no_refinement, "Use class-number data only");
    idf->add_flag("--json", json, "JSON output");

    auto* sui = app.add_subcommand("suite", "Run a seeded property suite");
    sui->add_option("--name", suite, "Suite name or 'all'")->required();
    sui->add_option("--trials", trials, "Number of trials");
    auto* seed_opt = sui->add_option("--seed", seed, "Seed (default: $DOKCONST_SEED or 1)");
    sui->add_option("--threads", threads, "Worker threads (0: hardware concurrency)");
    sui->add_flag("--json", json, "JSON output");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }
    (void)table;

    try {
        if (*rel) return cmd_relations(group, json, out);
        if (*dok) return cmd_dok(group, lattice, relation, method, json, out);
        if (*zoo) return cmd_zoo(p, format, extensions, out);
        if (*ver) return cmd_verify(path, tol, tol_newreg, json, out);
        if (*idf) return cmd_identify(path, refinement, no_refinement, json, out);
        if (*sui) return cmd_suite(suite, trials, seed_opt->count() ? seed : default_seed(), threads, json, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const FixtureError& e) {
        err << "fixture error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace dokconst
