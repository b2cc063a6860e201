#pragma once

#include "dokconst/dokchitser.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dokconst {

inline constexpr const char* kFixtureSchema = "dokchitser-fixture/1";

class FixtureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CaseFlag { none, sqrt_unit, proot_unit_L, proot_unit_notL };
std::string to_string(CaseFlag c);
CaseFlag parse_case_flag(const std::string& s);

struct FieldRecord {
    Integer h_S;
    Integer w;
    long r_S = 0;
    double R_S = 1.0;
    std::string R_S_text;
    Integer lambda = 1;
};

struct SPrime {
    bool archimedean = false;
    long e = 1;
    long f = 1;
    std::string decomposition_class;
    std::string label;
};

struct LogPlace {
    bool archimedean = false;
    long e = 1;
    long f = 1;
    std::optional<long> prime;
};

struct UnitLogs {
    std::vector<LogPlace> places;
    std::vector<std::vector<double>> rows;  // one row per fundamental S-unit of F
};

// One D_2p step K_j / L_{j-1} of a D_2q tower, named by the subgroups fixing each field.
struct ChainLayer {
    long p = 0;
    std::string top;        // C_j, fixes K_j
    std::string quadratic;  // C_{j-1}, fixes K_{j-1}
    std::string degree_p;   // D_j, fixes L_j
    std::string base;       // D_{j-1}, fixes L_{j-1}
    CaseFlag case_flag = CaseFlag::none;
    Integer unit_index;
    Integer correction_index = 1;
};

struct FieldFixture {
    std::string name;
    std::string kind;  // "d2p" or "d2q_chain"
    std::string group_descriptor;
    GroupPtr group;
    int q = 0;
    std::map<std::string, FieldRecord> fields;  // keyed by subgroup class label
    std::vector<SPrime> s_primes_of_k;
    CaseFlag case_flag = CaseFlag::none;
    std::optional<Integer> observed_unit_index;
    std::optional<UnitLogs> unit_logs;
    std::optional<std::vector<IntMatrix>> unit_action;  // per group generator, columns are images
    std::vector<ChainLayer> layers;
    std::optional<std::filesystem::path> refinement;
    std::string provenance;
    std::filesystem::path source;

    const FieldRecord& field(const std::string& label) const;
    // Labels of F, L, K, k: subgroups 1, C2, C_q, G.
    std::string label_F() const { return "1"; }
    std::string label_L() const { return "C2"; }
    std::string label_K() const { return "C" + std::to_string(q); }
    std::string label_k() const { return "G"; }
};

// Throws FixtureError with a field-level message on any schema or consistency violation.
FieldFixture load_fixture(const std::filesystem::path& path);
FieldFixture parse_fixture(const std::string& json_text, const std::filesystem::path& source = {});
// Re-runs every structural validation on an in-memory fixture.
void validate_fixture(const FieldFixture& f);

struct StructuralInvariants {
    long a = 0;
    int delta = 1;
    std::map<std::string, Integer> lambda_profile;
};
StructuralInvariants structural_invariants(const FieldFixture& f);
std::map<std::string, Integer> lambda_profile(const GroupPtr& g, CaseFlag c);

// 1 - 2*C2 - C_q + 2*G for D_2q with q odd.
Relation dihedral_standard_relation(const GroupPtr& g);

struct QuotientReport {
    std::string check;
    double lhs = 1.0;
    double rhs = 1.0;
    double relative_error = 0.0;
    double tolerance = 0.0;
    std::optional<Rational> exact_quotient;
    bool pass = true;
    std::string detail;
};

double relative_error(double lhs, double rhs);

// prod_{c>0} h^c / prod_{c<0} h^|c| over the coefficients of theta.
Rational class_number_quotient(const FieldFixture& f, const Relation& theta);
QuotientReport class_number_identity_check(const FieldFixture& f, const Relation& theta, double tol = 1e-8);

struct UnitIndexPrediction {
    Rational exponent;  // of p, possibly a half-integer
    Rational class_number_quotient;
    std::optional<Integer> predicted_index;  // nullopt when not a positive integer
    long a = 0;
    int delta = 1;
    QuotientReport report;
};
UnitIndexPrediction unit_index_prediction(const FieldFixture& f);

QuotientReport s_unit_pairing_check(const FieldFixture& f, double tol = 1e-8);

ZGLattice unit_lattice(const FieldFixture& f);
QuotientReport newreg_identity_check(const FieldFixture& f, const Relation& theta, double tol = 1e-6);

struct ChainLayerResult {
    ChainLayer layer;
    long a = 0;
    int delta = 1;
    Rational exponent;
    Rational quotient;
    bool ok = false;
};
struct ChainReport {
    std::vector<ChainLayerResult> layers;
    Rational total_quotient;
    Rational product_of_layers;
    std::optional<Integer> full_unit_index;
    bool correction_identity = true;
    QuotientReport report;
};
ChainReport d2q_chain_evaluation(const FieldFixture& f, double tol = 1e-8);

struct NoPReport {
    Rational quotient;
    std::vector<long> checked;     // certified primes dividing |G|
    std::vector<long> violations;  // certified primes with nonzero valuation
    bool pass = true;
};
NoPReport noP_certificate_check(const FieldFixture& f);

// Observed C_Theta(Gamma) from integer data: C(1)/prod C(Z[G/D_p]) * (w-quotient / h-quotient)^2 / lambda-quotient^2.
Rational observed_unit_constant(const FieldFixture& f);

struct VerifyOptions {
    double tol_class_number = 1e-8;
    double tol_pairing = 1e-8;
    double tol_newreg = 1e-6;
};
struct VerificationReport {
    std::string fixture;
    std::vector<QuotientReport> checks;
    bool pass = true;
};
VerificationReport verify_fixture(const FieldFixture& f, const VerifyOptions& opt = {});

}  // namespace dokconst
