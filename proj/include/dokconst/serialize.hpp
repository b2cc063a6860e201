#pragma once

#include "dokconst/identify.hpp"
#include "dokconst/ledger.hpp"
#include "dokconst/suites.hpp"
#include "dokconst/zoo.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace dokconst {

using Json = nlohmann::ordered_json;

// {"group": descriptor, "rank": n, "generators": [[["1","0"],...], ...]} with decimal-string entries.
Json lattice_to_json(const ZGLattice& l);
// The group is rebuilt from its descriptor.
ZGLattice lattice_from_json(const Json& j);

// label -> coefficient, zero coefficients omitted.
Json relation_to_json(const Relation& r);
Relation relation_from_json(const GroupPtr& g, const Json& j);

// {"3": -1} for 1/3.
Json factored_json(const Rational& x);

// {relation, lattice, value: "a/b", factored, method}
Json constant_record(const Relation& theta, const std::string& lattice, const DokchitserConstant& c);

std::string row_status(const ZooRow& r);
Json zoo_table_json(int p, const std::vector<ZooRow>& rows);
// Header plus one line per row: name, constant, index, I, status.
std::string zoo_table_tsv(const std::vector<ZooRow>& rows);

Json quotient_report_json(const QuotientReport& r);
Json verification_report_json(const VerificationReport& r);
Json identify_json(const IdentifyResult& r);
Json suite_json(const SuiteResult& r);

}  // namespace dokconst
