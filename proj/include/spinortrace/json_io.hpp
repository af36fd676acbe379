#pragma once
#include <json.hpp>

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "spinortrace/binaryforms.hpp"
#include "spinortrace/density.hpp"
#include "spinortrace/lattice.hpp"
#include "spinortrace/spinor.hpp"
#include "spinortrace/tracefields.hpp"

namespace spinortrace::json_io {

using json = nlohmann::json;

/* Numbers that can exceed 64 bits travel as strings; both spellings are
 * accepted on input and emission switches automatically. */
mpz_class integer_from_json(const json& v);
json parse_stream(std::istream& in, const std::string& what);  // BAD_JSON
json integer_to_json(const mpz_class& z);
mpq_class rational_from_json(const json& v);  // int, or "num/den" string
json rational_to_json(const mpq_class& q);

/* {"n": int, "rows": [[int, ...], ...]}; CSV alternative is plain integer
 * rows. load_gram dispatches on the leading non-space byte. */
lattice::GramMatrix gram_from_json(const json& j);
lattice::GramMatrix gram_from_csv(std::istream& in);
lattice::GramMatrix load_gram(const std::string& path);

/* {"poly": [c0,...,1], "basis": [[rat,...],...]?, "ramification":
 *  {"p": [[e,f],...]}?, "name"?: str, "disc"?: int} */
struct FieldFixture {
    std::string name;
    tracefields::NumberFieldInput input;
    std::vector<tracefields::RamificationData> ram;
    std::optional<mpz_class> disc;  // ground truth for cross-validation
};
FieldFixture field_from_json(const json& j);
FieldFixture load_field(const std::string& path);

json to_json(const lattice::JordanDecomposition& J);
json to_json(const spinor::SpinorVerdict& v);
json to_json(const spinor::GenusVerdict& v);
json to_json(const binaryforms::BinaryForm& f);
json to_json(const binaryforms::FormClassGroup& G);
json to_json(const tracefields::DiscBound& b);
json to_json(const tracefields::QuadraticReport& q);
json to_json(const tracefields::TableReport& r);
json to_json(const tracefields::FieldReport& r);
json to_json(const density::DensityReport& r);

}  // namespace spinortrace::json_io
