#include "spinortrace/json_io.hpp"

#include <cmath>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "spinortrace/error.hpp"

namespace spinortrace::json_io {

namespace {

[[noreturn]] void bad(const std::string& code, const std::string& msg) { throw Error(code, msg); }

}  // namespace

json parse_stream(std::istream& in, const std::string& what) {
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error("BAD_JSON", "cannot parse " + what + " as JSON");
    return j;
}

mpz_class integer_from_json(const json& v) {
    if (v.is_number_integer()) return mpz_class(v.get<long>());
    if (v.is_string()) {
        try {
            return mpz_class(v.get<std::string>());
        } catch (const std::invalid_argument&) {
            bad("BAD_JSON", "'" + v.get<std::string>() + "' is not an integer");
        }
    }
    bad("BAD_JSON", "expected an integer, got " + v.dump());
}

json integer_to_json(const mpz_class& z) {
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str());
}

mpq_class rational_from_json(const json& v) {
    if (v.is_number_integer()) return mpq_class(v.get<long>());
    if (v.is_string()) {
        try {
            mpq_class q(v.get<std::string>());
            q.canonicalize();
            return q;
        } catch (const std::invalid_argument&) {
            bad("BAD_JSON", "'" + v.get<std::string>() + "' is not a rational");
        }
    }
    bad("BAD_JSON", "expected a rational, got " + v.dump());
}

json rational_to_json(const mpq_class& q) {
    mpq_class c = q;
    c.canonicalize();
    if (c.get_den() == 1) return integer_to_json(c.get_num());
    return json(c.get_num().get_str() + "/" + c.get_den().get_str());
}

lattice::GramMatrix gram_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
        bad("BAD_JSON", "Gram JSON must be an object with a \"rows\" array");
    lattice::Mat m;
    for (const auto& row : j["rows"]) {
        lattice::Row r;
        for (const auto& v : row) r.push_back(integer_from_json(v));
        m.push_back(std::move(r));
    }
    if (j.contains("n") && j["n"].get<size_t>() != m.size())
        bad("BAD_JSON", "Gram \"n\" disagrees with the row count");
    return lattice::GramMatrix(std::move(m));
}

lattice::GramMatrix gram_from_csv(std::istream& in) {
    lattice::Mat m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        lattice::Row r;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                r.push_back(mpz_class(cell));
            } catch (const std::invalid_argument&) {
                bad("BAD_CSV", "'" + cell + "' is not an integer");
            }
        }
        m.push_back(std::move(r));
    }
    return lattice::GramMatrix(std::move(m));
}

lattice::GramMatrix load_gram(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("FILE_NOT_FOUND", "cannot open " + path);
    int c = in.peek();
    while (c == ' ' || c == '\n' || c == '\t' || c == '\r') {
        in.get();
        c = in.peek();
    }
    if (c == '{') return gram_from_json(parse_stream(in, path));
    return gram_from_csv(in);
}

FieldFixture field_from_json(const json& j) {
    if (!j.is_object() || !j.contains("poly") || !j["poly"].is_array())
        bad("BAD_JSON", "field JSON must be an object with a \"poly\" array");
    FieldFixture f;
    for (const auto& c : j["poly"]) f.input.poly.push_back(integer_from_json(c));
    if (j.contains("basis")) {
        for (const auto& row : j["basis"]) {
            std::vector<mpq_class> r;
            for (const auto& v : row) r.push_back(rational_from_json(v));
            f.input.basis.push_back(std::move(r));
        }
    }
    if (j.contains("ramification")) {
        if (!j["ramification"].is_object())
            bad("BAD_JSON", "\"ramification\" must map primes to [e,f] lists");
        for (const auto& [key, pairs] : j["ramification"].items()) {
            tracefields::RamificationData rd;
            try {
                rd.p = mpz_class(key);
            } catch (const std::invalid_argument&) {
                bad("BAD_JSON", "ramification key '" + key + "' is not a prime");
            }
            for (const auto& ef : pairs) {
                if (!ef.is_array() || ef.size() != 2)
                    bad("BAD_JSON", "ramification entries must be [e, f] pairs");
                rd.pairs.push_back({ef[0].get<long>(), ef[1].get<long>()});
            }
            f.ram.push_back(std::move(rd));
        }
        std::sort(f.ram.begin(), f.ram.end(),
                  [](const auto& a, const auto& b) { return a.p < b.p; });
    }
    if (j.contains("name")) f.name = j["name"].get<std::string>();
    if (j.contains("disc")) f.disc = integer_from_json(j["disc"]);
    return f;
}

FieldFixture load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("FILE_NOT_FOUND", "cannot open " + path);
    auto f = field_from_json(parse_stream(in, path));
    if (f.name.empty()) f.name = path;
    return f;
}

namespace {

const char* kind_tag(lattice::BlockKind k) {
    switch (k) {
        case lattice::BlockKind::Unit: return "unit";
        case lattice::BlockKind::Hyperbolic: return "hyperbolic";
        case lattice::BlockKind::EvenA: return "even";
    }
    return "";
}

const char* answer_tag(spinor::Answer a) {
    return a == spinor::Answer::ContainsUnits ? "contains" : "unknown";
}

}  // namespace

json to_json(const lattice::JordanDecomposition& J) {
    json blocks = json::array();
    for (const auto& b : J.blocks) {
        json e{{"scale", b.scale}, {"kind", kind_tag(b.kind)}, {"rank", b.rank()}};
        if (b.kind == lattice::BlockKind::Unit)
            e["unit_class"] = integer_to_json(b.unit.canonical_unit());
        blocks.push_back(std::move(e));
    }
    return json{{"p", integer_to_json(J.p)},
                {"blocks", std::move(blocks)},
                {"rank", J.rank()},
                {"det_valuation", J.det_valuation()},
                {"det_class", integer_to_json(J.det_class().representative())}};
}

json to_json(const spinor::SpinorVerdict& v) {
    return json{{"prime", integer_to_json(v.p)},
                {"answer", answer_tag(v.answer)},
                {"reason", spinor::reason_tag(v.reason)}};
}

json to_json(const spinor::GenusVerdict& v) {
    json per = json::array();
    for (const auto& s : v.verdicts) per.push_back(to_json(s));
    return json{{"conclusion", v.conclusion == spinor::Conclusion::OneProperSpinorGenus
                                   ? "one_proper_spinor_genus"
                                   : "inconclusive"},
                {"dimension", v.dimension},
                {"det", integer_to_json(v.det)},
                {"verdicts", std::move(per)}};
}

json to_json(const binaryforms::BinaryForm& f) {
    return json{{"a", f.a}, {"b", f.b}, {"c", f.c}};
}

json to_json(const binaryforms::FormClassGroup& G) {
    return json{{"disc", G.Delta},
                {"h", G.h},
                {"structure", G.structure},
                {"rank4", binaryforms::rank4(G)},
                {"spinor_per_genus", binaryforms::spinor_genera_counts(G).per_genus}};
}

json to_json(const tracefields::DiscBound& b) {
    return json{{"bound", b.bound}, {"exact", b.exact}, {"coarse", b.coarse}};
}

json to_json(const tracefields::QuadraticReport& q) {
    return json{{"d", q.d},
                {"form", to_json(q.form)},
                {"rank4", q.rank4},
                {"spin_equals_genus", q.spin_equals_genus},
                {"spinor_total", q.counts.total},
                {"spinor_per_genus", q.counts.per_genus}};
}

json to_json(const tracefields::TableReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back(json{{"poly", row.name},
                            {"c", row.c},
                            {"case", tracefields::quartic_case_tag(row.tag)},
                            {"reason", spinor::reason_tag(row.reason)},
                            {"pass", row.pass},
                            {"detail", row.detail}});
    return json{{"all_pass", r.all_pass}, {"rows", std::move(rows)}};
}

json to_json(const tracefields::FieldReport& r) {
    json out{{"degree", r.degree},
             {"det", integer_to_json(r.det)},
             {"real_roots", r.real_roots},
             {"definite", r.definite},
             {"delegated", r.delegated},
             {"warnings", r.warnings}};
    if (r.quadratic) out["quadratic"] = to_json(*r.quadratic);
    if (r.verdict) out["verdict"] = to_json(*r.verdict);
    json checks = json::array();
    for (const auto& rc : r.ram_checks) {
        checks.push_back(json{{"p", integer_to_json(rc.p)},
                              {"tame", rc.tame},
                              {"disc_valuation", rc.disc_valuation},
                              {"bound", to_json(rc.bound)},
                              {"bound_ok", rc.bound_ok},
                              {"shape_checked", rc.shape_checked},
                              {"shape_ok", rc.shape_ok},
                              {"verdict", to_json(rc.verdict)},
                              {"detail", rc.detail}});
    }
    out["ram_checks"] = std::move(checks);
    return out;
}

json to_json(const density::DensityReport& r) {
    auto triple = [](const std::array<binaryforms::i64, 4>& t) {
        return json{t[1], t[2], t[3]};
    };
    auto fk = [](const std::array<binaryforms::i64, 3>& f) {
        return json{f[0], f[1], f[2]};
    };
    /* NaN ratios (sign-restricted scans) serialize as null */
    auto ratio = [](double v) { return std::isnan(v) ? json() : json(v); };
    return json{{"X", r.X},
                {"sign", density::sign_name(r.sign)},
                {"method", density::method_name(r.method)},
                {"n_plus", r.n_plus},
                {"n_minus", r.n_minus},
                {"t_plus", triple(r.t_plus)},
                {"t_minus", triple(r.t_minus)},
                {"t_plus_total", r.t_plus_total()},
                {"t_minus_total", r.t_minus_total()},
                {"fk_neg_disc", fk(r.fk_neg_disc)},
                {"fk_pos_disc", fk(r.fk_pos_disc)},
                {"fk_consistent", r.fk_consistent},
                {"windows_computed", r.windows_computed},
                {"windows_resumed", r.windows_resumed},
                {"alpha_plus", ratio(r.alpha_plus())},
                {"alpha_minus", ratio(r.alpha_minus())},
                {"alpha", ratio(r.alpha())},
                {"predicted",
                 json{{"alpha_plus", density::predicted_alpha_plus()},
                      {"alpha_minus", density::predicted_alpha_minus()},
                      {"alpha", density::predicted_alpha()}}}};
}

}  // namespace spinortrace::json_io
