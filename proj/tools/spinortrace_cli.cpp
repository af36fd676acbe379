#include <CLI11.hpp>

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "spinortrace/density.hpp"
#include "spinortrace/error.hpp"
#include "spinortrace/json_io.hpp"

using spinortrace::Error;
using json = nlohmann::json;
namespace io = spinortrace::json_io;
namespace tf = spinortrace::tracefields;
namespace bf = spinortrace::binaryforms;
namespace dn = spinortrace::density;

namespace {

std::string fixture_dir() {
    if (const char* env = std::getenv("SPINORTRACE_FIXTURES")) return env;
    return ST_FIXTURE_DIR;
}

/* "-1,-1,0,1" (ascending coefficients) or "x^3-x-1" */
tf::Poly parse_poly(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw Error("BAD_POLY", "empty polynomial");

    if (s.find('x') == std::string::npos && s.find('X') == std::string::npos) {
        tf::Poly out;
        size_t pos = 0;
        for (;;) {
            size_t comma = s.find(',', pos);
            std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
            try {
                if (tok.empty()) throw std::invalid_argument("empty");
                out.emplace_back(tok);
            } catch (const std::invalid_argument&) {
                throw Error("BAD_POLY", "bad coefficient '" + tok + "'");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return out;
    }

    std::map<long, mpz_class> terms;
    long maxdeg = 0;
    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = (s[i] == '-') ? -1 : 1;
            ++i;
        } else if (i > 0) {
            throw Error("BAD_POLY", "expected + or - before '" + s.substr(i) + "'");
        }
        std::string digits;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            digits += s[i++];
        if (i < s.size() && s[i] == '*') ++i;  // allow 2*x^3
        long deg = 0;
        mpz_class coef = digits.empty() ? mpz_class(1) : mpz_class(digits);
        if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string ed;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                    ed += s[i++];
                if (ed.empty()) throw Error("BAD_POLY", "missing exponent");
                deg = std::stol(ed);
                if (deg > 64) throw Error("BAD_POLY", "exponent out of range");
            }
        } else if (digits.empty()) {
            throw Error("BAD_POLY", "dangling sign");
        }
        terms[deg] += sign * coef;
        maxdeg = std::max(maxdeg, deg);
    }
    tf::Poly out(static_cast<size_t>(maxdeg) + 1, 0);
    for (auto& [d, c] : terms) out[static_cast<size_t>(d)] = c;
    return out;
}

/* "e1,f1;e2,f2;..." */
std::vector<tf::RamPair> parse_ram_pairs(const std::string& s) {
    std::vector<tf::RamPair> out;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t semi = s.find(';', pos);
        std::string tok =
            s.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        size_t comma = tok.find(',');
        if (comma == std::string::npos)
            throw Error("BAD_RAM", "expected 'e,f' in '" + tok + "'");
        try {
            tf::RamPair pr;
            pr.e = std::stol(tok.substr(0, comma));
            pr.f = std::stol(tok.substr(comma + 1));
            out.push_back(pr);
        } catch (const std::exception&) {
            throw Error("BAD_RAM", "bad pair '" + tok + "'");
        }
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    if (out.empty()) throw Error("BAD_RAM", "no ramification pairs given");
    return out;
}

mpz_class parse_prime(const std::string& s) {
    try {
        return mpz_class(s);
    } catch (const std::invalid_argument&) {
        throw Error("BAD_PRIME", "'" + s + "' is not an integer");
    }
}

std::vector<std::vector<mpq_class>> load_basis(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("FILE_NOT_FOUND", "cannot open " + path);
    json j = io::parse_stream(in, path);
    if (!j.is_array()) throw Error("BAD_JSON", "basis file must hold an array of rows");
    std::vector<std::vector<mpq_class>> rows;
    for (const auto& row : j) {
        if (!row.is_array()) throw Error("BAD_JSON", "basis rows must be arrays");
        std::vector<mpq_class> r;
        for (const auto& v : row) r.push_back(io::rational_from_json(v));
        rows.push_back(std::move(r));
    }
    return rows;
}

const char* kind_name(spinortrace::lattice::BlockKind k) {
    using spinortrace::lattice::BlockKind;
    switch (k) {
        case BlockKind::Unit: return "unit";
        case BlockKind::Hyperbolic: return "hyperbolic";
        default: return "even";
    }
}

json run_jordan(const std::string& gram_file, const std::string& prime) {
    auto G = io::load_gram(gram_file);
    return io::to_json(spinortrace::lattice::jordan_decompose(G, parse_prime(prime)));
}

json run_spinor_check(const std::string& gram_file, const std::string& poly,
                      const std::string& basis_file, const std::string& field) {
    int given = !gram_file.empty() + !poly.empty() + !field.empty();
    if (given != 1)
        throw Error("BAD_ARGS", "provide exactly one of --gram, --poly, --field");
    if (!gram_file.empty()) {
        auto v = spinortrace::spinor::one_spinor_genus(io::load_gram(gram_file));
        json payload = io::to_json(v);
        if (v.dimension <= 2) payload["hint"] = "use quadratic --d";
        return payload;
    }
    if (!poly.empty()) {
        tf::NumberFieldInput in;
        in.poly = parse_poly(poly);
        if (!basis_file.empty()) in.basis = load_basis(basis_file);
        return io::to_json(tf::analyze_field(in));
    }
    std::string name = field;
    if (name.size() < 5 || name.substr(name.size() - 5) != ".json") name += ".json";
    auto fx = io::load_field(fixture_dir() + "/fields/" + name);
    json payload = io::to_json(tf::analyze_field(fx.input, fx.ram));
    payload["name"] = fx.name;
    return payload;
}

json run_quadratic(long long d, long long limit_disc) {
    bf::ClassGroupOptions opt;
    if (limit_disc > 0) opt.disc_limit = limit_disc;
    auto tfm = bf::quadratic_trace_form(d);
    auto G = bf::class_group(tfm.form.disc(), opt);
    int r4 = bf::rank4_of_d(d, opt);
    auto counts = bf::spinor_genera_counts(G);
    return json{{"d", d},
                {"form", io::to_json(tfm.form)},
                {"halved", tfm.halved},
                {"class_group", io::to_json(G)},
                {"rank4", r4},
                {"spin_equals_genus", r4 == 0},
                {"spinor_total", counts.total},
                {"spinor_per_genus", counts.per_genus}};
}

json run_density(long long xmax, const std::string& sign, const std::string& method,
                 int jobs, const std::string& resume_file,
                 const std::string& checkpoint_file) {
    dn::ScanOptions opt;
    if (sign == "+" || sign == "plus")
        opt.sign = dn::Sign::Plus;
    else if (sign == "-" || sign == "minus")
        opt.sign = dn::Sign::Minus;
    else if (sign == "both")
        opt.sign = dn::Sign::Both;
    else
        throw Error("BAD_ARGS", "--sign must be +, - or both");
    if (method == "oracle")
        opt.method = dn::Method::Oracle;
    else if (method == "redei")
        opt.method = dn::Method::Redei;
    else
        throw Error("BAD_ARGS", "--method must be oracle or redei");
    opt.jobs = jobs;

    std::vector<dn::RangeCounts> resumed;
    if (!resume_file.empty()) {
        std::ifstream in(resume_file);
        if (in) resumed = dn::load_checkpoint(in);  // a missing log means a fresh scan
        opt.resume = &resumed;
    }
    std::ofstream ck;
    if (!checkpoint_file.empty()) {
        ck.open(checkpoint_file, std::ios::app);
        if (!ck) throw Error("FILE_NOT_FOUND", "cannot open " + checkpoint_file);
        opt.checkpoint = &ck;
    }
    return io::to_json(dn::scan(xmax, opt));
}

json run_tame(int n, const std::string& prime, const std::string& ram_str) {
    tf::RamificationData ram;
    ram.p = parse_prime(prime);
    ram.pairs = parse_ram_pairs(ram_str);
    json pairs = json::array();
    for (const auto& pr : ram.pairs) pairs.push_back(json{pr.e, pr.f});

    auto bound = tf::disc_bound(n, ram);  // also validates the ramification data
    bool tame = tf::max_wildness(ram) == 0;
    json payload{{"n", n},
                 {"p", io::integer_to_json(ram.p)},
                 {"ram", std::move(pairs)},
                 {"residue_degree_sum", tf::residue_degree_sum(ram)},
                 {"max_wildness", tf::max_wildness(ram)},
                 {"tame", tame},
                 {"bound", io::to_json(bound)}};
    if (tame) {
        json shape = json::array();
        for (const auto& b : tf::tame_local_shape(n, ram))
            shape.push_back(json{{"scale", b.scale}, {"kind", kind_name(b.kind)}});
        payload["shape"] = std::move(shape);
        if (n >= 3) payload["verdict"] = io::to_json(tf::tame_verdict(n, ram));
    }
    return payload;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinor-genus toolkit for integral quadratic lattices"};
    app.require_subcommand(1);

    bool compact = false, pretty = false;
    long long limit_disc = 0;
    auto* json_flag = app.add_flag("--json", compact, "compact single-line JSON output");
    app.add_flag("--pretty", pretty, "indented JSON output (the default)")
        ->excludes(json_flag);
    app.add_option("--limit-disc", limit_disc,
                   "discriminant ceiling for class-group enumeration (quadratic)");

    auto* jordan = app.add_subcommand("jordan", "p-adic Jordan decomposition of a Gram matrix");
    std::string j_gram, j_prime;
    jordan->add_option("--gram", j_gram, "Gram matrix file (JSON {\"rows\": ...} or CSV)")
        ->required();
    jordan->add_option("--prime", j_prime, "prime p")->required();

    auto* spinor = app.add_subcommand(
        "spinor-check", "decide whether a genus is a single proper spinor genus");
    std::string s_gram, s_poly, s_basis, s_field;
    spinor->add_option("--gram", s_gram, "Gram matrix file");
    spinor->add_option("--poly", s_poly,
                       "monic polynomial: ascending coefficients '-1,-1,0,1' or 'x^3-x-1'");
    spinor->add_option("--basis", s_basis,
                       "JSON file with integral-basis rows over the power basis");
    spinor->add_option("--field", s_field,
                       "fixture name under <fixtures>/fields (see SPINORTRACE_FIXTURES)");

    auto* quad = app.add_subcommand("quadratic",
                                    "trace form and spinor counts for Q(sqrt d)");
    long long q_d = 0;
    quad->add_option("--d", q_d, "squarefree radicand")->required();

    auto* dens = app.add_subcommand("density", "squarefree scan of one-spinor-genus fields");
    long long d_xmax = 0;
    std::string d_sign = "both", d_method = "oracle", d_resume, d_checkpoint;
    int d_jobs = 1;
    dens->add_option("--xmax", d_xmax, "scan radicands 0 < |d| < X")->required();
    dens->add_option("--sign", d_sign, "+, - or both (default both)");
    dens->add_option("--method", d_method, "oracle or redei (default oracle)");
    dens->add_option("--jobs", d_jobs, "worker threads")->check(CLI::PositiveNumber);
    dens->add_option("--resume", d_resume, "checkpoint log to resume (missing file = fresh)");
    dens->add_option("--checkpoint", d_checkpoint, "append per-window checkpoint lines here");

    auto* table = app.add_subcommand("verify-table",
                                     "verify the 36 wild quartic fields against their "
                                     "predicted 2-adic decompositions");

    auto* tame = app.add_subcommand("tame", "predicted local shape and discriminant bound");
    int t_n = 0;
    std::string t_prime, t_ram;
    tame->add_option("--n", t_n, "field degree")->required();
    tame->add_option("--prime", t_prime, "prime p")->required();
    tame->add_option("--ram", t_ram, "ramification data 'e1,f1;e2,f2;...'")->required();

    CLI11_PARSE(app, argc, argv);

    std::string command;
    json payload, error;
    bool ok = true;
    auto t0 = std::chrono::steady_clock::now();
    try {
        if (jordan->parsed()) {
            command = "jordan";
            payload = run_jordan(j_gram, j_prime);
        } else if (spinor->parsed()) {
            command = "spinor-check";
            payload = run_spinor_check(s_gram, s_poly, s_basis, s_field);
        } else if (quad->parsed()) {
            command = "quadratic";
            payload = run_quadratic(q_d, limit_disc);
        } else if (dens->parsed()) {
            command = "density";
            payload = run_density(d_xmax, d_sign, d_method, d_jobs, d_resume, d_checkpoint);
        } else if (table->parsed()) {
            command = "verify-table";
            payload = io::to_json(tf::verify_quartic_table());
        } else if (tame->parsed()) {
            command = "tame";
            payload = run_tame(t_n, t_prime, t_ram);
        }
    } catch (const Error& e) {
        ok = false;
        error = json{{"code", e.code()}, {"message", e.what()}};
    } catch (const std::exception& e) {
        ok = false;
        error = json{{"code", "INTERNAL"}, {"message", e.what()}};
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();

    json envelope{{"command", command},
                  {"status", ok ? "ok" : "error"},
                  {"elapsed_ms", ms}};
    if (ok)
        envelope["payload"] = std::move(payload);
    else
        envelope["error"] = std::move(error);
    std::cout << envelope.dump(compact ? -1 : 2) << "\n";
    return ok ? 0 : 1;
}
