#include "spinortrace/tracefields.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "spinortrace/error.hpp"

namespace spinortrace::tracefields {

namespace {

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

/* ---- rational polynomial helpers (dense, ascending) ---- */

using QPoly = std::vector<mpq_class>;

int qdeg(const QPoly& a) {
    int d = static_cast<int>(a.size()) - 1;
    while (d >= 0 && a[d] == 0) --d;
    return d;
}

QPoly qderiv(const QPoly& a) {
    QPoly out;
    for (size_t k = 1; k < a.size(); ++k) out.push_back(mpq_class(static_cast<long>(k)) * a[k]);
    if (out.empty()) out.push_back(0);
    return out;
}

/* remainder of a by b (b nonzero), on a copy */
QPoly qrem(QPoly a, const QPoly& b) {
    int db = qdeg(b);
    for (int da = qdeg(a); da >= db && da >= 0; da = qdeg(a)) {
        mpq_class q = a[da] / b[db];
        for (int i = 0; i <= db; ++i) a[da - db + i] -= q * b[i];
        a[da] = 0;
    }
    return a;
}

/* divide by |leading coefficient|; positive factor, so signs are preserved */
void qnormalize(QPoly& a) {
    int d = qdeg(a);
    if (d < 0) return;
    mpq_class m = abs(a[d]);
    for (auto& c : a) c /= m;
}

bool poly_is_squarefree(const Poly& f) {
    QPoly a(f.begin(), f.end()), b = qderiv(a);
    while (qdeg(b) >= 0) {
        QPoly r = qrem(a, b);
        qnormalize(r);
        a = std::move(b);
        b = std::move(r);
    }
    return qdeg(a) == 0;
}

void validate_poly(const Poly& f) {
    if (f.size() < 3) throw Error("DEGREE_TOO_SMALL", "polynomial degree must be at least 2");
    if (f.back() != 1) throw Error("POLY_NOT_MONIC", "leading coefficient must be 1");
    if (!poly_is_squarefree(f))
        throw Error("POLY_NOT_SQUAREFREE", poly_to_string(f) + " has a repeated factor");
}

/* ---- ramification helpers ---- */

void validate_ram(int n, const RamificationData& ram) {
    if (ram.p < 2 || mpz_probab_prime_p(ram.p.get_mpz_t(), 40) == 0)
        throw Error("RAM_INCONSISTENT", "ramification prime " + ram.p.get_str() + " is not prime");
    if (ram.pairs.empty()) throw Error("RAM_INCONSISTENT", "empty ramification data");
    long total = 0;
    for (const auto& [e, f] : ram.pairs) {
        if (e < 1 || f < 1) throw Error("RAM_INCONSISTENT", "e and f must be positive");
        total += e * f;
    }
    if (total != n)
        throw Error("RAM_INCONSISTENT", "sum e_i f_i = " + std::to_string(total) +
                                            " does not match degree " + std::to_string(n));
}

long vp_long(long e, const mpz_class& p) {
    long v = 0;
    mpz_class E = e;
    while (E % p == 0) {
        E /= p;
        ++v;
    }
    return v;
}

}  // namespace

std::string poly_to_string(const Poly& f) {
    std::ostringstream os;
    bool first = true;
    for (int k = degree(f); k >= 0; --k) {
        const mpz_class& c = f[k];
        if (c == 0) continue;
        mpz_class a = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? "-" : "+");
        }
        if (k == 0 || a != 1) os << a.get_str();
        if (k >= 1) os << "x";
        if (k >= 2) os << "^" << k;
    }
    if (first) os << "0";
    return os.str();
}

long residue_degree_sum(const RamificationData& ram) {
    long F = 0;
    for (const auto& pr : ram.pairs) F += pr.f;
    return F;
}

long max_wildness(const RamificationData& ram) {
    long M = 0;
    for (const auto& pr : ram.pairs) M = std::max(M, vp_long(pr.e, ram.p));
    return M;
}

std::vector<mpz_class> power_sums(const Poly& f) {
    validate_poly(f);
    int n = degree(f);
    std::vector<mpz_class> p(2 * n - 1);
    p[0] = n;
    for (int k = 1; k <= 2 * n - 2; ++k) {
        mpz_class s = 0;
        for (int i = 1; i <= std::min(k - 1, n); ++i) s += f[n - i] * p[k - i];
        if (k <= n) s += k * f[n - k];
        p[k] = -s;
    }
    return p;
}

lattice::GramMatrix trace_gram(const NumberFieldInput& in) {
    validate_poly(in.poly);
    int n = degree(in.poly);
    std::vector<std::vector<mpq_class>> B = in.basis;
    if (B.empty()) {
        B.assign(n, std::vector<mpq_class>(n, 0));
        for (int i = 0; i < n; ++i) B[i][i] = 1;
    }
    if (static_cast<int>(B.size()) != n)
        throw Error("BASIS_BAD_SHAPE", "basis must have one row per degree");
    for (auto& row : B) {
        if (static_cast<int>(row.size()) > n)
            throw Error("BASIS_BAD_SHAPE", "basis row exceeds degree " + std::to_string(n));
        row.resize(n, 0);
    }

    /* nonsingularity via elimination on a copy */
    {
        auto M = B;
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            for (int r = col; r < n; ++r)
                if (M[r][col] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) throw Error("BASIS_SINGULAR", "basis matrix is singular");
            std::swap(M[col], M[piv]);
            for (int r = col + 1; r < n; ++r) {
                mpq_class q = M[r][col] / M[col][col];
                for (int c = col; c < n; ++c) M[r][c] -= q * M[col][c];
            }
        }
    }

    auto ps = power_sums(in.poly);
    lattice::Mat g(n, lattice::Row(n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            /* Tr(b_i b_j) = sum of c_k Tr(theta^k) over the product's
             * coefficients; degree stays <= 2n-2, no reduction mod f needed */
            std::vector<mpq_class> prod(2 * n - 1, 0);
            for (int u = 0; u < n; ++u) {
                if (B[i][u] == 0) continue;
                for (int v = 0; v < n; ++v)
                    if (B[j][v] != 0) prod[u + v] += B[i][u] * B[j][v];
            }
            mpq_class t = 0;
            for (int k = 0; k <= 2 * n - 2; ++k) t += prod[k] * mpq_class(ps[k]);
            t.canonicalize();
            if (t.get_den() != 1)
                throw Error("TRACE_NOT_INTEGRAL",
                            "Tr(b_" + std::to_string(i) + " * b_" + std::to_string(j) + ") = " +
                                t.get_str() + " is not an integer: basis does not span an order");
            g[i][j] = g[j][i] = t.get_num();
        }
    return lattice::GramMatrix(std::move(g));
}

int real_root_count(const Poly& f) {
    validate_poly(f);
    std::vector<QPoly> chain;
    chain.emplace_back(f.begin(), f.end());
    chain.push_back(qderiv(chain[0]));
    while (qdeg(chain.back()) > 0) {
        QPoly r = qrem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        if (qdeg(r) < 0) throw Error("INTERNAL", "sturm chain collapsed on squarefree input");
        qnormalize(r);
        chain.push_back(std::move(r));
    }
    auto variations = [&](bool at_plus_infinity) {
        int count = 0, last = 0;
        for (const auto& q : chain) {
            int d = qdeg(q);
            int s = sgn(q[d]);
            if (!at_plus_infinity && d % 2 == 1) s = -s;
            if (last != 0 && s != 0 && s != last) ++count;
            if (s != 0) last = s;
        }
        return count;
    };
    return variations(false) - variations(true);
}

std::vector<ShapeBlock> tame_local_shape(int n, const RamificationData& ram) {
    validate_ram(n, ram);
    if (max_wildness(ram) > 0) throw Error("WILD_PRIME", "tame shape undefined for wild primes");
    long F = residue_degree_sum(ram);
    std::vector<ShapeBlock> out;
    for (long i = 0; i < F; ++i) out.push_back({0, lattice::BlockKind::Unit});
    if (ram.p == 2) {
        if ((n - F) % 2 != 0)
            throw Error("RAM_INCONSISTENT",
                        "n - F_2 is odd: impossible for tame ramification at 2");
        for (long i = 0; i < (n - F) / 2; ++i) out.push_back({1, lattice::BlockKind::Hyperbolic});
    } else {
        for (long i = 0; i < n - F; ++i) out.push_back({1, lattice::BlockKind::Unit});
    }
    return out;
}

TameMatch match_tame_shape(int n, const RamificationData& ram,
                           const lattice::JordanDecomposition& J) {
    auto shape = tame_local_shape(n, ram);
    long F = residue_degree_sum(ram);
    TameMatch m;
    m.ok = true;
    std::ostringstream os;

    std::map<long, int> want;
    for (const auto& b : shape) want[b.scale] += (b.kind == lattice::BlockKind::Unit ? 1 : 2);
    auto got = J.scale_rank_profile();
    if (want != got) {
        m.ok = false;
        os << "scale/rank mismatch:";
        for (const auto& [s, r] : want) os << " predicted " << r << "@" << s;
        os << " vs";
        for (const auto& [s, r] : got) os << " computed " << r << "@" << s;
        os << ";";
    }
    if (J.det_valuation() != n - F) {
        m.ok = false;
        os << " v_p(det) = " << J.det_valuation() << ", predicted " << n - F << ";";
    }
    if (J.p == 2) {
        /* odd/even rank per scale is invariant under re-decomposition, so
         * scale 0 must keep a diagonal block and scale 1 must be all even */
        auto even = J.even_rank_profile();
        int even0 = even.count(0) ? even.at(0) : 0;
        int rank1 = got.count(1) ? got.at(1) : 0;
        int even1 = even.count(1) ? even.at(1) : 0;
        if (F > 0 && got.count(0) && even0 == got.at(0)) {
            m.ok = false;
            os << " scale 0 has no unit block;";
        }
        if (even1 != rank1) {
            m.ok = false;
            os << " scale 1 has a unit block, predicted all hyperbolic;";
        }
    }
    m.detail = os.str();
    return m;
}

DiscBound disc_bound(int n, const RamificationData& ram) {
    validate_ram(n, ram);
    long F = 0, wild = 0, M = 0;
    for (const auto& [e, f] : ram.pairs) {
        long v = vp_long(e, ram.p);
        F += f;
        wild += e * f * v;
        M = std::max(M, v);
    }
    DiscBound b;
    b.bound = n - F + wild;
    b.exact = (M == 0);
    b.coarse = static_cast<long>(n) * (M + 1) - F;
    return b;
}

spinor::SpinorVerdict tame_verdict(int n, const RamificationData& ram) {
    validate_ram(n, ram);
    if (max_wildness(ram) > 0) throw Error("WILD_PRIME", "tame verdict undefined for wild primes");
    spinor::SpinorVerdict v;
    v.p = ram.p;
    if (n >= 3) {
        /* two scales share n >= 3 unit blocks for odd p, so some scale holds
         * a pair; at p = 2 either a hyperbolic plane exists (scale 1) or all
         * n >= 3 blocks are scale-0 units */
        v.answer = spinor::Answer::ContainsUnits;
        v.reason = spinor::Reason::TamePattern;
    }
    return v;
}

const char* quartic_case_tag(QuarticCase c) {
    switch (c) {
        case QuarticCase::I: return "i";
        case QuarticCase::II: return "ii";
        case QuarticCase::III: return "iii";
        case QuarticCase::IV: return "iv";
        case QuarticCase::EightX: return "eight_x";
        case QuarticCase::Special: return "special";
    }
    return "";
}

namespace {

PredictedBlock unit_block(long scale, mpq_class u) {
    u.canonicalize();
    if (u == 0 || mpz_even_p(u.get_num().get_mpz_t()) || mpz_even_p(u.get_den().get_mpz_t()))
        throw Error("INTERNAL",
                    "predicted diagonal entry " + u.get_str() + " is not a 2-adic unit");
    return {scale, lattice::BlockKind::Unit, std::move(u)};
}

long prediction_scale_sum(const std::vector<PredictedBlock>& blocks) {
    long s = 0;
    for (const auto& b : blocks) s += b.scale * (b.kind == lattice::BlockKind::Unit ? 1 : 2);
    return s;
}

}  // namespace

QuarticPrediction quartic_wild2_classify(const Poly& f) {
    auto unrecognized = [&] {
        return Error("SHAPE_UNRECOGNIZED",
                     poly_to_string(f) + " is not one of the tabulated quartic shapes");
    };
    if (degree(f) != 4 || f[4] != 1 || f[3] != 0) throw unrecognized();

    QuarticPrediction out;
    const mpz_class two = 2;

    if (f == Poly{22, 8, 8, 0, 1}) {
        out.tag = QuarticCase::Special;
        out.blocks = {unit_block(2, 1), unit_block(3, -3), unit_block(3, 1),
                      unit_block(3, mpq_class(-773, 3))};
    } else if (f[2] == 0 && f[1] == 8) {
        /* x^4 + 8x + 2b, b odd */
        if (f[0] == 0 || f[0] % 2 != 0) throw unrecognized();
        mpz_class b = f[0] / 2;
        if (padic::valuation(b, two) != 0) throw unrecognized();
        out.tag = QuarticCase::EightX;
        out.blocks = {unit_block(2, 1), unit_block(3, mpq_class(-b)),
                      {3, lattice::BlockKind::Hyperbolic, 0}};
    } else if (f[1] == 0) {
        /* x^4 + 2ax^2 + b */
        if (f[2] % 2 != 0) throw unrecognized();
        mpz_class a = f[2] / 2, b = f[0];
        if (b == 0) throw unrecognized();
        long vb = padic::valuation(b, two);
        if (a == 0) {
            if (vb != 1) throw unrecognized();
            out.tag = QuarticCase::IV;
            out.blocks = {unit_block(2, 1), unit_block(3, mpq_class(-b) / 2),
                          {3, lattice::BlockKind::Hyperbolic, 0}};
        } else {
            long va = padic::valuation(a, two);
            mpq_class last = mpq_class(a * a * b - b * b) / mpq_class(2 * a);
            if (va == 0 && vb == 1) {
                out.tag = QuarticCase::I;
                out.blocks = {unit_block(2, 1), unit_block(2, mpq_class(a * a - b)),
                              unit_block(2, mpq_class(-a)), unit_block(3, last)};
            } else if (va == 0 && vb == 0) {
                /* (a^2 - b)/2 is a 2-adic unit exactly when b = 3 mod 4; every
                 * tabulated field satisfies this, anything else is unknown */
                if (((b % 4) + 4) % 4 != 3) throw unrecognized();
                out.tag = QuarticCase::II;
                out.blocks = {unit_block(2, 1), unit_block(3, mpq_class(a * a - b) / 2),
                              unit_block(2, mpq_class(-a)), unit_block(3, last)};
            } else if (va == 1 && vb == 1) {
                out.tag = QuarticCase::III;
                out.blocks = {unit_block(2, 1), unit_block(3, mpq_class(a * a - b) / 2),
                              unit_block(3, mpq_class(-a) / 2), unit_block(3, last)};
            } else {
                throw unrecognized();
            }
        }
    } else {
        throw unrecognized();
    }
    out.det_valuation = prediction_scale_sum(out.blocks);
    return out;
}

TableReport verify_quartic_table() {
    /* the 36 totally ramified quartic 2-adic fields with v_2(disc) in 9..11,
     * each given by the minimal polynomial of a generator of its ring of
     * integers */
    static const std::vector<std::pair<Poly, long>> table = {
        {{2, 0, 6, 0, 1}, 9},    {{2, 0, -2, 0, 1}, 9},   {{10, 0, 6, 0, 1}, 9},
        {{10, 0, 2, 0, 1}, 9},   {{-2, 0, 2, 0, 1}, 9},   {{-2, 0, -2, 0, 1}, 9},
        {{6, 0, 2, 0, 1}, 9},    {{6, 0, -2, 0, 1}, 9},

        {{-9, 0, 2, 0, 1}, 10},  {{-1, 0, 2, 0, 1}, 10},  {{-9, 0, 6, 0, 1}, 10},
        {{-1, 0, 6, 0, 1}, 10},  {{3, 0, -6, 0, 1}, 10},  {{3, 0, 6, 0, 1}, 10},
        {{3, 0, -2, 0, 1}, 10},  {{3, 0, 2, 0, 1}, 10},

        {{2, 0, 12, 0, 1}, 11},  {{18, 0, 4, 0, 1}, 11},  {{18, 0, 12, 0, 1}, 11},
        {{10, 0, 4, 0, 1}, 11},  {{10, 0, 12, 0, 1}, 11}, {{14, 0, 4, 0, 1}, 11},
        {{6, 0, 4, 0, 1}, 11},   {{6, 0, 12, 0, 1}, 11},

        {{6, 0, 0, 0, 1}, 11},   {{22, 0, 0, 0, 1}, 11},  {{14, 0, 0, 0, 1}, 11},
        {{30, 0, 0, 0, 1}, 11},  {{26, 0, 0, 0, 1}, 11},  {{10, 0, 0, 0, 1}, 11},
        {{18, 0, 0, 0, 1}, 11},  {{2, 0, 0, 0, 1}, 11},

        {{10, 8, 0, 0, 1}, 11},  {{6, 8, 0, 0, 1}, 11},   {{14, 8, 0, 0, 1}, 11},
        {{22, 8, 8, 0, 1}, 11},
    };

    TableReport rep;
    rep.all_pass = true;
    const mpz_class two = 2;
    for (const auto& [poly, c] : table) {
        TableRow row;
        row.poly = poly;
        row.name = poly_to_string(poly);
        row.c = c;
        std::ostringstream os;
        bool ok = true;

        auto pred = quartic_wild2_classify(poly);
        row.tag = pred.tag;
        if (pred.det_valuation != c) {
            ok = false;
            os << "predicted scale sum " << pred.det_valuation << " != tabulated " << c << "; ";
        }

        auto G = trace_gram({poly, {}});
        long vdet = padic::valuation(G.det(), two);
        if (vdet != c) {
            ok = false;
            os << "v_2(det) = " << vdet << " != tabulated " << c << "; ";
        }

        auto J = lattice::jordan_decompose(G, two);
        std::map<long, int> want, got = J.scale_rank_profile();
        for (const auto& b : pred.blocks)
            want[b.scale] += (b.kind == lattice::BlockKind::Unit ? 1 : 2);
        if (want != got) {
            ok = false;
            os << "scale/rank mismatch: predicted";
            for (const auto& [s, r] : want) os << " " << r << "@" << s;
            os << " computed";
            for (const auto& [s, r] : got) os << " " << r << "@" << s;
            os << "; ";
        }

        bool definite = (real_root_count(poly) == 4);
        auto v = spinor::contains_units(J, definite, 4, G.det());
        row.reason = v.reason;
        bool scan_hit = v.answer == spinor::Answer::ContainsUnits &&
                        (v.reason == spinor::Reason::TwoH ||
                         v.reason == spinor::Reason::UnitTriple ||
                         v.reason == spinor::Reason::UnitPairPlusNext);
        if (!scan_hit) {
            ok = false;
            os << "orthogonal-factor scan did not certify units (reason "
               << spinor::reason_tag(v.reason) << "); ";
        }

        row.pass = ok;
        row.detail = os.str();
        rep.all_pass = rep.all_pass && ok;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

namespace {

mpz_class eval_at(const Poly& f, const mpz_class& x) {
    mpz_class acc = 0;
    for (int k = degree(f); k >= 0; --k) acc = acc * x + f[k];
    return acc;
}

std::vector<mpz_class> divisors_of(const mpz_class& m, bool& complete) {
    std::vector<mpz_class> out;
    mpz_class a = abs(m);
    complete = true;
    for (mpz_class i = 1; i * i <= a; ++i) {
        if (i > 2000000) {
            complete = false;
            break;
        }
        if (a % i == 0) {
            out.push_back(i);
            out.push_back(a / i);
        }
    }
    return out;
}

/* factor description if f is provably reducible; degrees 2-4 are decided
 * exactly, beyond that only rational roots are excluded */
std::optional<std::string> find_rational_factor(const Poly& f, std::vector<std::string>& warnings) {
    int n = degree(f);
    if (f[0] == 0) return "x";
    bool complete = true;
    for (const mpz_class& d : divisors_of(f[0], complete))
        for (const mpz_class& r : {d, mpz_class(-d)})
            if (eval_at(f, r) == 0) return "x - (" + r.get_str() + ")";

    if (n == 4 && complete) {
        /* monic quadratic splittings (x^2+px+q)(x^2+rx+s) with qs = c0 */
        bool c2 = true;
        for (const mpz_class& dq : divisors_of(f[0], c2))
            for (const mpz_class& q : {dq, mpz_class(-dq)}) {
                mpz_class s = f[0] / q;
                mpz_class pr = f[2] - q - s;
                mpz_class disc = f[3] * f[3] - 4 * pr;
                if (disc < 0 || !mpz_perfect_square_p(disc.get_mpz_t())) continue;
                mpz_class root = sqrt(disc);
                mpz_class p = f[3] + root;
                if (p % 2 != 0) continue;
                p /= 2;
                mpz_class r = f[3] - p;
                if (p * s + r * q == f[1])
                    return "(x^2 + " + p.get_str() + "x + " + q.get_str() + ")(x^2 + " +
                           r.get_str() + "x + " + s.get_str() + ")";
            }
    }
    if (n >= 5 || !complete)
        warnings.push_back("irreducibility assumed: no rational root found, higher-degree "
                           "factors unchecked");
    return std::nullopt;
}

QuadraticReport delegate_quadratic(const lattice::GramMatrix& G) {
    auto to_i64 = [](const mpz_class& z) {
        if (!z.fits_slong_p())
            throw Error("DISC_LIMIT", "quadratic trace form exceeds 64-bit range");
        return static_cast<binaryforms::i64>(z.get_si());
    };
    binaryforms::i64 a = to_i64(G.at(0, 0));
    binaryforms::i64 b = to_i64(2 * G.at(0, 1));
    binaryforms::i64 c = to_i64(G.at(1, 1));
    binaryforms::i64 g = std::gcd(a, std::gcd(b, c));
    if (g == 2) {
        a /= 2;
        b /= 2;
        c /= 2;
    } else if (g != 1) {
        throw Error("INTERNAL", "trace form content " + std::to_string(g) + " is not 1 or 2");
    }
    binaryforms::BinaryForm w{a, b, c};
    binaryforms::i64 disc = w.disc();
    if (disc % 4 != 0)
        throw Error("DISC_MOD4", "quadratic trace discriminant " + std::to_string(disc) +
                                     " is not divisible by 4");
    QuadraticReport qr;
    qr.d = -disc / 4;
    qr.rank4 = binaryforms::rank4_of_d(qr.d);
    qr.spin_equals_genus = (qr.rank4 == 0);
    if (qr.d == -1) {
        /* discriminant 4 is a square: no form class group; counts stay 1 */
        qr.form = {1, 0, 1};
    } else {
        qr.form = binaryforms::reduce(w);
        qr.counts = binaryforms::spinor_genera_counts(binaryforms::class_group(disc));
    }
    return qr;
}

}  // namespace

FieldReport analyze_field(const NumberFieldInput& in, const std::vector<RamificationData>& ram) {
    FieldReport rep;
    validate_poly(in.poly);
    int n = degree(in.poly);
    rep.degree = n;

    if (auto factor = find_rational_factor(in.poly, rep.warnings))
        throw Error("POLY_REDUCIBLE", poly_to_string(in.poly) + " factors as " + *factor);

    rep.gram = trace_gram(in);
    rep.det = rep.gram->det();
    rep.real_roots = real_root_count(in.poly);
    rep.definite = (rep.real_roots == n);

    if (n == 2) {
        rep.delegated = true;
        rep.quadratic = delegate_quadratic(*rep.gram);
    } else {
        rep.verdict = spinor::one_spinor_genus(*rep.gram, rep.definite);
    }

    for (const auto& r : ram) {
        validate_ram(n, r);
        RamCheck rc;
        rc.p = r.p;
        rc.tame = (max_wildness(r) == 0);
        rc.bound = disc_bound(n, r);
        rc.disc_valuation = padic::valuation(rep.det, r.p);
        rc.bound_ok = rc.bound.exact ? rc.disc_valuation == rc.bound.bound
                                     : rc.disc_valuation <= rc.bound.bound;
        auto J = lattice::jordan_decompose(*rep.gram, r.p);
        rc.verdict = spinor::contains_units(J, rep.definite, n, rep.det);
        if (rc.tame) {
            rc.shape_checked = true;
            auto m = match_tame_shape(n, r, J);
            rc.shape_ok = m.ok;
            rc.detail = m.detail;
        }
        rep.ram_checks.push_back(std::move(rc));
    }
    return rep;
}

}  // namespace spinortrace::tracefields
