#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "spinortrace/error.hpp"
#include "spinortrace/tracefields.hpp"

using namespace spinortrace;
using namespace spinortrace::tracefields;
using lattice::BlockKind;
using spinor::Answer;
using spinor::Conclusion;
using spinor::Reason;

static std::vector<mpz_class> zv(std::vector<long> v) {
    return std::vector<mpz_class>(v.begin(), v.end());
}

/* Independent oracle: p_k = Tr(M^k) for the companion matrix M of f,
 * computed by exact integer matrix powers. */
static std::vector<mpz_class> companion_power_traces(const Poly& f) {
    int n = static_cast<int>(f.size()) - 1;
    std::vector<std::vector<mpz_class>> M(n, std::vector<mpz_class>(n, 0)), P = M;
    for (int i = 1; i < n; ++i) M[i][i - 1] = 1;
    for (int i = 0; i < n; ++i) M[i][n - 1] = -f[i];
    for (int i = 0; i < n; ++i) P[i][i] = 1;
    std::vector<mpz_class> out;
    for (int k = 0; k <= 2 * n - 2; ++k) {
        mpz_class tr = 0;
        for (int i = 0; i < n; ++i) tr += P[i][i];
        out.push_back(tr);
        std::vector<std::vector<mpz_class>> Q(n, std::vector<mpz_class>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l)
                if (P[i][l] != 0)
                    for (int j = 0; j < n; ++j) Q[i][j] += P[i][l] * M[l][j];
        P = std::move(Q);
    }
    return out;
}

/* disc(f) = (-1)^(n(n-1)/2) Res(f, f') for monic f, with the resultant as a
 * Sylvester determinant. Zero exactly when f has a repeated root. */
static mpz_class disc_by_resultant(const Poly& f) {
    int n = static_cast<int>(f.size()) - 1;
    std::vector<mpz_class> F(f.rbegin(), f.rend()), D;
    for (int k = n; k >= 1; --k) D.push_back(k * f[k]);
    int m = n - 1, N = 2 * n - 1;
    lattice::Mat S(N, lattice::Row(N, 0));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c <= n; ++c) S[r][r + c] = F[c];
    for (int r = 0; r < n; ++r)
        for (int c = 0; c <= m; ++c) S[m + r][r + c] = D[c];
    mpz_class res = lattice::det_bareiss(S);
    return (static_cast<long>(n) * (n - 1) / 2) % 2 == 0 ? res : -res;
}

static Poly random_monic(std::mt19937_64& rng, int n) {
    Poly f(n + 1);
    for (int i = 0; i < n; ++i) f[i] = static_cast<long>(rng() % 19) - 9;
    f[n] = 1;
    return f;
}

TEST_CASE("power sums of named polynomials") {
    CHECK(power_sums({-1, -1, 0, 1}) == zv({3, 0, 2, 3, 2}));
    CHECK(power_sums({2, 0, 6, 0, 1}) == zv({4, 0, -12, 0, 64, 0, -360}));
    CHECK(power_sums({10, 8, 0, 0, 1}) == zv({4, 0, 0, -24, -40, 0, 192}));
    CHECK(power_sums({6, 0, 0, 0, 1}) == zv({4, 0, 0, 0, -24, 0, 0}));
    CHECK(power_sums({-17, 0, 1}) == zv({2, 0, 34}));
}

TEST_CASE("power sums match companion-matrix traces") {
    std::mt19937_64 rng(4242);
    int tried = 0;
    while (tried < 150) {
        Poly f = random_monic(rng, 2 + static_cast<int>(rng() % 5));
        if (disc_by_resultant(f) == 0) continue;  // power_sums rejects these
        ++tried;
        CHECK(power_sums(f) == companion_power_traces(f));
    }
}

TEST_CASE("polynomial validation") {
    CHECK_THROWS_AS(power_sums({5, 1}), Error);
    try {
        power_sums({5, 1});
    } catch (const Error& e) {
        CHECK(e.code() == "DEGREE_TOO_SMALL");
    }
    try {
        power_sums({1, 0, 2});
    } catch (const Error& e) {
        CHECK(e.code() == "POLY_NOT_MONIC");
    }
    try {
        power_sums({2, -3, 0, 1});  // (x-1)^2 (x+2)
    } catch (const Error& e) {
        CHECK(e.code() == "POLY_NOT_SQUAREFREE");
    }
    try {
        power_sums({0, 0, 1});  // x^2
    } catch (const Error& e) {
        CHECK(e.code() == "POLY_NOT_SQUAREFREE");
    }
}

TEST_CASE("poly_to_string formatting") {
    CHECK(poly_to_string({-1, -1, 0, 1}) == "x^3-x-1");
    CHECK(poly_to_string({2, 0, 6, 0, 1}) == "x^4+6x^2+2");
    CHECK(poly_to_string({-17, 0, 1}) == "x^2-17");
    CHECK(poly_to_string({10, 8, 0, 0, 1}) == "x^4+8x+10");
    CHECK(poly_to_string({0, 1}) == "x");
}

TEST_CASE("trace gram determinant equals the discriminant") {
    for (const Poly& f : std::vector<Poly>{{-1, -1, 0, 1},
                                           {2, 0, 6, 0, 1},
                                           {10, 8, 0, 0, 1},
                                           {22, 8, 8, 0, 1},
                                           {-2, 0, 0, 1},
                                           {-1, -1, 0, 0, 0, 1},
                                           {-17, 0, 1}}) {
        auto G = trace_gram({f, {}});
        CHECK(G.det() == disc_by_resultant(f));
    }
    std::mt19937_64 rng(777);
    int tried = 0;
    while (tried < 100) {
        Poly f = random_monic(rng, 2 + static_cast<int>(rng() % 4));
        mpz_class d = disc_by_resultant(f);
        if (d == 0) continue;
        ++tried;
        CHECK(trace_gram({f, {}}).det() == d);
    }
}

TEST_CASE("trace gram on a non-power basis") {
    /* index-2 basis of the maximal order of Q[x]/(x^2-17) */
    NumberFieldInput in;
    in.poly = {-17, 0, 1};
    in.basis = {{1, 0}, {mpq_class(1, 2), mpq_class(1, 2)}};
    auto G = trace_gram(in);
    CHECK(G.at(0, 0) == 2);
    CHECK(G.at(0, 1) == 1);
    CHECK(G.at(1, 1) == 9);
    CHECK(G.det() == 17);  // index^2 below disc(f) = 68

    /* non-monogenic cubic: x^3-x^2-2x-8 with basis 1, t, (t^2+t)/2 */
    NumberFieldInput ded;
    ded.poly = {-8, -2, -1, 1};
    ded.basis = {{1, 0, 0}, {0, 1, 0}, {0, mpq_class(1, 2), mpq_class(1, 2)}};
    auto H = trace_gram(ded);
    CHECK(H.det() == -503);
    CHECK(disc_by_resultant(ded.poly) == -2012);  // = 2^2 * (-503)
}

TEST_CASE("trace gram basis validation") {
    NumberFieldInput in;
    in.poly = {-17, 0, 1};
    in.basis = {{1, 0}, {0, mpq_class(1, 2)}};  // 1, t/2: not closed under mult
    try {
        trace_gram(in);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == "TRACE_NOT_INTEGRAL");
        CHECK(std::string(e.what()).find("b_1 * b_1") != std::string::npos);
    }
    in.basis = {{1, 0}, {2, 0}};
    try {
        trace_gram(in);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == "BASIS_SINGULAR");
    }
    in.basis = {{1, 0}};
    try {
        trace_gram(in);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == "BASIS_BAD_SHAPE");
    }
    in.basis = {{1, 0, 0}, {0, 1, 3}};  // wider than the degree
    try {
        trace_gram(in);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == "BASIS_BAD_SHAPE");
    }
}

TEST_CASE("real root counts by Sturm chains") {
    CHECK(real_root_count({-1, -1, 0, 1}) == 1);
    CHECK(real_root_count({-1, -3, 0, 1}) == 3);   // disc 81, totally real
    CHECK(real_root_count({2, 0, 6, 0, 1}) == 0);  // positive biquadratic
    CHECK(real_root_count({-17, 0, 1}) == 2);
    CHECK(real_root_count({1, 0, 1}) == 0);
    CHECK(real_root_count({-1, -1, 0, 0, 0, 1}) == 1);
    CHECK(real_root_count({1, 3, -3, -4, 1, 1}) == 5);  // disc 11^4, totally real

    std::mt19937_64 rng(31337);
    int tried = 0;
    while (tried < 100) {
        Poly f = random_monic(rng, 2 + static_cast<int>(rng() % 4));
        if (disc_by_resultant(f) == 0) continue;
        ++tried;
        int n = static_cast<int>(f.size()) - 1, r = real_root_count(f);
        CHECK(r >= 0);
        CHECK(r <= n);
        CHECK((n - r) % 2 == 0);  // complex roots pair up
        /* the trace form is positive definite exactly for totally real f */
        CHECK(trace_gram({f, {}}).is_definite() == (r == n));
    }
}

TEST_CASE("tame local shapes") {
    RamificationData r23{23, {{2, 1}, {1, 1}}};
    auto s = tame_local_shape(3, r23);
    REQUIRE(s.size() == 3);
    CHECK(s[0].scale == 0);
    CHECK(s[1].scale == 0);
    CHECK(s[2].scale == 1);
    CHECK(s[2].kind == BlockKind::Unit);

    RamificationData r2{2, {{3, 1}}};
    auto t = tame_local_shape(3, r2);
    REQUIRE(t.size() == 2);
    CHECK(t[0].scale == 0);
    CHECK(t[0].kind == BlockKind::Unit);
    CHECK(t[1].scale == 1);
    CHECK(t[1].kind == BlockKind::Hyperbolic);

    RamificationData r3{3, {{2, 1}, {2, 1}}};
    auto u = tame_local_shape(4, r3);
    REQUIRE(u.size() == 4);
    CHECK(u[2].scale == 1);
    CHECK(u[3].kind == BlockKind::Unit);

    try {
        tame_local_shape(4, {2, {{4, 1}}});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == "WILD_PRIME");
    }
    for (RamificationData bad : std::vector<RamificationData>{
             {5, {{2, 1}}},          // sum 2 != 3
             {5, {{0, 1}, {3, 1}}},  // zero e
             {4, {{2, 1}, {1, 1}}},  // composite p
             {5, {}},                // empty
         }) {
        try {
            tame_local_shape(3, bad);
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == "RAM_INCONSISTENT");
        }
    }
}

TEST_CASE("tame shape matching against computed decompositions") {
    auto G = trace_gram({{-1, -1, 0, 1}, {}});
    auto J = lattice::jordan_decompose(G, 23);
    auto m = match_tame_shape(3, {23, {{2, 1}, {1, 1}}}, J);
    CHECK(m.ok);
    CHECK(m.detail.empty());

    /* wrong ramification for the same lattice must be flagged */
    auto bad = match_tame_shape(3, {23, {{3, 1}}}, J);
    CHECK(!bad.ok);
    CHECK(bad.detail.find("mismatch") != std::string::npos);

    /* p = 2, e = 3: one unit and one scaled hyperbolic plane */
    auto G2 = trace_gram({{-2, 0, 0, 1}, {}});
    auto J2 = lattice::jordan_decompose(G2, 2);
    auto m2 = match_tame_shape(3, {2, {{3, 1}}}, J2);
    CHECK(m2.ok);
}

TEST_CASE("discriminant exponent bounds") {
    auto b = disc_bound(3, {23, {{2, 1}, {1, 1}}});
    CHECK(b.bound == 1);
    CHECK(b.exact);

    auto w = disc_bound(4, {2, {{4, 1}}});
    CHECK(w.bound == 11);
    CHECK(!w.exact);
    CHECK(w.coarse == 11);

    auto c = disc_bound(3, {3, {{3, 1}}});
    CHECK(c.bound == 5);
    CHECK(!c.exact);
    CHECK(c.coarse == 5);
}

TEST_CASE("tame verdicts") {
    auto v = tame_verdict(3, {23, {{2, 1}, {1, 1}}});
    CHECK(v.answer == Answer::ContainsUnits);
    CHECK(v.reason == Reason::TamePattern);
    CHECK(v.p == 23);

    auto v2 = tame_verdict(4, {3, {{2, 1}, {2, 1}}});
    CHECK(v2.answer == Answer::ContainsUnits);

    /* rank 2 has no pigeonhole argument */
    auto v3 = tame_verdict(2, {5, {{2, 1}}});
    CHECK(v3.answer == Answer::Unknown);

    try {
        tame_verdict(4, {2, {{4, 1}}});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == "WILD_PRIME");
    }
}

static std::vector<long> scales_of(const QuarticPrediction& p) {
    std::vector<long> out;
    for (const auto& b : p.blocks) out.push_back(b.scale);
    return out;
}

TEST_CASE("quartic wild-2 classification") {
    auto p1 = quartic_wild2_classify({2, 0, 6, 0, 1});  // a=3, b=2
    CHECK(p1.tag == QuarticCase::I);
    CHECK(scales_of(p1) == std::vector<long>{2, 2, 2, 3});
    CHECK(p1.blocks[0].unit == 1);
    CHECK(p1.blocks[1].unit == 7);   // a^2 - b
    CHECK(p1.blocks[2].unit == -3);  // -a
    CHECK(p1.blocks[3].unit == mpq_class(7, 3));
    CHECK(p1.det_valuation == 9);

    auto p2 = quartic_wild2_classify({3, 0, 2, 0, 1});  // a=1, b=3
    CHECK(p2.tag == QuarticCase::II);
    CHECK(scales_of(p2) == std::vector<long>{2, 3, 2, 3});
    CHECK(p2.blocks[1].unit == -1);  // (a^2-b)/2
    CHECK(p2.blocks[3].unit == -3);
    CHECK(p2.det_valuation == 10);

    auto p3 = quartic_wild2_classify({2, 0, 12, 0, 1});  // a=6, b=2
    CHECK(p3.tag == QuarticCase::III);
    CHECK(scales_of(p3) == std::vector<long>{2, 3, 3, 3});
    CHECK(p3.blocks[1].unit == 17);
    CHECK(p3.blocks[2].unit == -3);
    CHECK(p3.blocks[3].unit == mpq_class(17, 3));
    CHECK(p3.det_valuation == 11);

    auto p4 = quartic_wild2_classify({6, 0, 0, 0, 1});
    CHECK(p4.tag == QuarticCase::IV);
    REQUIRE(p4.blocks.size() == 3);
    CHECK(p4.blocks[1].unit == -3);
    CHECK(p4.blocks[2].kind == BlockKind::Hyperbolic);
    CHECK(p4.blocks[2].scale == 3);
    CHECK(p4.det_valuation == 11);

    auto p5 = quartic_wild2_classify({10, 8, 0, 0, 1});
    CHECK(p5.tag == QuarticCase::EightX);
    CHECK(p5.blocks[1].unit == -5);
    CHECK(p5.blocks[2].kind == BlockKind::Hyperbolic);
    CHECK(p5.det_valuation == 11);

    auto p6 = quartic_wild2_classify({22, 8, 8, 0, 1});
    CHECK(p6.tag == QuarticCase::Special);
    CHECK(p6.blocks[3].unit == mpq_class(-773, 3));
    CHECK(p6.det_valuation == 11);

    for (Poly f : std::vector<Poly>{
             {1, 0, 0, 1},        // wrong degree
             {1, 1, 0, 1, 1},     // cubic coefficient present
             {2, 3, 0, 0, 1},     // linear coefficient not 0 or 8
             {2, 0, 1, 0, 1},     // odd quadratic coefficient
             {5, 0, 2, 0, 1},     // b = 1 mod 4 in case ii territory
             {4, 0, 2, 0, 1},     // v_2(b) = 2
             {4, 8, 0, 0, 1},     // x^4+8x+2b with b even
             {4, 0, 0, 0, 1},     // a = 0, v_2(b) = 2
             {0, 0, 0, 0, 1},     // b = 0
         }) {
        try {
            quartic_wild2_classify(f);
            CHECK_MESSAGE(false, poly_to_string(f));
        } catch (const Error& e) {
            CHECK(e.code() == "SHAPE_UNRECOGNIZED");
        }
    }
}

TEST_CASE("quartic table verification") {
    auto rep = verify_quartic_table();
    CHECK(rep.all_pass);
    REQUIRE(rep.rows.size() == 36);

    std::map<long, int> by_c;
    std::map<QuarticCase, int> by_tag;
    std::vector<std::string> names;
    for (const auto& r : rep.rows) {
        CHECK_MESSAGE(r.pass, r.name << ": " << r.detail);
        ++by_c[r.c];
        ++by_tag[r.tag];
        names.push_back(r.name);

        /* realized scan reasons per shape; the decomposition prefers diagonal
         * pivots, so these are stable */
        Reason want = Reason::None;
        switch (r.tag) {
            case QuarticCase::I: want = Reason::UnitTriple; break;
            case QuarticCase::II: want = Reason::UnitPairPlusNext; break;
            case QuarticCase::III: want = Reason::UnitTriple; break;
            case QuarticCase::IV: want = Reason::TwoH; break;
            case QuarticCase::EightX: want = Reason::UnitTriple; break;
            case QuarticCase::Special: want = Reason::UnitTriple; break;
        }
        CHECK_MESSAGE(r.reason == want, r.name);
    }
    CHECK(by_c[9] == 8);
    CHECK(by_c[10] == 8);
    CHECK(by_c[11] == 20);
    CHECK(by_tag[QuarticCase::I] == 8);
    CHECK(by_tag[QuarticCase::II] == 8);
    CHECK(by_tag[QuarticCase::III] == 8);
    CHECK(by_tag[QuarticCase::IV] == 8);
    CHECK(by_tag[QuarticCase::EightX] == 3);
    CHECK(by_tag[QuarticCase::Special] == 1);

    std::sort(names.begin(), names.end());
    CHECK(std::adjacent_find(names.begin(), names.end()) == names.end());
}

TEST_CASE("analyze_field on a cubic with tame ramification") {
    auto rep = analyze_field({{-1, -1, 0, 1}, {}}, {{23, {{2, 1}, {1, 1}}}});
    CHECK(rep.degree == 3);
    CHECK(rep.det == -23);
    CHECK(rep.real_roots == 1);
    CHECK(!rep.definite);
    CHECK(!rep.delegated);
    REQUIRE(rep.verdict.has_value());
    CHECK(rep.verdict->conclusion == Conclusion::OneProperSpinorGenus);

    REQUIRE(rep.ram_checks.size() == 1);
    const auto& rc = rep.ram_checks[0];
    CHECK(rc.p == 23);
    CHECK(rc.tame);
    CHECK(rc.disc_valuation == 1);
    CHECK(rc.bound.bound == 1);
    CHECK(rc.bound.exact);
    CHECK(rc.bound_ok);
    CHECK(rc.shape_checked);
    CHECK(rc.shape_ok);
    CHECK(rc.verdict.answer == Answer::ContainsUnits);
    CHECK(rc.verdict.reason == Reason::OddEqualScalePair);
}

TEST_CASE("analyze_field on pure cubic x^3-2") {
    auto rep = analyze_field({{-2, 0, 0, 1}, {}}, {{2, {{3, 1}}}, {3, {{3, 1}}}});
    CHECK(rep.det == -108);
    CHECK(rep.real_roots == 1);
    REQUIRE(rep.verdict.has_value());
    CHECK(rep.verdict->conclusion == Conclusion::OneProperSpinorGenus);
    REQUIRE(rep.ram_checks.size() == 2);

    const auto& at2 = rep.ram_checks[0];
    CHECK(at2.tame);
    CHECK(at2.disc_valuation == 2);
    CHECK(at2.bound.bound == 2);
    CHECK(at2.bound.exact);
    CHECK(at2.bound_ok);
    CHECK(at2.shape_checked);
    CHECK(at2.shape_ok);

    const auto& at3 = rep.ram_checks[1];
    CHECK(!at3.tame);
    CHECK(at3.disc_valuation == 3);
    CHECK(at3.bound.bound == 5);
    CHECK(!at3.bound.exact);
    CHECK(at3.bound_ok);
    CHECK(!at3.shape_checked);
    CHECK(at3.verdict.answer == Answer::ContainsUnits);
}

TEST_CASE("analyze_field on a wild quartic") {
    auto rep = analyze_field({{2, 0, 6, 0, 1}, {}}, {{2, {{4, 1}}}});
    CHECK(rep.det == 25088);  // 2^9 * 7^2
    CHECK(rep.real_roots == 0);
    CHECK(!rep.definite);
    REQUIRE(rep.verdict.has_value());
    CHECK(rep.verdict->conclusion == Conclusion::OneProperSpinorGenus);

    const auto& rc = rep.ram_checks[0];
    CHECK(!rc.tame);
    CHECK(rc.disc_valuation == 9);
    CHECK(rc.bound.bound == 11);
    CHECK(!rc.bound.exact);
    CHECK(rc.bound_ok);
    CHECK(!rc.shape_checked);
    CHECK(rc.verdict.answer == Answer::ContainsUnits);
    CHECK(rc.verdict.reason == Reason::UnitTriple);
}

TEST_CASE("degree-2 analysis delegates to class-group arithmetic") {
    /* power basis of Q(sqrt 17): index 2 in the maximal order */
    auto pw = analyze_field({{-17, 0, 1}, {}});
    CHECK(pw.delegated);
    CHECK(!pw.verdict.has_value());
    REQUIRE(pw.quadratic.has_value());
    CHECK(pw.quadratic->d == 17);
    CHECK(pw.quadratic->rank4 == 1);
    CHECK(!pw.quadratic->spin_equals_genus);
    CHECK(pw.quadratic->counts.total == 4);
    CHECK(pw.quadratic->counts.per_genus == 2);

    /* maximal order: different lattice, same field invariants */
    NumberFieldInput mx;
    mx.poly = {-17, 0, 1};
    mx.basis = {{1, 0}, {mpq_class(1, 2), mpq_class(1, 2)}};
    auto m = analyze_field(mx);
    REQUIRE(m.quadratic.has_value());
    CHECK(m.quadratic->d == 17);
    CHECK(m.quadratic->rank4 == 1);
    CHECK(m.quadratic->form == binaryforms::BinaryForm{2, 2, 9});
    CHECK(m.quadratic->counts.per_genus == 2);

    auto q14 = analyze_field({{-14, 0, 1}, {}});
    CHECK(q14.quadratic->d == 14);
    CHECK(q14.quadratic->rank4 == 1);
    CHECK(!q14.quadratic->spin_equals_genus);

    auto q5 = analyze_field({{-5, 0, 1}, {}});
    CHECK(q5.quadratic->d == 5);
    CHECK(q5.quadratic->rank4 == 0);
    CHECK(q5.quadratic->spin_equals_genus);
    CHECK(q5.quadratic->counts.total == 2);
    CHECK(q5.quadratic->counts.per_genus == 1);

    auto qi = analyze_field({{1, 0, 1}, {}});
    CHECK(qi.quadratic->d == -1);
    CHECK(qi.quadratic->spin_equals_genus);
    CHECK(qi.quadratic->counts.total == 1);
    CHECK(qi.quadratic->form == binaryforms::BinaryForm{1, 0, 1});

    try {
        analyze_field({{-68, 0, 1}, {}});  // 68 = 4 * 17 is not squarefree
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == "D_NOT_SQUAREFREE");
    }
}

TEST_CASE("degree-2 delegation agrees with the standalone trace forms") {
    for (long d = -60; d <= 60; ++d) {
        if (d == 0 || d == 1 || !binaryforms::is_squarefree(d)) continue;
        NumberFieldInput in;
        in.poly = {mpz_class(-d), 0, 1};
        if (((d % 4) + 4) % 4 == 1)
            in.basis = {{1, 0}, {mpq_class(1, 2), mpq_class(1, 2)}};
        auto rep = analyze_field(in);
        REQUIRE(rep.quadratic.has_value());
        CHECK(rep.quadratic->d == d);
        if (d != -1) {
            auto tf = binaryforms::quadratic_trace_form(d);
            CHECK(binaryforms::equivalent(rep.quadratic->form, tf.form));
        }
        CHECK(rep.quadratic->spin_equals_genus == binaryforms::quadratic_verdict(d));
    }
}

TEST_CASE("reducible inputs are rejected") {
    for (Poly f : std::vector<Poly>{
             {-1, 0, 0, 1},       // root 1
             {-4, 0, 0, 0, 1},    // (x^2-2)(x^2+2)
             {4, 0, 0, 0, 1},     // (x^2-2x+2)(x^2+2x+2)
             {6, 0, -5, 0, 1},    // (x^2-2)(x^2-3)
             {-1, 1, 0, 0, -1, 1}, // (x-1)(x^4+1)
         }) {
        try {
            analyze_field({f, {}});
            CHECK_MESSAGE(false, poly_to_string(f));
        } catch (const Error& e) {
            CHECK(e.code() == "POLY_REDUCIBLE");
        }
    }
    /* x^4+1 is irreducible and must pass through */
    auto rep = analyze_field({{1, 0, 0, 0, 1}, {}});
    CHECK(rep.det == 256);
    CHECK(rep.verdict->conclusion == Conclusion::OneProperSpinorGenus);
}

TEST_CASE("degree five and beyond warns about the irreducibility gap") {
    auto rep = analyze_field({{-1, -1, 0, 0, 0, 1}, {}});
    CHECK(rep.det == 2869);  // 19 * 151
    CHECK(rep.real_roots == 1);
    REQUIRE(rep.verdict.has_value());
    CHECK(rep.verdict->conclusion == Conclusion::OneProperSpinorGenus);
    REQUIRE(!rep.warnings.empty());
    CHECK(rep.warnings[0].find("irreducibility assumed") != std::string::npos);

    /* totally real quintic, disc 11^4, tame at 11 with e = 5 */
    auto cyc = analyze_field({{1, 3, -3, -4, 1, 1}, {}}, {{11, {{5, 1}}}});
    CHECK(cyc.det == 14641);
    CHECK(cyc.definite);
    CHECK(cyc.verdict->conclusion == Conclusion::OneProperSpinorGenus);
    const auto& rc = cyc.ram_checks[0];
    CHECK(rc.tame);
    CHECK(rc.shape_ok);
    CHECK(rc.disc_valuation == 4);
    CHECK(rc.bound.bound == 4);
    CHECK(rc.bound.exact);
    CHECK(rc.verdict.answer == Answer::ContainsUnits);
}

TEST_CASE("analyze_field validates ramification data") {
    try {
        analyze_field({{-1, -1, 0, 1}, {}}, {{23, {{2, 1}}}});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == "RAM_INCONSISTENT");
    }
}
