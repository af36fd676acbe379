#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "spinortrace/padic.hpp"

using namespace spinortrace;
using padic::SquareClass;
using padic::square_class;
using padic::valuation;

/* Brute-force oracle: strip p from numerator and denominator exactly, check
 * valuation parity, then decide whether the unit part (num*den works, since
 * b ~ 1/b mod squares) is a square unit by enumerating y^2 mod p^3. A unit
 * is a p-adic square iff it is a square mod p^3 for every p (mod 8 and mod p
 * would do; p^3 covers both uniformly). */
static bool oracle_is_square(const mpq_class& x, long p) {
    mpz_class a = x.get_num(), b = x.get_den();
    mpz_class au, bu;
    long va = mpz_remove(au.get_mpz_t(), a.get_mpz_t(), mpz_class(p).get_mpz_t());
    long vb = mpz_remove(bu.get_mpz_t(), b.get_mpz_t(), mpz_class(p).get_mpz_t());
    if ((va - vb) % 2 != 0) return false;
    long mod = p * p * p;
    mpz_class um = (au * bu) % mod;
    if (um < 0) um += mod;
    long u = um.get_si();
    for (long y = 1; y < mod; ++y)
        if ((y * y) % mod == u) return true;
    return false;
}

static std::vector<mpq_class> sample_rationals(long p) {
    std::vector<mpq_class> xs;
    std::vector<long> nums = {1, 2, 3, 5, 6, 7, -1, -2, -3, 15, 21, -10, 9, 49};
    std::vector<long> dens = {1, 2, 3, 5, 7, 9};
    for (long n : nums)
        for (long d : dens) {
            xs.emplace_back(n, d);
            xs.emplace_back(n * p, d);
            xs.emplace_back(n, d * p);
            xs.emplace_back(mpq_class(n * p, d) * p);
        }
    for (auto& x : xs) x.canonicalize();
    return xs;
}

TEST_CASE("valuation basics") {
    CHECK(valuation(mpz_class(48), 2) == 4);
    CHECK(valuation(mpz_class(-9), 3) == 2);
    CHECK(valuation(mpq_class(9, 2), 2) == -1);
    CHECK(valuation(mpq_class(8, 9), 3) == -2);
    CHECK(valuation(mpq_class(7, 5), 3) == 0);
    CHECK_THROWS_AS(valuation(mpz_class(0), 5), Error);
    CHECK_THROWS_AS(valuation(mpz_class(3), 1), Error);
}

TEST_CASE("least non-residues") {
    CHECK(padic::least_nonresidue(3) == 2);
    CHECK(padic::least_nonresidue(5) == 2);
    CHECK(padic::least_nonresidue(7) == 3);
    CHECK(padic::least_nonresidue(23) == 5);
}

TEST_CASE("square classes agree with the brute-force oracle") {
    for (long p : {2L, 3L, 5L, 7L, 23L}) {
        auto xs = sample_rationals(p);
        for (const auto& x : xs) {
            CAPTURE(p);
            CAPTURE(x.get_str());
            CHECK(padic::is_square(x, p) == oracle_is_square(x, p));
        }
        /* class equality must match "x*y is a square" (y ~ 1/y mod squares) */
        for (size_t i = 0; i < xs.size(); i += 7)
            for (size_t j = 0; j < xs.size(); j += 5) {
                bool same = square_class(xs[i], p) == square_class(xs[j], p);
                CHECK(same == oracle_is_square(xs[i] * xs[j], p));
            }
    }
}

TEST_CASE("multiplication is the group law") {
    for (long p : {2L, 3L, 7L}) {
        auto xs = sample_rationals(p);
        for (size_t i = 0; i < xs.size(); i += 3)
            for (size_t j = 1; j < xs.size(); j += 11) {
                auto prod = square_class(xs[i], p) * square_class(xs[j], p);
                CHECK(prod == square_class(xs[i] * xs[j], p));
            }
    }
}

TEST_CASE("invariance under multiplication by squares") {
    for (long p : {2L, 5L, 23L}) {
        auto xs = sample_rationals(p);
        for (const auto& x : xs)
            for (long y : {2L, 3L, 10L, 21L}) {
                mpq_class y2(y * y);
                CHECK(square_class(x * y2, p) == square_class(x, p));
            }
    }
}

TEST_CASE("the class group has 4 classes for odd p and 8 for p=2") {
    for (long p : {2L, 3L, 5L, 7L, 23L}) {
        auto xs = sample_rationals(p);
        std::vector<SquareClass> classes;
        for (const auto& x : xs) {
            auto c = square_class(x, p);
            bool seen = false;
            for (const auto& k : classes) seen = seen || k == c;
            if (!seen) classes.push_back(c);
        }
        CHECK(classes.size() == (p == 2 ? 8 : 4));
    }
}

TEST_CASE("canonical representatives") {
    /* p=2: {1,3,5,7,2,6,10,14}; odd p: {1,u,p,u*p} */
    std::set<mpz_class> reps2;
    for (const auto& x : sample_rationals(2)) {
        auto c = square_class(x, 2);
        reps2.insert(c.representative());
        CHECK(square_class(mpq_class(c.representative()), 2) == c);
    }
    CHECK(reps2 == std::set<mpz_class>({1, 3, 5, 7, 2, 6, 10, 14}));

    std::set<mpz_class> reps7;
    for (const auto& x : sample_rationals(7)) {
        auto c = square_class(x, 7);
        reps7.insert(c.representative());
        CHECK(square_class(mpq_class(c.representative()), 7) == c);
    }
    CHECK(reps7 == std::set<mpz_class>({1, 3, 7, 21}));
}

TEST_CASE("is_square examples") {
    CHECK(padic::is_square(mpq_class(17), 2));       // 17 = 1 mod 8
    CHECK_FALSE(padic::is_square(mpq_class(7), 2));  // 7 mod 8
    CHECK(padic::is_square(mpq_class(2), 7));        // 2 is a QR mod 7
    CHECK_FALSE(padic::is_square(mpq_class(7, 9), 7));
    CHECK(padic::is_square(mpq_class(25, 4), 5));
}
