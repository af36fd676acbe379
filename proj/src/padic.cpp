#include "spinortrace/padic.hpp"

namespace spinortrace::padic {

static void check_prime_arg(const mpz_class& p) {
    if (p < 2) throw Error("BAD_PRIME", "p must be a prime >= 2, got " + p.get_str());
}

long valuation(const mpz_class& x, const mpz_class& p) {
    check_prime_arg(p);
    if (x == 0) throw Error("ZERO_VALUATION", "valuation of 0 is undefined");
    mpz_class rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const mpq_class& x, const mpz_class& p) {
    if (x == 0) throw Error("ZERO_VALUATION", "valuation of 0 is undefined");
    return valuation(mpz_class(x.get_num()), p) - valuation(mpz_class(x.get_den()), p);
}

int legendre(const mpz_class& a, const mpz_class& p) {
    check_prime_arg(p);
    if (p == 2) throw Error("BAD_PRIME", "legendre symbol needs an odd prime");
    int s = mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
    if (s == 0) throw Error("BAD_UNIT", "legendre symbol of a multiple of p");
    return s;
}

mpz_class least_nonresidue(const mpz_class& p) {
    for (mpz_class u = 2; u < p; ++u)
        if (legendre(u, p) == -1) return u;
    throw Error("BAD_PRIME", "no quadratic non-residue mod " + p.get_str());
}

mpz_class SquareClass::canonical_unit() const {
    if (p == 2) return unit_key;
    return unit_key ? least_nonresidue(p) : mpz_class(1);
}

mpz_class SquareClass::representative() const {
    return canonical_unit() * (odd_val ? p : mpz_class(1));
}

SquareClass operator*(const SquareClass& a, const SquareClass& b) {
    if (a.p != b.p)
        throw Error("PRIME_MISMATCH", "square classes over different primes");
    SquareClass r;
    r.p = a.p;
    r.odd_val = a.odd_val != b.odd_val;
    if (a.p == 2)
        r.unit_key = (a.unit_key * b.unit_key) % 8;
    else
        r.unit_key = a.unit_key ^ b.unit_key;
    return r;
}

/* Unit part of x mod 8 (x = +-2^v * odd/odd). Denominator inverts to itself
 * mod 8 since odd^2 = 1 mod 8. */
static int unit_mod8(const mpz_class& num, const mpz_class& den) {
    mpz_class m = (num * den) % 8;
    if (m < 0) m += 8;
    return static_cast<int>(m.get_si());
}

SquareClass square_class(const mpq_class& x, const mpz_class& p) {
    check_prime_arg(p);
    if (x == 0) throw Error("ZERO_VALUATION", "square class of 0 is undefined");
    mpz_class num = x.get_num(), den = x.get_den();
    mpz_class nu, du;
    long vn = static_cast<long>(mpz_remove(nu.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(du.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()));

    SquareClass r;
    r.p = p;
    r.odd_val = ((vn - vd) % 2) != 0;
    if (p == 2)
        r.unit_key = unit_mod8(nu, du);
    else
        r.unit_key = (legendre(nu, p) * legendre(du, p) == 1) ? 0 : 1;
    return r;
}

SquareClass square_class(const mpz_class& x, const mpz_class& p) {
    return square_class(mpq_class(x), p);
}

bool is_square(const mpq_class& x, const mpz_class& p) {
    return square_class(x, p).is_square();
}

}  // namespace spinortrace::padic
