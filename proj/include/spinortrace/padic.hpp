#pragma once
#include <gmpxx.h>

#include "spinortrace/error.hpp"

namespace spinortrace::padic {

/* An element of Q_p^* / (Q_p^*)^2.
 *
 * Odd p: four classes {1, u, p, u*p} with u the least positive non-residue
 * mod p, keyed by (valuation parity, residue bit).
 * p = 2: eight classes {1, 3, 5, 7, 2, 6, 10, 14}, keyed by (valuation
 * parity, unit part mod 8).
 */
struct SquareClass {
    mpz_class p;
    bool odd_val = false;
    /* p = 2: unit part mod 8, one of 1,3,5,7.
     * odd p: 0 = quadratic residue, 1 = non-residue. */
    int unit_key = 0;

    bool is_square() const { return !odd_val && unit_key == (p == 2 ? 1 : 0); }
    mpz_class canonical_unit() const;
    /* canonical_unit() * (odd_val ? p : 1) */
    mpz_class representative() const;

    bool operator==(const SquareClass&) const = default;
};

SquareClass operator*(const SquareClass& a, const SquareClass& b);

/* v_p(x); throws ZERO_VALUATION on x = 0. */
long valuation(const mpz_class& x, const mpz_class& p);
long valuation(const mpq_class& x, const mpz_class& p);

/* Legendre symbol (a/p), odd prime p. Returns +1 or -1; throws if p | a. */
int legendre(const mpz_class& a, const mpz_class& p);
mpz_class least_nonresidue(const mpz_class& p);

SquareClass square_class(const mpz_class& x, const mpz_class& p);
SquareClass square_class(const mpq_class& x, const mpz_class& p);
bool is_square(const mpq_class& x, const mpz_class& p);

}  // namespace spinortrace::padic
