#pragma once
#include <gmpxx.h>

#include <vector>

#include "spinortrace/lattice.hpp"

namespace spinortrace::spinor {

enum class Answer { ContainsUnits, Unknown };

/* Justification tag for a ContainsUnits answer. The engine is one-sided:
 * Unknown never claims non-containment. */
enum class Reason {
    None,
    TamePattern,        // tame local shape recognized upstream
    TwoH,               // p=2: an even 2x2 block (hyperbolic or its twin)
    UnitTriple,         // p=2: three unit blocks at one scale
    UnitPairPlusNext,   // p=2: unit pair at scale e plus a unit at e+1
    OddEqualScalePair,  // odd p: two unit blocks at one scale
    DiscriminantBound,  // v_p(det) below the dimension bound
    UnimodularRank3,    // lattice unimodular at p with rank >= 3
};

const char* reason_tag(Reason r);

struct SpinorVerdict {
    mpz_class p;
    Answer answer = Answer::Unknown;
    Reason reason = Reason::None;

    bool operator==(const SpinorVerdict&) const = default;
};

enum class Conclusion { OneProperSpinorGenus, Inconclusive };

struct GenusVerdict {
    std::vector<SpinorVerdict> verdicts;  // one per relevant prime, ascending
    Conclusion conclusion = Conclusion::Inconclusive;
    int dimension = 0;
    mpz_class det;
};

/* Ascending prime factors of m (|m| >= 1): trial division, then deterministic
 * Miller-Rabin with Brent-Pollard rho on 64-bit cofactors. Cofactors beyond
 * 64 bits throw FACTOR_TOO_LARGE rather than risk a wrong factorization. */
std::vector<mpz_class> factor_primes(const mpz_class& m);

/* Primes at which the spinor-norm question is not automatic: the divisors
 * of 2*det(G). At any other prime the lattice is unimodular of full rank. */
std::vector<mpz_class> relevant_primes(const lattice::GramMatrix& G);

/* Decide theta_p(Lambda_p) >= Z_p* from the local decomposition. n is the
 * lattice rank, D its determinant, definite the signature flag of the real
 * quadratic space. Dimension bounds apply only for n >= 3. */
SpinorVerdict contains_units(const lattice::JordanDecomposition& J, bool definite, int n,
                             const mpz_class& D);

/* Thresholds used by the discriminant-bound rules, exposed for tests. */
long bound_odd(int n);             // n(n-1)/2
long bound_two_definite(int n);    // n(n-3) + 2*floor((n+1)/2)
long bound_two_indefinite(int n);  // n(n-1)

/* Aggregate over all relevant primes. Rank <= 2 lattices are accepted but
 * always come back Inconclusive: binary forms are decided elsewhere by class
 * group arithmetic, and this engine's rules all assume rank >= 3. */
GenusVerdict one_spinor_genus(const lattice::GramMatrix& G, bool definite);
GenusVerdict one_spinor_genus(const lattice::GramMatrix& G);

}  // namespace spinortrace::spinor
