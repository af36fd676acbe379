#pragma once
#include <cstdint>
#include <vector>

namespace spinortrace::binaryforms {

using i64 = std::int64_t;

/* ax^2 + bxy + cy^2. Only nonsquare discriminants (= 0,1 mod 4) and
 * primitive coefficient triples are valid; validate() enforces both. */
struct BinaryForm {
    i64 a = 0, b = 0, c = 0;

    i64 disc() const;
    i64 eval(i64 x, i64 y) const;
    bool operator==(const BinaryForm&) const = default;
    auto operator<=>(const BinaryForm&) const = default;
};

void validate(const BinaryForm& f);
bool is_square(i64 x);
bool is_squarefree(i64 d);

/* Integral trace form of Q(sqrt d) on the maximal order. For d = 1 mod 4
 * the form itself is integral; otherwise the integral Gram is twice the
 * returned form (halved flag). Discriminant is -4d either way. */
struct TraceForm {
    BinaryForm form;
    bool halved = false;
};
TraceForm quadratic_trace_form(i64 d);

/* Unique reduced representative for negative discriminants (negative
 * definite forms are handled through their positive-definite negatives);
 * some form on the equivalence cycle for positive discriminants. */
BinaryForm reduce(BinaryForm f);
bool is_reduced(const BinaryForm& f);

/* The reduction-operator orbit of f: all reduced forms properly equivalent
 * to f. Singleton for negative discriminants. */
std::vector<BinaryForm> cycle(const BinaryForm& f);
bool equivalent(const BinaryForm& f, const BinaryForm& g);

BinaryForm principal_form(i64 Delta);
BinaryForm inverse(const BinaryForm& f);
BinaryForm compose(const BinaryForm& f, const BinaryForm& g);

struct ClassGroupOptions {
    i64 disc_limit = 8000000;  // |Delta| cap on enumeration work
};

struct FormClassGroup {
    i64 Delta = 0;
    std::vector<BinaryForm> reps;  // one reduced form per class
    std::vector<i64> structure;    // elementary divisors d1 | d2 | ...
    i64 h = 0;
};

FormClassGroup class_group(i64 Delta);
FormClassGroup class_group(i64 Delta, const ClassGroupOptions& opt);

/* 4-rank two ways: from the elementary divisors, and directly as the 2-rank
 * of the subgroup of squares. They must agree; tests enforce it. */
int rank4(const FormClassGroup& G);
int rank4_by_involutions(i64 Delta, const ClassGroupOptions& opt = {});

/* rank4 of the class group attached to Q(sqrt d): disc -d when d = 3 mod 4
 * (same 4-rank as -4d, at a quarter of the enumeration cost), else -4d. */
int rank4_of_d(i64 d, const ClassGroupOptions& opt = {});

struct SpinorCounts {
    i64 total = 1;      // |C / C^4|
    i64 per_genus = 1;  // |C^2 / C^4| = 2^rank4
};
SpinorCounts spinor_genera_counts(const FormClassGroup& G);

/* spin+(trace form) = gen(trace form) for Q(sqrt d): true iff the 4-rank
 * vanishes. */
bool quadratic_verdict(i64 d, const ClassGroupOptions& opt = {});

/* Fast 4-rank from the quadratic-symbol matrix of the prime divisors of a
 * fundamental discriminant. Guarded: the first call runs an agreement sweep
 * against the composition-based rank4 for all squarefree |d| <= 10^4 and
 * aborts if any value differs. */
int redei_rank4(i64 Delta);

}  // namespace spinortrace::binaryforms
