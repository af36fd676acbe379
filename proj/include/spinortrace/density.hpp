#pragma once
#include <gmpxx.h>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinortrace/binaryforms.hpp"

namespace spinortrace::density {

using binaryforms::i64;

/* Square-free flags for 0..limit (flags[0] = false, flags[1] = true).
 * Sieves by the squares of primes up to sqrt(limit). Throws BAD_BOUND for
 * limit < 1. */
std::vector<bool> squarefree_sieve(i64 limit);

/* Partial Euler product phi(1/2) = prod_{n=1}^{64} (1 - 2^-n), exact.
 * The omitted tail multiplies the value by 1 - O(2^-65), so the partial
 * product is within 2^-64 of the limit. */
mpq_class euler_phi_half();

/* Predicted limiting ratios, as doubles:
 *   real fields      phi(1/2)       ~ 0.28879
 *   imaginary fields 2 phi(1/2)     ~ 0.57758
 *   combined         3 phi(1/2) / 2 ~ 0.43318  */
double predicted_alpha_plus();
double predicted_alpha_minus();
double predicted_alpha();

enum class Sign { Plus, Minus, Both };
enum class Method {
    Oracle,  // class-group structure via composition (rank4_of_d)
    Redei    // quadratic-symbol matrix rank (redei_rank4, self-gating)
};

/* Counters for one window lo <= |d| < hi of radicands.
 *
 * t_plus[i] (resp. t_minus[i]) counts squarefree d > 0 (resp. d < 0) with
 * d = i (mod 4), i in {1,2,3}, whose trace form has a single proper spinor
 * genus in its genus; n_plus / n_minus count all squarefree radicands seen
 * (d = 1 is counted in n_plus but is not a field, so it never reaches t).
 *
 * fk_neg_disc / fk_pos_disc recount the same fields keyed by the residue of
 * the discriminant D = -4d (d = 1, 2 mod 4) or D = -d (d = 3 mod 4) whose
 * class group decides the verdict: index 0 for D = 12 (mod 16), 1 for
 * D = 8 (mod 16), 2 for D = 1 (mod 4). D < 0 lands in fk_neg_disc (radicand
 * d > 0) and D > 0 in fk_pos_disc. A scan checks fk == t slot-by-slot for
 * every window before accepting it; the fk arrays are not checkpointed. */
struct RangeCounts {
    i64 lo = 0, hi = 0;
    std::array<i64, 4> t_plus{}, t_minus{};
    i64 n_plus = 0, n_minus = 0;
    std::array<i64, 3> fk_neg_disc{}, fk_pos_disc{};
};

/* One checkpoint line: "lo hi t1+ t2+ t3+ t1- t2- t3- n+ n-". */
std::string checkpoint_line(const RangeCounts& rc);
RangeCounts parse_checkpoint_line(const std::string& line);  // BAD_CHECKPOINT
/* All lines of a log; blank lines are skipped. */
std::vector<RangeCounts> load_checkpoint(std::istream& in);

struct ScanOptions {
    Sign sign = Sign::Both;
    Method method = Method::Oracle;
    int jobs = 1;     // worker threads; windows are independent
    i64 chunk = 2048; // window width; resuming requires the same width
    /* When set, one checkpoint line is appended per freshly computed window.
     * Windows found in `resume` are merged without recomputation; their fk
     * consistency was checked by the run that wrote them (a line is only
     * emitted after the check passes). */
    std::ostream* checkpoint = nullptr;
    const std::vector<RangeCounts>* resume = nullptr;
};

struct DensityReport {
    i64 X = 0;
    Sign sign = Sign::Both;
    Method method = Method::Oracle;
    std::array<i64, 4> t_plus{}, t_minus{};
    i64 n_plus = 0, n_minus = 0;
    std::array<i64, 3> fk_neg_disc{}, fk_pos_disc{};
    bool fk_consistent = false;
    int windows_computed = 0, windows_resumed = 0;

    i64 t_plus_total() const { return t_plus[1] + t_plus[2] + t_plus[3]; }
    i64 t_minus_total() const { return t_minus[1] + t_minus[2] + t_minus[3]; }
    /* NaN when the corresponding denominator is zero (sign-restricted scan). */
    double alpha_plus() const;
    double alpha_minus() const;
    double alpha() const;  // (T+ + T-) / (N+ + N-)
};

/* Count one window of radicands; sf must be a squarefree_sieve covering
 * hi - 1. Pure: equal arguments give equal counts. */
RangeCounts scan_range(i64 lo, i64 hi, const std::vector<bool>& sf, Sign sign,
                       Method method);

/* Scan all radicands 0 < |d| < X. Windows partition [1, X) in chunks of
 * opt.chunk; merging is by summation, so the report is identical for any
 * chunk size and any number of jobs. Throws BAD_BOUND for X < 2,
 * FK_MISMATCH if a window fails the six-way consistency recount, and
 * BAD_CHECKPOINT for resume data that does not fit the partition. */
DensityReport scan(i64 X, const ScanOptions& opt);
DensityReport scan(i64 X, Sign sign, Method method);

const char* sign_name(Sign s);      // "+", "-", "both"
const char* method_name(Method m);  // "oracle", "redei"

}  // namespace spinortrace::density
