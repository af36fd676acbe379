#pragma once
#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "spinortrace/binaryforms.hpp"
#include "spinortrace/lattice.hpp"
#include "spinortrace/spinor.hpp"

namespace spinortrace::tracefields {

/* Monic integer polynomial, coefficients ascending: f[k] is the x^k term. */
using Poly = std::vector<mpz_class>;

std::string poly_to_string(const Poly& f);

struct NumberFieldInput {
    Poly poly;
    /* Rows express an integral basis in the power basis of a root; empty
     * means the power basis itself (the order Z[theta]). */
    std::vector<std::vector<mpq_class>> basis;
};

struct RamPair {
    long e = 1;  // ramification degree
    long f = 1;  // residue degree
};

struct RamificationData {
    mpz_class p;
    std::vector<RamPair> pairs;
};

/* F_p = sum of residue degrees; M_p = max v_p(e_i) (0 means tame). */
long residue_degree_sum(const RamificationData& ram);
long max_wildness(const RamificationData& ram);

/* p_0..p_{2n-2} with p_k = Tr(theta^k), from Newton's identities. Powers up
 * to 2n-2 cover every product of two basis polynomials of degree < n. */
std::vector<mpz_class> power_sums(const Poly& f);

/* Gram matrix of (x, y) -> Tr(xy) on the basis (default power basis); exact.
 * Throws TRACE_NOT_INTEGRAL naming the offending pair when the basis does
 * not span an order. det equals the discriminant of that order. */
lattice::GramMatrix trace_gram(const NumberFieldInput& in);

/* Number of real roots of a squarefree integer polynomial, by Sturm chains
 * over exact rationals. The trace form is definite iff this equals deg f. */
int real_root_count(const Poly& f);

struct ShapeBlock {
    long scale;
    lattice::BlockKind kind;
};

/* Predicted Jordan skeleton at a tame prime: F_p unit blocks at scale 0,
 * then the rest at scale 1 (units for odd p, hyperbolic planes for p = 2,
 * where n - F_2 is forced even). Throws WILD_PRIME when M_p > 0. */
std::vector<ShapeBlock> tame_local_shape(int n, const RamificationData& ram);

struct TameMatch {
    bool ok = false;
    std::string detail;
};

/* Compare a computed decomposition against the tame prediction on invariant
 * data only: per-scale ranks, v_p(det) = n - F_p, and at p = 2 oddness at
 * scale 0 / evenness at scale 1 (unit labels are not canonical there). */
TameMatch match_tame_shape(int n, const RamificationData& ram,
                           const lattice::JordanDecomposition& J);

struct DiscBound {
    long bound = 0;     // n - F_p + sum e_i f_i v_p(e_i)
    bool exact = false; // equality holds exactly when M_p = 0
    long coarse = 0;    // n(M_p + 1) - F_p, always >= bound
};

DiscBound disc_bound(int n, const RamificationData& ram);

/* A priori spinor verdict at a tame prime: for rank >= 3 the tame shape
 * always contains a unit pair, unit triple or hyperbolic factor. */
spinor::SpinorVerdict tame_verdict(int n, const RamificationData& ram);

/* The totally ramified quartic 2-adic fields with discriminant valuation
 * 9..11 have minimal polynomials of three shapes; x^4+2ax^2+b splits into
 * four valuation patterns of (a, b). */
enum class QuarticCase { I, II, III, IV, EightX, Special };

const char* quartic_case_tag(QuarticCase c);

struct PredictedBlock {
    long scale = 0;
    lattice::BlockKind kind = lattice::BlockKind::Unit;
    mpq_class unit;  // 2-adic unit; meaningful for Unit blocks
};

struct QuarticPrediction {
    QuarticCase tag = QuarticCase::I;
    std::vector<PredictedBlock> blocks;
    long det_valuation = 0;  // sum of scale * rank over the blocks
};

/* Predicted 2-adic diagonal for x^4+2ax^2+b, x^4+8x+2b (b odd) and
 * x^4+8x^2+8x+22. Throws SHAPE_UNRECOGNIZED for anything else. */
QuarticPrediction quartic_wild2_classify(const Poly& f);

struct TableRow {
    Poly poly;
    std::string name;
    long c = 0;  // tabulated discriminant valuation
    QuarticCase tag = QuarticCase::I;
    spinor::Reason reason = spinor::Reason::None;
    bool pass = false;
    std::string detail;  // diagnostics on failure
};

struct TableReport {
    std::vector<TableRow> rows;
    bool all_pass = false;
};

/* Check all 36 tabulated quartics: the predicted scale sum equals the
 * tabulated c, v_2(det trace_gram) = c, the computed scale/rank multiset
 * matches the prediction, and the orthogonal-factor scan certifies units. */
TableReport verify_quartic_table();

struct RamCheck {
    mpz_class p;
    bool tame = false;
    long disc_valuation = 0;
    DiscBound bound;
    bool bound_ok = false;     // <= bound, with equality when exact
    bool shape_checked = false;  // tame primes only
    bool shape_ok = false;
    spinor::SpinorVerdict verdict;  // computed at this prime
    std::string detail;
};

struct QuadraticReport {
    binaryforms::i64 d = 0;  // radicand recovered from the form discriminant
    binaryforms::BinaryForm form;  // reduced working form, disc -4d
    int rank4 = 0;
    bool spin_equals_genus = false;
    binaryforms::SpinorCounts counts;
};

struct FieldReport {
    int degree = 0;
    std::optional<lattice::GramMatrix> gram;
    mpz_class det;
    int real_roots = 0;
    bool definite = false;  // totally real
    bool delegated = false; // degree-2 path decided by class-group arithmetic
    std::optional<QuadraticReport> quadratic;
    std::optional<spinor::GenusVerdict> verdict;  // degree >= 3
    std::vector<RamCheck> ram_checks;
    std::vector<std::string> warnings;
};

/* Full pipeline: validate, build the trace Gram, settle definiteness by
 * Sturm, decide the spinor question (degree 2 delegates to binary-form
 * class groups), and cross-check any supplied ramification data. */
FieldReport analyze_field(const NumberFieldInput& in,
                          const std::vector<RamificationData>& ram = {});

}  // namespace spinortrace::tracefields
