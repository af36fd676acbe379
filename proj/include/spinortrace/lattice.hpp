#pragma once
#include <gmpxx.h>

#include <map>
#include <set>
#include <vector>

#include "spinortrace/padic.hpp"

namespace spinortrace::lattice {

using Row = std::vector<mpz_class>;
using Mat = std::vector<Row>;

/* Symmetric nonsingular integer Gram matrix. Determinant (exact, Bareiss) is
 * computed on construction; GRAM_SINGULAR / GRAM_ASYMMETRIC on bad input. */
class GramMatrix {
public:
    explicit GramMatrix(Mat rows);

    int n() const { return static_cast<int>(rows_.size()); }
    const mpz_class& at(int i, int j) const { return rows_[i][j]; }
    const Mat& rows() const { return rows_; }
    const mpz_class& det() const { return det_; }

    /* Leading principal minors det(G[0..k][0..k]), k = 0..n-1. */
    std::vector<mpz_class> leading_minors() const;
    /* Positive or negative definite (exact sign test on the minors). */
    bool is_definite() const;

private:
    Mat rows_;
    mpz_class det_;
};

mpz_class det_bareiss(const Mat& m);

enum class BlockKind { Unit, Hyperbolic, EvenA };

/* One Jordan block: p^scale times a unimodular block.
 * Unit: <u>, rank 1. Hyperbolic: [[0,1],[1,0]], det -1 mod squares.
 * EvenA: [[2,1],[1,2]], det 3 mod squares. The 2x2 kinds occur only at p=2. */
struct JordanBlock {
    long scale = 0;
    BlockKind kind = BlockKind::Unit;
    padic::SquareClass unit;  // meaningful for Unit blocks only

    int rank() const { return kind == BlockKind::Unit ? 1 : 2; }
    bool operator==(const JordanBlock&) const = default;
};

struct JordanDecomposition {
    mpz_class p;
    std::vector<JordanBlock> blocks;  // canonical order: scale, kind, unit key
    /* Unit-class labels at p=2 depend on elimination order and are reported
     * as computed; only scales, ranks and parities are canonical there. */
    bool units_canonical = true;

    int rank() const;
    long det_valuation() const;
    padic::SquareClass det_class() const;
    /* scale -> total rank at that scale */
    std::map<long, int> scale_rank_profile() const;
    /* scale -> rank contributed by 2x2 even blocks */
    std::map<long, int> even_rank_profile() const;
};

struct DecomposeOptions {
    long precision = 0;  // working exponent N; 0 = v_p(det) + 4
    int max_retries = 3;
};

/* Jordan decomposition of G over Z_p, working modulo p^N. Throws
 * PRECISION_EXHAUSTED only if a unit cannot be certified at working
 * precision after all retries (never returns a wrong answer). */
JordanDecomposition jordan_decompose(const GramMatrix& G, const mpz_class& p);
JordanDecomposition jordan_decompose(const GramMatrix& G, const mpz_class& p,
                                     const DecomposeOptions& opt);

/* Block-diagonal Gram matrix with canonical integer representatives. */
GramMatrix assemble(const JordanDecomposition& J);

enum class Pattern {
    OddEqualScalePair,   // odd p: two Unit blocks at equal scale
    TwoH,                // p=2: any Hyperbolic or EvenA block
    UnitTripleSameScale, // p=2: three Unit blocks at equal scale
    UnitPairPlusNext,    // p=2: two Unit blocks at scale e, one at e+1
};

/* Every matched orthogonal-factor pattern; each forces the p-adic spinor
 * norm group to contain all of Z_p^*. */
std::set<Pattern> orthogonal_factor_scan(const JordanDecomposition& J);

}  // namespace spinortrace::lattice
