#include "spinortrace/lattice.hpp"

#include <algorithm>
#include <limits>

namespace spinortrace::lattice {

using padic::SquareClass;

GramMatrix::GramMatrix(Mat rows) : rows_(std::move(rows)) {
    const size_t n = rows_.size();
    if (n == 0) throw Error("GRAM_EMPTY", "empty Gram matrix");
    for (const auto& r : rows_)
        if (r.size() != n) throw Error("GRAM_SHAPE", "Gram matrix is not square");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (rows_[i][j] != rows_[j][i])
                throw Error("GRAM_ASYMMETRIC", "Gram matrix entry (" + std::to_string(i) +
                                                   "," + std::to_string(j) + ") breaks symmetry");
    det_ = det_bareiss(rows_);
    if (det_ == 0) throw Error("GRAM_SINGULAR", "Gram matrix is singular");
}

/* Fraction-free Gaussian elimination with row pivoting; exact over Z. */
mpz_class det_bareiss(const Mat& m) {
    Mat a = m;
    const int n = static_cast<int>(a.size());
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int swap = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) { swap = i; break; }
            if (swap < 0) return 0;
            std::swap(a[k], a[swap]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                mpz_class t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = t;
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::vector<mpz_class> GramMatrix::leading_minors() const {
    std::vector<mpz_class> out;
    for (int k = 1; k <= n(); ++k) {
        Mat sub(k, Row(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) sub[i][j] = rows_[i][j];
        out.push_back(det_bareiss(sub));
    }
    return out;
}

bool GramMatrix::is_definite() const {
    auto minors = leading_minors();
    bool pos = true, neg = true;
    for (size_t k = 0; k < minors.size(); ++k) {
        int s = sgn(minors[k]);
        if (s == 0) return false;  // definite matrices have nonzero leading minors
        pos = pos && s > 0;
        neg = neg && s == ((k % 2 == 0) ? -1 : 1);
    }
    return pos || neg;
}

int JordanDecomposition::rank() const {
    int r = 0;
    for (const auto& b : blocks) r += b.rank();
    return r;
}

long JordanDecomposition::det_valuation() const {
    long v = 0;
    for (const auto& b : blocks) v += b.scale * b.rank();
    return v;
}

SquareClass JordanDecomposition::det_class() const {
    SquareClass acc{p, false, p == 2 ? 1 : 0};
    for (const auto& b : blocks) {
        SquareClass d;
        switch (b.kind) {
            case BlockKind::Unit:
                d = b.unit;
                d.odd_val = (b.scale % 2) != 0;
                break;
            case BlockKind::Hyperbolic:
                d = padic::square_class(mpz_class(-1), p);  // det -4^scale
                break;
            case BlockKind::EvenA:
                d = padic::square_class(mpz_class(3), p);  // det 3*4^scale
                break;
        }
        acc = acc * d;
    }
    return acc;
}

std::map<long, int> JordanDecomposition::scale_rank_profile() const {
    std::map<long, int> m;
    for (const auto& b : blocks) m[b.scale] += b.rank();
    return m;
}

std::map<long, int> JordanDecomposition::even_rank_profile() const {
    std::map<long, int> m;
    for (const auto& b : blocks)
        if (b.kind != BlockKind::Unit) m[b.scale] += b.rank();
    return m;
}

namespace {

struct PrecisionExhausted {};

constexpr long kValInfinity = std::numeric_limits<long>::max();

/* Residue arithmetic mod p^N. Entries live in [0, P). */
struct WorkMatrix {
    mpz_class p, P;
    long N;
    Mat a;

    mpz_class reduce(const mpz_class& x) const {
        mpz_class r = x % P;
        if (r < 0) r += P;
        return r;
    }
    long val(const mpz_class& x) const {
        if (x == 0) return kValInfinity;
        mpz_class rest;
        return static_cast<long>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
    }
    int size() const { return static_cast<int>(a.size()); }

    void drop(int i) {
        a.erase(a.begin() + i);
        for (auto& r : a) r.erase(r.begin() + i);
    }
    void drop2(int i, int j) {  // i < j
        drop(j);
        drop(i);
    }
};

mpz_class inv_mod(const mpz_class& u, const mpz_class& m) {
    mpz_class r;
    if (!mpz_invert(r.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t()))
        throw Error("INTERNAL", "non-invertible pivot unit");
    return r;
}

/* Remove a 1x1 block at the pivot (i,i) of valuation m: emit the unit class
 * and replace the rest with the Schur complement, still known mod p^N. */
JordanBlock split_unit(WorkMatrix& w, int i, long m) {
    const mpz_class pm = [&] { mpz_class t; mpz_pow_ui(t.get_mpz_t(), w.p.get_mpz_t(), m); return t; }();
    mpz_class u = w.a[i][i] / pm;  // exact: p^m divides the residue
    long headroom = w.p == 2 ? 3 : 1;
    if (w.N - m < headroom) throw PrecisionExhausted{};

    JordanBlock blk;
    blk.scale = m;
    blk.kind = BlockKind::Unit;
    blk.unit = padic::square_class(u, w.p);

    const mpz_class uinv = inv_mod(u, w.P);
    const int n = w.size();
    for (int k = 0; k < n; ++k) {
        if (k == i) continue;
        for (int l = k; l < n; ++l) {
            if (l == i) continue;
            mpz_class t = w.a[k][i] * w.a[i][l];  // val >= 2m
            mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), pm.get_mpz_t());
            t = w.reduce(w.a[k][l] - t * uinv);
            w.a[k][l] = t;
            w.a[l][k] = t;
        }
    }
    w.drop(i);
    return blk;
}

/* p = 2 only: split a 2x2 block on rows {i,j} whose minimal valuation m sits
 * off-diagonal while both diagonal entries have valuation > m. Scaled by
 * 2^-m the block is even unimodular, so its determinant's unit part is
 * -1 mod 8 (hyperbolic plane) or 3 mod 8 (the other even plane). */
JordanBlock split_even_pair(WorkMatrix& w, int i, int j, long m) {
    if (w.N - 2 * m < 3) throw PrecisionExhausted{};
    const mpz_class p2m = [&] { mpz_class t; mpz_pow_ui(t.get_mpz_t(), w.p.get_mpz_t(), 2 * m); return t; }();
    const mpz_class A = w.a[i][i], B = w.a[i][j], D = w.a[j][j];
    mpz_class det = A * D - B * B;  // val exactly 2m
    mpz_class wu = det / p2m;       // exact
    mpz_class w8 = wu % 8;
    if (w8 < 0) w8 += 8;

    JordanBlock blk;
    blk.scale = m;
    if (w8 == 7)
        blk.kind = BlockKind::Hyperbolic;
    else if (w8 == 3)
        blk.kind = BlockKind::EvenA;
    else
        throw Error("INTERNAL", "even 2x2 block with unit determinant " + w8.get_str() + " mod 8");
    blk.unit = padic::SquareClass{w.p, false, 1};

    const mpz_class winv = inv_mod(wu, w.P);
    const int n = w.size();
    /* Schur complement against adj([[A,B],[B,D]]) / det. */
    for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        for (int l = k; l < n; ++l) {
            if (l == i || l == j) continue;
            mpz_class num = w.a[k][i] * (D * w.a[i][l] - B * w.a[j][l]) +
                            w.a[k][j] * (A * w.a[j][l] - B * w.a[i][l]);
            mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), p2m.get_mpz_t());
            mpz_class t = w.reduce(w.a[k][l] - num * winv);
            w.a[k][l] = t;
            w.a[l][k] = t;
        }
    }
    w.drop2(std::min(i, j), std::max(i, j));
    return blk;
}

int kind_order(BlockKind k) {
    switch (k) {
        case BlockKind::Unit: return 0;
        case BlockKind::Hyperbolic: return 1;
        case BlockKind::EvenA: return 2;
    }
    return 3;
}

void sort_blocks(std::vector<JordanBlock>& blocks) {
    std::stable_sort(blocks.begin(), blocks.end(), [](const JordanBlock& x, const JordanBlock& y) {
        if (x.scale != y.scale) return x.scale < y.scale;
        if (x.kind != y.kind) return kind_order(x.kind) < kind_order(y.kind);
        return x.unit.unit_key < y.unit.unit_key;
    });
}

/* <u1,...,ur> = <1,...,1,d> over Z_p for odd p (d = product class); the
 * per-scale (rank, det class) pair is the complete invariant there. */
void fold_odd_units(std::vector<JordanBlock>& blocks, const mpz_class& p) {
    std::map<long, std::pair<int, int>> per_scale;  // scale -> (rank, xor of keys)
    for (const auto& b : blocks) {
        auto& [r, key] = per_scale[b.scale];
        r += 1;
        key ^= b.unit.unit_key;
    }
    blocks.clear();
    for (const auto& [scale, rk] : per_scale) {
        for (int i = 0; i + 1 < rk.first; ++i)
            blocks.push_back({scale, BlockKind::Unit, SquareClass{p, false, 0}});
        blocks.push_back({scale, BlockKind::Unit, SquareClass{p, false, rk.second}});
    }
}

JordanDecomposition decompose_once(const GramMatrix& G, const mpz_class& p, long N) {
    WorkMatrix w;
    w.p = p;
    w.N = N;
    mpz_pow_ui(w.P.get_mpz_t(), p.get_mpz_t(), N);
    w.a.assign(G.n(), Row(G.n()));
    for (int i = 0; i < G.n(); ++i)
        for (int j = 0; j < G.n(); ++j) w.a[i][j] = w.reduce(G.at(i, j));

    JordanDecomposition J;
    J.p = p;
    while (w.size() > 0) {
        const int n = w.size();
        long m = kValInfinity;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) m = std::min(m, w.val(w.a[i][j]));
        if (m >= w.N) throw PrecisionExhausted{};

        int diag = -1;
        for (int i = 0; i < n; ++i)
            if (w.val(w.a[i][i]) == m) { diag = i; break; }

        if (diag >= 0) {
            J.blocks.push_back(split_unit(w, diag, m));
            continue;
        }
        int bi = -1, bj = -1;
        for (int i = 0; i < n && bi < 0; ++i)
            for (int j = i + 1; j < n; ++j)
                if (w.val(w.a[i][j]) == m) { bi = i; bj = j; break; }
        if (p != 2) {
            /* Move the minimum onto the diagonal: row/col i += row/col j.
             * New (i,i) entry a_ii + 2a_ij + a_jj has valuation exactly m. */
            for (int k = 0; k < n; ++k) w.a[bi][k] = w.reduce(w.a[bi][k] + w.a[bj][k]);
            for (int k = 0; k < n; ++k) w.a[k][bi] = w.reduce(w.a[k][bi] + w.a[k][bj]);
            J.blocks.push_back(split_unit(w, bi, m));
        } else {
            J.blocks.push_back(split_even_pair(w, bi, bj, m));
        }
    }

    if (p != 2) fold_odd_units(J.blocks, p);
    J.units_canonical = (p != 2);
    sort_blocks(J.blocks);
    return J;
}

}  // namespace

JordanDecomposition jordan_decompose(const GramMatrix& G, const mpz_class& p,
                                     const DecomposeOptions& opt) {
    if (p < 2) throw Error("BAD_PRIME", "p must be a prime >= 2");
    const long vdet = padic::valuation(G.det(), p);
    long N = opt.precision > 0 ? opt.precision : vdet + 4;
    for (int attempt = 0;; ++attempt) {
        try {
            JordanDecomposition J = decompose_once(G, p, N);
            /* Determinant conservation, checked on every call. */
            if (J.det_valuation() != vdet ||
                !(J.det_class() == padic::square_class(G.det(), p)))
                throw Error("INTERNAL", "Jordan blocks do not conserve the determinant");
            return J;
        } catch (const PrecisionExhausted&) {
            if (attempt >= opt.max_retries)
                throw Error("PRECISION_EXHAUSTED",
                            "cannot certify a unit at working precision " + p.get_str() + "^" +
                                std::to_string(N) + "; increase the precision option");
            N *= 2;
        }
    }
}

JordanDecomposition jordan_decompose(const GramMatrix& G, const mpz_class& p) {
    return jordan_decompose(G, p, DecomposeOptions{});
}

GramMatrix assemble(const JordanDecomposition& J) {
    int n = J.rank();
    Mat m(n, Row(n, 0));
    int at = 0;
    for (const auto& b : J.blocks) {
        mpz_class s;
        mpz_pow_ui(s.get_mpz_t(), J.p.get_mpz_t(), b.scale);
        switch (b.kind) {
            case BlockKind::Unit: {
                SquareClass u = b.unit;
                u.p = J.p;
                m[at][at] = u.canonical_unit() * s;
                at += 1;
                break;
            }
            case BlockKind::Hyperbolic:
                m[at][at + 1] = s;
                m[at + 1][at] = s;
                at += 2;
                break;
            case BlockKind::EvenA:
                m[at][at] = 2 * s;
                m[at][at + 1] = s;
                m[at + 1][at] = s;
                m[at + 1][at + 1] = 2 * s;
                at += 2;
                break;
        }
    }
    return GramMatrix(std::move(m));
}

std::set<Pattern> orthogonal_factor_scan(const JordanDecomposition& J) {
    std::set<Pattern> out;
    std::map<long, int> units;  // scale -> count of Unit blocks
    bool any_even = false;
    for (const auto& b : J.blocks) {
        if (b.kind == BlockKind::Unit)
            units[b.scale] += 1;
        else
            any_even = true;
    }
    if (J.p != 2) {
        for (const auto& [s, c] : units)
            if (c >= 2) out.insert(Pattern::OddEqualScalePair);
        return out;
    }
    if (any_even) out.insert(Pattern::TwoH);
    for (const auto& [s, c] : units) {
        if (c >= 3) out.insert(Pattern::UnitTripleSameScale);
        if (c >= 2 && units.count(s + 1)) out.insert(Pattern::UnitPairPlusNext);
    }
    return out;
}

}  // namespace spinortrace::lattice
