#include "spinortrace/spinor.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>

#include "spinortrace/error.hpp"

namespace spinortrace::spinor {

using lattice::GramMatrix;
using lattice::JordanDecomposition;
using lattice::Pattern;

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    for (a %= m; e; e >>= 1, a = mulmod(a, a, m))
        if (e & 1) r = mulmod(r, a, m);
    return r;
}

/* Deterministic for all 64-bit inputs with this witness set. */
bool is_prime_u64(u64 n) {
    constexpr u64 ws[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) return false;
    for (u64 w : ws)
        if (n % w == 0) return n == w;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (u64 w : ws) {
        u64 x = powmod(w, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s && witness; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) witness = false;
        }
        if (witness) return false;
    }
    return true;
}

/* Brent's variant of Pollard rho; n odd composite, not a prime power of 2. */
u64 rho_brent(u64 n) {
    std::mt19937_64 rg(n ^ 0x9e3779b97f4a7c15ULL);
    while (true) {
        u64 y = rg() % (n - 2) + 1, c = rg() % (n - 1) + 1;
        const u64 m = 128;
        u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
            for (u64 k = 0; k < r && g == 1; k += m) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = (mulmod(y, y, n) + c) % n;
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (mulmod(ys, ys, n) + c) % n;
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
    }
}

void factor_u64(u64 n, std::map<u64, int>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        ++out[n];
        return;
    }
    u64 d = rho_brent(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

}  // namespace

std::vector<mpz_class> factor_primes(const mpz_class& m) {
    mpz_class n = abs(m);
    if (n == 0) throw Error("FACTOR_ZERO", "cannot factor zero");
    std::vector<mpz_class> primes;
    auto strip = [&](unsigned long d) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
            primes.emplace_back(d);
            mpz_class q;
            while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
                mpz_divexact_ui(q.get_mpz_t(), n.get_mpz_t(), d);
                n = q;
            }
        }
    };
    strip(2);
    strip(3);
    for (unsigned long d = 5; d < 10000; d += 6) {
        strip(d);
        strip(d + 2);
    }
    if (n > 1) {
        /* peel perfect powers so p^k with a 64-bit base still factors */
        while (mpz_perfect_power_p(n.get_mpz_t())) {
            for (unsigned long k = 2;; ++k) {
                mpz_class r;
                if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) {
                    n = r;
                    break;
                }
            }
        }
        if (!n.fits_ulong_p())
            throw Error("FACTOR_TOO_LARGE",
                        "cofactor " + n.get_str() + " exceeds 64 bits after trial division");
        std::map<u64, int> f;
        factor_u64(n.get_ui(), f);
        for (const auto& [p, e] : f) primes.emplace_back(p);
    }
    std::sort(primes.begin(), primes.end());
    return primes;
}

std::vector<mpz_class> relevant_primes(const GramMatrix& G) {
    return factor_primes(2 * G.det());
}

const char* reason_tag(Reason r) {
    switch (r) {
        case Reason::TamePattern: return "TAME_PATTERN";
        case Reason::TwoH: return "TWO_H";
        case Reason::UnitTriple: return "UNIT_TRIPLE";
        case Reason::UnitPairPlusNext: return "UNIT_PAIR_PLUS_NEXT";
        case Reason::OddEqualScalePair: return "ODD_EQUAL_SCALE_PAIR";
        case Reason::DiscriminantBound: return "DISCRIMINANT_BOUND";
        case Reason::UnimodularRank3: return "UNIMODULAR_RANK3";
        case Reason::None: break;
    }
    return "";
}

long bound_odd(int n) { return static_cast<long>(n) * (n - 1) / 2; }

long bound_two_definite(int n) { return static_cast<long>(n) * (n - 3) + 2 * ((n + 1) / 2); }

long bound_two_indefinite(int n) { return static_cast<long>(n) * (n - 1); }

SpinorVerdict contains_units(const JordanDecomposition& J, bool definite, int n,
                             const mpz_class& D) {
    SpinorVerdict v;
    v.p = J.p;
    auto hit = [&](Reason r) {
        v.answer = Answer::ContainsUnits;
        v.reason = r;
        return v;
    };

    auto pats = lattice::orthogonal_factor_scan(J);
    if (pats.count(Pattern::TwoH)) return hit(Reason::TwoH);
    if (pats.count(Pattern::UnitTripleSameScale)) return hit(Reason::UnitTriple);
    if (pats.count(Pattern::UnitPairPlusNext)) return hit(Reason::UnitPairPlusNext);
    if (pats.count(Pattern::OddEqualScalePair)) return hit(Reason::OddEqualScalePair);

    if (n >= 3) {
        long vp = padic::valuation(D, J.p);
        if (J.p != 2 && vp < bound_odd(n)) return hit(Reason::DiscriminantBound);
        if (J.p == 2 && definite && vp < bound_two_definite(n))
            return hit(Reason::DiscriminantBound);
        if (J.p == 2 && !definite && vp < bound_two_indefinite(n))
            return hit(Reason::DiscriminantBound);
    }

    if (padic::valuation(D, J.p) == 0 && n >= 3) return hit(Reason::UnimodularRank3);
    if (J.p != 2) {
        auto prof = J.scale_rank_profile();
        auto it = prof.find(0);
        if (it != prof.end() && it->second >= 2) return hit(Reason::UnimodularRank3);
    }
    return v;
}

GenusVerdict one_spinor_genus(const GramMatrix& G, bool definite) {
    GenusVerdict gv;
    gv.dimension = G.n();
    gv.det = G.det();
    bool all = true;
    for (const auto& p : relevant_primes(G)) {
        SpinorVerdict v;
        if (gv.dimension >= 3)
            v = contains_units(lattice::jordan_decompose(G, p), definite, gv.dimension, gv.det);
        else
            v.p = p;  // rank <= 2: no rule applies, stays Unknown
        all = all && v.answer == Answer::ContainsUnits;
        gv.verdicts.push_back(std::move(v));
    }
    gv.conclusion = all ? Conclusion::OneProperSpinorGenus : Conclusion::Inconclusive;
    return gv;
}

GenusVerdict one_spinor_genus(const GramMatrix& G) {
    return one_spinor_genus(G, G.is_definite());
}

}  // namespace spinortrace::spinor
