#include "spinortrace/binaryforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "spinortrace/error.hpp"

namespace spinortrace::binaryforms {

namespace {

using i128 = __int128;

std::string str(i64 v) { return std::to_string(v); }

i64 checked(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw Error("INTERNAL", "form coefficient overflow");
    return static_cast<i64>(v);
}

i64 isqrt(i64 n) {
    if (n < 0) throw Error("INTERNAL", "isqrt of negative");
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

i64 mod_math(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

std::vector<std::pair<i64, int>> factor_i64(i64 n) {
    if (n < 0) n = -n;
    std::vector<std::pair<i64, int>> out;
    for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) n /= p, ++e;
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

/* Kronecker symbol (a|n), full generality. */
int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (a % 2 == 0 && n % 2 == 0) return 0;
    int k = 1;
    int v = 0;
    while (n % 2 == 0) n /= 2, ++v;
    if (v % 2) {
        i64 am = mod_math(a, 8);
        if (am == 3 || am == 5) k = -k;
    }
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    a = mod_math(a, n);
    while (a != 0) {
        int v2 = 0;
        while (a % 2 == 0) a /= 2, ++v2;
        if (v2 % 2) {
            i64 nm = n % 8;
            if (nm == 3 || nm == 5) k = -k;
        }
        if (a % 4 == 3 && n % 4 == 3) k = -k;
        std::swap(a, n);
        a = mod_math(a, n);
    }
    return n == 1 ? k : 0;
}

}  // namespace

i64 BinaryForm::disc() const { return checked(i128(b) * b - i128(4) * a * c); }

i64 BinaryForm::eval(i64 x, i64 y) const {
    return checked(i128(a) * x * x + i128(b) * x * y + i128(c) * y * y);
}

bool is_square(i64 x) {
    if (x < 0) return false;
    i64 r = isqrt(x);
    return r * r == x;
}

bool is_squarefree(i64 d) {
    if (d == 0) return false;
    if (d < 0) d = -d;
    for (i64 p = 2; p * p <= d; p += (p == 2 ? 1 : 2)) {
        if (d % p) continue;
        d /= p;
        if (d % p == 0) return false;
    }
    return true;
}

void validate(const BinaryForm& f) {
    i64 D = f.disc();
    if (D == 0) throw Error("DISC_SQUARE", "discriminant 0 is degenerate");
    if (is_square(D))
        throw Error("DISC_SQUARE", "square discriminant " + str(D) + " is not a field form");
    i64 g = std::gcd(std::gcd(std::abs(f.a), std::abs(f.b)), std::abs(f.c));
    if (g != 1)
        throw Error("FORM_IMPRIMITIVE", "(" + str(f.a) + "," + str(f.b) + "," + str(f.c) +
                                             ") has content " + str(g));
}

TraceForm quadratic_trace_form(i64 d) {
    if (d == 0 || d == 1) throw Error("D_EXCLUDED", "d must differ from 0 and 1");
    if (!is_squarefree(d)) throw Error("D_NOT_SQUAREFREE", "d = " + str(d) + " is not squarefree");
    TraceForm t;
    if (mod_math(d, 4) == 1) {
        t.form = {2, 2, (1 + d) / 2};
        t.halved = false;
    } else {
        t.form = {1, 0, d};
        t.halved = true;
    }
    validate(t.form);  // rejects d = -1 (square discriminant 4)
    if (t.form.disc() != -4 * d) throw Error("INTERNAL", "trace form discriminant mismatch");
    return t;
}

bool is_reduced(const BinaryForm& f) {
    i64 D = f.disc();
    if (D < 0) {
        if (f.a <= 0) return false;
        if (!(std::abs(f.b) <= f.a && f.a <= f.c)) return false;
        if (f.b < 0 && (std::abs(f.b) == f.a || f.a == f.c)) return false;
        return true;
    }
    if (f.b <= 0 || i128(f.b) * f.b >= D) return false;
    i64 t = 2 * std::abs(f.a);
    /* sqrt(D) - b < 2|a| < sqrt(D) + b, exact integer comparisons */
    if (i128(t + f.b) * (t + f.b) < D) return false;
    if (t > f.b && i128(t - f.b) * (t - f.b) > D) return false;
    return true;
}

namespace {

BinaryForm reduce_definite(BinaryForm f, i128 D) {
    if (f.a < 0) {  // negative definite: reduce the positive twin
        f.a = -f.a;
        f.b = -f.b;
        f.c = -f.c;
    }
    for (int guard = 0;; ++guard) {
        if (guard > 100000) throw Error("INTERNAL", "definite reduction did not terminate");
        if (f.c < f.a) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        if (f.b > f.a || f.b <= -f.a) {
            i64 b2 = f.a - mod_math(f.a - f.b, 2 * f.a);  // into (-a, a]
            f.c = checked((i128(b2) * b2 - D) / (4 * f.a));
            f.b = b2;
            continue;
        }
        break;
    }
    if (f.b < 0 && (f.a == f.c || -f.b == f.a)) f.b = -f.b;
    return f;
}

/* One reduction step for indefinite forms; maps reduced forms to reduced
 * forms and moves any form toward the reduced cycle. */
BinaryForm rho(const BinaryForm& f, i64 s /* isqrt(disc) */, i128 D) {
    i64 cc = f.c;
    i64 ac = std::abs(cc);
    i64 lo;
    if (i128(cc) * cc > D)
        lo = -ac + 1;  // window (-|c|, |c|]
    else
        lo = s + 1 - 2 * ac;  // window (s - 2|c|, s]
    i64 b2 = lo + mod_math(-f.b - lo, 2 * ac);
    i64 c2 = checked((i128(b2) * b2 - D) / (4 * cc));
    return {cc, b2, c2};
}

}  // namespace

BinaryForm reduce(BinaryForm f) {
    validate(f);
    i64 Dl = f.disc();
    i128 D = Dl;
    if (Dl < 0) return reduce_definite(f, D);
    i64 s = isqrt(Dl);
    for (int guard = 0; !is_reduced(f); ++guard) {
        if (guard > 100000) throw Error("INTERNAL", "indefinite reduction did not terminate");
        f = rho(f, s, D);
    }
    return f;
}

std::vector<BinaryForm> cycle(const BinaryForm& f) {
    BinaryForm r = reduce(f);
    if (f.disc() < 0) return {r};
    i64 s = isqrt(f.disc());
    i128 D = f.disc();
    std::vector<BinaryForm> out{r};
    for (BinaryForm g = rho(r, s, D); !(g == r); g = rho(g, s, D)) {
        out.push_back(g);
        if (out.size() > 1000000) throw Error("INTERNAL", "cycle did not close");
    }
    return out;
}

bool equivalent(const BinaryForm& f, const BinaryForm& g) {
    if (f.disc() != g.disc()) return false;
    BinaryForm rg = reduce(g);
    if (f.disc() < 0) return reduce(f) == rg;
    auto cyc = cycle(f);
    return std::find(cyc.begin(), cyc.end(), rg) != cyc.end();
}

BinaryForm principal_form(i64 Delta) {
    i64 m4 = mod_math(Delta, 4);
    if (m4 != 0 && m4 != 1) throw Error("DISC_MOD4", "discriminant must be 0 or 1 mod 4");
    BinaryForm f = m4 == 0 ? BinaryForm{1, 0, -Delta / 4} : BinaryForm{1, 1, (1 - Delta) / 4};
    validate(f);
    return f;
}

BinaryForm inverse(const BinaryForm& f) { return {f.a, -f.b, f.c}; }

BinaryForm compose(const BinaryForm& f, const BinaryForm& g) {
    if (f.disc() != g.disc())
        throw Error("DISC_MISMATCH",
                    "cannot compose discriminants " + str(f.disc()) + " and " + str(g.disc()));
    BinaryForm f1 = reduce(f), f2 = reduce(g);
    i64 a1 = f1.a;

    /* find a primitive vector where f2 is coprime to a1 */
    i64 x = 1, y = 0;
    auto ok = [&](i64 xx, i64 yy) { return std::gcd(std::abs(f2.eval(xx, yy)), std::abs(a1)) == 1; };
    bool found = false;
    for (i64 xx = 0; xx <= 4 && !found; ++xx)
        for (i64 yy = -4; yy <= 4 && !found; ++yy) {
            if (std::gcd(std::abs(xx), std::abs(yy)) != 1) continue;
            if (ok(xx, yy)) {
                x = xx;
                y = yy;
                found = true;
            }
        }
    if (!found) {
        /* constructive fallback: pick residues prime by prime */
        i64 rad = 1;
        for (auto [p, e] : factor_i64(a1)) rad *= p;
        i64 xr = 0, yr = 0, m = 1;
        for (auto [p, e] : factor_i64(a1)) {
            i64 xp, yp;
            if (f2.a % p) {
                xp = 1, yp = 0;
            } else if (f2.c % p) {
                xp = 0, yp = 1;
            } else {
                xp = 1, yp = 1;  // value b2 mod p, nonzero by primitivity
            }
            /* CRT accumulate */
            for (i64 t = 0; t < p; ++t)
                if ((xr + m * t - xp) % p == 0) {
                    xr += m * t;
                    break;
                }
            for (i64 t = 0; t < p; ++t)
                if ((yr + m * t - yp) % p == 0) {
                    yr += m * t;
                    break;
                }
            m *= p;
        }
        x = xr;
        y = yr;
        if (x == 0 && y == 0) throw Error("INTERNAL", "compose: zero vector");
        for (i64 t = 0; std::gcd(std::abs(x), std::abs(y)) != 1; ++t) {
            if (t > 1000) throw Error("INTERNAL", "compose: no primitive vector");
            x += rad;
        }
        if (!ok(x, y)) throw Error("INTERNAL", "compose: coprime value search failed");
    }

    /* extend (x,y) to SL2 and transport f2 */
    i64 u = 0, v = 0;
    {
        i64 g0 = 0, uu = 0, vv = 0;  // solve x*vv - y*uu = 1
        i64 r0 = x, r1 = y, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
        while (r1 != 0) {
            i64 q = r0 / r1;
            std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
            std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
            std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
        }
        g0 = r0;  // = ±1 since (x,y) primitive
        uu = -t0 * g0;
        vv = s0 * g0;
        if (checked(i128(x) * vv - i128(y) * uu) != 1)
            throw Error("INTERNAL", "compose: SL2 extension failed");
        u = uu;
        v = vv;
    }
    i64 a2 = f2.eval(x, y);
    i64 b2 = checked(2 * (i128(f2.a) * x * u + i128(f2.c) * y * v) +
                     i128(f2.b) * (i128(x) * v + i128(y) * u));
    i64 c2 = f2.eval(u, v);
    BinaryForm t2{a2, b2, c2};
    if (t2.disc() != f1.disc()) throw Error("INTERNAL", "compose: transport broke discriminant");

    /* common middle coefficient: B = b1 mod 2a1, B = b2 mod 2a2 */
    i64 m1 = 2 * std::abs(a1), m2 = 2 * std::abs(a2);
    i64 diff = b2 - f1.b;
    if (diff % 2) throw Error("INTERNAL", "compose: parity mismatch");
    i64 h1 = m1 / 2, h2 = m2 / 2;  // gcd(h1,h2)=1
    /* k solves h1*k = diff/2 (mod h2) */
    i64 k = 0;
    {
        i64 a0 = mod_math(h1, h2), target = mod_math(diff / 2, h2);
        /* extended gcd for modular inverse of a0 mod h2 */
        i64 r0 = a0, r1 = h2, s0 = 1, s1 = 0;
        while (r1 != 0) {
            i64 q = r0 / r1;
            std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
            std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
        }
        if (r0 != 1 && r0 != -1) throw Error("INTERNAL", "compose: moduli not coprime");
        i64 inv = mod_math(s0 * r0, h2);
        k = checked(i128(target) * inv % h2);
    }
    i64 B = checked(i128(f1.b) + i128(m1) * k);
    i128 D = f1.disc();
    i128 a3 = i128(a1) * a2;
    if ((i128(B) * B - D) % (4 * a3) != 0) throw Error("INTERNAL", "compose: congruence failed");
    BinaryForm prod{checked(a3), B, checked((i128(B) * B - D) / (4 * a3))};
    return reduce(prod);
}

namespace {

/* All classes of discriminant Delta with a label scheme: for Delta < 0 each
 * reduced form is its own class; for Delta > 0 classes are rho-cycles. */
struct ClassIndex {
    i64 Delta = 0;
    std::vector<BinaryForm> all_reduced;  // sorted
    std::vector<int> class_of;            // parallel to all_reduced
    std::vector<BinaryForm> reps;         // class id -> representative

    int id_of(const BinaryForm& r) const {
        auto it = std::lower_bound(all_reduced.begin(), all_reduced.end(), r);
        if (it == all_reduced.end() || !(*it == r))
            throw Error("INTERNAL", "reduced form missing from enumeration");
        return class_of[it - all_reduced.begin()];
    }
};

std::vector<BinaryForm> enumerate_reduced(i64 Delta) {
    std::vector<BinaryForm> out;
    if (Delta < 0) {
        i64 amax = isqrt(-Delta / 3);
        for (i64 a = 1; a <= amax; ++a)
            for (i64 b = -a + 1; b <= a; ++b) {
                if (mod_math(b - Delta, 2) != 0) continue;
                i128 num = i128(b) * b - Delta;
                if (num % (4 * a)) continue;
                i64 c = checked(num / (4 * a));
                if (c < a) continue;
                if (b < 0 && a == c) continue;
                if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
                out.push_back({a, b, c});
            }
    } else {
        i64 s = isqrt(Delta);
        for (i64 b = 1; b <= s; ++b) {
            if (mod_math(Delta - b, 2) != 0) continue;
            i64 num = Delta - b * b;
            if (num <= 0 || num % 4) continue;
            i64 m = num / 4;  // |a| * |c| with a*c = -m
            i64 lo = std::max<i64>(1, (s - b) / 2 - 1), hi = (s + b) / 2 + 2;
            for (i64 aa = lo; aa <= hi; ++aa) {
                if (m % aa) continue;
                i64 ccm = m / aa;
                BinaryForm cand{aa, b, -ccm};
                if (!is_reduced(cand)) continue;
                if (std::gcd(std::gcd(aa, b), ccm) != 1) continue;
                out.push_back(cand);
                out.push_back({-aa, b, ccm});  // is_reduced depends on |a|,|c| only here
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ClassIndex enumerate_classes(i64 Delta, const ClassGroupOptions& opt) {
    i64 m4 = mod_math(Delta, 4);
    if (m4 != 0 && m4 != 1) throw Error("DISC_MOD4", "discriminant must be 0 or 1 mod 4");
    if (Delta == 0 || is_square(Delta))
        throw Error("DISC_SQUARE", "square discriminant " + str(Delta));
    if (std::abs(Delta) > opt.disc_limit)
        throw Error("DISC_LIMIT", "|" + str(Delta) + "| exceeds the configured limit " +
                                      str(opt.disc_limit));
    ClassIndex ci;
    ci.Delta = Delta;
    ci.all_reduced = enumerate_reduced(Delta);
    ci.class_of.assign(ci.all_reduced.size(), -1);
    if (Delta < 0) {
        for (size_t i = 0; i < ci.all_reduced.size(); ++i) {
            ci.class_of[i] = static_cast<int>(i);
            ci.reps.push_back(ci.all_reduced[i]);
        }
        return ci;
    }
    i64 s = isqrt(Delta);
    i128 D = Delta;
    auto idx = [&](const BinaryForm& f) {
        auto it = std::lower_bound(ci.all_reduced.begin(), ci.all_reduced.end(), f);
        if (it == ci.all_reduced.end() || !(*it == f))
            throw Error("INTERNAL", "rho left the enumerated set");
        return static_cast<size_t>(it - ci.all_reduced.begin());
    };
    for (size_t i = 0; i < ci.all_reduced.size(); ++i) {
        if (ci.class_of[i] >= 0) continue;
        int cid = static_cast<int>(ci.reps.size());
        ci.reps.push_back(ci.all_reduced[i]);
        BinaryForm g = ci.all_reduced[i];
        size_t j = i;
        do {
            ci.class_of[j] = cid;
            g = rho(g, s, D);
            j = idx(g);
        } while (ci.class_of[j] < 0);
        if (ci.class_of[j] != cid) throw Error("INTERNAL", "rho orbit crossed into another cycle");
    }
    return ci;
}

struct GroupOps {
    const ClassIndex& ci;
    int id;  // identity label

    explicit GroupOps(const ClassIndex& c) : ci(c), id(ci.id_of(reduce(principal_form(ci.Delta)))) {}

    int mul(int i, int j) const { return ci.id_of(compose(ci.reps[i], ci.reps[j])); }

    int pw(int i, i64 e) const {
        int r = id, b = i;
        while (e) {
            if (e & 1) r = mul(r, b);
            e >>= 1;
            if (e) b = mul(b, b);
        }
        return r;
    }
};

/* Elementary divisors by order counting: for each prime q | h the counts
 * #{x : x^(q^k) = 1} = q^(m_k) determine the partition of the q-part. */
std::vector<i64> structure_from_orders(const ClassIndex& ci) {
    const i64 h = static_cast<i64>(ci.reps.size());
    if (h == 1) return {};
    GroupOps ops(ci);
    std::map<i64, std::vector<int>> parts_by_prime;  // q -> descending exponents
    for (auto [q, E] : factor_i64(h)) {
        std::vector<int> rows;  // rows[k-1] = #{parts >= k}
        int prev = 0;
        for (int k = 1; k <= E; ++k) {
            i64 qk = 1;
            for (int t = 0; t < k; ++t) qk *= q;
            i64 cnt = 0;
            for (int i = 0; i < h; ++i)
                if (ops.pw(i, qk) == ops.id) ++cnt;
            int m = 0;
            i64 acc = 1;
            while (acc < cnt) acc *= q, ++m;
            if (acc != cnt) throw Error("INTERNAL", "kernel size not a prime power");
            if (m < prev) throw Error("INTERNAL", "kernel sizes not monotone");
            if (m == prev) break;  // q-part exhausted
            rows.push_back(m - prev);
            prev = m;
        }
        std::vector<int> parts;
        if (!rows.empty())
            for (int j = 1; j <= rows[0]; ++j) {
                int lam = 0;
                for (int r : rows)
                    if (r >= j) ++lam;
                parts.push_back(lam);
            }
        parts_by_prime[q] = parts;  // descending: parts[0] >= parts[1] >= ...
    }
    size_t L = 0;
    for (auto& [q, parts] : parts_by_prime) L = std::max(L, parts.size());
    std::vector<i64> divisors_desc(L, 1);
    for (auto& [q, parts] : parts_by_prime)
        for (size_t i = 0; i < parts.size(); ++i)
            for (int t = 0; t < parts[i]; ++t) divisors_desc[i] *= q;
    i64 prod = 1;
    for (i64 d : divisors_desc) prod *= d;
    if (prod != h) throw Error("INTERNAL", "structure does not multiply to h");
    return std::vector<i64>(divisors_desc.rbegin(), divisors_desc.rend());
}

}  // namespace

FormClassGroup class_group(i64 Delta) { return class_group(Delta, ClassGroupOptions{}); }

FormClassGroup class_group(i64 Delta, const ClassGroupOptions& opt) {
    ClassIndex ci = enumerate_classes(Delta, opt);
    FormClassGroup G;
    G.Delta = Delta;
    G.reps = ci.reps;
    G.h = static_cast<i64>(ci.reps.size());
    G.structure = structure_from_orders(ci);
    return G;
}

int rank4(const FormClassGroup& G) {
    int r = 0;
    for (i64 d : G.structure)
        if (d % 4 == 0) ++r;
    return r;
}

int rank4_by_involutions(i64 Delta, const ClassGroupOptions& opt) {
    ClassIndex ci = enumerate_classes(Delta, opt);
    GroupOps ops(ci);
    int n = static_cast<int>(ci.reps.size());
    std::vector<char> insq(n, 0);
    for (int i = 0; i < n; ++i) insq[ops.mul(i, i)] = 1;
    i64 cnt = 0;
    for (int s = 0; s < n; ++s)
        if (insq[s] && ops.mul(s, s) == ops.id) ++cnt;
    int r = 0;
    while ((i64(1) << (r + 1)) <= cnt) ++r;
    if ((i64(1) << r) != cnt) throw Error("INTERNAL", "involution count not a power of two");
    return r;
}

int rank4_of_d(i64 d, const ClassGroupOptions& opt) {
    if (d == 0 || d == 1) throw Error("D_EXCLUDED", "d must differ from 0 and 1");
    if (!is_squarefree(d)) throw Error("D_NOT_SQUAREFREE", "d = " + str(d) + " is not squarefree");
    if (d == -1) return 0;  // Q(i): trivial class group, degenerate form discriminant
    i64 Delta = mod_math(d, 4) == 3 ? -d : -4 * d;
    return rank4_by_involutions(Delta, opt);
}

SpinorCounts spinor_genera_counts(const FormClassGroup& G) {
    SpinorCounts s;
    for (i64 d : G.structure) {
        s.total *= std::gcd(d, i64(4));
        if (d % 4 == 0) s.per_genus *= 2;
    }
    return s;
}

bool quadratic_verdict(i64 d, const ClassGroupOptions& opt) { return rank4_of_d(d, opt) == 0; }

namespace {

bool is_fundamental(i64 D) {
    i64 m4 = mod_math(D, 4);
    if (D == 1) return false;
    if (m4 == 1) return is_squarefree(D);
    if (m4 != 0) return false;
    i64 m = D / 4;
    i64 mm = mod_math(m, 4);
    return (mm == 2 || mm == 3) && is_squarefree(m);
}

std::vector<i64> prime_discriminants(i64 D) {
    std::vector<i64> pd;
    i64 rest = D;
    for (auto [p, e] : factor_i64(std::abs(D))) {
        if (p == 2) continue;
        i64 ps = (mod_math(p, 4) == 1) ? p : -p;
        pd.push_back(ps);
        rest /= ps;
    }
    if (rest != 1) pd.push_back(rest);  // 1, -4, 8, or -8
    i64 prod = 1;
    for (i64 q : pd) prod *= q;
    if (prod != D) throw Error("INTERNAL", "prime discriminant factorization failed");
    return pd;
}

int redei_core(i64 D) {
    auto pd = prime_discriminants(D);
    int t = static_cast<int>(pd.size());
    std::vector<i64> attached(t);  // prime attached to each prime discriminant
    for (int j = 0; j < t; ++j) attached[j] = (pd[j] % 2 == 0) ? 2 : std::abs(pd[j]);
    /* rows as bitmasks over columns */
    std::vector<std::uint32_t> rows(t, 0);
    for (int j = 0; j < t; ++j) {
        int colsum = 0;
        for (int i = 0; i < t; ++i) {
            if (i == j) continue;
            if (kronecker(pd[i], attached[j]) == -1) {
                rows[i] |= (1u << j);
                colsum ^= 1;
            }
        }
        if (colsum) rows[j] |= (1u << j);  // diagonal balances each column to 0
    }
    /* F2 rank */
    int rank = 0;
    for (int col = 0; col < t; ++col) {
        int piv = -1;
        for (int i = rank; i < t; ++i)
            if (rows[i] & (1u << col)) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int i = 0; i < t; ++i)
            if (i != rank && (rows[i] & (1u << col))) rows[i] ^= rows[rank];
        ++rank;
    }
    return t - 1 - rank;
}

std::once_flag redei_gate_flag;

void redei_gate() {
    for (i64 ad = 2; ad <= 10000; ++ad) {
        for (i64 d : {ad, -ad}) {
            if (!is_squarefree(d)) continue;
            i64 D = mod_math(d, 4) == 3 ? -d : -4 * d;
            if (!is_fundamental(D)) throw Error("INTERNAL", "gate discriminant not fundamental");
            int fast = redei_core(D);
            int slow = rank4_of_d(d);
            if (fast != slow)
                throw Error("REDEI_GATE", "symbol-matrix rank4 disagrees with composition at d=" +
                                              str(d) + ": " + str(fast) + " vs " + str(slow));
        }
    }
}

}  // namespace

int redei_rank4(i64 Delta) {
    if (!is_fundamental(Delta))
        throw Error("DISC_NOT_FUNDAMENTAL", str(Delta) + " is not a fundamental discriminant");
    std::call_once(redei_gate_flag, redei_gate);
    return redei_core(Delta);
}

}  // namespace spinortrace::binaryforms
