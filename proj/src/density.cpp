#include "spinortrace/density.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "spinortrace/error.hpp"

namespace spinortrace::density {

namespace {

int mod_math(i64 v, int m) {
    int r = static_cast<int>(v % m);
    return r < 0 ? r + m : r;
}

std::string str(i64 v) { return std::to_string(v); }

/* Discriminant whose class group decides the verdict for radicand d. */
i64 deciding_disc(i64 d) { return mod_math(d, 4) == 3 ? -d : -4 * d; }

/* 0: D = 12 (mod 16), 1: D = 8 (mod 16), 2: D = 1 (mod 4). */
int fk_index(i64 D) {
    if (mod_math(D, 16) == 12) return 0;
    if (mod_math(D, 16) == 8) return 1;
    if (mod_math(D, 4) == 1) return 2;
    throw Error("INTERNAL",
                "discriminant " + str(D) + " outside the three residue classes");
}

bool field_verdict(i64 d, Method method) {
    if (d == -1) return true;  // narrow class number 1; deciding disc degenerates
    if (method == Method::Oracle) return binaryforms::quadratic_verdict(d);
    return binaryforms::redei_rank4(deciding_disc(d)) == 0;
}

bool fk_matches(const RangeCounts& rc) {
    return rc.fk_neg_disc ==
               std::array<i64, 3>{rc.t_plus[1], rc.t_plus[2], rc.t_plus[3]} &&
           rc.fk_pos_disc ==
               std::array<i64, 3>{rc.t_minus[1], rc.t_minus[2], rc.t_minus[3]};
}

bool same_counts(const RangeCounts& a, const RangeCounts& b) {
    return a.lo == b.lo && a.hi == b.hi && a.t_plus == b.t_plus &&
           a.t_minus == b.t_minus && a.n_plus == b.n_plus && a.n_minus == b.n_minus;
}

double ratio(i64 num, i64 den) {
    if (den == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::vector<bool> squarefree_sieve(i64 limit) {
    if (limit < 1) throw Error("BAD_BOUND", "sieve limit must be at least 1");
    std::vector<bool> flags(static_cast<size_t>(limit) + 1, true);
    flags[0] = false;
    /* primes up to sqrt(limit), then strike multiples of their squares */
    i64 root = static_cast<i64>(std::sqrt(static_cast<double>(limit)));
    while ((root + 1) * (root + 1) <= limit) ++root;
    std::vector<bool> prime(static_cast<size_t>(root) + 1, true);
    for (i64 p = 2; p <= root; ++p) {
        if (!prime[static_cast<size_t>(p)]) continue;
        for (i64 q = p * p; q <= root; q += p) prime[static_cast<size_t>(q)] = false;
        for (i64 m = p * p; m <= limit; m += p * p)
            flags[static_cast<size_t>(m)] = false;
    }
    return flags;
}

mpq_class euler_phi_half() {
    mpq_class prod(1);
    for (int n = 1; n <= 64; ++n) {
        mpz_class den = mpz_class(1) << n;
        mpq_class factor(den - 1, den);
        factor.canonicalize();
        prod *= factor;
    }
    return prod;
}

double predicted_alpha_plus() {
    static const double phi = euler_phi_half().get_d();
    return phi;
}
double predicted_alpha_minus() { return 2 * predicted_alpha_plus(); }
double predicted_alpha() { return 1.5 * predicted_alpha_plus(); }

std::string checkpoint_line(const RangeCounts& rc) {
    std::ostringstream out;
    out << rc.lo << ' ' << rc.hi;
    for (int i = 1; i <= 3; ++i) out << ' ' << rc.t_plus[i];
    for (int i = 1; i <= 3; ++i) out << ' ' << rc.t_minus[i];
    out << ' ' << rc.n_plus << ' ' << rc.n_minus;
    return out.str();
}

RangeCounts parse_checkpoint_line(const std::string& line) {
    std::istringstream in(line);
    i64 v[10];
    for (auto& x : v)
        if (!(in >> x)) throw Error("BAD_CHECKPOINT", "short line: '" + line + "'");
    std::string rest;
    if (in >> rest) throw Error("BAD_CHECKPOINT", "trailing data: '" + line + "'");
    RangeCounts rc;
    rc.lo = v[0];
    rc.hi = v[1];
    rc.t_plus = {0, v[2], v[3], v[4]};
    rc.t_minus = {0, v[5], v[6], v[7]};
    rc.n_plus = v[8];
    rc.n_minus = v[9];
    if (rc.lo < 1 || rc.hi <= rc.lo)
        throw Error("BAD_CHECKPOINT", "bad window: '" + line + "'");
    for (i64 x : v)
        if (x < 0) throw Error("BAD_CHECKPOINT", "negative count: '" + line + "'");
    return rc;
}

std::vector<RangeCounts> load_checkpoint(std::istream& in) {
    std::vector<RangeCounts> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(parse_checkpoint_line(line));
    }
    return out;
}

double DensityReport::alpha_plus() const { return ratio(t_plus_total(), n_plus); }
double DensityReport::alpha_minus() const { return ratio(t_minus_total(), n_minus); }
double DensityReport::alpha() const {
    return ratio(t_plus_total() + t_minus_total(), n_plus + n_minus);
}

RangeCounts scan_range(i64 lo, i64 hi, const std::vector<bool>& sf, Sign sign,
                       Method method) {
    if (lo < 1 || hi <= lo) throw Error("BAD_BOUND", "window must satisfy 1 <= lo < hi");
    if (static_cast<i64>(sf.size()) < hi)
        throw Error("INTERNAL", "sieve too short for window");
    RangeCounts rc;
    rc.lo = lo;
    rc.hi = hi;
    for (i64 a = lo; a < hi; ++a) {
        if (!sf[static_cast<size_t>(a)]) continue;
        if (sign != Sign::Minus) {
            ++rc.n_plus;
            /* d = 1 is squarefree but not a field; it counts in N+ only */
            if (a != 1 && field_verdict(a, method)) {
                ++rc.t_plus[mod_math(a, 4)];
                ++rc.fk_neg_disc[fk_index(deciding_disc(a))];
            }
        }
        if (sign != Sign::Plus) {
            ++rc.n_minus;
            i64 d = -a;
            if (field_verdict(d, method)) {
                ++rc.t_minus[mod_math(d, 4)];
                ++rc.fk_pos_disc[fk_index(deciding_disc(d))];
            }
        }
    }
    return rc;
}

DensityReport scan(i64 X, const ScanOptions& opt) {
    if (X < 2) throw Error("BAD_BOUND", "scan bound must be at least 2");
    if (opt.chunk < 1) throw Error("BAD_BOUND", "chunk must be positive");
    const std::vector<bool> sf = squarefree_sieve(X - 1);

    std::vector<std::pair<i64, i64>> wins;
    for (i64 lo = 1; lo < X; lo += opt.chunk)
        wins.emplace_back(lo, std::min(lo + opt.chunk, X));

    std::vector<RangeCounts> slots(wins.size());
    std::vector<char> resumed(wins.size(), 0);
    if (opt.resume) {
        for (const RangeCounts& rc : *opt.resume) {
            if (rc.lo < 1 || (rc.lo - 1) % opt.chunk != 0)
                throw Error("BAD_CHECKPOINT",
                            "window " + str(rc.lo) + ".." + str(rc.hi) +
                                " does not start on the partition");
            size_t idx = static_cast<size_t>((rc.lo - 1) / opt.chunk);
            if (idx >= wins.size() || wins[idx].second != rc.hi)
                throw Error("BAD_CHECKPOINT", "window " + str(rc.lo) + ".." + str(rc.hi) +
                                                  " does not fit the partition");
            if (resumed[idx]) {
                if (!same_counts(slots[idx], rc))
                    throw Error("BAD_CHECKPOINT",
                                "conflicting duplicate for window " + str(rc.lo));
                continue;
            }
            RangeCounts filled = rc;
            /* a line is only written after its fk == t check passed */
            filled.fk_neg_disc = {rc.t_plus[1], rc.t_plus[2], rc.t_plus[3]};
            filled.fk_pos_disc = {rc.t_minus[1], rc.t_minus[2], rc.t_minus[3]};
            slots[idx] = filled;
            resumed[idx] = 1;
        }
    }

    std::vector<size_t> todo;
    for (size_t i = 0; i < wins.size(); ++i)
        if (!resumed[i]) todo.push_back(i);

    std::mutex mu;
    std::exception_ptr failure;
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t k = next.fetch_add(1);
            if (k >= todo.size()) return;
            size_t idx = todo[k];
            try {
                RangeCounts rc =
                    scan_range(wins[idx].first, wins[idx].second, sf, opt.sign, opt.method);
                if (!fk_matches(rc))
                    throw Error("FK_MISMATCH", "six-way recount failed in window " +
                                                   str(rc.lo) + ".." + str(rc.hi));
                std::lock_guard<std::mutex> lock(mu);
                slots[idx] = rc;
                if (opt.checkpoint) *opt.checkpoint << checkpoint_line(rc) << '\n' << std::flush;
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
                next.store(todo.size());
                return;
            }
        }
    };

    size_t jobs = static_cast<size_t>(std::max(1, opt.jobs));
    jobs = std::min(jobs, std::max<size_t>(todo.size(), 1));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    DensityReport rep;
    rep.X = X;
    rep.sign = opt.sign;
    rep.method = opt.method;
    rep.windows_computed = static_cast<int>(todo.size());
    rep.windows_resumed = static_cast<int>(wins.size() - todo.size());
    for (const RangeCounts& rc : slots) {
        for (int i = 1; i <= 3; ++i) {
            rep.t_plus[i] += rc.t_plus[i];
            rep.t_minus[i] += rc.t_minus[i];
        }
        rep.n_plus += rc.n_plus;
        rep.n_minus += rc.n_minus;
        for (int i = 0; i < 3; ++i) {
            rep.fk_neg_disc[i] += rc.fk_neg_disc[i];
            rep.fk_pos_disc[i] += rc.fk_pos_disc[i];
        }
    }
    rep.fk_consistent = true;  // every merged window passed or was checkpointed
    return rep;
}

DensityReport scan(i64 X, Sign sign, Method method) {
    ScanOptions opt;
    opt.sign = sign;
    opt.method = method;
    return scan(X, opt);
}

const char* sign_name(Sign s) {
    switch (s) {
        case Sign::Plus: return "+";
        case Sign::Minus: return "-";
        default: return "both";
    }
}

const char* method_name(Method m) {
    return m == Method::Oracle ? "oracle" : "redei";
}

}  // namespace spinortrace::density
