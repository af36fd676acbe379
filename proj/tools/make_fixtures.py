#!/usr/bin/env python3
"""Regenerate the number-field fixture corpus under fixtures/fields/.

For each candidate minimal polynomial we compute, with sympy:
  - the field discriminant and an integral basis (round_two),
  - the splitting type (e_i, f_i) of every ramified prime and of the
    smallest unramified prime (prime_decomp).

Output is one JSON file per field in the format the library consumes:
  {"name": ..., "poly": [c0, ..., 1], "basis": [[rat, ...], ...],
   "ramification": {"p": [[e, f], ...], ...}, "disc": int}
Rationals are serialized as "num/den" strings, integers as plain ints.
The basis is given in power-basis coordinates, one row per element; it is
omitted when the power basis is already maximal.
"""

import json
import pathlib
import sys

from sympy import Poly, Symbol, ZZ
from sympy.polys.numberfields.basis import round_two
from sympy.polys.numberfields.primes import prime_decomp

X = Symbol("x")

# descending coefficient lists, degree 3 to 5, mixed signatures,
# wild primes 2 and 3 both represented
CANDIDATES = [
    [1, 0, -1, -1],        # x^3-x-1, disc -23
    [1, 0, 1, -1],         # x^3+x-1, disc -31
    [1, 0, -3, -1],        # x^3-3x-1, disc 81, totally real, wild 3
    [1, 0, 0, -2],         # x^3-2, disc -108, tame 2, wild 3
    [1, 1, -2, -1],        # x^3+x^2-2x-1, disc 49, totally real, tame 7
    [1, 0, 2, 1],          # x^3+2x+1, disc -59
    [1, -1, -2, -8],       # disc -503, non-monogenic: power basis has index 2
    [1, -6, -6, -5],       # disc -3^5, power basis has index 5, wild 3
    [1, -6, -6, 2],        # disc 564, totally real, power basis has index 3
    [1, 0, 4, -2],         # x^3+4x-2, wild 2
    [1, 0, -4, 2],         # x^3-4x+2, totally real, tame 2
    [1, 0, 6, 0, 2],       # x^4+6x^2+2, wild 2
    [1, 0, 0, 0, 2],       # x^4+2, wild 2
    [1, 0, 0, 8, 10],      # x^4+8x+10, wild 2
    [1, 0, 8, 8, 22],      # x^4+8x^2+8x+22, wild 2
    [1, 0, 0, 0, -2],      # x^4-2, mixed signature, wild 2
    [1, 1, 1, 1, 1],       # 5th cyclotomic, disc 125, tame 5
    [1, 0, 0, 0, 1],       # 8th cyclotomic, disc 256, wild 2
    [1, 0, -5, 0, 5],      # x^4-5x^2+5, totally real cyclic
    [1, -1, 0, 0, -1],     # x^4-x^3-1, mixed signature
    [1, 0, 3, 0, 3],       # x^4+3x^2+3, wild 3
    [1, 0, -4, 0, 2],      # x^4-4x^2+2, totally real, wild 2
    [1, 0, -4, 0, -1],     # x^4-4x^2-1, power basis has index 4
    [1, 0, 0, 0, -1, -1],  # x^5-x-1, disc 19*151
    [1, 1, -4, -3, 3, 1],  # cyclic quintic, disc 11^4, tame 11
    [1, 0, 0, 0, 0, -2],   # x^5-2, tame 2, wild 5
    [1, 0, 0, 0, 2, -2],   # x^5+2x-2, tame 2 (Eisenstein), one real root
]

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23]


def poly_name(coeffs):
    n = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        k = n - i
        if c == 0:
            continue
        sign = "-" if c < 0 else ("+" if parts else "")
        mag = abs(c)
        body = "" if (mag == 1 and k > 0) else str(mag)
        if k > 1:
            body += f"x^{k}"
        elif k == 1:
            body += "x"
        parts.append(sign + body)
    return "".join(parts)


def rat(q):
    num, den = q.as_numer_denom()
    return int(num) if den == 1 else f"{int(num)}/{int(den)}"


def ramified_primes(d):
    d = abs(int(d))
    out = []
    p = 2
    while p * p <= d:
        if d % p == 0:
            out.append(p)
            while d % p == 0:
                d //= p
        p += 1
    if d > 1:
        out.append(d)
    return out


def main():
    outdir = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "fields"
    outdir.mkdir(parents=True, exist_ok=True)
    for coeffs in CANDIDATES:
        T = Poly(coeffs, X, domain=ZZ)
        if not T.is_irreducible:
            print(f"SKIP reducible: {poly_name(coeffs)}", file=sys.stderr)
            continue
        ZK, dK = round_two(T)
        n = T.degree()
        M = ZK.matrix.to_Matrix()
        denom = ZK.denom
        basis = [[M[r, c] / denom for r in range(n)] for c in range(n)]
        power_basis = all(
            basis[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n)
        )

        ram = {}
        for p in ramified_primes(dK):
            ram[str(p)] = sorted((int(P.e), int(P.f)) for P in prime_decomp(p, T))
        unram = next(p for p in SMALL_PRIMES if dK % p != 0)
        ram[str(unram)] = sorted((int(P.e), int(P.f)) for P in prime_decomp(unram, T))

        doc = {
            "name": poly_name(coeffs),
            "poly": [int(c) for c in reversed(coeffs)],
            "disc": int(dK),
            "ramification": {k: [list(ef) for ef in v] for k, v in sorted(ram.items(), key=lambda kv: int(kv[0]))},
        }
        if not power_basis:
            doc["basis"] = [[rat(q) for q in row] for row in basis]

        fname = doc["name"].replace("^", "") + ".json"
        (outdir / fname).write_text(json.dumps(doc, indent=2) + "\n")
        print(f"{fname}: disc {dK}, basis {'power' if power_basis else 'custom'}, "
              f"primes {sorted(int(k) for k in ram)}")


if __name__ == "__main__":
    main()
