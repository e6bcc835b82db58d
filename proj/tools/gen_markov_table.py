#!/usr/bin/env python3
"""Generate include/polydec/markov_table.hpp.

Entry n is the largest possible sum of |coefficients| of a degree-n
polynomial q with sup |q| = 1 on [0, 1].  By V. Markov's coefficient bound the
extremal polynomial is the shifted Chebyshev polynomial T_n(2s - 1), whose
coefficients alternate in sign, so the sum equals |T_n(-3)| = T_n(3).
"""
import sys
from fractions import Fraction

N_MAX = 24


def shifted_chebyshev(n):
    """Ascending integer coefficients of T_n(2s - 1)."""
    prev, cur = [1], [-1, 2]
    if n == 0:
        return prev
    for _ in range(n - 1):
        # T_{k+1}(x) = 2x T_k(x) - T_{k-1}(x), x = 2s - 1
        nxt = [0] * (len(cur) + 1)
        for i, c in enumerate(cur):
            nxt[i] += -2 * c
            nxt[i + 1] += 4 * c
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def main(out_path):
    values = []
    t_prev, t_cur = 1, 3
    for n in range(N_MAX + 1):
        coeffs = shifted_chebyshev(n)
        total = sum(abs(c) for c in coeffs)
        closed = 1 if n == 0 else (3 if n == 1 else None)
        if n >= 2:
            t_prev, t_cur = t_cur, 6 * t_cur - t_prev
            closed = t_cur
        assert total == closed, (n, total, closed)
        # sup norm of T_n(2s-1) on [0,1] is 1 at s = 1
        assert sum(Fraction(c) for c in coeffs) == 1
        values.append(total)
    with open(out_path, "w") as fh:
        fh.write("#pragma once\n\n")
        fh.write("// Generated by tools/gen_markov_table.py. Do not edit.\n\n")
        fh.write("#include <array>\n#include <cstdint>\n\n")
        fh.write("namespace polydec {\n\n")
        fh.write("/// kMarkovCoeffSum[n] = T_n(3): maximal coefficient l1-norm of a degree-n\n")
        fh.write("/// polynomial bounded by 1 on [0, 1].\n")
        fh.write(f"inline constexpr std::array<std::uint64_t, {N_MAX + 1}> kMarkovCoeffSum = {{\n")
        for v in values:
            fh.write(f"    {v}ULL,\n")
        fh.write("};\n\n}  // namespace polydec\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "include/polydec/markov_table.hpp")
