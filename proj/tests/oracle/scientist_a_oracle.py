#!/usr/bin/env python3
"""Independent exact-arithmetic recomputation of the scientist_a fixture.

Uses rational arithmetic throughout: Bernstein values from math.comb and
Fraction powers, the demonstration p-axis schedule written out literally.
The printed values are frozen into the C++ tests as golden values.
"""
import csv
import sys
from fractions import Fraction
from math import comb
from pathlib import Path

SCHEDULE = {1: "0", 2: "0.20", 3: "0.25", 4: "0.30", 5: "0.35", 6: "0.40", 7: "0.45"}


def p_axis(m):
    if m in SCHEDULE:
        return Fraction(SCHEDULE[m])
    return min(Fraction(15, 100) + Fraction(5, 100) * (m - 1), Fraction(1, 2))


def fraction_for(m, rank):
    if m == 1:
        return Fraction(1)
    x = p_axis(m)
    values = [comb(m - 1, a) * x**a * (1 - x) ** (m - 1 - a) for a in range(m)]
    values.sort(reverse=True)
    return values[rank - 1]


def main(path):
    rows = list(csv.DictReader(open(path, newline="")))
    total = Fraction(0)
    single = 0
    single_cites = 0
    first = 0
    cites = []
    for r in rows:
        m, pos, c = int(r["author_count"]), int(r["author_position"]), int(r["citations"])
        cites.append(c)
        if m == 1:
            single += 1
            single_cites += c
        elif pos == 1:
            first += 1
        total += fraction_for(m, pos) * c
    n = len(rows)
    q = total / n
    p = min(Fraction(n), q)
    h = max(h for h in range(n + 1) if sum(1 for c in cites if c >= h) >= h)
    print(f"N={n} N_s={single} first_author_multi={first} cited={sum(1 for c in cites if c)}")
    print(f"C_false={sum(cites)} C_single={single_cites} H={h}")
    print(f"C={float(total):.12f}")
    print(f"Q={float(q):.12f}")
    print(f"P={float(p):.12f} P_rounded={round(float(p))}")
    print(f"ratio={float(total / sum(cites)):.12f}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parents[2] / "fixtures/scientist_a.csv")
