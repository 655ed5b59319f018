"""Brute-force reference implementations used by the property suites."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import permutations


def unit_orbit(r, bs):
    """Every unit multiple of the weight triple, as sorted tuples."""
    return {tuple(sorted((u * b) % r for b in bs)) for u in range(1, r) if math.gcd(u, r) == 1}


def terminal_by_pairs(r, bs):
    """1/r(b1,b2,b3) with all b_i units is terminal iff two weights sum to 0 mod r."""
    if any(math.gcd(b, r) != 1 for b in bs):
        return False
    return any((p[0] + p[1]) % r == 0 for p in permutations(bs, 2))


def in_cone(v, gens) -> bool:
    """Exact membership of v in the cone spanned by gens (2-dimensional)."""
    if v == (0, 0):
        return True
    for s in gens:
        if v[0] * s[1] - v[1] * s[0] == 0 and v[0] * s[0] + v[1] * s[1] > 0:
            return True
    for i, s in enumerate(gens):
        for t in gens[i + 1:]:
            d = s[0] * t[1] - s[1] * t[0]
            if d == 0:
                continue
            l1 = Fraction(v[0] * t[1] - v[1] * t[0], d)
            l2 = Fraction(s[0] * v[1] - s[1] * v[0], d)
            if l1 >= 0 and l2 >= 0:
                return True
    return False


def strictly_convex(cols) -> bool:
    """All columns in an open half-plane: the largest angular gap exceeds pi."""
    angles = sorted(math.atan2(c[1], c[0]) for c in cols)
    gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + 2 * math.pi - angles[-1]]
    return max(gaps) > math.pi + 1e-12


def movable_oracle(cols, probe):
    """probe in Mov = intersection over i of cone(cols without column i)."""
    return all(in_cone(probe, cols[:i] + cols[i + 1:]) for i in range(len(cols)))


def probes(cols):
    """Column rays and pairwise sums: enough to compare two 2-dimensional cones."""
    out = set()
    for c in cols:
        g = math.gcd(*c)
        out.add((c[0] // g, c[1] // g))
    base = list(out)
    for i, a in enumerate(base):
        for b in base[i + 1:]:
            s = (a[0] + b[0], a[1] + b[1])
            if s != (0, 0):
                out.add(s)
    return sorted(out)


def between(v, lo, hi) -> bool:
    """v in the cone [lo, hi] for rays in clockwise order (det(lo, hi) <= 0)."""
    det = lambda a, b: a[0] * b[1] - a[1] * b[0]
    same = lambda a, b: det(a, b) == 0 and a[0] * b[0] + a[1] * b[1] > 0
    if same(v, lo) or same(v, hi):
        return True
    return det(lo, v) < 0 and det(v, hi) < 0
