"""Exact vanishing orders of the eliminated coordinates at a quotient point.

A general member is sampled with random coefficients over a prime field.
Near the point the two eliminated coordinates are power series in the
three local orbinates; each one is then reduced modulo every polynomial of
its own degree not involving it, which is the freedom of a coordinate
change.  The order of the reduced series is the largest vanishing order the
variable can have along the exceptional divisor.
"""

from __future__ import annotations

import random
from math import gcd
from typing import Sequence

from .wps import monomials

PRIME = (1 << 61) - 1

Series = dict  # exponent triple over the local orbinates -> coefficient mod PRIME


def _inv(x: int) -> int:
    return pow(x % PRIME, PRIME - 2, PRIME)


class _Ring:
    """Truncated power series in the local orbinates, graded by integer weights."""

    def __init__(self, weights: Sequence[int], bound: int):
        self.w = tuple(weights)
        self.bound = bound  # keep terms of weighted order < bound

    def order(self, e) -> int:
        return e[0] * self.w[0] + e[1] * self.w[1] + e[2] * self.w[2]

    def mul(self, p: Series, q: Series) -> Series:
        if len(p) > len(q):
            p, q = q, p
        qs = sorted((self.order(e), e, c) for e, c in q.items())
        out: Series = {}
        for e1, c1 in p.items():
            room = self.bound - self.order(e1)
            a0, a1, a2 = e1
            for o2, e2, c2 in qs:
                if o2 >= room:
                    break
                e = (a0 + e2[0], a1 + e2[1], a2 + e2[2])
                out[e] = (out.get(e, 0) + c1 * c2) % PRIME
        return {e: c for e, c in out.items() if c}

    def add(self, p: Series, q: Series, s: int = 1) -> Series:
        out = dict(p)
        for e, c in q.items():
            out[e] = (out.get(e, 0) + s * c) % PRIME
        return {e: c for e, c in out.items() if c}

    def scale(self, p: Series, s: int) -> Series:
        return {e: (c * s) % PRIME for e, c in p.items() if (c * s) % PRIME}


class _Powers:
    def __init__(self, ring: _Ring, base: Series):
        self.ring, self.cache = ring, {0: {(0, 0, 0): 1}, 1: base}

    def __getitem__(self, n: int) -> Series:
        if n not in self.cache:
            self.cache[n] = self.ring.mul(self[n - 1], self.cache[1])
        return self.cache[n]


def _evaluate(ring, mono, chart, series) -> Series:
    """Value of a monomial over the six variables on the chart around the point."""
    e = [0, 0, 0]
    for slot, i in enumerate(chart.local):
        e[slot] = mono[i]
    scalar = 1
    for i, c in chart.consts.items():
        if i not in chart.unknowns and mono[i]:
            scalar = scalar * pow(c, mono[i], PRIME) % PRIME
    term: Series = {tuple(e): scalar} if ring.order(e) < ring.bound else {}
    for j, pw in zip(chart.unknowns, series):
        if mono[j] and term:
            term = ring.mul(term, pw[mono[j]])
    return term


class _Chart:
    """Local orbinates, nonvanishing coordinates set to constants, and the solved-for unknowns."""

    def __init__(self, local, consts, unknowns):
        self.local, self.consts, self.unknowns = tuple(local), dict(consts), tuple(unknowns)

    def jacobian_entry(self, mono, j) -> int:
        """Derivative at the point of a monomial with respect to unknown j."""
        y = self.unknowns[j]
        if any(mono[i] for i in range(len(mono)) if i not in self.consts and i != y):
            return 0
        c0 = self.consts.get(y, 0)
        if mono[y] == 0 or (c0 == 0 and mono[y] != 1):
            return 0
        val = mono[y] * pow(c0, mono[y] - 1, PRIME) if c0 else 1
        for i, c in self.consts.items():
            if i != y and mono[i]:
                val = val * pow(c, mono[i], PRIME)
        return val % PRIME

    def powers(self, ring, ys):
        out = []
        for y, s in zip(self.unknowns, ys):
            c0 = self.consts.get(y, 0)
            out.append(_Powers(ring, ring.add(s, {(0, 0, 0): c0}) if c0 else s))
        return out


def _solve(ring, eqs, chart):
    """Power series for the unknowns on the general member (constant-Jacobian Newton)."""
    J = [[0, 0], [0, 0]]
    for e, poly in enumerate(eqs):
        for mono, c in poly.items():
            for j in range(2):
                J[e][j] = (J[e][j] + c * chart.jacobian_entry(mono, j)) % PRIME
    det = (J[0][0] * J[1][1] - J[0][1] * J[1][0]) % PRIME
    if det == 0:
        raise ValueError("eliminated coordinates are not solvable at the point")
    di = _inv(det)
    Ji = [[J[1][1] * di % PRIME, -J[0][1] * di % PRIME], [-J[1][0] * di % PRIME, J[0][0] * di % PRIME]]
    ys: list[Series] = [{}, {}]
    for _ in range(ring.bound + 2):
        pw = chart.powers(ring, ys)
        F = []
        for poly in eqs:
            acc: Series = {}
            for mono, c in poly.items():
                acc = ring.add(acc, _evaluate(ring, mono, chart, pw), c)
            F.append(acc)
        new = [
            ring.add(ys[j], ring.add(ring.scale(F[0], Ji[j][0]), ring.scale(F[1], Ji[j][1])), -1)
            for j in range(2)
        ]
        if new == ys:
            break
        ys = new
    return ys


def _reduced_order(ring, target: Series, span: list[Series]) -> int | None:
    """Largest order of target + v over v in span; None if it reaches the bound."""
    key = lambda e: (ring.order(e), e)
    basis: dict = {}  # leading exponent -> normalised vector
    for v in span:
        v = dict(v)
        while v:
            lead = min(v, key=key)
            if lead in basis:
                v = ring.add(v, basis[lead], -v[lead])
            else:
                basis[lead] = ring.scale(v, _inv(v[lead]))
                break
    t = dict(target)
    while t:
        lead = min(t, key=key)
        if lead not in basis:
            return ring.order(lead)
        t = ring.add(t, basis[lead], -t[lead])
    return None


def _random_equations(family, excluded, rng):
    eqs = []
    for eq in range(2):
        poly = {}
        for m in monomials(family.weights, family.degrees[eq]):
            if (eq, m) not in excluded:
                poly[m] = rng.randrange(1, PRIME)
        eqs.append(poly)
    return eqs


def _max_orders(family, eqs, chart, targets, r, start_bound):
    """Reduced orders of the unknowns listed in ``targets`` (indices into chart.unknowns)."""
    w = family.weights
    k = pow(family.fano_index % r, -1, r)
    lw = [(k * w[i]) % r for i in chart.local]
    bound = start_bound
    for _ in range(5):
        ring = _Ring(lw, bound)
        ys = _solve(ring, eqs, chart)
        pw = chart.powers(ring, ys)
        out = []
        for j in targets:
            y = chart.unknowns[j]
            span = []
            for m in monomials(w, w[y]):
                if m[y] or all(m[i] == 0 for i in range(6) if i not in chart.consts):
                    continue
                span.append(_evaluate(ring, m, chart, pw))
            out.append(_reduced_order(ring, ys[j], span))
        if None not in out:
            return tuple(out)
        bound *= 2
    raise ValueError("vanishing order exceeds the truncation bound")


def max_vanishing_orders(family, point, lower: Sequence[int], excluded=frozenset(), seed: int = 0):
    """r times the largest vanishing orders of the two eliminated coordinates.

    ``lower`` is a known lower bound (the orders read off the general
    support); the truncation starts a little above it and grows on demand.
    """
    r = family.weights[point.index]
    chart = _Chart(point.local, {point.index: 1}, (el.partner for el in point.eliminations))
    eqs = _random_equations(family, excluded, random.Random(seed))
    return _max_orders(family, eqs, chart, (0, 1), r, max(lower) + 2 * r)


def stratum_vanishing_orders(family, support: Sequence[int], excluded=frozenset(), seed: int = 0):
    """r times the vanishing orders at a quotient point inside a two-coordinate stratum.

    The point has exactly the coordinates in ``support`` nonzero.  Returns
    ``(r, b)`` with ``b[i]`` the order of each coordinate (0 on the stratum),
    maximal over coordinate changes for the one eliminated coordinate.
    """
    w = family.weights
    s0, s1 = support
    r = gcd(w[s0], w[s1])
    rng = random.Random(seed)
    lam = rng.randrange(2, PRIME)
    eqs = _random_equations(family, excluded, rng)
    on_stratum = lambda m: all(m[i] == 0 for i in range(6) if i not in support)
    cutting = []
    for e, poly in enumerate(eqs):
        pure = [m for m in poly if on_stratum(m)]
        if not pure:
            continue
        cutting.append(e)
        # make the restriction vanish at (1, lam)
        m0 = max(pure, key=lambda m: m[s1])
        rest = sum(c * pow(lam, m[s1], PRIME) for m, c in poly.items() if on_stratum(m) and m != m0)
        poly[m0] = -rest * _inv(pow(lam, m0[s1], PRIME)) % PRIME
        if poly[m0] == 0 or len(pure) < 2:
            raise ValueError("the stratum restriction has no point off the vertices")
    if len(cutting) != 1:
        raise ValueError(f"{len(cutting)} equations restrict nontrivially to the stratum; need exactly one")
    other = 1 - cutting[0]
    vanishing = [i for i in range(6) if i not in support]
    if any(w[i] % r == 0 for i in vanishing):
        raise ValueError("a vanishing coordinate is invariant under the stabiliser")
    consts = {s0: 1, s1: lam}
    cands = []
    for y in vanishing:
        probe = _Chart((), consts, (y,))
        if any(c * probe.jacobian_entry(m, 0) % PRIME for m, c in eqs[other].items()):
            cands.append(y)
    if not cands:
        raise ValueError("no coordinate is eliminated at the point")
    elim = max(cands, key=lambda i: (w[i], i))
    local = [i for i in vanishing if i != elim]
    chart = _Chart(local, consts, (s1, elim))
    k = pow(family.fano_index % r, -1, r)
    b = [0] * 6
    for i in local:
        b[i] = (k * w[i]) % r
    (b[elim],) = _max_orders(family, eqs, chart, (1,), r, 4 * r)
    return r, tuple(b)
