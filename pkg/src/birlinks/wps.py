"""Weighted projective spaces and cyclic quotient singularities.

Everything here is exact: integers and ``fractions.Fraction`` only.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, prod
from typing import Iterator, Sequence

VARIABLE_NAMES = ("x", "y", "z", "t", "v", "w")


class WpsError(ValueError):
    """Raised on ill-formed germs or degenerate coordinate points."""


def gcd_list(values: Sequence[int]) -> int:
    return reduce(gcd, values, 0)


def is_well_formed(weights: Sequence[int]) -> bool:
    """True iff deleting any single weight leaves a list with gcd 1."""
    if not weights:
        raise WpsError("empty weight list")
    return all(gcd_list(weights[:i] + weights[i + 1:]) == 1 for i in range(len(weights)))


@dataclass(frozen=True)
class CyclicQuotientSingularity:
    """The germ 1/r(b1, b2, b3)."""

    r: int
    weights: tuple[int, int, int]

    def __post_init__(self):
        if self.r < 1:
            raise WpsError(f"index must be positive, got {self.r}")
        object.__setattr__(self, "weights", tuple(int(b) % self.r for b in self.weights))
        if len(self.weights) != 3:
            raise WpsError("a 3-fold germ needs exactly three weights")

    def __str__(self) -> str:
        return f"1/{self.r}({','.join(str(b) for b in self.weights)})"

    @classmethod
    def parse(cls, text: str) -> "CyclicQuotientSingularity":
        m = re.fullmatch(r"\s*1\s*/\s*(\d+)\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*", text)
        if not m:
            raise WpsError(f"cannot parse singularity {text!r}; expected 1/r(b1,b2,b3)")
        r, *bs = (int(g) for g in m.groups())
        return cls(r, tuple(bs))


def _units(r: int) -> list[int]:
    return [u for u in range(1, r) if gcd(u, r) == 1] if r > 1 else [1]


def cqs_normal_form(s: CyclicQuotientSingularity) -> CyclicQuotientSingularity:
    """Return 1/r(1, a, r-a) with a <= r-a when some unit multiple has that shape.

    Otherwise return the lexicographically least sorted unit multiple
    (which then starts with 1 whenever some weight is a unit).
    """
    r = s.r
    if r == 1:
        return CyclicQuotientSingularity(1, (0, 0, 0))
    if any(gcd(b, r) != 1 for b in s.weights):
        raise WpsError(f"{s}: not isolated/ill-formed germ")
    best_terminal = None
    candidates = []
    for u in _units(r):
        m = sorted((u * b) % r for b in s.weights)
        candidates.append(tuple(m))
        for i in range(3):
            if m[i] != 1:
                continue
            rest = m[:i] + m[i + 1:]
            if (rest[0] + rest[1]) % r == 0:
                a = min(rest)
                form = (1, a, r - a)
                if best_terminal is None or form < best_terminal:
                    best_terminal = form
    if best_terminal is not None:
        return CyclicQuotientSingularity(r, best_terminal)
    return CyclicQuotientSingularity(r, min(candidates))


def is_terminal(s: CyclicQuotientSingularity) -> bool:
    if s.r == 1:
        return True
    if any(gcd(b, s.r) != 1 for b in s.weights):
        return False
    nf = cqs_normal_form(s)
    _, a, b = nf.weights
    return (a + b) % s.r == 0 and 0 < a < s.r and gcd(a, s.r) == 1


def anticanonical_degree(family) -> Fraction:
    """A^3 = d1 d2 / prod(a_i)."""
    return Fraction(prod(family.degrees), prod(family.weights))


def monomials(weights: Sequence[int], degree: int) -> Iterator[tuple[int, ...]]:
    """All exponent vectors e with sum e_i w_i == degree."""
    n = len(weights)

    def rec(i: int, left: int, acc: list[int]):
        if i == n - 1:
            if left % weights[i] == 0:
                yield tuple(acc + [left // weights[i]])
            return
        for e in range(left // weights[i] + 1):
            yield from rec(i + 1, left - e * weights[i], acc + [e])

    if degree < 0:
        return
    if n == 0:
        if degree == 0:
            yield ()
        return
    yield from rec(0, degree, [])


def variable_names(weights: Sequence[int]) -> tuple[str, ...]:
    """Letters x, y, z, t, v, w assigned by ascending weight (stable)."""
    order = sorted(range(len(weights)), key=lambda i: (weights[i], i))
    names = [""] * len(weights)
    for letter, i in zip(VARIABLE_NAMES, order):
        names[i] = letter
    return tuple(names)


def format_monomial(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for e, n in zip(exps, names):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}{e}")
    return "".join(parts) or "1"


def parse_monomial(text: str, names: Sequence[str]) -> tuple[int, ...]:
    """Inverse of ``format_monomial``: 'z3t' -> exponents over ``names``."""
    exps = [0] * len(names)
    pos = 0
    for m in re.finditer(r"([a-zA-Z])(\d*)", text):
        if m.start() != pos:
            break
        pos = m.end()
        if m.group(1) not in names:
            raise WpsError(f"unknown variable {m.group(1)!r} in monomial {text!r}")
        exps[names.index(m.group(1))] += int(m.group(2) or 1)
    if pos != len(text) or not text:
        raise WpsError(f"cannot parse monomial {text!r}")
    return tuple(exps)


# --- coordinate points -------------------------------------------------------


@dataclass(frozen=True)
class Elimination:
    """Leading term xi^power * x_partner of one defining equation."""

    equation: int
    partner: int
    power: int


@dataclass(frozen=True)
class NotOnX:
    index: int


@dataclass(frozen=True)
class SmoothPoint:
    index: int


@dataclass(frozen=True)
class CQSPoint:
    index: int
    singularity: CyclicQuotientSingularity
    eliminations: tuple[Elimination, Elimination]
    local: tuple[int, int, int]
    coordinate_change: bool = False

    @property
    def eliminated(self) -> tuple[int, int]:
        return (self.eliminations[0].partner, self.eliminations[1].partner)


@dataclass(frozen=True)
class Ambiguous:
    index: int
    candidates: tuple[CQSPoint, ...]


def _pure_power_degree(a: int, d: int) -> bool:
    return d % a == 0


def leading_candidates(weights, degrees, i, excluded=frozenset()):
    """Per equation, the (power, partner) pairs with xi^power x_partner of that degree.

    ``excluded`` holds (equation, exponent-tuple) pairs removed by assumptions.
    A pure power xi^m of the equation's degree must be absorbed by a
    coordinate change x_partner -> x_partner + xi^(m - power), which needs
    the partner's weight to be a multiple of a_xi.
    """
    a = weights[i]
    n = len(weights)
    out = []
    for eq, d in enumerate(degrees):
        pure = tuple(d // a if j == i else 0 for j in range(n))
        has_pure = _pure_power_degree(a, d) and (eq, pure) not in excluded
        cands = []
        for power in range(1, d // a + 1):
            rest = d - power * a
            for j in range(n):
                if j == i or weights[j] != rest:
                    continue
                mono = tuple(power if l == i else (1 if l == j else 0) for l in range(n))
                if (eq, mono) in excluded:
                    continue
                if has_pure and weights[j] % a:
                    continue
                cands.append((power, j))
        out.append((has_pure, cands))
    return out


def coordinate_point_type(family, i: int, excluded=frozenset()):
    """Classify the coordinate point p_i on a general member.

    Returns NotOnX, SmoothPoint, CQSPoint or Ambiguous.
    """
    weights = list(family.weights)
    degrees = list(family.degrees)
    a = weights[i]
    per_eq = leading_candidates(weights, degrees, i, excluded)
    if a == 1:
        # every weight-1 point is smooth or absent; NotOnX if a pure power survives
        if any(has_pure and not cands for has_pure, cands in per_eq):
            return NotOnX(i)
        return SmoothPoint(i)
    if any(has_pure and not cands for has_pure, cands in per_eq):
        return NotOnX(i)
    pairs = []
    for (p1, j) in per_eq[0][1]:
        for (p2, k) in per_eq[1][1]:
            if j != k:
                pairs.append(((p1, j), (p2, k)))
    if not pairs:
        raise WpsError(
            f"family {family.id}: generic member not quasismooth at coordinate point of weight {a}"
        )
    # prefer the lowest powers, then lowest indices
    pairs.sort(key=lambda pr: (pr[0][0] + pr[1][0], pr[0][0], pr[0][1], pr[1][1]))
    changed = any(has_pure for has_pure, _ in per_eq)
    found = []
    for (p1, j), (p2, k) in pairs:
        local = tuple(l for l in range(len(weights)) if l not in (i, j, k))
        germ = CyclicQuotientSingularity(a, tuple(weights[l] for l in local))
        if any(gcd(b, a) != 1 for b in germ.weights):
            continue
        found.append(
            CQSPoint(
                i,
                cqs_normal_form(germ),
                (Elimination(0, j, p1), Elimination(1, k, p2)),
                local,
                changed,
            )
        )
    if not found:
        raise WpsError(f"family {family.id}: point of weight {a} is not an isolated quotient singularity")
    forms = {c.singularity for c in found}
    if len(forms) > 1:
        return Ambiguous(i, tuple(found))
    return found[0]


# --- singular strata (used to cross-check stored baskets) ---------------------


@dataclass(frozen=True)
class SingularLocus:
    """Points of X whose nonzero coordinates are exactly ``support``."""

    support: tuple[int, ...]
    count: int
    singularity: CyclicQuotientSingularity | None


def _binary_roots(wa: int, wb: int, d: int) -> tuple[int, bool, bool]:
    """Zeros of a general binary form of degree d in weights (wa, wb).

    Returns (#roots with both coordinates nonzero, p_a is a zero, p_b is a zero).
    """
    exps = [(i, j) for i in range(d // wa + 1) for j in range(d // wb + 1) if i * wa + j * wb == d]
    if not exps:
        return 0, True, True
    on_a = not any(j == 0 for _, j in exps)  # point (1:0) kills every monomial
    on_b = not any(i == 0 for i, _ in exps)
    return len(exps) - 1, on_a, on_b


def _local_type_at(weights, degrees, support, eq_on_stratum):
    q = gcd_list([weights[s] for s in support])
    others = [l for l in range(len(weights)) if l not in support]
    # equations not cutting the stratum must eliminate one transverse variable
    free = [e for e in range(len(degrees)) if e not in eq_on_stratum]
    choices = []
    for combo in itertools.permutations(others, len(free)):
        ok = True
        for e, var in zip(free, combo):
            rest = degrees[e] - weights[var]
            if rest < 0 or not any(True for _ in monomials([weights[s] for s in support], rest)):
                ok = False
                break
        if ok:
            local = [l for l in others if l not in combo]
            choices.append(local)
    types = set()
    for local in choices:
        if len(local) != 3:
            continue
        germ = CyclicQuotientSingularity(q, tuple(weights[l] for l in local))
        if any(gcd(b, q) != 1 for b in germ.weights):
            continue
        types.add(cqs_normal_form(germ))
    if len(types) == 1:
        return types.pop()
    return None


def singular_points(family, excluded=frozenset()) -> list[SingularLocus]:
    """Quotient-singular points of a general member, stratum by stratum.

    Handles the zero-dimensional strata that occur for codimension-2 Fano
    3-folds: isolated coordinate points, general binary forms on a
    weighted line and two conics on a plane of equal weights.
    """
    w = list(family.weights)
    d = list(family.degrees)
    n = len(w)
    seen: dict[tuple[int, ...], SingularLocus] = {}
    for r in sorted({q for a in w for q in range(2, a + 1) if a % q == 0}):
        S = [i for i in range(n) if w[i] % r == 0]
        cutting = [e for e in range(len(d)) if d[e] % r == 0]
        dim = len(S) - 1 - len(cutting)
        if dim < 0:
            continue
        if dim > 0:
            raise WpsError(f"family {family.id}: positive-dimensional locus of index {r}")
        if len(S) == 1:
            i = S[0]
            t = coordinate_point_type(family, i, excluded)
            if isinstance(t, CQSPoint):
                seen[(i,)] = SingularLocus((i,), 1, t.singularity)
            elif isinstance(t, Ambiguous):
                seen[(i,)] = SingularLocus((i,), 1, None)
        elif len(S) == 2:
            i, j = S
            (e,) = cutting
            both, on_i, on_j = _binary_roots(w[i], w[j], d[e])
            if both:
                q = gcd(w[i], w[j])
                seen[(i, j)] = SingularLocus((i, j), both, _local_type_at(w, d, (i, j), cutting))
            for flag, idx in ((on_i, i), (on_j, j)):
                if flag and (idx,) not in seen:
                    t = coordinate_point_type(family, idx, excluded)
                    if isinstance(t, CQSPoint):
                        seen[(idx,)] = SingularLocus((idx,), 1, t.singularity)
        elif len(S) == 3 and len(cutting) == 2:
            g = gcd_list([w[s] for s in S])
            red = [w[s] // g for s in S]
            total = Fraction(prod(d[e] // g for e in cutting), prod(red))
            for pos, s in enumerate(S):
                if all(d[e] % w[s] for e in cutting):
                    # p_s lies on both curves and is counted with weight 1/red
                    total -= Fraction(1, red[pos])
                    t = coordinate_point_type(family, s, excluded)
                    if isinstance(t, CQSPoint):
                        seen[(s,)] = SingularLocus((s,), 1, t.singularity)
            if total.denominator != 1:
                raise WpsError(f"family {family.id}: non-integral point count on stratum {S}")
            if total:
                seen[tuple(S)] = SingularLocus(tuple(S), int(total), _local_type_at(w, d, tuple(S), cutting))
        else:
            raise WpsError(f"family {family.id}: unsupported singular stratum {S}")
    return [v for _, v in sorted(seen.items()) if v.singularity is None or v.singularity.r > 1]
