"""Intersection numbers on a Kawamata blowup and the maximal-centre exclusion tests built on them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, lcm
from typing import Sequence

from .blowup import BlowupError, Centre, NonCoordinateCentre, centres, kawamata_blowup
from .valuation import stratum_vanishing_orders
from .wps import CyclicQuotientSingularity, cqs_normal_form, is_terminal, monomials, anticanonical_degree


class ExclusionError(ValueError):
    pass


@dataclass(frozen=True)
class DivisorClass2:
    """alpha (-K_Y) + beta E."""

    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))

    def __add__(self, other: "DivisorClass2") -> "DivisorClass2":
        return DivisorClass2(self.alpha + other.alpha, self.beta + other.beta)

    def __sub__(self, other: "DivisorClass2") -> "DivisorClass2":
        return DivisorClass2(self.alpha - other.alpha, self.beta - other.beta)

    def __neg__(self) -> "DivisorClass2":
        return DivisorClass2(-self.alpha, -self.beta)

    def __mul__(self, s) -> "DivisorClass2":
        return DivisorClass2(self.alpha * s, self.beta * s)

    __rmul__ = __mul__

    @classmethod
    def from_lift(cls, lift) -> "DivisorClass2":
        return cls(lift.k_coef, lift.e_coef)

    def __str__(self) -> str:
        parts = []
        if self.alpha:
            parts.append(f"{self.alpha}(-K)")
        if self.beta:
            parts.append(f"{self.beta}E")
        return " + ".join(parts).replace("+ -", "- ") or "0"


MINUS_K = DivisorClass2(1, 0)
EXC = DivisorClass2(0, 1)


@dataclass(frozen=True)
class BlowupNumbers:
    """What the intersection ring needs: the family and the (terminal) centre type.

    A ``KawamataBlowup`` carries the same two attributes, so either works
    wherever a blowup is expected below.
    """

    family: object
    singularity: CyclicQuotientSingularity

    @property
    def r(self) -> int:
        return self.singularity.r


def e_cubed(s: CyclicQuotientSingularity) -> Fraction:
    nf = cqs_normal_form(s)
    if not is_terminal(nf):
        raise ExclusionError(f"{s} is not terminal")
    r, a = nf.r, nf.weights[1]
    return Fraction(r * r, a * (r - a))


def _phi_e(b, c: DivisorClass2) -> tuple[Fraction, Fraction]:
    # -K_Y = phi^*(-K_X) - E/r
    return c.alpha, c.beta - c.alpha / b.singularity.r


def triple_product(b, c1: DivisorClass2, c2: DivisorClass2, c3: DivisorClass2) -> Fraction:
    f = b.family
    top = f.fano_index**3 * anticanonical_degree(f)
    p1, q1 = _phi_e(b, c1)
    p2, q2 = _phi_e(b, c2)
    p3, q3 = _phi_e(b, c3)
    return p1 * p2 * p3 * top + q1 * q2 * q3 * e_cubed(b.singularity)


def iota2_degree(f) -> Fraction:
    return f.fano_index**2 * anticanonical_degree(f)


@dataclass(frozen=True)
class AllCurvesExcluded:
    value: Fraction  # iota^2 A^3

    def describe(self) -> str:
        return "curves: excluded"


@dataclass(frozen=True)
class DegreeBound:
    bound: Fraction

    @property
    def max_degree(self) -> int:
        return ceil(self.bound) - 1

    def describe(self) -> str:
        n = self.max_degree
        tail = "only deg 1" if n == 1 else f"deg <= {n}"
        return f"curve degree bound {_q(self.bound)} ⇒ {tail}"


def curve_exclusion(f) -> AllCurvesExcluded | DegreeBound:
    v = iota2_degree(f)
    return AllCurvesExcluded(v) if v <= 1 else DegreeBound(v)


def isolating_threshold(f) -> Fraction:
    return 4 / iota2_degree(f)


def lcm_isolation(f, j: int, K: Sequence[int] = ()) -> int:
    w = f.weights
    rest = [w[l] for l in range(len(w)) if l != j and l not in set(K)]
    if not rest:
        raise ExclusionError("empty comparison set")
    return max(lcm(w[j], a) for a in rest)


def nef_test_class(b, lifts: Sequence[tuple]) -> tuple[Fraction, Fraction]:
    """(c, M.(-K_Y)^2) for M = -K_Y + cE, c the largest e_i/b_i over the isolating lifts."""
    c = Fraction(0)
    for bi, ei in lifts:
        bi, ei = Fraction(bi), Fraction(ei)
        if bi <= 0:
            raise ExclusionError("isolating lifts need b_i > 0")
        c = max(c, ei / bi)
    if c > Fraction(1, b.singularity.r):
        raise ExclusionError("hypothesis (3) of the nef criterion fails")
    M = MINUS_K + c * EXC
    return c, triple_product(b, M, MINUS_K, MINUS_K)


def bad_link_product(b, S: DivisorClass2, T: DivisorClass2 = MINUS_K) -> Fraction:
    """T.Gamma for Gamma = T cap S; negative means infinitely many T-negative curves."""
    return triple_product(b, T, T, S)


# --- per-family report -------------------------------------------------------------------


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def isolates(f, cut: Sequence[int], excluded=frozenset()) -> bool:
    """Generic dimension of (x_i = 0 for i in cut) on X is at most 0.

    Each equation that survives restriction is counted as cutting once,
    unless both survivors share a variable factor.
    """
    rest = [i for i in range(6) if i not in set(cut)]
    restricted = []
    for e in range(2):
        mons = [
            m for m in monomials(f.weights, f.degrees[e])
            if (e, m) not in excluded and all(m[i] == 0 for i in cut)
        ]
        if mons:
            restricted.append(mons)
    cuts = len(restricted)
    if cuts == 2:
        shared = [i for i in rest if all(m[i] for ms in restricted for m in ms)]
        if shared:
            cuts = 1
    return len(rest) - 1 - cuts <= 0


@dataclass(frozen=True)
class TestClassResult:
    singularity: CyclicQuotientSingularity
    variables: tuple[str, ...]
    lifts: tuple[tuple[Fraction, Fraction], ...]
    c: Fraction | None
    value: Fraction | None
    note: str = ""

    @property
    def excluded(self) -> bool:
        return self.value is not None and self.value < 0

    def describe(self) -> str:
        if self.value is None:
            return f"{self.singularity}: test class n/a ({self.note})"
        verdict = "excluded" if self.excluded else "not excluded by the test class"
        return f"{self.singularity}: M·(-K)² = {_q(self.value)} ⇒ {verdict}"


def centre_orders(f, c) -> tuple[int, tuple[int, ...]]:
    """(r, r * vanishing order of each coordinate) at a centre, maximal for eliminated ones."""
    if isinstance(c, Centre):
        bl = kawamata_blowup(f, c)
        return bl.r, tuple(0 if i == c.index else x for i, x in enumerate(bl.b))
    if isinstance(c, NonCoordinateCentre) and len(c.support) == 2:
        try:
            return stratum_vanishing_orders(f, c.support, f.excluded_monomials())
        except ValueError as exc:
            raise ExclusionError(str(exc)) from exc
    raise ExclusionError(f"no chart for {c.singularity}: {getattr(c, 'reason', '')}")


def best_test_class(f, c) -> TestClassResult:
    """Nef test class over the isolating coordinate set with the smallest c."""
    s = c.singularity
    try:
        r, b = centre_orders(f, c)
    except (ExclusionError, BlowupError) as exc:
        return TestClassResult(s, (), (), None, None, str(exc))
    iota = f.fano_index
    vanishing = [i for i in range(6) if b[i] > 0]
    lifts = {i: (Fraction(f.weights[i], iota), Fraction(f.weights[i] - iota * b[i], r * iota)) for i in vanishing}
    best = None
    for n in range(1, len(vanishing) + 1):
        for cut in combinations(vanishing, n):
            if not isolates(f, cut, f.excluded_monomials()):
                continue
            cval = max([Fraction(0)] + [lifts[i][1] / lifts[i][0] for i in cut])
            if best is None or cval < best[0]:
                best = (cval, cut)
    if best is None:
        return TestClassResult(s, (), (), None, None, "no isolating coordinate set")
    cut = best[1]
    used = tuple(lifts[i] for i in cut)
    names = tuple(f.names[i] for i in cut)
    nums = BlowupNumbers(f, cqs_normal_form(s))
    try:
        cval, value = nef_test_class(nums, used)
    except ExclusionError as exc:
        return TestClassResult(s, names, used, best[0], None, str(exc))
    return TestClassResult(s, names, used, cval, value)


@dataclass(frozen=True)
class ExclusionReport:
    family: int
    threshold: Fraction
    curves: AllCurvesExcluded | DegreeBound
    tests: tuple[TestClassResult, ...]
    bad_links: tuple[tuple[CyclicQuotientSingularity, Fraction], ...]

    def lines(self) -> list[str]:
        out = [
            self.curves.describe(),
            f"threshold 4/(ι²A³) = {_q(self.threshold)}",
        ]
        out += [t.describe() for t in self.tests]
        for s, v in self.bad_links:
            out.append(f"{s}: bad link; (-K)²·(-K-E) = {_q(v)} (conditional on Γ irreducible)")
        return out


def exclusion_report(f, bad_link_centres: Sequence[CyclicQuotientSingularity] = ()) -> ExclusionReport:
    tests = []
    for c in centres(f):
        if is_terminal(c.singularity):
            tests.append(best_test_class(f, c))
    bl = tuple(
        (s, bad_link_product(BlowupNumbers(f, s), MINUS_K - EXC)) for s in bad_link_centres
    )
    return ExclusionReport(f.id, isolating_threshold(f), curve_exclusion(f), tuple(tests), bl)
