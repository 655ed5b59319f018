"""Kawamata blowups of coordinate cyclic quotient singularities and their lift tables."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .toric import RankTwoToric
from .valuation import max_vanishing_orders
from .wps import (
    Ambiguous,
    CQSPoint,
    CyclicQuotientSingularity,
    NotOnX,
    SmoothPoint,
    WpsError,
    coordinate_point_type,
    cqs_normal_form,
    format_monomial,
    is_terminal,
    monomials,
    singular_points,
)


class BlowupError(ValueError):
    pass


class AmbiguousCentre(BlowupError):
    """The coordinate point admits inequivalent normalizations."""

    def __init__(self, msg: str, candidates=()):
        super().__init__(msg)
        self.candidates = tuple(candidates)


@dataclass(frozen=True)
class Centre:
    """A basket point realised as the coordinate point ``index``.

    ``extra_excluded`` lists the pure powers dropped to move a point of a
    positive-dimensional coordinate stratum onto the coordinate point.
    """

    index: int
    singularity: CyclicQuotientSingularity
    extra_excluded: frozenset = frozenset()
    support: tuple[int, ...] = ()
    multiplicity: int = 1


@dataclass(frozen=True)
class NonCoordinateCentre:
    singularity: CyclicQuotientSingularity
    support: tuple[int, ...]
    multiplicity: int
    reason: str


@dataclass(frozen=True)
class LiftClass:
    """-(a_i/iota) K_Y + (alpha_i/iota) E, stored as the two coefficients."""

    k_coef: Fraction  # coefficient of -K_Y
    e_coef: Fraction  # coefficient of E

    def __str__(self) -> str:
        def term(c: Fraction, sym: str) -> str:
            if c == 0:
                return ""
            mag = abs(c)
            coef = "" if mag == 1 else (f"{mag}" if mag.denominator == 1 else f"({mag})")
            return ("-" if c < 0 else "+") + coef + sym

        s = term(self.k_coef, "(-K_Y)") + term(self.e_coef, "E")
        s = s.lstrip("+")
        return s or "0"


@dataclass(frozen=True)
class LiftedMonomial:
    exponents: tuple[int, ...]  # over the ambient columns (u, xi, others)
    source: tuple[int, ...]  # exponents over the original variables


@dataclass(frozen=True)
class KawamataBlowup:
    family: object
    centre: int
    singularity: CyclicQuotientSingularity
    k: int
    b: tuple[int, ...]  # r * vanishing order of each original variable
    eliminations: tuple  # wps.Elimination pair
    excluded: frozenset
    ambient: RankTwoToric
    column_of: tuple[int, ...]  # original variable index -> ambient column
    supports: tuple[tuple[LiftedMonomial, ...], tuple[LiftedMonomial, ...]]
    eq_bidegrees: tuple[tuple[int, int], tuple[int, int]]
    anticanonical: tuple[Fraction, Fraction]

    @property
    def r(self) -> int:
        return self.singularity.r

    @property
    def iota(self) -> int:
        return self.family.fano_index

    @property
    def m_f(self) -> Fraction:
        return Fraction(self.b[self.eliminations[0].partner], self.r)

    @property
    def m_g(self) -> Fraction:
        return Fraction(self.b[self.eliminations[1].partner], self.r)

    @property
    def vanishing_orders(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.r) for x in self.b)

    @property
    def local(self) -> tuple[int, ...]:
        ex = {e.partner for e in self.eliminations}
        return tuple(i for i in range(6) if i != self.centre and i not in ex)

    def alpha(self, i: int) -> int:
        """Integer alpha_i with x_i lifting to -(a_i/iota)K_Y + (alpha_i/iota)E."""
        num = self.family.weights[i] - self.iota * self.b[i]
        if num % self.r:
            raise BlowupError(f"lift of variable {self.family.names[i]} is not integral")
        return num // self.r

    def lift(self, i: int) -> LiftClass:
        return LiftClass(Fraction(self.family.weights[i], self.iota), Fraction(self.alpha(i), self.iota))

    @property
    def lift_table(self) -> dict[str, LiftClass]:
        return {self.family.names[i]: self.lift(i) for i in range(6)}

    def class_of(self, v: Sequence[int]) -> LiftClass:
        """Ambient bidegree (a, b) written as alpha(-K_Y) + beta E."""
        a, b = Fraction(v[0]), Fraction(v[1])
        kk = a / self.iota
        return LiftClass(kk, b - kk * self.anticanonical[1])

    def equation_class(self, eq: int) -> LiftClass:
        return self.class_of(self.eq_bidegrees[eq])

    def format_lifted(self, m: LiftedMonomial) -> str:
        return format_monomial(m.exponents, self.ambient.names)


def _units_inverse(x: int, r: int) -> int:
    try:
        return pow(x, -1, r)
    except ValueError:
        raise BlowupError(f"Fano index {x} is not invertible modulo {r}") from None


def _b_of(mono: Sequence[int], b: Sequence[int]) -> int:
    return sum(e * x for e, x in zip(mono, b))


def _equation_support(family, eq: int, excluded) -> list[tuple[int, ...]]:
    return [m for m in monomials(family.weights, family.degrees[eq]) if (eq, m) not in excluded]


def min_vanishing_order(family, point: CQSPoint, degree: int | None = None, excluded=frozenset()) -> tuple[Fraction, Fraction]:
    """Joint least fixed point (m_f, m_g) of the eliminated variables' vanishing orders.

    This reads the orders off the general support without allowing any
    cancellation, so it is a lower bound; ``kawamata_blowup`` refines it.

    With ``degree`` given, instead return the least order of a general
    form of that degree among the local coordinates and xi only.
    """
    r = family.weights[point.index]
    k = _units_inverse(family.fano_index % r, r)
    b: list[int | None] = [None] * 6
    b[point.index] = 0
    for l in point.local:
        b[l] = (k * family.weights[l]) % r
    if degree is not None:
        if degree == 0:
            return Fraction(0)
        vals = [
            _b_of(m, [x or 0 for x in b])
            for m in monomials(family.weights, degree)
            if all(m[j] == 0 for j in point.eliminated)
        ]
        if not vals:
            raise BlowupError(f"degenerate general member: no monomial of degree {degree}")
        return Fraction(min(vals), r)
    supports = []
    for el in point.eliminations:
        sup = [
            m
            for m in _equation_support(family, el.equation, excluded)
            if m[point.index] < el.power
        ]
        if not sup:
            raise BlowupError(f"degenerate general member: equation {el.equation + 1} has no tail")
        supports.append(sup)
    # start from a safe upper bound and decrease monotonically
    big = r * max(family.degrees)
    cur = [big, big]
    while True:
        bb = list(b)
        for el, val in zip(point.eliminations, cur):
            bb[el.partner] = val
        new = [min(_b_of(m, bb) for m in sup) for sup in supports]
        new = [min(n, c) for n, c in zip(new, cur)]
        if new == cur:
            break
        cur = new
    return Fraction(cur[0], r), Fraction(cur[1], r)


def resolve_point(family, index: int, excluded=frozenset()) -> CQSPoint:
    t = coordinate_point_type(family, index, excluded)
    names = family.names
    if isinstance(t, NotOnX):
        raise BlowupError(f"coordinate point p_{names[index]} does not lie on a general member")
    if isinstance(t, SmoothPoint):
        raise BlowupError(f"coordinate point p_{names[index]} is smooth; no Kawamata blowup")
    if isinstance(t, Ambiguous):
        raise AmbiguousCentre(
            f"coordinate point p_{names[index]} is ambiguous: "
            + ", ".join(str(c.singularity) for c in t.candidates),
            t.candidates,
        )
    if not is_terminal(t.singularity):
        raise BlowupError(f"p_{names[index]} ~ {t.singularity} is not terminal")
    return t


def kawamata_blowup(family, centre: int | Centre, excluded=None) -> KawamataBlowup:
    """Blow up the coordinate point ``centre`` with weights (1/r)(1, a, r-a)."""
    if isinstance(centre, Centre):
        extra, index = centre.extra_excluded, centre.index
    else:
        extra, index = frozenset(), centre
    if excluded is None:
        excluded = family.excluded_monomials()
    excluded = frozenset(excluded) | extra
    pt = resolve_point(family, index, excluded)
    w = family.weights
    r = w[index]
    iota = family.fano_index
    k = _units_inverse(iota % r, r)
    mf, mg = min_vanishing_order(family, pt, excluded=excluded)
    b = [0] * 6
    for l in pt.local:
        b[l] = (k * w[l]) % r
    nf = cqs_normal_form(pt.singularity)
    if tuple(sorted(b[l] for l in pt.local)) != tuple(sorted(nf.weights)):
        raise BlowupError(
            f"blowup weights {sorted(b[l] for l in pt.local)} at p_{family.names[index]} "
            f"do not match the terminal form {nf}"
        )
    # a coordinate change y -> y + P can raise the order past the naive value
    j, kk = pt.eliminated
    b[j], b[kk] = max_vanishing_orders(family, pt, (int(mf * r), int(mg * r)), excluded)

    names = ["u", family.names[index]] + [family.names[i] for i in range(6) if i != index]
    cols = [(0, 1), (r, k)]
    column_of = [0] * 6
    column_of[index] = 1
    for i in range(6):
        if i == index:
            continue
        num = k * w[i] - b[i]
        if num % r:
            raise BlowupError(
                f"non-integral ambient entry for {family.names[i]}: ({k}*{w[i]} - {b[i]})/{r}"
            )
        column_of[i] = len(cols)
        cols.append((w[i], num // r))
    ambient = RankTwoToric(
        tuple(zip(names, cols)), ((0, 1), tuple(range(2, 8))), f"Kawamata blowup of p_{family.names[index]}"
    )

    supports = []
    bideg = []
    for el in pt.eliminations:
        beq = b[el.partner]
        lead = tuple(el.power if i == index else (1 if i == el.partner else 0) for i in range(6))
        # monomials below the equation's order cancel in the best generator choice
        mons = [lead] + [
            m
            for m in _equation_support(family, el.equation, excluded)
            if m[index] < el.power and _b_of(m, b) >= beq
        ]
        lifted = []
        for m in mons:
            du = _b_of(m, b) - beq
            if du < 0 or du % r:
                raise BlowupError(f"monomial {format_monomial(m, family.names)} lifts with u-power {du}/{r}")
            exps = [0] * 7
            exps[0] = du // r
            for i, e in enumerate(m):
                exps[column_of[i]] += e
            lifted.append(LiftedMonomial(tuple(exps), m))
        supports.append(tuple(lifted))
        d = family.degrees[el.equation]
        num = k * d - beq
        if num % r:
            raise BlowupError(f"non-integral bidegree for equation {el.equation + 1}")
        bideg.append((d, num // r))
    anti = (Fraction(iota), Fraction(k * iota - 1, r))
    return KawamataBlowup(
        family=family,
        centre=index,
        singularity=nf,
        k=k,
        b=tuple(b),
        eliminations=pt.eliminations,
        excluded=excluded,
        ambient=ambient,
        column_of=tuple(column_of),
        supports=tuple(supports),
        eq_bidegrees=tuple(bideg),
        anticanonical=anti,
    )


def is_linear(family, centre: int) -> bool:
    w = family.weights
    a = w[centre]
    d1, d2 = family.degrees
    others = [i for i in range(6) if i != centre]
    for j in others:
        if w[j] != d1 - a:
            continue
        for kk in others:
            if kk == j or w[kk] != d2 - a:
                continue
            rest = [w[i] for i in others if i not in (j, kk)]
            if family.fano_index in rest:
                return True
    return False


def linear_cqs_witness(family) -> int | None:
    """Index of the linear terminal coordinate CQS of highest index, if any."""
    best = None
    excluded = family.excluded_monomials()
    for i in range(6):
        if family.weights[i] == 1 or not is_linear(family, i):
            continue
        try:
            resolve_point(family, i, excluded)
        except BlowupError:
            continue
        if best is None or family.weights[i] > family.weights[best]:
            best = i
    return best


def has_linear_cqs(family) -> bool:
    return linear_cqs_witness(family) is not None


def centres(family) -> list[Centre | NonCoordinateCentre]:
    """Basket points of a general member, realised as coordinate points where possible."""
    excluded = family.excluded_monomials()
    w, d = family.weights, family.degrees
    out: list[Centre | NonCoordinateCentre] = []
    for loc in singular_points(family, excluded):
        if loc.singularity is None:
            out.append(NonCoordinateCentre(CyclicQuotientSingularity(w[loc.support[0]], (1, 1, 1)), loc.support, loc.count, "ambiguous local type"))
            continue
        s = cqs_normal_form(loc.singularity)
        if len(loc.support) == 1:
            out.append(Centre(loc.support[0], s, frozenset(), loc.support, loc.count))
            continue
        cands = [i for i in loc.support if all(w[j] % w[i] == 0 for j in loc.support)]
        if not cands:
            out.append(NonCoordinateCentre(s, loc.support, loc.count, "no coordinate change moves the point to a vertex"))
            continue
        i = min(cands, key=lambda c: (w[c], c))
        extra = frozenset(
            (e, tuple(d[e] // w[i] if l == i else 0 for l in range(6)))
            for e in range(2)
            if d[e] % w[i] == 0
        )
        try:
            pt = coordinate_point_type(family, i, excluded | extra)
        except WpsError as exc:
            out.append(NonCoordinateCentre(s, loc.support, loc.count, str(exc)))
            continue
        if isinstance(pt, CQSPoint) and pt.singularity == s:
            out.append(Centre(i, s, extra, loc.support, loc.count))
        else:
            out.append(NonCoordinateCentre(s, loc.support, loc.count, "vertex type differs after the coordinate change"))
    return out


def find_centre(family, spec: CyclicQuotientSingularity | None = None, index: int | None = None) -> Centre:
    """Look up a centre by singularity type (normal-form match) or coordinate index."""
    all_c = centres(family)
    if index is not None:
        for c in all_c:
            if isinstance(c, Centre) and c.index == index:
                return c
        if not 0 <= index < 6:
            raise BlowupError(f"coordinate index {index} out of range 0..5")
        pt = resolve_point(family, index, family.excluded_monomials())
        return Centre(index, pt.singularity, frozenset(), (index,), 1)
    nf = cqs_normal_form(spec)
    hits = [c for c in all_c if c.singularity == nf]
    if not hits:
        have = ", ".join(sorted({str(c.singularity) for c in all_c})) or "none"
        raise BlowupError(f"family {family.id} has no centre of type {nf}; basket: {have}")
    good = [c for c in hits if isinstance(c, Centre)]
    if not good:
        raise BlowupError(f"centre {nf} of family {family.id} is not a coordinate point: {hits[0].reason}")
    return max(good, key=lambda c: (len(c.support) == 1, -c.index))
