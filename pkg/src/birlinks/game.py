"""The 2-ray game on the Kawamata blowup and classification of the resulting link."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

from .blowup import Centre, KawamataBlowup, find_centre, kawamata_blowup
from .toric import (
    ChamberDecomposition,
    chambers,
    content,
    det,
    normalize_wall,
    primitive,
    ray_cmp,
    same_ray,
    wall_loci,
)
from .wps import CyclicQuotientSingularity, _binary_roots

TYPE_I = "TypeI-MoriFibreSpace"
TYPE_II = "TypeII-FanoModel"
BIRATIONAL_INVOLUTION = "BirationalInvolution"
BAD_LINK = "BadLink"
REQUIRES_UNPROJECTION = "RequiresUnprojection"
VERDICTS = (TYPE_I, TYPE_II, BIRATIONAL_INVOLUTION, BAD_LINK, REQUIRES_UNPROJECTION)


class GameError(ValueError):
    pass


def _ray_json(v):
    return list(v) if v is not None else None


def _fr(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def wps_str(weights: Sequence[int]) -> str:
    return "P(" + ",".join(str(w) for w in weights) + ")"


# --- link steps ---------------------------------------------------------------


@dataclass(frozen=True)
class Isomorphism:
    wall: tuple[int, int]
    kind: str = field(default="Isomorphism", init=False)

    def describe(self) -> str:
        return "isomorphism"


@dataclass(frozen=True)
class SmallModification:
    """Common shape of flips, flops and antiflips restricted to Y."""

    wall: tuple[int, int]
    weights: tuple[int, ...]
    hyp_degree: int | tuple[int, ...] | None
    count: int
    variables: tuple[str, ...] = ()
    contracted: tuple[tuple[str, int], ...] = ()
    extracted: tuple[tuple[str, int], ...] = ()
    eliminated: tuple[str, ...] = ()

    def tuple_str(self) -> str:
        body = ",".join(str(w) for w in self.weights)
        if self.hyp_degree is None:
            return f"({body})"
        hd = self.hyp_degree if isinstance(self.hyp_degree, tuple) else (self.hyp_degree,)
        return f"({body};{','.join(str(abs(d)) for d in hd)})"

    def describe(self) -> str:
        over = "" if self.count == 1 else f" over {self.count} points"
        return f"{self.kind.lower()} {self.tuple_str()}{over}"


@dataclass(frozen=True)
class Flip(SmallModification):
    kind: str = field(default="Flip", init=False)


@dataclass(frozen=True)
class Antiflip(SmallModification):
    kind: str = field(default="Antiflip", init=False)


@dataclass(frozen=True)
class Flop(SmallModification):
    kind: str = field(default="Flop", init=False)

    @property
    def s(self) -> int:
        return self.count


@dataclass(frozen=True)
class DivisorialToPoint:
    target_weights: tuple[int, ...]
    target_degrees: tuple[int, ...]
    blowup_weights: tuple[int, ...]
    discrepancy: Fraction
    residual_order: int
    point_index: int
    point_equations: tuple[int, ...] = ()
    target_variables: tuple[str, ...] = ()
    point_variable: str = ""
    exceptional: str = ""
    eliminated: tuple[str, ...] = ()
    kind: str = field(default="DivisorialToPoint", init=False)

    @property
    def point(self) -> str:
        """The contracted point's germ, e.g. 1/2(1,1,1) or 1/2(1,1,1,1;2)."""
        r = self.point_index
        ws = ",".join(str(w) for w in self.blowup_weights)
        eq = ";" + ",".join(str(d) for d in self.point_equations) if self.point_equations else ""
        return f"1/{r}({ws}{eq})" if r > 1 else f"smooth-or-cDV({ws}{eq})"

    @property
    def quotient(self) -> CyclicQuotientSingularity | None:
        if self.point_equations or len(self.blowup_weights) != 3 or self.point_index == 1:
            return None
        return CyclicQuotientSingularity(self.point_index, tuple(self.blowup_weights))

    def model(self) -> str:
        degs = ",".join(str(d) for d in self.target_degrees)
        z = f"Z_{{{degs}}}" if degs else "Z"
        fake = f"/mu_{self.residual_order}" if self.residual_order > 1 else ""
        return f"{z} in {wps_str(self.target_weights)}{fake}"

    def describe(self) -> str:
        return (
            f"divisorial contraction to {self.point} in {self.model()}, "
            f"blowup weights ({','.join(map(str, self.blowup_weights))})/{self.point_index}, "
            f"discrepancy {_fr(self.discrepancy)}"
        )


@dataclass(frozen=True)
class DivisorialToCurve:
    target_weights: tuple[int, ...]
    target_degrees: tuple[int, ...]
    curve: str
    discrepancy: Fraction
    residual_order: int = 1
    target_variables: tuple[str, ...] = ()
    exceptional: str = ""
    eliminated: tuple[str, ...] = ()
    kind: str = field(default="DivisorialToCurve", init=False)

    def model(self) -> str:
        degs = ",".join(str(d) for d in self.target_degrees)
        return f"Z_{{{degs}}} in {wps_str(self.target_weights)}"

    def describe(self) -> str:
        return f"divisorial contraction to the curve {self.curve} in {self.model()}"


@dataclass(frozen=True)
class Fibration:
    base_weights: tuple[int, ...]
    fibre: str  # "Conic" | "DelPezzo"
    degree: int | None = None
    base_degrees: tuple[int, ...] = ()
    fibre_weights: tuple[int, ...] = ()
    fibre_degrees: tuple[int, ...] = ()
    eliminated: tuple[str, ...] = ()
    kind: str = field(default="Fibration", init=False)

    def base(self) -> str:
        b = wps_str(self.base_weights)
        if self.base_degrees:
            return f"({','.join(map(str, self.base_degrees))}) in {b}"
        return b

    def describe(self) -> str:
        if self.fibre == "Conic":
            return f"conic bundle over {self.base()}"
        return f"del Pezzo fibration of degree {self.degree} over {self.base()}"


@dataclass(frozen=True)
class RequiresUnprojection:
    wall: tuple[int, int] | None
    reason: str = ""
    kind: str = field(default="RequiresUnprojection", init=False)

    def describe(self) -> str:
        return f"requires unprojection ({self.reason})"


LinkStep = Isomorphism | Flip | Antiflip | Flop | DivisorialToPoint | DivisorialToCurve | Fibration | RequiresUnprojection


def step_to_json(step) -> dict:
    d = {"kind": step.kind}
    for k, v in step.__dict__.items():
        if k == "kind":
            continue
        if isinstance(v, Fraction):
            v = _fr(v)
        elif isinstance(v, tuple):
            v = [list(x) if isinstance(x, tuple) else x for x in v]
        d[k] = v
    return d


_STEP_TYPES = {
    "Isomorphism": Isomorphism,
    "Flip": Flip,
    "Antiflip": Antiflip,
    "Flop": Flop,
    "DivisorialToPoint": DivisorialToPoint,
    "DivisorialToCurve": DivisorialToCurve,
    "Fibration": Fibration,
    "RequiresUnprojection": RequiresUnprojection,
}


def step_from_json(d: dict):
    cls = _STEP_TYPES[d["kind"]]
    kw = {}
    for k, v in d.items():
        if k == "kind":
            continue
        if k == "discrepancy":
            v = Fraction(v)
        elif isinstance(v, list):
            v = tuple(tuple(x) if isinstance(x, list) else x for x in v)
        kw[k] = v
    return cls(**kw)


@dataclass(frozen=True)
class SarkisovLink:
    blowup: KawamataBlowup
    centre: Centre
    steps: tuple
    verdict: str
    notes: tuple[str, ...] = ()

    @property
    def endpoint(self):
        return self.steps[-1] if self.steps else None

    def small_modifications(self):
        return [s for s in self.steps if isinstance(s, SmallModification)]


# --- helpers ------------------------------------------------------------------


def _scaled_anticanonical(bl: KawamataBlowup) -> tuple[int, int]:
    a, b = bl.anticanonical
    den = a.denominator * b.denominator
    return (int(a * den), int(b * den))


def _matching(cands: dict[int, list[int]]) -> dict[int, int]:
    """Maximum matching equation -> variable; deterministic (first best in product order)."""
    eqs = sorted(cands)
    best: dict[int, int] = {}
    options = [[None] + cands[e] for e in eqs]
    for choice in itertools.product(*options):
        used = [c for c in choice if c is not None]
        if len(set(used)) != len(used):
            continue
        if len(used) > len(best):
            best = {e: c for e, c in zip(eqs, choice) if c is not None}
    return best


def _transverse(A, v) -> int:
    return A[1][0] * v[0] + A[1][1] * v[1]


def _along(A, v) -> int:
    return A[0][0] * v[0] + A[0][1] * v[1]


# --- walls --------------------------------------------------------------------


def classify_wall(bl: KawamataBlowup, wall, dec: ChamberDecomposition | None = None):
    """Restrict the crossing of an interior wall of Mov(T) to Y."""
    T = bl.ambient
    dec = dec or chambers(T)
    wall = primitive(wall)
    loci = wall_loci(T, wall)  # raises unless strictly inside Mov
    A, _ = normalize_wall(T, wall)
    W = set(dec.columns_on(wall))
    nW = len(W)
    vecs = T.vectors
    pure = []
    for e in range(2):
        if not same_ray(bl.eq_bidegrees[e], wall):
            continue
        if any(all(m.exponents[c] == 0 for c in range(7) if c not in W) for m in bl.supports[e]):
            pure.append(e)
    if len(pure) >= nW:
        return Isomorphism(wall)
    base_dim = nW - 1 - len(pure)
    if base_dim > 0:
        return RequiresUnprojection(wall, "small contraction with positive-dimensional base")
    # number of points of the base
    if nW == 1:
        count = 1
    elif nW == 2 and len(pure) == 1:
        i, j = sorted(W)
        d = _along(A, bl.eq_bidegrees[pure[0]])
        both, on_i, on_j = _binary_roots(_along(A, vecs[i]), _along(A, vecs[j]), d)
        count = both + int(on_i) + int(on_j)
    else:
        ws = [_along(A, vecs[c]) for c in W]
        total = Fraction(prod(_along(A, bl.eq_bidegrees[e]) for e in pure), prod(ws))
        if total.denominator != 1:
            return RequiresUnprojection(wall, "non-integral point count on the wall base")
        count = int(total)
    # local elimination at a base point
    free = [e for e in range(2) if e not in pure]
    cands: dict[int, list[int]] = {}
    for e in free:
        cs = []
        for m in bl.supports[e]:
            off = [c for c in range(7) if c not in W and m.exponents[c]]
            if len(off) == 1 and m.exponents[off[0]] == 1 and off[0] not in cs:
                cs.append(off[0])
        cands[e] = cs
    match = _matching(cands)
    elim = set(match.values())
    remaining_eqs = [e for e in free if e not in match]
    weights = []
    names = []
    for c in range(7):
        if c in W or c in elim:
            continue
        weights.append(-_transverse(A, vecs[c]))  # u side negative
        names.append(T.names[c])
    neg = [w for w in weights if w < 0]
    posw = [w for w in weights if w > 0]
    if not neg or not posw:
        return RequiresUnprojection(wall, "the contraction on Y is not small")
    hyp = [-_transverse(A, bl.eq_bidegrees[e]) for e in remaining_eqs]
    hyp_degree = None if not hyp else (hyp[0] if len(hyp) == 1 else tuple(hyp))
    order = sorted(range(len(weights)), key=lambda i: (weights[i], names[i]))
    kw = dict(
        wall=wall,
        weights=tuple(weights[i] for i in order),
        hyp_degree=hyp_degree,
        count=count,
        variables=tuple(names[i] for i in order),
        contracted=loci.contracted,
        extracted=loci.extracted,
        eliminated=tuple(T.names[c] for c in sorted(elim)),
    )
    side = ray_cmp(wall, _scaled_anticanonical(bl))
    if side == 0 and same_ray(wall, _scaled_anticanonical(bl)):
        return Flop(**kw)
    return Antiflip(**kw) if side < 0 else Flip(**kw)


# --- end of the game ----------------------------------------------------------


def discrepancy(m1, m2, n1, n2) -> Fraction:
    """a = m2 / (n2 m1 - n1 m2) for phi'^*(-K) ~ -m1 K_Y - m2 E and E' ~ -n1 K_Y - n2 E."""
    m1, m2, n1, n2 = map(Fraction, (m1, m2, n1, n2))
    den = n2 * m1 - n1 * m2
    if den <= 0:
        raise GameError("endpoint class not in strict Eff interior (crepant or invalid)")
    return m2 / den


def is_crepant(m2) -> bool:
    return Fraction(m2) == 0


def _mn(bl: KawamataBlowup, v) -> tuple[Fraction, Fraction]:
    c = bl.class_of(v)
    return c.k_coef, -c.e_coef


def initial_discrepancy(bl: KawamataBlowup) -> Fraction:
    """Discrepancy of the Kawamata extraction read back from the start of the game."""
    m1, m2 = _mn(bl, bl.ambient.vectors[1])
    n1, n2 = _mn(bl, bl.ambient.vectors[0])
    # the roles of the two contractions are swapped at the start side
    return discrepancy(m1, -m2, n1, -n2)


def classify_end(bl: KawamataBlowup, ray, dec: ChamberDecomposition | None = None):
    T = bl.ambient
    dec = dec or chambers(T)
    D = primitive(ray)
    if dec.mov is None or D != dec.mov[1]:
        raise GameError(f"ray {D} is not the far boundary of Mov")
    if D == dec.eff[1]:
        return _fibration(bl, D, dec)
    return _divisorial(bl, D, dec)


def del_pezzo_degree(weights: Sequence[int], degrees: Sequence[int]) -> int:
    """K^2 of a surface complete intersection: (sum w - sum d)^2 prod d / prod w."""
    kk = sum(weights) - sum(degrees)
    deg = Fraction(kk * kk * prod(degrees), prod(weights))
    if deg.denominator != 1 and kk != 0:
        raise GameError(f"non-integral del Pezzo degree {deg}")
    return int(deg)


def _fibration(bl, D, dec):
    T = bl.ambient
    vecs = T.vectors
    A, _ = normalize_wall(T, D)
    Dc = set(dec.columns_on(D))
    cutting = [e for e in range(2) if same_ray(bl.eq_bidegrees[e], D)]
    free = [e for e in range(2) if e not in cutting]
    cands = {}
    for e in free:
        cs = []
        for m in bl.supports[e]:
            off = [c for c in range(7) if c not in Dc and m.exponents[c]]
            if len(off) == 1 and m.exponents[off[0]] == 1 and off[0] not in cs:
                cs.append(off[0])
        cands[e] = cs
    match = _matching(cands)
    elim = set(match.values())
    fibre_eqs = [e for e in free if e not in match]
    fibre_cols = [c for c in range(7) if c not in Dc and c not in elim]
    fw = tuple(_transverse(A, vecs[c]) for c in fibre_cols)
    fd = tuple(_transverse(A, bl.eq_bidegrees[e]) for e in fibre_eqs)
    base_w = tuple(sorted(_along(A, vecs[c]) for c in Dc))
    base_d = tuple(_along(A, bl.eq_bidegrees[e]) for e in cutting)
    base_dim = len(Dc) - 1 - len(cutting)
    fibre_dim = len(fibre_cols) - 1 - len(fibre_eqs)
    elim_names = tuple(T.names[c] for c in sorted(elim))
    if base_dim == 2 and fibre_dim == 1:
        return Fibration(base_w, "Conic", None, base_d, fw, fd, elim_names)
    if base_dim == 1 and fibre_dim == 2:
        return Fibration(base_w, "DelPezzo", del_pezzo_degree(fw, fd), base_d, fw, fd, elim_names)
    raise GameError(f"degenerate fibre data: base dimension {base_dim}, fibre dimension {fibre_dim}")


def _chart_supports(bl, ep, dcol, gmatch, eqs):
    """Supports on the chart E' = 1 after substituting the globally eliminated variables.

    Only products that can still be linear in one variable times a power of
    the point coordinate are kept; nothing else matters for local elimination.
    """

    def simple(m):
        off = [c for c in range(7) if c not in (ep, dcol) and m[c]]
        return not off or (len(off) == 1 and m[off[0]] == 1)

    def zero_e(m):
        m = list(m)
        m[ep] = 0
        return tuple(m)

    chart = {e: {zero_e(m.exponents) for m in bl.supports[e]} for e in eqs}
    for ey, y in gmatch.items():
        rest = [zero_e(m.exponents) for m in bl.supports[ey] if m.exponents[y] == 0]
        useful = [m for m in rest if simple(m)]
        for e in eqs:
            new = set()
            for m in chart[e]:
                p = m[y]
                if p == 0:
                    new.add(m)
                    continue
                base = list(m)
                base[y] = 0
                for combo in itertools.combinations_with_replacement(useful, p):
                    prodm = list(base)
                    for f in combo:
                        prodm = [a + b for a, b in zip(prodm, f)]
                    new.add(tuple(prodm))
            chart[e] = new
    return {e: sorted(v) for e, v in chart.items()}


def _divisorial(bl, D, dec):
    T = bl.ambient
    vecs = T.vectors
    last = dec.columns_on(dec.eff[1])
    if len(last) != 1:
        raise GameError("divisorial end needs a single outermost column")
    (ep,) = last
    Ev = vecs[ep]
    r = content(Ev)
    tw = {c: det(Ev, vecs[c]) // r for c in range(7) if c != ep}
    # global eliminations: y * E'^m with E' set to 1
    cands = {}
    for e in range(2):
        cs = []
        for m in bl.supports[e]:
            off = [c for c in range(7) if c != ep and m.exponents[c]]
            if len(off) == 1 and m.exponents[off[0]] == 1 and off[0] not in cs:
                cs.append(off[0])
        cands[e] = cs
    gmatch = _matching(cands)
    gel = set(gmatch.values())
    target_cols = [c for c in range(7) if c != ep and c not in gel]
    target_eqs = [e for e in range(2) if e not in gmatch]
    tdeg = tuple(sorted(det(Ev, bl.eq_bidegrees[e]) // r for e in target_eqs))
    Dc = [c for c in dec.columns_on(D) if c not in gel]
    m1, m2 = _mn(bl, D)
    n1, n2 = _mn(bl, Ev)
    disc = Fraction(0) if is_crepant(m2) else discrepancy(m1, m2, n1, n2)
    # adjunction on the target
    a0, a1 = bl.anticanonical
    pred = (Ev[0] * a1 - Ev[1] * a0) / r
    if sum(tw[c] for c in target_cols) - sum(tdeg) != pred:
        raise GameError("adjunction fails on the endpoint model")
    order = sorted(target_cols, key=lambda c: (tw[c], c))
    tweights = tuple(tw[c] for c in order)
    tnames = tuple(T.names[c] for c in order)
    elim_names = tuple(T.names[c] for c in sorted(gel))
    if not Dc:
        raise GameError("every column of the end ray was eliminated")
    if len(Dc) > 1:
        curve = wps_str(sorted(tw[c] for c in Dc))
        return DivisorialToCurve(tweights, tdeg, curve, disc, r, tnames, T.names[ep], elim_names)
    (dcol,) = Dc
    Dp = primitive(D)
    chart = _chart_supports(bl, ep, dcol, gmatch, target_eqs)
    lc = {}
    for e in target_eqs:
        cs = []
        for m in chart[e]:
            off = [c for c in range(7) if c not in (ep, dcol) and m[c]]
            if len(off) == 1 and m[off[0]] == 1 and off[0] not in cs:
                cs.append(off[0])
        lc[e] = cs
    lmatch = _matching(lc)
    lel = set(lmatch.values())
    locals_ = [c for c in target_cols if c != dcol and c not in lel]
    bw = tuple(sorted(det(Dp, vecs[c]) for c in locals_))
    peq = tuple(det(Dp, bl.eq_bidegrees[e]) for e in target_eqs if e not in lmatch)
    return DivisorialToPoint(
        target_weights=tweights,
        target_degrees=tdeg,
        blowup_weights=bw,
        discrepancy=disc,
        residual_order=r,
        point_index=tw[dcol] * r,  # the residual mu_r acts on the chart too
        point_equations=peq,
        target_variables=tnames,
        point_variable=T.names[dcol],
        exceptional=T.names[ep],
        eliminated=elim_names,
    )


# --- the whole link -------------------------------------------------------------


def _same_family_model(step, family) -> bool:
    if not isinstance(step, (DivisorialToPoint, DivisorialToCurve)):
        return False
    return (
        sorted(step.target_weights) == sorted(family.weights)
        and tuple(sorted(step.target_degrees)) == tuple(sorted(family.degrees))
        and step.residual_order == 1
    )


def run_link(family, centre=None, assumptions: Sequence[str] = (), index: int | None = None) -> SarkisovLink:
    """Blow up ``centre`` (a Centre, a singularity, or a coordinate index) and play the game."""
    fam = family.with_assumptions(assumptions) if assumptions else family
    if isinstance(centre, Centre):
        c = centre
    elif isinstance(centre, CyclicQuotientSingularity):
        c = find_centre(fam, spec=centre)
    elif isinstance(centre, str):
        c = find_centre(fam, spec=CyclicQuotientSingularity.parse(centre))
    else:
        c = find_centre(fam, index=centre if index is None else index)
    bl = kawamata_blowup(fam, c)
    dec = chambers(bl.ambient)
    notes = []
    if dec.mov is None:
        raise GameError("empty movable cone")
    start = primitive(bl.ambient.vectors[1])
    if dec.mov[0] != start:
        raise GameError("the Kawamata blowup does not start the game at the xi ray")
    annotated = c.singularity in fam.unprojection_centres()
    for e in range(2):
        # every term divisible by u or xi: Y only follows a larger ambient
        if all(m.exponents[0] or m.exponents[1] for m in bl.supports[e]):
            step = RequiresUnprojection(None, f"equation {e + 1} of Y lies in (u, {bl.ambient.names[1]})")
            return SarkisovLink(bl, c, (step,), REQUIRES_UNPROJECTION, tuple(notes))
    lo, hi = dec.position(dec.mov[0]), dec.position(dec.mov[1])
    steps = []
    for pos in range(lo + 1, hi):
        step = classify_wall(bl, dec.rays[pos], dec)
        if annotated and not isinstance(step, Isomorphism):
            step = RequiresUnprojection(dec.rays[pos], "catalog annotation: the game on Y leaves the ambient game")
        steps.append(step)
        if isinstance(step, RequiresUnprojection):
            return SarkisovLink(bl, c, tuple(steps), REQUIRES_UNPROJECTION, tuple(notes))
    if annotated:
        steps.append(RequiresUnprojection(dec.mov[1], "catalog annotation: the game on Y leaves the ambient game"))
        return SarkisovLink(bl, c, tuple(steps), REQUIRES_UNPROJECTION, tuple(notes))
    end = classify_end(bl, dec.mov[1], dec)
    steps.append(end)
    k_trivial_end = same_ray(dec.mov[1], _scaled_anticanonical(bl))
    if isinstance(end, Fibration) and k_trivial_end:
        verdict = BAD_LINK
        notes.append("-K_Y spans the far boundary of Mov: the fibres are K-trivial")
    elif isinstance(end, Fibration):
        verdict = TYPE_I
    elif end.discrepancy == 0:
        verdict = BAD_LINK
        notes.append("-K_Y spans the far boundary of Mov: crepant endpoint")
    elif _same_family_model(end, fam):
        verdict = BIRATIONAL_INVOLUTION
    else:
        verdict = TYPE_II
    return SarkisovLink(bl, c, tuple(steps), verdict, tuple(notes))
