"""Rank-2 toric varieties given by a 2 x m weight matrix: cones, chambers and wall loci."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from math import gcd
from typing import Sequence

Vec = tuple[int, int]


class ToricError(ValueError):
    pass


def det(v: Sequence[int], w: Sequence[int]) -> int:
    return v[0] * w[1] - v[1] * w[0]


def primitive(v: Sequence[int]) -> Vec:
    g = gcd(v[0], v[1])
    if g == 0:
        raise ToricError("zero vector has no ray")
    return (v[0] // g, v[1] // g)


def content(v: Sequence[int]) -> int:
    return gcd(v[0], v[1])


def same_ray(v: Sequence[int], w: Sequence[int]) -> bool:
    return det(v, w) == 0 and v[0] * w[0] + v[1] * w[1] > 0


def ray_cmp(v: Sequence[int], w: Sequence[int]) -> int:
    """Clockwise order inside a strictly convex cone: v first iff det(v, w) < 0."""
    d = det(v, w)
    return -1 if d < 0 else (1 if d > 0 else 0)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


@dataclass(frozen=True)
class RankTwoToric:
    columns: tuple[tuple[str, Vec], ...]
    partition: tuple[tuple[int, ...], tuple[int, ...]]
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple((n, (int(v[0]), int(v[1]))) for n, v in self.columns))
        for n, v in self.columns:
            if v == (0, 0):
                raise ToricError(f"column {n} is the zero vector")
        a, b = self.partition
        if not a or not b:
            raise ToricError("both irrelevant-ideal blocks must be nonempty")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.columns)

    @property
    def vectors(self) -> tuple[Vec, ...]:
        return tuple(v for _, v in self.columns)

    def matrix(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(v[0] for v in self.vectors), tuple(v[1] for v in self.vectors)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def transform(self, A, note: str = "") -> "RankTwoToric":
        (p, q), (s, t) = A
        cols = tuple((n, (p * v[0] + q * v[1], s * v[0] + t * v[1])) for n, v in self.columns)
        prov = "; ".join(x for x in (self.provenance, note) if x)
        return RankTwoToric(cols, self.partition, prov)

    def __str__(self) -> str:
        width = max(max(len(n), len(str(a)), len(str(b))) for n, (a, b) in self.columns)
        rows = [
            " ".join(n.rjust(width) for n in self.names),
            " ".join(str(v[0]).rjust(width) for v in self.vectors),
            " ".join(str(v[1]).rjust(width) for v in self.vectors),
        ]
        return "\n".join(rows)


@dataclass(frozen=True)
class ChamberDecomposition:
    rays: tuple[Vec, ...]
    multiplicity: tuple[tuple[int, ...], ...]  # column indices on each ray
    eff: tuple[Vec, Vec]
    mov: tuple[Vec, Vec] | None
    chambers: tuple[tuple[Vec, Vec], ...] = field(default=())

    def position(self, v: Sequence[int]) -> int:
        p = primitive(v)
        try:
            return self.rays.index(p)
        except ValueError:
            raise ToricError(f"{tuple(v)} is not a ray of the decomposition") from None

    def columns_on(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.multiplicity[self.position(v)]


def sorted_rays(vectors: Sequence[Vec]) -> tuple[list[Vec], list[list[int]]]:
    """Distinct primitive rays in clockwise order with the columns on each."""
    prims = [primitive(v) for v in vectors]
    first = None
    for i, c in enumerate(prims):
        if all(det(c, x) < 0 or same_ray(c, x) for x in prims):
            first = c
            break
    if first is None:
        raise ToricError("columns do not span a strictly convex cone")
    rays: list[Vec] = []
    for p in prims:
        if p not in rays:
            rays.append(p)
    rays.sort(key=cmp_to_key(ray_cmp))
    if rays[0] != first:
        raise ToricError("columns do not span a strictly convex cone")
    members = [[i for i, p in enumerate(prims) if p == r] for r in rays]
    return rays, members


def chambers(t: RankTwoToric | Sequence[Vec]) -> ChamberDecomposition:
    vectors = t.vectors if isinstance(t, RankTwoToric) else [tuple(v) for v in t]
    rays, members = sorted_rays(vectors)
    flat = [ri for ri, m in enumerate(members) for _ in m]
    eff = (rays[0], rays[-1])
    if len(flat) < 2:
        return ChamberDecomposition(tuple(rays), tuple(map(tuple, members)), eff, (rays[0], rays[0]), ())
    if len(rays) == 1:
        return ChamberDecomposition(tuple(rays), tuple(map(tuple, members)), eff, eff, ())
    lo, hi = flat[1], flat[-2]
    if lo > hi:
        mov = None
        ch = ()
    else:
        mov = (rays[lo], rays[hi])
        ch = tuple((rays[i], rays[i + 1]) for i in range(lo, hi))
    return ChamberDecomposition(tuple(rays), tuple(map(tuple, members)), eff, mov, ch)


def normalize_wall(t: RankTwoToric, ray: Sequence[int]) -> tuple[tuple[Vec, Vec], RankTwoToric]:
    """Unimodular A with A.ray on the positive first axis and columns before the ray above it."""
    if not any(same_ray(v, ray) for v in t.vectors):
        raise ToricError(f"{tuple(ray)} is not spanned by any column")
    p, q = primitive(ray)
    g, s, s2 = _ext_gcd(p, q)
    # s p + s2 q = 1 ; reduce s so the identity comes out for (1, 0)
    if (p, q) == (1, 0):
        s, s2 = 1, 0
    A = ((s, s2), (-q, p))
    return A, t.transform(A, f"normalized at ray {(p, q)}")


@dataclass(frozen=True)
class WallLoci:
    contracted: tuple[tuple[str, int], ...]
    extracted: tuple[tuple[str, int], ...]
    base: tuple[tuple[str, int], ...]

    @staticmethod
    def _w(xs):
        return tuple(w for _, w in xs)

    @property
    def contracted_weights(self):
        return self._w(self.contracted)

    @property
    def extracted_weights(self):
        return self._w(self.extracted)

    @property
    def base_weights(self):
        return self._w(self.base)


def side_split(t: RankTwoToric, ray: Sequence[int]):
    """Columns before, on and after ``ray`` with their transverse coordinates."""
    _, nt = normalize_wall(t, ray)
    before, on, after = [], [], []
    for n, v in nt.columns:
        if v[1] > 0:
            before.append((n, v[1]))
        elif v[1] < 0:
            after.append((n, -v[1]))
        else:
            on.append((n, v[0]))
    return before, on, after


def wall_loci(t: RankTwoToric, ray: Sequence[int]) -> WallLoci:
    """Weighted projective spaces contracted and extracted by crossing an interior wall."""
    dec = chambers(t)
    if dec.mov is None:
        raise ToricError("empty movable cone")
    pos = dec.position(ray)
    lo, hi = dec.position(dec.mov[0]), dec.position(dec.mov[1])
    if not lo < pos < hi:
        raise ToricError(f"ray {tuple(ray)} is not strictly inside the movable cone")
    before, on, after = side_split(t, ray)
    if not before or not after:
        raise ToricError("wall has an empty side")
    return WallLoci(tuple(before), tuple(after), tuple(on))


def well_form_rank2(t: RankTwoToric) -> tuple[RankTwoToric, int]:
    """Divide each row by its content; the product of the contents is the residual order."""
    r1, r2 = t.matrix()
    g1 = 0
    for x in r1:
        g1 = gcd(g1, x)
    g2 = 0
    for x in r2:
        g2 = gcd(g2, x)
    g1, g2 = g1 or 1, g2 or 1
    if g1 == g2 == 1:
        return t, 1
    cols = tuple((n, (v[0] // g1, v[1] // g2)) for n, v in t.columns)
    prov = "; ".join(x for x in (t.provenance, f"rows divided by ({g1},{g2})") if x)
    return RankTwoToric(cols, t.partition, prov), g1 * g2
