"""Deformation-family records and the shipped catalog of codimension-2 Fano 3-folds."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Iterable

from .wps import (
    CQSPoint,
    CyclicQuotientSingularity,
    WpsError,
    coordinate_point_type,
    cqs_normal_form,
    is_well_formed,
    parse_monomial,
    variable_names,
)

SOLIDITY = ("S", "Cb", "dP")
FAMILY_KEYS = {"id", "weights", "degrees", "fano_index", "basket", "solidity", "assumptions"}
BASKET_KEYS = {"r", "a", "mult"}
ENV_VAR = "BIRLINKS_CATALOG"

DATA_UNVERIFIED = "data-unverified"
UNPROJECTION_PREFIX = "unprojection@"

# Named assumptions from the literature, keyed by (tag, family id).
# Each expands to monomial-exclusion tags of the form "<monomial>-absent-in-<f|g>".
TAG_ALIASES: dict[tuple[str, int], tuple[str, ...]] = {
    ("alpha=0", 105): ("tv-absent-in-f",),
    ("xi3t-absent", 102): ("z3t-absent-in-g",),
    ("xi3t-absent", 105): ("z3t-absent-in-g",),
    ("bi-member", 117): ("z2v-absent-in-g",),
    ("bi-member", 125): ("x4v-absent-in-g",),
}

TAG_HELP = {
    "<mono>-absent-in-<f|g>": "drop one monomial from the generic support of f (degree d1) or g (degree d2)",
    "alpha=0": "family 105: the coefficient of tv in f vanishes",
    "xi3t-absent": "families 102, 105: the monomial z^3 t is not in g (the 1/3 point is not the general one)",
    "bi-member": "families 117, 125: the special member whose link from the top-index point is a birational involution",
    DATA_UNVERIFIED: "catalog annotation: weights/degrees not independently confirmed; skipped by acceptance checks",
    UNPROJECTION_PREFIX + "<centre>": "catalog annotation: the game on Y leaves the game on the ambient at this centre",
}


class CatalogError(ValueError):
    """Schema or invariant violation in a catalog file."""


@dataclass(frozen=True)
class BasketEntry:
    singularity: CyclicQuotientSingularity
    mult: int

    def to_json(self) -> dict:
        return {"r": self.singularity.r, "a": list(self.singularity.weights), "mult": self.mult}


@dataclass(frozen=True)
class WciFamily:
    id: int
    weights: tuple[int, ...]
    degrees: tuple[int, int]
    fano_index: int
    basket: tuple[BasketEntry, ...]
    solidity: str
    assumptions: tuple[str, ...] = field(default=())

    @property
    def names(self) -> tuple[str, ...]:
        return variable_names(self.weights)

    @property
    def unverified(self) -> bool:
        return DATA_UNVERIFIED in self.assumptions

    def unprojection_centres(self) -> set[CyclicQuotientSingularity]:
        out = set()
        for tag in self.assumptions:
            if tag.startswith(UNPROJECTION_PREFIX):
                out.add(cqs_normal_form(CyclicQuotientSingularity.parse(tag[len(UNPROJECTION_PREFIX):])))
        return out

    def with_assumptions(self, tags: Iterable[str]) -> "WciFamily":
        merged = tuple(dict.fromkeys(tuple(self.assumptions) + tuple(tags)))
        fam = WciFamily(self.id, self.weights, self.degrees, self.fano_index, self.basket, self.solidity, merged)
        fam.excluded_monomials()  # validates the new tags
        return fam

    def excluded_monomials(self) -> frozenset[tuple[int, tuple[int, ...]]]:
        """(equation index, exponent vector) pairs removed from the generic support."""
        out = set()
        for tag in self.assumptions:
            for t in expand_tag(tag, self.id):
                if t is None:
                    continue
                mono, eq = t
                exps = parse_monomial(mono, self.names)
                deg = sum(e * a for e, a in zip(exps, self.weights))
                if deg != self.degrees[eq]:
                    raise CatalogError(
                        f"family {self.id}: tag {tag!r} names a monomial of degree {deg}, "
                        f"not {self.degrees[eq]}"
                    )
                out.add((eq, exps))
        return frozenset(out)

    def to_json(self) -> dict:
        d = {
            "id": self.id,
            "weights": list(self.weights),
            "degrees": list(self.degrees),
            "fano_index": self.fano_index,
            "basket": [b.to_json() for b in self.basket],
            "solidity": self.solidity,
        }
        if self.assumptions:
            d["assumptions"] = list(self.assumptions)
        return d


def expand_tag(tag: str, family_id: int) -> list[tuple[str, int] | None]:
    """Resolve a tag to (monomial, equation index) pairs; annotations map to None."""
    if tag == DATA_UNVERIFIED or tag.startswith(UNPROJECTION_PREFIX):
        return [None]
    if (tag, family_id) in TAG_ALIASES:
        return [r for t in TAG_ALIASES[(tag, family_id)] for r in expand_tag(t, family_id)]
    if tag.endswith("-absent-in-f") or tag.endswith("-absent-in-g"):
        mono = tag[: -len("-absent-in-f")]
        return [(mono, 0 if tag.endswith("f") else 1)]
    known = sorted({t for t, _ in TAG_ALIASES})
    raise CatalogError(
        f"unknown assumption tag {tag!r} for family {family_id}; "
        f"use '<mono>-absent-in-<f|g>' or one of {known}"
    )


def _require(cond: bool, fid, msg: str):
    if not cond:
        raise CatalogError(f"family {fid}: {msg}")


def validate(fam: WciFamily) -> WciFamily:
    """Check every invariant of a family record; returns it unchanged."""
    fid = fam.id
    _require(len(fam.weights) == 6 and all(a > 0 for a in fam.weights), fid, "weights must be 6 positive integers")
    _require(len(fam.degrees) == 2 and all(d > 0 for d in fam.degrees), fid, "degrees must be 2 positive integers")
    _require(fam.degrees[0] <= fam.degrees[1], fid, "degrees must satisfy d1 <= d2")
    _require(fam.solidity in SOLIDITY, fid, f"solidity must be one of {SOLIDITY}")
    i = fam.fano_index
    _require(i >= 1, fid, "fano_index must be positive")
    _require(
        sum(fam.weights) - sum(fam.degrees) == i,
        fid,
        f"adjunction fails: sum(weights) - d1 - d2 = {sum(fam.weights) - sum(fam.degrees)} != {i}",
    )
    if i == 4:
        _require(sum(1 for a in fam.weights if a % 2 == 0) == 2, fid, "index 4 needs exactly two even weights")
    else:
        multiples = [a for a in fam.weights if a % i == 0]
        _require(
            i in fam.weights and len(multiples) == 2,
            fid,
            f"index {i} needs one weight equal to {i} and exactly one other multiple of it",
        )
    _require(is_well_formed(list(fam.weights)), fid, "weights are not well formed")
    for b in fam.basket:
        s = b.singularity
        _require(b.mult >= 1, fid, f"basket multiplicity must be positive for {s}")
        _require(all(gcd(x, s.r) == 1 for x in s.weights), fid, f"basket entry {s} is not an isolated germ")
        _require(gcd(s.r, i) == 1, fid, f"basket index {s.r} shares a factor with the Fano index")
    fam.excluded_monomials()
    if not fam.unverified:
        cross_check_basket(fam)
    return fam


def cross_check_basket(fam: WciFamily):
    """Each basket entry realised at a unique-weight coordinate point must match its type."""
    types = {cqs_normal_form(b.singularity) for b in fam.basket}
    excluded = fam.excluded_monomials()
    for idx, a in enumerate(fam.weights):
        if a == 1 or fam.weights.count(a) > 1 or any(d % a == 0 for d in fam.degrees):
            continue
        try:
            t = coordinate_point_type(fam, idx, excluded)
        except WpsError:
            continue
        if isinstance(t, CQSPoint) and t.singularity not in types:
            raise CatalogError(
                f"family {fam.id}: coordinate point of weight {a} has type {t.singularity}, "
                f"absent from the stored basket"
            )


def family_from_json(obj: dict, where: str = "") -> WciFamily:
    if not isinstance(obj, dict):
        raise CatalogError(f"{where}: each entry must be a JSON object")
    unknown = set(obj) - FAMILY_KEYS
    if unknown:
        raise CatalogError(f"{where}: unknown keys {sorted(unknown)}")
    missing = FAMILY_KEYS - {"assumptions"} - set(obj)
    if missing:
        raise CatalogError(f"{where}: missing keys {sorted(missing)}")
    basket = []
    for j, b in enumerate(obj["basket"]):
        if not isinstance(b, dict) or set(b) != BASKET_KEYS:
            raise CatalogError(f"{where}: basket[{j}] must have exactly the keys {sorted(BASKET_KEYS)}")
        if len(b["a"]) != 3:
            raise CatalogError(f"{where}: basket[{j}].a must have 3 entries")
        basket.append(BasketEntry(CyclicQuotientSingularity(int(b["r"]), tuple(int(x) for x in b["a"])), int(b["mult"])))
    try:
        fam = WciFamily(
            id=int(obj["id"]),
            weights=tuple(int(a) for a in obj["weights"]),
            degrees=tuple(int(d) for d in obj["degrees"]),
            fano_index=int(obj["fano_index"]),
            basket=tuple(basket),
            solidity=obj["solidity"],
            assumptions=tuple(str(t) for t in obj.get("assumptions", [])),
        )
    except (TypeError, ValueError) as exc:
        raise CatalogError(f"{where}: {exc}") from exc
    return fam


def parse_catalog(text: str, source: str = "<string>") -> list[WciFamily]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, list):
        raise CatalogError(f"{source}: top level must be a JSON array")
    seen = set()
    out = []
    for n, obj in enumerate(data):
        fam = validate(family_from_json(obj, f"{source}: entry {n}"))
        if fam.id in seen:
            raise CatalogError(f"{source}: duplicate family id {fam.id}")
        seen.add(fam.id)
        out.append(fam)
    return out


def load_catalog(path: str | os.PathLike | None = None) -> list[WciFamily]:
    """Load and validate a catalog file; None means the shipped one (or $BIRLINKS_CATALOG)."""
    if path is None:
        path = os.environ.get(ENV_VAR)
    if path is None:
        text = resources.files("birlinks").joinpath("data/catalog.json").read_text()
        return parse_catalog(text, "built-in catalog")
    p = Path(path)
    if not p.exists():
        raise CatalogError(f"catalog file {p} does not exist")
    return parse_catalog(p.read_text(), str(p))


def dump_catalog(families: Iterable[WciFamily]) -> str:
    return json.dumps([f.to_json() for f in families], indent=1) + "\n"


class Catalog:
    """Read-only id -> family lookup."""

    def __init__(self, families: Iterable[WciFamily]):
        self._by_id = {f.id: f for f in families}

    @classmethod
    def load(cls, path=None) -> "Catalog":
        return cls(load_catalog(path))

    def family(self, fid: int) -> WciFamily:
        try:
            return self._by_id[fid]
        except KeyError:
            raise CatalogError(f"unknown family id {fid}; available: {sorted(self._by_id)}") from None

    def ids(self) -> list[int]:
        return sorted(self._by_id)

    def __iter__(self):
        return iter(self._by_id[i] for i in self.ids())

    def __len__(self):
        return len(self._by_id)


_DEFAULT: Catalog | None = None


def default_catalog() -> Catalog:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Catalog.load()
    return _DEFAULT


def family(fid: int) -> WciFamily:
    return default_catalog().family(fid)
