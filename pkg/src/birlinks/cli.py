"""Command-line front end: single links, per-family tables and exclusion summaries."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import click

from .blowup import AmbiguousCentre, BlowupError, Centre, centres, find_centre
from .catalog import DATA_UNVERIFIED, TAG_HELP, Catalog, CatalogError
from .exclusion import ExclusionError, exclusion_report
from .game import (
    BAD_LINK,
    REQUIRES_UNPROJECTION,
    DivisorialToCurve,
    DivisorialToPoint,
    Fibration,
    GameError,
    SmallModification,
    run_link,
    step_from_json,
    step_to_json,
)
from .toric import ToricError
from .wps import CyclicQuotientSingularity, WpsError, is_terminal

FORMAT_VERSION = 1
EXIT_OK, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2

_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _wps(ws) -> str:
    return "ℙ(" + ",".join(map(str, ws)) + ")"


# --- report types ---------------------------------------------------------------------


@dataclass(frozen=True)
class LinkSummary:
    centre: str
    coordinate: str = ""
    verdict: str = ""
    steps: tuple = ()
    notes: tuple[str, ...] = ()
    excluded_by: str = ""
    error: str = ""

    def to_json(self) -> dict:
        return {
            "centre": self.centre,
            "coordinate": self.coordinate,
            "verdict": self.verdict,
            "steps": [step_to_json(s) for s in self.steps],
            "notes": list(self.notes),
            "excluded_by": self.excluded_by,
            "error": self.error,
        }

    @classmethod
    def from_json(cls, d: dict) -> "LinkSummary":
        return cls(
            d["centre"],
            d["coordinate"],
            d["verdict"],
            tuple(step_from_json(s) for s in d["steps"]),
            tuple(d["notes"]),
            d["excluded_by"],
            d["error"],
        )

    @property
    def excluded(self) -> bool:
        return self.verdict == BAD_LINK or bool(self.excluded_by)

    # markdown cells

    def small_cell(self) -> str:
        if self.error:
            return self.error + (f"; excluded by {self.excluded_by}" if self.excluded_by else "")
        mods = [s for s in self.steps if isinstance(s, SmallModification)]
        return ", ".join(s.describe() for s in mods) or "none"

    def blowup_cell(self) -> str:
        end = self.steps[-1] if self.steps else None
        if isinstance(end, DivisorialToPoint):
            return f"({','.join(map(str, end.blowup_weights))})/{end.point_index}, discrepancy {q(end.discrepancy)}"
        if isinstance(end, DivisorialToCurve):
            return f"discrepancy {q(end.discrepancy)}"
        return ""

    def endpoint_cell(self) -> str:
        if self.excluded:
            return ""
        end = self.steps[-1] if self.steps else None
        if isinstance(end, DivisorialToPoint):
            degs = ",".join(map(str, end.target_degrees)).translate(_SUB)
            fake = f"/μ{str(end.residual_order).translate(_SUB)}" if end.residual_order > 1 else ""
            return f"Z{degs} ⊂ {_wps(end.target_weights)}{fake}, {end.point}"
        if isinstance(end, DivisorialToCurve):
            degs = ",".join(map(str, end.target_degrees)).translate(_SUB)
            return f"Z{degs} ⊂ {_wps(end.target_weights)}, curve {end.curve}"
        if isinstance(end, Fibration):
            base = _wps(end.base_weights)
            if end.base_degrees:
                base = f"({','.join(map(str, end.base_degrees))}) ⊂ {base}"
            if end.fibre == "Conic":
                return f"conic bundle / {base}"
            return f"dP{str(end.degree).translate(_SUB)} / {base}"
        if self.verdict == REQUIRES_UNPROJECTION:
            return "requires unprojection"
        return "not computed"


@dataclass(frozen=True)
class Report:
    command: str
    family: int
    links: tuple[LinkSummary, ...] = ()
    exclusion: tuple[str, ...] = ()
    assumptions: tuple[str, ...] = ()
    annotations: tuple[str, ...] = ()
    format: int = field(default=FORMAT_VERSION)

    def to_json(self) -> dict:
        return {
            "format": self.format,
            "command": self.command,
            "family": self.family,
            "assumptions": list(self.assumptions),
            "annotations": list(self.annotations),
            "links": [l.to_json() for l in self.links],
            "exclusion": list(self.exclusion),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Report":
        if d.get("format") != FORMAT_VERSION:
            raise ValueError(f"unsupported report format {d.get('format')!r}")
        return cls(
            d["command"],
            d["family"],
            tuple(LinkSummary.from_json(l) for l in d["links"]),
            tuple(d["exclusion"]),
            tuple(d["assumptions"]),
            tuple(d["annotations"]),
            d["format"],
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, ensure_ascii=False)

    @classmethod
    def loads(cls, text: str) -> "Report":
        return cls.from_json(json.loads(text))

    def rows(self) -> list[str]:
        ref = str(self.family)
        if DATA_UNVERIFIED in self.annotations:
            ref += " (data-unverified)"
        return [
            f"| {ref} | {l.centre} | {l.small_cell()} | {l.blowup_cell()} | {l.endpoint_cell()} |"
            for l in self.links
        ]


TABLE_HEADER = [
    "| family | centre | small modifications | final blowup | endpoint |",
    "|---|---|---|---|---|",
]


# --- building reports -------------------------------------------------------------------

_ENGINE_ERRORS = (BlowupError, GameError, ToricError, WpsError, ExclusionError, ValueError)


def _summarise(fam, centre, tests) -> LinkSummary:
    s = centre.singularity
    test = tests.get(str(s))
    excluded_by = f"test class M·(-K)² = {q(test.value)}" if test is not None and test.excluded else ""
    if not isinstance(centre, Centre):
        return LinkSummary(str(s), "", "", (), (), excluded_by, f"not a coordinate point: {centre.reason}")
    coord = fam.names[centre.index]
    try:
        link = run_link(fam, centre)
    except _ENGINE_ERRORS as exc:
        return LinkSummary(str(s), coord, "", (), (), excluded_by, f"{type(exc).__name__}: {exc}")
    return LinkSummary(str(s), coord, link.verdict, link.steps, link.notes, excluded_by)


def _annotations(fam) -> tuple[str, ...]:
    return tuple(t for t in fam.assumptions if t == DATA_UNVERIFIED or t.startswith("unprojection@"))


def family_report(fam, assumptions=()) -> Report:
    """All terminal basket centres of one family, with exclusion results folded in."""
    fam = fam.with_assumptions(assumptions) if assumptions else fam
    cs = [c for c in centres(fam) if is_terminal(c.singularity)]
    rep = exclusion_report(fam)
    tests = {str(t.singularity): t for t in rep.tests}
    links = tuple(_summarise(fam, c, tests) for c in cs)
    bad = [CyclicQuotientSingularity.parse(l.centre) for l in links if l.verdict == BAD_LINK]
    if bad:
        rep = exclusion_report(fam, bad)
    return Report("table", fam.id, links, tuple(rep.lines()), tuple(assumptions), _annotations(fam))


def link_report(fam, centre_spec=None, centre_index=None, assumptions=()) -> Report:
    fam = fam.with_assumptions(assumptions) if assumptions else fam
    if centre_spec is not None:
        c = find_centre(fam, spec=CyclicQuotientSingularity.parse(centre_spec))
    else:
        c = find_centre(fam, index=centre_index)
    link = run_link(fam, c)
    summary = LinkSummary(str(c.singularity), fam.names[c.index], link.verdict, link.steps, link.notes)
    return Report("link", fam.id, (summary,), (), tuple(assumptions), _annotations(fam))


def exclude_report(fam, assumptions=()) -> Report:
    full = family_report(fam, assumptions)
    return Report("exclude", fam.id, (), full.exclusion, full.assumptions, full.annotations)


# --- rendering ---------------------------------------------------------------------------


def render_link_md(rep: Report) -> str:
    l = rep.links[0]
    out = [f"family {rep.family}, centre {l.centre} (coordinate point of {l.coordinate})"]
    if rep.assumptions:
        out.append("assumptions: " + ", ".join(rep.assumptions))
    for n, s in enumerate(l.steps, 1):
        out.append(f"{n}. {s.describe()}")
    out.append(f"verdict: {l.verdict}")
    out += [f"note: {n}" for n in l.notes]
    out.append("")
    out += TABLE_HEADER + rep.rows()
    return "\n".join(out)


def render_exclude_md(rep: Report) -> str:
    head = f"family {rep.family}"
    if DATA_UNVERIFIED in rep.annotations:
        head += " (data-unverified)"
    return head + "\n" + "; ".join(rep.exclusion)


# --- click -----------------------------------------------------------------------------


def _catalog(path) -> Catalog:
    return Catalog.load(path)


catalog_opt = click.option(
    "--catalog",
    "catalog_path",
    type=click.Path(dir_okay=False),
    default=None,
    envvar="BIRLINKS_CATALOG",
    help="Catalog JSON (default: $BIRLINKS_CATALOG or the shipped one).",
)
format_opt = click.option("--format", "fmt", type=click.Choice(["md", "json"]), default="md", show_default=True)
assume_opt = click.option("--assume", "tags", multiple=True, metavar="TAG", help="Assumption tag; repeatable (see `tags`).")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Sarkisov links from codimension 2 Fano 3-folds of index at least 2."""


@cli.command()
@click.argument("family_id", type=int)
@click.option("--centre", "centre_spec", metavar="1/r(b1,b2,b3)", help="Centre by singularity type.")
@click.option("--centre-index", type=int, metavar="N", help="Centre as the coordinate point of variable N (0-5).")
@assume_opt
@catalog_opt
@format_opt
def link(family_id, centre_spec, centre_index, tags, catalog_path, fmt):
    """Play the 2-ray game from one centre."""
    if (centre_spec is None) == (centre_index is None):
        raise click.UsageError("give exactly one of --centre and --centre-index")
    fam = _catalog(catalog_path).family(family_id)
    rep = link_report(fam, centre_spec, centre_index, tags)
    click.echo(rep.dumps() if fmt == "json" else render_link_md(rep))
    if rep.links[0].verdict == REQUIRES_UNPROJECTION:
        sys.exit(EXIT_UNDECIDED)


@cli.command()
@click.option("--family", "families", type=int, multiple=True, help="Restrict to these ids; repeatable.")
@assume_opt
@catalog_opt
@format_opt
def table(families, tags, catalog_path, fmt):
    """One row per (family, terminal basket centre)."""
    cat = _catalog(catalog_path)
    ids = list(families) or cat.ids()
    reports = [family_report(cat.family(i), tags) for i in sorted(set(ids))]
    if fmt == "json":
        click.echo(json.dumps({"format": FORMAT_VERSION, "reports": [r.to_json() for r in reports]}, indent=1, ensure_ascii=False))
    else:
        click.echo("\n".join(TABLE_HEADER + [row for r in reports for row in r.rows()]))


@cli.command()
@click.argument("family_id", type=int)
@assume_opt
@catalog_opt
@format_opt
def exclude(family_id, tags, catalog_path, fmt):
    """Curve bound, isolating threshold and test-class values for every centre."""
    fam = _catalog(catalog_path).family(family_id)
    rep = exclude_report(fam, tags)
    click.echo(rep.dumps() if fmt == "json" else render_exclude_md(rep))


@cli.command()
def tags():
    """List the assumption tags understood by --assume."""
    for k, v in TAG_HELP.items():
        click.echo(f"{k}\n    {v}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="birlinks", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_ERROR
    except click.exceptions.Abort:
        return EXIT_ERROR
    except AmbiguousCentre as exc:
        click.echo(f"error: ambiguous centre: {exc}", err=True)
        for c in exc.candidates:
            click.echo(f"  candidate: {c}", err=True)
        return EXIT_UNDECIDED
    except CatalogError as exc:
        click.echo(f"error: catalog: {exc}", err=True)
        return EXIT_ERROR
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    except _ENGINE_ERRORS as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
