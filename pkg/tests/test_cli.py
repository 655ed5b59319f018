import json

import pytest

from birlinks.catalog import default_catalog, dump_catalog
from birlinks.cli import TABLE_HEADER, Report, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table_97_row(capsys):
    code, out, _ = run(capsys, "table", "--family", "97")
    lines = out.splitlines()
    assert code == 0
    assert lines[:2] == TABLE_HEADER
    assert lines[2].startswith("| 97 | 1/9(1,1,8) | flip (-8,-1,-1,1,3;5) |")
    assert lines[2].endswith("| Z₇ ⊂ ℙ(1,1,1,2,3), 1/2(1,1,1) |")


def test_table_89_del_pezzo(capsys):
    _, out, _ = run(capsys, "table", "--family", "89")
    assert out.splitlines()[2].endswith("| dP₃ / ℙ(1,1) |")


def test_table_marks_unverified_data(capsys):
    _, out, _ = run(capsys, "table", "--family", "106")
    rows = out.splitlines()[2:]
    assert rows and all(r.startswith("| 106 (data-unverified) |") for r in rows)


def test_table_excluded_centre_has_empty_endpoint(capsys):
    _, out, _ = run(capsys, "table", "--family", "111")
    row = next(r for r in out.splitlines() if "| 1/3(1,1,2) |" in r)
    assert "excluded by test class M·(-K)² = -2/77" in row
    assert row.endswith("|  |")


def test_table_102_with_assumption(capsys):
    _, out, _ = run(capsys, "table", "--family", "102", "--assume", "xi3t-absent")
    row = next(r for r in out.splitlines() if "| 1/3(1,1,2) |" in r)
    assert "antiflip (-7,-1,1,8) over 2 points" in row


def test_link_markdown(capsys):
    code, out, _ = run(capsys, "link", "118", "--centre", "1/3(1,1,2)")
    assert code == 0
    assert "conic bundle over P(1,2,3)" in out
    assert "verdict: TypeI-MoriFibreSpace" in out


def test_unknown_centre_exits_1(capsys):
    code, _, err = run(capsys, "link", "97", "--centre", "1/5(1,2,3)")
    assert code == 1
    assert "no centre of type 1/5(1,2,3)" in err


def test_unknown_family_exits_1(capsys):
    code, _, err = run(capsys, "exclude", "7")
    assert code == 1 and "catalog" in err


def test_requires_unprojection_exits_2(capsys):
    code, out, _ = run(capsys, "link", "111", "--centre-index", "3")
    assert code == 2
    assert "verdict: RequiresUnprojection" in out


def test_exclude_111(capsys):
    code, out, _ = run(capsys, "exclude", "111")
    assert code == 0
    assert "curves: excluded" in out
    assert "threshold 4/(ι²A³) = 231/2" in out
    assert "1/3(1,1,2): M·(-K)² = -2/77 ⇒ excluded" in out


def test_exclude_without_id_is_usage_error(capsys):
    code, _, err = run(capsys, "exclude")
    assert code == 1
    assert "Missing argument" in err


def test_json_round_trip(capsys):
    code, out, _ = run(capsys, "link", "97", "--centre", "1/9(1,1,8)", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["format"] == 1
    rep = Report.loads(out)
    assert rep.to_json() == data
    assert Report.loads(rep.dumps()) == rep
    assert rep.links[0].verdict == "TypeII-FanoModel"


def test_json_rejects_other_format():
    with pytest.raises(ValueError, match="format"):
        Report.from_json({"format": 2})


def test_catalog_option_and_env(tmp_path, capsys, monkeypatch):
    path = tmp_path / "cat.json"
    path.write_text(dump_catalog([default_catalog().family(97)]))
    code, out, _ = run(capsys, "table", "--catalog", str(path))
    assert code == 0 and len(out.splitlines()) == 3
    monkeypatch.setenv("BIRLINKS_CATALOG", str(path))
    code, _, err = run(capsys, "exclude", "118")
    assert code == 1 and "catalog" in err


def test_tags_lists_bi_member(capsys):
    code, out, _ = run(capsys, "tags")
    assert code == 0 and "bi-member" in out
