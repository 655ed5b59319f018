from fractions import Fraction as F

import pytest

from birlinks.blowup import (
    BlowupError,
    NonCoordinateCentre,
    centres,
    find_centre,
    has_linear_cqs,
    is_linear,
    kawamata_blowup,
    linear_cqs_witness,
    min_vanishing_order,
    resolve_point,
)
from birlinks.catalog import family
from birlinks.exclusion import centre_orders
from birlinks.game import initial_discrepancy
from birlinks.wps import CyclicQuotientSingularity as CQS


def test_97_lifts():
    f = family(97)
    bl = kawamata_blowup(f, find_centre(f, CQS.parse("1/9(1,1,8)")))
    lifts = {n: (c.k_coef, c.e_coef) for n, c in bl.lift_table.items()}
    assert lifts["x"] == (F(1, 2), F(-1, 2))
    assert lifts["y"] == lifts["z"] == (1, 0)
    assert lifts["t"] == (F(5, 2), F(-1, 2))
    assert lifts["v"] == (F(7, 2), F(-1, 2))
    assert lifts["w"] == (F(9, 2), F(1, 2))
    assert bl.b == (5, 1, 1, 7, 8, 0)


def test_lift_string():
    f = family(97)
    bl = kawamata_blowup(f, find_centre(f, CQS.parse("1/9(1,1,8)")))
    assert str(bl.lift(5)) == "(9/2)(-K_Y)+(1/2)E"
    assert str(bl.lift(1)) == "(-K_Y)"


def test_111_stratum_orders():
    f = family(111)
    c = next(c for c in centres(f) if isinstance(c, NonCoordinateCentre) and c.singularity.r == 3)
    assert centre_orders(f, c) == (3, (1, 1, 0, 2, 0, 4))


def test_102_min_vanishing_order():
    f = family(102)
    c = find_centre(f, CQS.parse("1/3(1,1,2)"))
    assert min_vanishing_order(f, resolve_point(f, c.index, f.excluded_monomials())) == (F(5, 3), F(4, 3))


@pytest.mark.parametrize("fid,idx,expected", [(97, 5, True), (105, 2, False), (105, 3, True)])
def test_is_linear(fid, idx, expected):
    assert is_linear(family(fid), idx) is expected


@pytest.mark.parametrize("fid", [97, 105, 111, 118, 119])
def test_linear_witness_is_the_top_weight(fid):
    f = family(fid)
    assert has_linear_cqs(f)
    assert linear_cqs_witness(f) == 5


@pytest.mark.parametrize("fid", [89, 97, 102, 105, 111, 117, 118, 119])
def test_initial_discrepancy_is_one_over_r(fid):
    f = family(fid)
    for c in centres(f):
        if isinstance(c, NonCoordinateCentre):
            continue
        bl = kawamata_blowup(f, c)
        assert initial_discrepancy(bl) == F(1, bl.r)


def test_unknown_centre_type():
    with pytest.raises(BlowupError, match="no centre of type"):
        find_centre(family(97), CQS.parse("1/5(1,2,3)"))


def test_index_out_of_range():
    with pytest.raises(BlowupError, match="out of range"):
        find_centre(family(97), index=9)


def test_smooth_point_has_no_blowup():
    with pytest.raises(BlowupError, match="smooth"):
        resolve_point(family(97), 0)


def test_point_off_the_member():
    with pytest.raises(BlowupError, match="does not lie"):
        resolve_point(family(97), 3)
