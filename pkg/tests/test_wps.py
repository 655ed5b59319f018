from fractions import Fraction

import pytest

from birlinks.catalog import family
from birlinks.wps import (
    CQSPoint,
    CyclicQuotientSingularity as C,
    SmoothPoint,
    WpsError,
    anticanonical_degree,
    coordinate_point_type,
    cqs_normal_form,
    is_terminal,
    is_well_formed,
    monomials,
    parse_monomial,
    variable_names,
)


@pytest.mark.parametrize("ws, ok", [((1, 2, 2, 5, 7, 9), True), ((2, 2, 4, 6, 8, 10), False), ((2, 3, 3, 4, 5, 7), True)])
def test_well_formed(ws, ok):
    assert is_well_formed(list(ws)) is ok


def test_well_formed_empty():
    with pytest.raises(WpsError):
        is_well_formed([])


@pytest.mark.parametrize("src, nf", [((9, (2, 2, 7)), (9, (1, 1, 8))), ((5, (2, 2, 3)), (5, (1, 1, 4))), ((2, (1, 1, 1)), (2, (1, 1, 1)))])
def test_normal_form(src, nf):
    assert cqs_normal_form(C(*src)) == C(*nf)


def test_normal_form_ill_formed():
    with pytest.raises(WpsError, match="not isolated"):
        cqs_normal_form(C(6, (2, 1, 5)))


@pytest.mark.parametrize("s, t", [(C(7, (1, 2, 5)), True), (C(4, (1, 1, 1)), False), (C(2, (1, 1, 1)), True)])
def test_terminal(s, t):
    assert is_terminal(s) is t


def test_parse_singularity():
    assert C.parse(" 1/9( 1,1,8 )") == C(9, (1, 1, 8))
    with pytest.raises(WpsError):
        C.parse("1/9(1,1)")


@pytest.mark.parametrize("fid, a3", [(111, Fraction(2, 231)), (102, Fraction(1, 21)), (105, Fraction(2, 45))])
def test_degree(fid, a3):
    assert anticanonical_degree(family(fid)) == a3


def test_point_97_top():
    f = family(97)
    p = coordinate_point_type(f, f.weights.index(9))
    assert isinstance(p, CQSPoint) and p.singularity == C(9, (1, 1, 8))
    assert sorted(f.weights[i] for i in p.eliminated) == [1, 5]


def test_point_105_top():
    f = family(105)
    p = coordinate_point_type(f, f.weights.index(9))
    assert p.singularity == C(9, (1, 1, 8))


def test_point_smooth():
    assert isinstance(coordinate_point_type(family(97), 0), SmoothPoint)


def test_monomials_count():
    ms = list(monomials((1, 2, 3), 6))
    assert len(ms) == 7 and all(a + 2 * b + 3 * c == 6 for a, b, c in ms)


def test_names_and_monomial_parse():
    names = variable_names((2, 2, 3, 5, 7, 9))
    assert names == ("x", "y", "z", "t", "v", "w")
    assert parse_monomial("z3t", names) == (0, 0, 3, 1, 0, 0)
    assert parse_monomial("x2w", names) == (2, 0, 0, 0, 0, 1)
