from fractions import Fraction as F

import pytest

from birlinks.blowup import linear_cqs_witness
from birlinks.catalog import family
from birlinks.game import (
    BAD_LINK,
    BIRATIONAL_INVOLUTION,
    REQUIRES_UNPROJECTION,
    TYPE_I,
    TYPE_II,
    Antiflip,
    DivisorialToPoint,
    Fibration,
    Flip,
    Flop,
    GameError,
    Isomorphism,
    del_pezzo_degree,
    discrepancy,
    is_crepant,
    run_link,
    step_from_json,
    step_to_json,
)


def kinds(link):
    return [s.kind for s in link.steps]


def test_97_full_run():
    link = run_link(family(97), "1/9(1,1,8)")
    assert link.verdict == TYPE_II
    assert kinds(link) == ["Isomorphism", "Flip", "DivisorialToPoint"]
    flip, end = link.steps[1], link.steps[2]
    assert flip.tuple_str() == "(-8,-1,-1,1,3;5)"
    assert sorted(w for _, w in flip.contracted) == [1, 1, 7, 8]
    assert sorted(w for _, w in flip.extracted) == [1, 3]
    assert end.target_weights == (1, 1, 1, 2, 3) and end.target_degrees == (7,)
    assert str(end.quotient) == "1/2(1,1,1)"
    assert end.discrepancy == F(1, 2)


def test_118_conic_bundle():
    link = run_link(family(118), "1/3(1,1,2)")
    assert link.verdict == TYPE_I
    flips = link.small_modifications()
    assert [f.tuple_str() for f in flips] == ["(-5,-1,2,3)"]
    end = link.endpoint
    assert isinstance(end, Fibration) and end.fibre == "Conic" and end.base_weights == (1, 2, 3)


def test_119_conic_bundle_through_isomorphisms():
    link = run_link(family(119), "1/7(1,3,4)")
    assert link.verdict == TYPE_I
    assert all(isinstance(s, Isomorphism) for s in link.steps[:-1])
    assert link.endpoint.fibre == "Conic" and link.endpoint.base_weights == (1, 2, 3)


def test_89_cubic_fibration():
    link = run_link(family(89), "1/5(1,1,4)")
    flip = link.steps[1]
    assert isinstance(flip, Flip) and flip.tuple_str() == "(-4,-1,-1,1,1;3)"
    assert link.endpoint.fibre == "DelPezzo" and link.endpoint.degree == 3
    assert link.endpoint.base_weights == (1, 1)


def test_102_flop_for_the_general_member():
    link = run_link(family(102), "1/3(1,1,2)")
    assert link.verdict == TYPE_II
    assert any(isinstance(s, Flop) for s in link.steps)


def test_105_tagged_is_bad_link():
    link = run_link(family(105), "1/3(1,1,2)", ("xi3t-absent",))
    assert link.verdict == BAD_LINK
    assert [type(s) for s in link.steps[:3]] == [Antiflip, Isomorphism, Antiflip]
    end = link.endpoint
    assert isinstance(end, DivisorialToPoint) and is_crepant(end.discrepancy)
    assert end.point == "1/2(1,1,1,1;2)"


@pytest.mark.parametrize("fid", [117, 125])
def test_bi_members_give_involutions(fid):
    f = family(fid)
    point = "1/4(1,1,3)" if fid == 117 else "1/2(1,1,1)"
    link = run_link(f, point, ("bi-member",))
    assert link.verdict == BIRATIONAL_INVOLUTION
    assert link.endpoint.discrepancy == F(1, link.blowup.r)


def test_117_general_member_is_not_an_involution():
    assert run_link(family(117), "1/4(1,1,3)").verdict == TYPE_II


def test_116_requires_unprojection():
    link = run_link(family(116), "1/2(1,1,1)")
    assert link.verdict == REQUIRES_UNPROJECTION


def test_115_cdv_endpoint():
    link = run_link(family(115), "1/11(1,2,9)")
    assert link.endpoint.discrepancy == 2


@pytest.mark.parametrize("fid", [94, 97, 98, 100, 105, 106, 108, 109, 110])
def test_linear_case_dichotomy(fid):
    f = family(fid)
    end = run_link(f, index=linear_cqs_witness(f)).endpoint
    gap = f.degrees[1] - f.degrees[0]
    if gap == f.fano_index:
        assert end.discrepancy == 1 and end.point_index == 1
    else:
        assert gap == 2 * f.fano_index
        assert str(end.quotient) == "1/2(1,1,1)"


def test_discrepancy_formula():
    assert discrepancy(1, F(1, 2), 0, 1) == F(1, 2)
    with pytest.raises(GameError):
        discrepancy(1, 1, 1, 1)
    with pytest.raises(GameError):
        discrepancy(1, 2, 1, 1)


def test_del_pezzo_degree():
    assert del_pezzo_degree((1, 1, 1, 1), (3,)) == 3
    assert del_pezzo_degree((1, 1, 1, 2), (4,)) == 2
    assert del_pezzo_degree((1, 1, 2, 3), (6,)) == 1
    assert del_pezzo_degree((1, 1, 1, 1, 1), (2, 2)) == 4


def test_steps_round_trip_json():
    for fid, point in [(97, "1/9(1,1,8)"), (118, "1/3(1,1,2)"), (113, "1/4(1,1,3)")]:
        for s in run_link(family(fid), point).steps:
            assert step_from_json(step_to_json(s)) == s
