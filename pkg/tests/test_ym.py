import pytest

from cbvkit.errors import StructureError
from cbvkit.graded import MultiMap, first_nonzero
from cbvkit.homotopy import obstruction
from cbvkit.keys import m, n
from cbvkit.poly import Mono
from cbvkit.ym import box_map, build_ym, random_theta3, verify_ym, ym_carrier


def mono(*e):
    return Mono(tuple(e))


@pytest.fixture(scope="module")
def ym4():
    return build_ym(4)


def test_carrier():
    C = ym_carrier(4)
    assert len(C) == 12
    assert [C.symbol_degree(s) for s in ("th+", "th0", "th-", "sth+", "sth3", "sth-")] == [0, 1, 2, 1, 2, 3]
    with pytest.raises(StructureError):
        ym_carrier(7)


def test_m1_on_theta_minus_is_box(ym4):
    m1 = ym4.get(m(0, 1))
    assert m1.apply((("th-", mono(2, 0, 0, 0)),)) == {("sth-", mono(0, 0, 0, 0)): 2}
    assert m1.apply((("th-", mono(0, 0, 2, 0)),)) == {("sth-", mono(0, 0, 0, 0)): -2}


def test_m2_on_theta_plus_multiplies(ym4):
    m2 = ym4.get(m(0, 2))
    out = m2.apply((("th+", mono(1, 0, 0, 0)), ("th+", mono(0, 1, 0, 0))))
    assert out == {("th+", mono(1, 1, 0, 0)): 1}


def test_m11_shifts_down(ym4):
    m11 = ym4.get(m(1, 1))
    assert m11.apply((("sth2", mono(0, 1, 0, 0)),)) == {("th2", mono(0, 1, 0, 0)): 1}
    assert m11.apply((("th2", mono(0, 0, 0, 0)),)) == {}


def test_n11_examples(ym4):
    n11 = obstruction(ym4, n(1, 1))
    one = mono(0, 0, 0, 0)
    assert n11.apply((("th+", mono(2, 0, 0, 0)),)) == {("th+", one): 2}
    assert n11.apply((("th+", mono(0, 2, 0, 0)),)) == {("th+", one): -2}
    assert n11.apply((("sth-", mono(1, 1, 0, 0)),)) == {}


def test_n11_is_box_on_waves(ym4):
    C = ym4.carrier
    diff = obstruction(ym4, n(1, 1)) - box_map(C)
    assert first_nonzero(diff, C.wave_words(1)) is None


def test_suite_passes_in_two_dimensions():
    rep = verify_ym(2)
    assert rep.ok, rep.text()
    assert rep["n0;1,2 (not asserted)"].detail == "nonzero"


def test_printed_m3_fails_arity_three():
    rep = verify_ym(2, m3_variant="printed", max_arity=3)
    assert not rep["C(2) A-infinity arity 3"].ok
    rep = verify_ym(2, m3_variant="covariant", m3_sign=1, max_arity=3)
    assert not rep["C(2) A-infinity arity 3"].ok


def test_n112_vanishes_for_a_random_theta3():
    C = ym_carrier(2)
    for admissible in (False, True):
        S = build_ym(2, random_theta3(C, seed=7, admissible=admissible))
        assert first_nonzero(obstruction(S, n(1, 1, 2)), C.wave_words(3)) is None


def test_theta3_dependent_identities_are_not_asserted():
    C = ym_carrier(2)
    rep = verify_ym(2, random_theta3(C, seed=3, admissible=True), max_arity=3)
    assert rep.ok
    assert not rep["n1;3 = [m1;1, m0;3] - m0;1,2 - m0;2,1"].asserted


def test_theta3_shape_checked():
    C = ym_carrier(2)
    with pytest.raises(StructureError):
        build_ym(2, MultiMap.zero(C, 3, -1))
    with pytest.raises(StructureError):
        build_ym(2, MultiMap.zero(C, 2, -2))
