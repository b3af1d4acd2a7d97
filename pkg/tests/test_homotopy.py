import pytest

from cbvkit.errors import IncompleteStructureError, ShapeError, StructureError
from cbvkit.graded import Carrier, MultiMap, Permutation, act_on_map, first_difference, insertion_bracket
from cbvkit.homotopy import (
    GeneratingSet,
    check_cinfty,
    check_relations_N,
    classify,
    direct_obstruction,
    extend_from_cinfty,
    map_violations,
    obstruction,
    obstruction_formula,
    symmetrize,
    validate_symmetries,
)
from cbvkit.keys import keys_up_to, m, n
from cbvkit.sampling import make_rng, random_admissible_map, random_cdga, random_valid_set

from conftest import random_map


def test_small_formulas_render():
    assert obstruction_formula(n(1, 1)).render() == "m^0_1 ∘ m^1_1 + m^1_1 ∘ m^0_1"
    assert obstruction_formula(n(2, 1)).arity == 1
    assert obstruction_formula(n(0, 1, 2)).arity == 3


def test_key_bookkeeping():
    assert m(0, 1, 2).degree == -2 and m(0, 1, 2).weight == 2
    assert n(1, 1).degree == 0 and n(1, 1).weight == 1
    assert len(keys_up_to(1)) == 2
    with pytest.raises(ShapeError):
        n(0, 1)


def test_stored_maps_are_canonicalised():
    rng = make_rng(3)
    C, d, prod = random_cdga(rng)
    f = random_admissible_map(rng, C, m(0, 1, 2))
    S = GeneratingSet(C, {m(0, 1): d, m(0, 2): prod, m(0, 1, 2): f}, fill_zero=True)
    g = S.get(m(0, 2, 1))
    # m_{2,1} = m_{1,2} o (123) up to the block sign, which is +1 here
    h = act_on_map(f, Permutation.from_cycles("(123)", 3))
    assert first_difference(g, h, C.words(3)) is None
    T = GeneratingSet(C, {m(0, 1): d, m(0, 2): prod, m(0, 2, 1): g}, fill_zero=True)
    assert first_difference(T.get(m(0, 1, 2)), f, C.words(3)) is None


def test_missing_and_misshapen_maps():
    C = Carrier([("a", 0), ("b", 1)])
    d = MultiMap.zero(C, 1, 1)
    S = GeneratingSet(C, {m(0, 1): d})
    with pytest.raises(IncompleteStructureError):
        S.get(m(0, 2))
    with pytest.raises(StructureError):
        GeneratingSet(C, {m(0, 1): MultiMap.zero(C, 1, 0)})
    with pytest.raises(ShapeError):
        GeneratingSet(C, {m(0, 2): d})
    big = MultiMap(C, 1, -1, lambda w: {"a": 1} if w == ("b",) else {})
    with pytest.raises(StructureError):
        GeneratingSet(C, {m(1, 1): big}, truncation=0)


def test_violations_found_and_symmetrize_repairs():
    rng = make_rng(5)
    C, _, _ = random_cdga(rng)
    raw = random_map(rng, C, 4, m(0, 2, 2).degree)
    key = m(0, 2, 2)
    fixed = symmetrize(key, raw)
    assert not [v for v in map_violations(key, fixed) if v.kind == "block"]
    assert random_admissible_map(rng, C, key) is not None
    assert not map_violations(key, random_admissible_map(rng, C, key))


def test_block_symmetry_signs_for_two_equal_blocks():
    rng = make_rng(8)
    C, _, _ = random_cdga(rng)
    f = random_admissible_map(rng, C, m(0, 2, 2))
    tau = Permutation((3, 4, 1, 2))
    assert first_difference(act_on_map(f, tau), f * -1, C.words(4)) is None


def test_two_evaluation_routes_agree():
    rng = make_rng(11)
    for _ in range(3):
        S = random_valid_set(rng, max_weight=3)
        for key in keys_up_to(3):
            if key.arity > 4:
                continue
            assert first_difference(obstruction(S, key), direct_obstruction(S, key), S.carrier.words(key.arity)) is None, key


def test_relations_N_hold_on_a_random_set():
    S = random_valid_set(make_rng(13), max_weight=3)
    assert not validate_symmetries(S)
    assert check_cinfty(S, 3).ok
    for key in keys_up_to(3):
        assert check_relations_N(S, key) is None, key


def test_classification_of_a_strict_bv_algebra():
    rng = make_rng(2)
    C, d, prod = random_cdga(rng)
    S = extend_from_cinfty([d, prod], {m(1, 1): MultiMap.zero(C, 1, -1)})
    rep = classify(S, 2)
    assert rep.flags["is-BV(2)"] and rep.flags["is-cBV(2)"]
    assert rep.first_obstruction is None


def test_classification_sees_weight_above_truncation():
    rng = make_rng(21)
    S = random_valid_set(rng, max_weight=2)
    rep = classify(S, 1)
    nonzero = any(
        any(S.maps[k].apply(w) for w in S.carrier.words(k.arity)) for k in S.keys() if k.weight > 1
    )
    assert rep.flags["is-cBV(1)"] is (not nonzero)


def test_n11_is_the_commutator():
    rng = make_rng(4)
    C, d, prod = random_cdga(rng)
    delta = random_admissible_map(rng, C, m(1, 1))
    S = extend_from_cinfty([d, prod], {m(1, 1): delta})
    assert first_difference(obstruction(S, n(1, 1)), insertion_bracket(d, delta), C.words(1)) is None
