import pytest

from cbvkit.errors import ShapeError
from cbvkit.tables import (
    LITERAL_VARIANTS,
    TABULATED,
    _b,
    _o,
    _perms,
    check_key,
    d,
    exprs_equal_mod_symmetry,
    render_table,
    specialize_obstruction,
    table_keys,
    table_records,
    tabulated_keys,
)
from cbvkit.keys import m, n

# frozen oracle verdicts (6 trials, seed 1); see the decisions ledger for the analysis
AGREE = [n(0, 1, 1), n(1, 1), n(0, 1, 2), n(1, 2), n(2, 1), n(0, 1, 3), n(0, 1, 1, 2),
         n(1, 1, 1, 1), n(2, 2), n(2, 1, 1), n(3, 1)]
DISAGREE = [n(0, 1, 1, 1), n(1, 1, 1), n(0, 2, 2), n(1, 3), n(0, 1, 1, 1, 1), n(1, 1, 2)]


def test_key_counts():
    assert [len(table_keys(w)) for w in (1, 2, 3)] == [2, 5, 10]
    assert len(tabulated_keys()) == 17
    assert set(AGREE) | set(DISAGREE) == set(TABULATED)


@pytest.mark.parametrize("key", AGREE, ids=lambda k: k.ascii())
def test_entries_that_agree(key):
    assert check_key(key, trials=6, seed=1).equal


@pytest.mark.parametrize("key", DISAGREE, ids=lambda k: k.ascii())
def test_entries_that_disagree_carry_witnesses(key):
    res = check_key(key, trials=6, seed=1)
    assert not res.equal and res.witness


def test_sign_corrections_restore_agreement():
    fixes = {
        n(1, 1, 1): _b(d, m(1, 1, 1)) + _b(m(1, 1), m(0, 1, 1)),
        n(0, 1, 1, 1): _b(d, m(0, 1, 1, 1)) + _perms(_o(m(0, 1, 1), 1, m(0, 1, 1)), "id", "(123)", "(132)"),
        # the repeated term was meant to be m^1_{1,1} o_2 m^0_2
        n(1, 1, 2): TABULATED[n(1, 1, 2)] - _o(m(0, 1, 1), 2, m(1, 2)) + _o(m(1, 1, 1), 2, m(0, 2)),
    }
    for key, expr in fixes.items():
        assert exprs_equal_mod_symmetry(specialize_obstruction(key), expr, trials=6, seed=2).equal, key


def test_literal_form_of_n011_differs_from_its_bracket():
    key = n(0, 1, 1)
    assert not exprs_equal_mod_symmetry(specialize_obstruction(key), LITERAL_VARIANTS[key], trials=4, seed=1).equal


def test_rendering():
    text = render_table(1)
    assert text.splitlines()[0] == "obstructions of weight 1"
    assert "n^1_{1} = m^0_1 ∘ m^1_1 + m^1_1 ∘ m^0_1" in text
    assert len(render_table(4).splitlines()) == 1 + len(table_keys(4))
    assert table_records(1).count("\n") >= 1


def test_weight_bound():
    with pytest.raises(ShapeError):
        specialize_obstruction(n(0, 1, 1, 1, 1, 1, 1), bound=5)
