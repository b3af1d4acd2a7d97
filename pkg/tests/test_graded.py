from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cbvkit.errors import ArityError, StructureError
from cbvkit.graded import (
    Carrier,
    Element,
    MultiMap,
    Permutation,
    act_on_map,
    block_permutation,
    block_sign,
    check_square_zero,
    first_difference,
    hom_differential,
    insertion_bracket,
    koszul_permute,
    koszul_sign,
    linear_combination,
    partial_compose,
    pre_lie,
    tensor,
)

from conftest import random_map, small_carrier

perms = st.integers(1, 5).flatmap(lambda n: st.permutations(range(1, n + 1))).map(Permutation)


def bubble_sign(images, degrees):
    """Koszul sign by sorting the word into place with adjacent swaps."""
    pos = list(images)
    degs = list(degrees)
    s = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(pos) - 1):
            if pos[i] > pos[i + 1]:
                if degs[i] % 2 and degs[i + 1] % 2:
                    s = -s
                pos[i], pos[i + 1] = pos[i + 1], pos[i]
                degs[i], degs[i + 1] = degs[i + 1], degs[i]
                changed = True
    return s


@given(perms, st.data())
def test_koszul_sign_matches_adjacent_swaps(p, data):
    degs = data.draw(st.lists(st.integers(-3, 3), min_size=p.n, max_size=p.n))
    assert koszul_sign(p, degs) == bubble_sign(p.images, degs)


@given(perms, st.data())
def test_composition_convention(p, data):
    q = Permutation(tuple(data.draw(st.permutations(range(1, p.n + 1)))))
    assert all((p * q)(i) == p(q(i)) for i in range(1, p.n + 1))
    seq = tuple("abcde"[: p.n])
    assert (p * q).apply(seq) == p.apply(q.apply(seq))
    assert (p * p.inverse()).is_identity()


def test_cycles():
    c = Permutation.from_cycles("(123)", 3)
    assert c.images == (2, 3, 1)
    assert c.cycle_str() == "(123)"
    assert Permutation.from_cycles("(1,10,2)", 10)(10) == 2
    assert Permutation.from_cycles("(12)(34)", 4).sign == 1
    assert c.sign == 1 and Permutation.from_cycles("(12)", 2).sign == -1
    with pytest.raises(ValueError):
        Permutation((1, 1))


def test_left_action_on_words_is_a_group_action(rng):
    C = small_carrier(rng)
    x = Element.word(C.words(3)[5]) + Element.word(C.words(3)[17], 2)
    for a in permutations((1, 2, 3)):
        for b in permutations((1, 2, 3)):
            s, t = Permutation(a), Permutation(b)
            lhs = koszul_permute(s, koszul_permute(t, x, C), C)
            assert lhs == koszul_permute(s * t, x, C)


def test_right_action_on_maps(rng):
    C = small_carrier(rng)
    f = random_map(rng, C, 3, 1)
    for a in permutations((1, 2, 3)):
        for b in permutations((1, 2, 3)):
            s, t = Permutation(a), Permutation(b)
            lhs = act_on_map(act_on_map(f, s), t)
            assert first_difference(lhs, act_on_map(f, s * t), C.words(3)) is None


def test_tensor_sign():
    C = Carrier([("x", 1), ("y", 1)])
    e = tensor(Element.atom("x"), Element.atom("y"))
    swapped = koszul_permute(Permutation((2, 1)), e, C)
    assert swapped == Element.word(("y", "x"), -1)


def test_block_permutation_and_sign():
    assert block_permutation((1, 2), [1, 0]).images == (3, 1, 2)
    assert block_sign((2, 2), [1, 0]) == -1
    assert block_sign((1, 1), [1, 0]) == 1
    assert block_sign((2, 1, 2), [2, 1, 0]) == -1


def test_partial_compose_prefix_sign():
    C = Carrier([("x", 1), ("u", 0)])
    f = MultiMap.from_table(C, 2, 0, {("x", "u"): {"x": 1}})
    g = MultiMap.from_table(C, 1, 1, {("x",): {"u": 1}}, name="g")
    h = partial_compose(f, 2, g)
    # g jumps over x (odd) in the first slot
    assert h.apply(("x", "x")) == {"x": -1}
    assert h.degree == 1 and h.arity == 2
    with pytest.raises(ArityError):
        partial_compose(f, 3, g)


def _pre_lie_assoc(f, g, h):
    C = f.carrier
    return linear_combination(
        C, f.arity + g.arity + h.arity - 2, f.degree + g.degree + h.degree,
        [(1, pre_lie(pre_lie(f, g), h)), (-1, pre_lie(f, pre_lie(g, h)))],
    )


def test_pre_lie_and_jacobi(rng):
    for _ in range(5):
        C = small_carrier(rng)
        f, g, h = (random_map(rng, C, rng.randint(1, 2), rng.randint(-1, 1)) for _ in range(3))
        n = f.arity + g.arity + h.arity - 2
        s = -1 if (g.degree * h.degree) % 2 else 1
        lhs, rhs = _pre_lie_assoc(f, g, h), _pre_lie_assoc(f, h, g)
        assert first_difference(lhs, rhs * s, C.words(n)) is None
        fg, gf = insertion_bracket(f, g), insertion_bracket(g, f)
        sfg = -1 if (f.degree * g.degree) % 2 else 1
        assert first_difference(fg, gf * (-sfg), C.words(fg.arity)) is None


def test_hom_differential_squares_to_zero_and_needs_d2_zero():
    C = Carrier([("a", 0), ("b", 1)])
    d = MultiMap.from_table(C, 1, 1, {("a",): {"b": 1}}, name="d")
    f = MultiMap.from_table(C, 2, 0, {("a", "a"): {"a": 1}, ("a", "b"): {"b": 1}, ("b", "a"): {"b": 1}})
    df = hom_differential(d, f)
    ddf = hom_differential(d, df)
    assert all(not ddf.apply(w) for w in C.words(2))
    bad = MultiMap.from_table(C, 1, 1, {("a",): {"b": 1}, ("b",): {"a": 1}})
    with pytest.raises(StructureError):
        check_square_zero(MultiMap(C, 1, 1, lambda w: {"a": 1} if w == ("a",) else {}))
    with pytest.raises(StructureError):
        hom_differential(MultiMap(C, 1, 0, lambda w: {}), f)
    assert bad.degree == 1


def test_homogeneity_violations_detected():
    C = Carrier([("a", 0), ("b", 1)])
    f = MultiMap(C, 1, 0, lambda w: {"b": 1})
    assert f.homogeneity_violations(C.words(1))


def test_carrier_validation():
    with pytest.raises(StructureError):
        Carrier([("a", 0), ("a", 1)])
    with pytest.raises(StructureError):
        Carrier([("a", 0)], dim=2, signature=(1, 2))
    C = Carrier([("a", 0)], dim=2)
    assert C.signature == (1, -1)
    assert len(C.wave_words(2)) == 1
    assert len(C.monomial_words(1, 2)) == 6
