"""Acceptance criteria 1-7.  Each test records one pass/fail line, printed in
the terminal summary (see conftest.py)."""

import random
from itertools import product

from cbvkit.graded import (
    Carrier,
    MultiMap,
    Permutation,
    act_on_map,
    hom_differential,
    insertion_bracket,
    linear_combination,
    pre_lie,
)
from cbvkit.homotopy import check_relations_N, validate_symmetries
from cbvkit.keys import keys_up_to
from cbvkit.cli import check_domain
from cbvkit.sampling import make_rng, random_valid_set
from cbvkit.shuffles import brute_force_straight_shuffles, enumerate_straight_shuffles, is_straight_shuffle
from cbvkit.strict import (
    build_de_rham,
    build_poisson,
    check_box,
    check_leibniz,
    check_second_order,
    classify_strict,
    derived_bracket,
    order_three_operator,
    poisson_bv,
    tensor_strict,
)
from cbvkit.tables import check_key, tabulated_keys
from cbvkit.ym import verify_ym, ym_carrier

from conftest import random_map

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(RESULTS[n])
    assert ok, RESULTS[n]


# 1 -------------------------------------------------------------------------


def test_criterion_1_table_reproduction():
    bad = []
    keys = tabulated_keys()
    for key in keys:
        res = check_key(key, trials=25, seed=None)
        if not res.equal:
            bad.append(f"{key.ascii()}@trial{res.witness['trial']}")
    record(1, not bad, f"{len(keys) - len(bad)}/{len(keys)} entries agree; disagreeing: {', '.join(bad) or 'none'}")


# 2 -------------------------------------------------------------------------


def _pairs(max_n):
    for k in range(1, max_n + 1):
        for p in product(range(1, max_n + 1), repeat=k):
            if sum(p) <= max_n:
                for q in product(*[range(1, x + 1) for x in p]):
                    yield q, p


def test_criterion_2_straight_shuffle_oracle():
    pairs = list(_pairs(6))
    mismatched = [
        (q, p) for q, p in pairs
        if {(d.sigma, d.l, d.r) for d in enumerate_straight_shuffles(q, p)}
        != {(d.sigma, d.l, d.r) for d in brute_force_straight_shuffles(q, p)}
    ]
    sigma = Permutation((2, 3, 11, 13, 4, 5, 10, 12, 1, 6, 7, 8, 9))
    example = is_straight_shuffle(sigma, (1, 0, 1, 0), (1, 2, 2, 2), (2, 2, 0, 0), (4, 4, 3, 2))
    record(2, not mismatched and example, f"{len(pairs)} pairs, {len(mismatched)} mismatches, example recognised: {example}")


# 3 -------------------------------------------------------------------------


def _dg_carrier(rng):
    lo = rng.randint(-2, 1)
    C = Carrier([("a", lo), ("b", lo + 1), ("c", rng.randint(-2, 2))])
    d = MultiMap.from_table(C, 1, 1, {("a",): {"b": rng.choice((1, 2, -1))}}, name="d")
    return C, d


def _sgn(x):
    return -1 if x % 2 else 1


def _dg_lie_defects(C, d, f, g, h):
    """Pairs (label, map that must vanish)."""
    out = []
    for s, t in ((Permutation.from_cycles("(12)", 3), Permutation.from_cycles("(123)", 3)),):
        if f.arity == 3:
            out.append(("action", linear_combination(
                C, 3, f.degree, [(1, act_on_map(act_on_map(f, s), t)), (-1, act_on_map(f, s * t))])))
    n = f.arity + g.arity + h.arity - 2
    deg = f.degree + g.degree + h.degree
    assoc = lambda x, y, z: linear_combination(C, n, deg, [(1, pre_lie(pre_lie(x, y), z)), (-1, pre_lie(x, pre_lie(y, z)))])  # noqa: E731
    out.append(("pre-Lie", linear_combination(C, n, deg, [(1, assoc(f, g, h)), (-_sgn(g.degree * h.degree), assoc(f, h, g))])))
    fg, gf = insertion_bracket(f, g), insertion_bracket(g, f)
    out.append(("antisymmetry", linear_combination(C, fg.arity, fg.degree, [(1, fg), (_sgn(f.degree * g.degree), gf)])))
    jac = [
        (_sgn(f.degree * h.degree), insertion_bracket(f, insertion_bracket(g, h))),
        (_sgn(g.degree * f.degree), insertion_bracket(g, insertion_bracket(h, f))),
        (_sgn(h.degree * g.degree), insertion_bracket(h, insertion_bracket(f, g))),
    ]
    out.append(("Jacobi", linear_combination(C, n, deg, jac)))
    lhs = hom_differential(d, fg)
    rhs = [(1, insertion_bracket(hom_differential(d, f), g)), (_sgn(f.degree), insertion_bracket(f, hom_differential(d, g)))]
    out.append(("derivation", linear_combination(C, fg.arity, fg.degree + 1, [(1, lhs)] + [(-c, x) for c, x in rhs])))
    return out


def test_criterion_3_dg_lie_suite():
    rng = random.Random(31)
    failures, tuples = [], 0
    while tuples < 100:
        C, d = _dg_carrier(rng)
        ar = [rng.randint(1, 3) for _ in range(3)]
        if sum(ar) - 2 > 5:
            continue
        f, g, h = (random_map(rng, C, a, rng.randint(-2, 2)) for a in ar)
        tuples += 1
        for label, defect in _dg_lie_defects(C, d, f, g, h):
            w = next((w for w in C.words(defect.arity) if defect.apply(w)), None)
            if w is not None:
                failures.append(f"{label} on tuple {tuples}")
    record(3, not failures, f"{tuples} random map tuples, failures: {failures[:3] or 'none'}")


# 4 -------------------------------------------------------------------------


def test_criterion_4_relations_N():
    rng = make_rng(None)
    bad, checked = [], 0
    for i in range(25):
        S = random_valid_set(rng, max_weight=3)
        if validate_symmetries(S):
            bad.append(f"set {i} not admissible")
        for key in keys_up_to(3):
            checked += 1
            if check_relations_N(S, key) is not None:
                bad.append(f"set {i} {key.ascii()}")
    record(4, not bad, f"25 random sets, {checked} relation checks, failures: {bad[:3] or 'none'}")


# 5 -------------------------------------------------------------------------


def test_criterion_5_yang_mills():
    words = check_domain(ym_carrier(4), 2)
    rep = verify_ym(4, words=words, max_arity=5)
    failed = [r.check_id for r in rep.failures()]
    asserted = sum(1 for r in rep.results if r.asserted)
    record(5, rep.ok, f"d=4, monomials of degree <= 2 up to arity 2, waves above; {asserted} asserted checks, failed: {failed or 'none'}")


# 6 -------------------------------------------------------------------------


def test_criterion_6_strict_suite():
    bad = []
    for dim in (1, 2, 3):
        for sig in ((1,) * dim, None):
            for domain in ("wave", "monomial"):
                S = build_de_rham(dim, sig, max_poly_degree=3, domain=domain)
                rep = classify_strict(S)
                if not (rep.ok and rep.flags["is-cBV"] and not rep.flags["is-BV"] and check_box(S).ok):
                    bad.append(S.name + " " + domain)
    P = build_poisson(2, [[0, 1], [-1, 0]])
    if not classify_strict(P).flags["is-eBV"]:
        bad.append("Poisson eBV")
    A = build_de_rham(1)
    if not classify_strict(tensor_strict(A, A)).flags["is-cBV"]:
        bad.append("cBV tensor cBV")
    B = poisson_bv(P)
    if not classify_strict(tensor_strict(B, B)).flags["is-BV"]:
        bad.append("BV tensor BV")
    record(6, not bad, f"12 de Rham runs, Poisson, two tensor products; failures: {bad or 'none'}")


# 7 -------------------------------------------------------------------------


def test_criterion_7_second_order_vs_leibniz():
    cases = []
    for dim in (1, 2, 3):
        for sig in ((1,) * dim, None):
            S = build_de_rham(dim, sig)
            cases.append((S.name, S.delta, S))
    P = build_poisson(2, [[0, 1], [-1, 0]])
    B = poisson_bv(P)
    A = build_de_rham(1)
    T = tensor_strict(A, A)
    TB = tensor_strict(B, B)
    cases += [("Poisson nabla", P.nabla, P), ("Poisson BV", B.delta, B), ("dR1 x dR1", T.delta, T), ("BV x BV", TB.delta, TB)]
    bad = []
    for name, op, S in cases:
        so = check_second_order(op, S).ok
        lb = check_leibniz(derived_bracket(op, S.m), S).ok
        if so and not lb:
            bad.append(name)
        if not so:
            bad.append(f"{name} not second order")
    S = build_de_rham(2)
    op = order_three_operator(S.carrier)
    order3_fails = not check_second_order(op, S).ok and not check_leibniz(derived_bracket(op, S.m), S).ok
    record(7, not bad and order3_fails, f"{len(cases)} second-order operators, mismatches: {bad or 'none'}; order-3 operator fails both: {order3_fails}")
