"""The Yang-Mills kinematic algebra ``K = Z (x) O`` as a truncated generating
set, and its verification suite.

Maps are written as sums of terms ``coeff * out_symbol * D_1 f_1 ... D_r f_r``
with each ``D_i`` a (possibly empty) string of partial derivatives.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import StructureError
from .graded import Carrier, MultiMap, Permutation, _acc, _fmt_word, act_on_map, first_difference, first_nonzero, insertion_bracket, linear_combination
from .homotopy import GeneratingSet, _fmt_witness, check_cinfty, map_violations, obstruction
from .keys import m, n
from .report import Report
from .sampling import random_admissible_map

M3_VARIANTS = ("printed", "covariant")


def ym_carrier(dim=4):
    if not 2 <= dim <= 6:
        raise StructureError(f"dimension must be between 2 and 6, got {dim}")
    basis = [("th+", 0)] + [(f"th{i}", 1) for i in range(dim)] + [("th-", 2)]
    basis += [("sth+", 1)] + [(f"sth{i}", 2) for i in range(dim)] + [("sth-", 3)]
    return Carrier(basis, dim=dim, name=f"K(d={dim})")


def _index(symbol, prefix):
    rest = symbol[len(prefix):]
    return int(rest) if symbol.startswith(prefix) and rest.isdigit() else None


def _apply_term(factors, derivs):
    """Product of ``D_i f_i``; ``None`` when some derivative kills a monomial."""
    coeff = 1
    out = None
    for f, ds in zip(factors, derivs):
        for mu in ds:
            r = f.diff(mu)
            if r is None:
                return None
            c, f = r
            coeff = coeff * c
        out = f if out is None else out * f
    return coeff, out


def _rule_from_terms(terms_for):
    """Build a map rule from ``terms_for(symbols) -> [(coeff, out, derivs)]``."""

    def rule(w):
        syms = tuple(a[0] for a in w)
        factors = [a[1] for a in w]
        out = {}
        for coeff, target, derivs in terms_for(syms):
            if not coeff:
                continue
            r = _apply_term(factors, derivs)
            if r is None:
                continue
            c, f = r
            _acc(out, (target, f), Fraction(coeff) * c)
        return out

    return rule


def _m1_terms(dim, eta):
    box = [(eta[mu], (mu, mu)) for mu in range(dim)]

    def terms(syms):
        (s,) = syms
        out = []
        if s == "th+":
            out += [(eta[mu], f"th{mu}", ((mu,),)) for mu in range(dim)]
            out += [(c, "sth+", (ds,)) for c, ds in box]
        elif s == "sth+":
            out += [(-eta[mu], f"sth{mu}", ((mu,),)) for mu in range(dim)]
            out.append((-1, "th-", ((),)))
        elif s == "th-":
            out += [(c, "sth-", (ds,)) for c, ds in box]
        elif (mu := _index(s, "th")) is not None:
            out += [(c, f"sth{mu}", (ds,)) for c, ds in box]
            out.append((1, "th-", ((mu,),)))
        elif (mu := _index(s, "sth")) is not None:
            out.append((-1, "sth-", ((mu,),)))
        return out

    return terms


def _m2_listed(dim, eta):
    """Terms of the listed ordered pairs, or ``None`` for an unlisted pair."""

    def terms(a, b):
        if a == "th+":
            if b == "th+":
                return [(1, "th+", ((), ()))]
            if b == "th-":
                return [(-eta[mu], f"sth{mu}", ((), (mu,))) for mu in range(dim)]
            if b == "sth-":
                return [(1, "sth-", ((), ()))]
            if (mu := _index(b, "th")) is not None:
                return [(1, f"th{mu}", ((), ())), (1, "sth+", ((mu,), ())), (1, "sth+", ((), (mu,)))]
            if (mu := _index(b, "sth")) is not None:
                return [(1, f"sth{mu}", ((), ()))]
            return None
        mu = _index(a, "th")
        if mu is None:
            return None
        if (nu := _index(b, "th")) is not None:
            out = [
                (1, f"sth{nu}", ((mu,), ())),
                (2, f"sth{nu}", ((), (mu,))),
                (-1, f"sth{mu}", ((), (nu,))),
                (-2, f"sth{mu}", ((nu,), ())),
            ]
            if mu == nu:
                for rho in range(dim):
                    c = eta[mu] * eta[rho]
                    out += [(c, f"sth{rho}", ((rho,), ())), (-c, f"sth{rho}", ((), (rho,)))]
            return out
        if b == "th-":
            return [(1, "sth-", ((), (mu,)))]
        if (nu := _index(b, "sth")) is not None:
            return [(-eta[mu], "sth-", ((), ()))] if mu == nu else []
        return None

    return terms


def _m3_terms(dim, eta, variant, sign):
    def terms(syms):
        return [(sign * c, out, ds) for c, out, ds in raw(syms)]

    def raw(syms):
        mu, nu, rho = (_index(s, "th") for s in syms)
        if mu is None or nu is None or rho is None:
            return []
        out = []
        if nu == rho:
            out.append((eta[nu], f"sth{mu}", ((), (), ())))
        if mu == rho:
            out.append((-2 * eta[mu], f"sth{nu}", ((), (), ())))
        if variant == "printed":
            out.append((eta[nu], f"sth{rho}", ((), (), ())))
        elif mu == nu:
            out.append((eta[mu], f"sth{rho}", ((), (), ())))
        return out

    return terms


def ym_maps(dim=4, m3_variant="covariant", m3_sign=-1):
    """``(carrier, m1, m2, m3)``; ``m2`` is completed from the listed ordered
    pairs by its symmetry, unlisted pairs map to zero.  ``m3`` is the listed
    trilinear map times ``m3_sign``; ``m3_variant`` picks ``eta_{nu nu}``
    ("printed") or ``eta_{mu nu}`` ("covariant") in its last term."""
    if m3_variant not in M3_VARIANTS:
        raise StructureError(f"m3 variant must be one of {M3_VARIANTS}")
    carrier = ym_carrier(dim)
    eta = carrier.signature
    m1 = MultiMap(carrier, 1, 1, _rule_from_terms(_m1_terms(dim, eta)), name="m1")
    listed = _m2_listed(dim, eta)

    def m2_terms(syms):
        a, b = syms
        direct = listed(a, b)
        if direct is not None:
            return direct
        swapped = listed(b, a)
        if swapped is None:
            return []
        sign = -1 if (carrier.symbol_degree(a) * carrier.symbol_degree(b)) % 2 else 1
        return [(sign * c, out, (ds[1], ds[0])) for c, out, ds in swapped]

    m2 = MultiMap(carrier, 2, 0, _rule_from_terms(m2_terms), name="m2")
    if m3_sign not in (1, -1):
        raise StructureError("m3_sign must be +1 or -1")
    m3 = MultiMap(carrier, 3, -1, _rule_from_terms(_m3_terms(dim, eta, m3_variant, m3_sign)), name="m3")
    return carrier, m1, m2, m3


def _m11(carrier):
    def rule(w):
        ((s, f),) = w
        if s.startswith("sth"):
            return {(s[1:], f): Fraction(1)}
        return {}

    return MultiMap(carrier, 1, -1, rule, name="m1_1")


def random_theta3(carrier, seed=None, density=0.3, admissible=False):
    """A random constant-coefficient trilinear map of degree -2.

    With ``admissible`` the resulting ``m^0_{1,2} = theta3 o (13)`` has the
    block and shuffle symmetries of its key."""
    rng = random.Random(seed)
    table = {}
    if admissible:
        twin = Carrier(carrier.basis, name="Z")
        f = random_admissible_map(rng, twin, m(0, 1, 2), density)
        f = act_on_map(f, Permutation.from_cycles("(13)", 3))
        for w in twin.words(3):
            out = f.apply(w)
            if out:
                table[w] = dict(out)
    else:
        by_degree = {}
        for s, d in carrier.basis:
            by_degree.setdefault(d, []).append(s)
        for a in carrier.symbols:
            for b in carrier.symbols:
                for c in carrier.symbols:
                    deg = carrier.word_degree((a, b, c)) - 2
                    for out in by_degree.get(deg, []):
                        if rng.random() < density:
                            table.setdefault((a, b, c), {})[out] = rng.choice((-2, -1, 1, 2))

    def rule(w):
        syms = tuple(x[0] for x in w)
        row = table.get(syms)
        if not row:
            return {}
        f = w[0][1] * w[1][1] * w[2][1]
        return {(o, f): Fraction(c) for o, c in row.items()}

    return MultiMap(carrier, 3, -2, rule, name="theta3")


def build_ym(dim=4, theta3=None, m3_variant="covariant", m3_sign=-1):
    """The truncated (weight <= 2) generating set of the kinematic algebra."""
    carrier, m1, m2, m3 = ym_maps(dim, m3_variant, m3_sign)
    if theta3 is not None:
        if theta3.arity != 3 or theta3.degree != -2:
            raise StructureError(f"theta3 must have arity 3 and degree -2, got {theta3.arity}, {theta3.degree}")
        if theta3.carrier is not carrier:
            theta3 = MultiMap(carrier, 3, -2, theta3.rule, name=theta3.name)
        m012 = act_on_map(theta3, Permutation.from_cycles("(13)", 3))
    else:
        m012 = MultiMap.zero(carrier, 3, -2, name="m0;1,2")
    m11 = _m11(carrier)
    zero = lambda key: MultiMap.zero(carrier, key.arity, key.degree, name=key.ascii())  # noqa: E731
    maps = {
        m(0, 1): m1,
        m(0, 2): m2,
        m(1, 1): m11,
        m(0, 1, 1): insertion_bracket(m11, m2),
        m(0, 3): m3,
        m(1, 2): zero(m(1, 2)),
        m(2, 1): zero(m(2, 1)),
        m(1, 1, 1): zero(m(1, 1, 1)),
        m(0, 1, 2): m012,
        m(0, 1, 1, 1): insertion_bracket(m11, m012),
    }
    return GeneratingSet(carrier, maps, truncation=2, name=f"YM(d={dim}, m3={m3_variant}, sign {m3_sign:+d})")


VANISHING = (n(1, 2), n(2, 1), n(1, 1, 1), n(1, 1, 2), n(2, 1, 1), n(2, 2), n(3, 1))


def box_map(carrier):
    eta = carrier.signature

    def rule(w):
        ((s, f),) = w
        out = {}
        for mu in range(carrier.dim):
            r = _apply_term([f], [(mu, mu)])
            if r is not None:
                _acc(out, (s, r[1]), eta[mu] * r[0])
        return out

    return MultiMap(carrier, 1, 0, rule, name="box")


def _check(report, check_id, w, detail="", asserted=True):
    report.add(check_id, w is None, None if w is None else _fmt_word(w), detail, asserted)


def verify_ym(dim=4, theta3=None, m3_variant="covariant", m3_sign=-1, max_arity=5, words=None):
    """Run the kinematic-algebra suite; ``words(n)`` overrides the test domain."""
    S = build_ym(dim, theta3, m3_variant, m3_sign)
    C = S.carrier
    W = (lambda k: C.test_words(k)) if words is None else words
    rep = Report(f"Yang-Mills kinematic algebra, d={dim}, m3 variant {m3_variant}, sign {m3_sign:+d}")
    for r in check_cinfty(S, max_arity, W).results:
        rep.add(f"C(2) {r.check_id}", r.ok, r.witness)
    n11 = obstruction(S, n(1, 1))
    _check(rep, "n1;1 = box", first_difference(n11, box_map(C), W(1)), "on all basis symbols")
    for key in VANISHING:
        _check(rep, f"{key.ascii()} = 0", first_nonzero(obstruction(S, key), W(key.arity)))
    m11 = S.get(m(1, 1))
    rhs = insertion_bracket(m11, S.get(m(0, 1, 1, 1)))
    # these two depend on theta3 through m^0_{1,2}; asserted only for the default theta3 = 0
    fixed = theta3 is None
    _check(rep, "n1;1,1,1 = [m1;1, m0;1,1,1]", first_difference(obstruction(S, n(1, 1, 1, 1)), rhs, W(3)), asserted=fixed)
    rhs = linear_combination(
        C, 3, -2,
        [(1, insertion_bracket(m11, S.get(m(0, 3)))), (-1, S.get(m(0, 1, 2))), (-1, S.get(m(0, 2, 1)))],
    )
    _check(rep, "n1;3 = [m1;1, m0;3] - m0;1,2 - m0;2,1", first_difference(obstruction(S, n(1, 3)), rhs, W(3)), asserted=fixed)
    for key in (n(0, 1, 2), n(0, 1, 1, 1)):
        f = obstruction(S, key)
        w = first_nonzero(f, W(key.arity))
        rep.info(
            f"{key.ascii()} (not asserted)",
            "vanishes" if w is None else "nonzero",
            None if w is None else _fmt_witness(w, f.apply(w)),
        )
    bad = [v for key in (m(0, 1, 2), m(0, 1, 1, 1)) for v in map_violations(key, S.get(key), W(key.arity))]
    rep.info("extra generator symmetries", "hold" if not bad else f"{len(bad)} violations", str(bad[0]) if bad else None)
    return rep
