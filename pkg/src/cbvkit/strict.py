"""Strict Com / cBV / BV / exact-BV algebras, derived brackets, diagonal
tensor products, and polynomial de Rham instances.

Polynomial instances are checked on wave words by default (symbolic
momenta, complete for constant-coefficient operators) and optionally on all
monomial words up to a coefficient degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import StructureError
from .graded import (
    Carrier,
    MultiMap,
    Permutation,
    _acc,
    _fmt_word,
    act_on_map,
    first_difference,
    first_nonzero,
    insertion_bracket,
    linear_combination,
    partial_compose,
    pre_lie,
)
from .poly import Mono, Wave
from .report import Report


@dataclass
class StrictStructure:
    """``(A, d, m)`` with optional ``delta`` (degree -1) and ``nabla`` (degree -2)."""

    carrier: Carrier
    d: MultiMap
    m: MultiMap
    delta: MultiMap | None = None
    nabla: MultiMap | None = None
    name: str = ""
    domain: str = "wave"
    max_poly_degree: int = 3
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for label, f, arity, degree in (
            ("d", self.d, 1, 1),
            ("m", self.m, 2, 0),
            ("delta", self.delta, 1, -1),
            ("nabla", self.nabla, 1, -2),
        ):
            if f is None:
                continue
            if f.arity != arity or f.degree != degree:
                raise StructureError(
                    f"{label} must have arity {arity} and degree {degree}, got {f.arity}, {f.degree}"
                )
        if self.domain not in ("wave", "monomial"):
            raise StructureError(f"unknown check domain {self.domain!r}")

    def words(self, n):
        c = self.carrier
        if c.is_polynomial and self.domain == "monomial":
            return c.monomial_words(n, self.max_poly_degree)
        return c.test_words(n)


def _check_zero(report, check_id, f, words, detail=""):
    w = first_nonzero(f, words)
    report.add(check_id, w is None, None if w is None else _fmt_word(w), detail)
    return w is None


def _check_equal(report, check_id, f, g, words, detail=""):
    w = first_difference(f, g, words)
    report.add(check_id, w is None, None if w is None else _fmt_word(w), detail)
    return w is None


def _combo(f, pairs, name=None):
    return linear_combination(f.carrier, f.arity, f.degree, pairs, name=name)


# ---------------------------------------------------------------------------
# checkers


def check_com(S, report=None):
    """d^2 = 0, symmetry, associativity and the derivation property."""
    report = report if report is not None else Report(f"Com checks for {S.name or 'structure'}")
    d, m = S.d, S.m
    _check_zero(report, "com.d-square", partial_compose(d, 1, d), S.words(1))
    swap = Permutation((2, 1))
    _check_equal(report, "com.symmetric", act_on_map(m, swap), m, S.words(2))
    _check_equal(report, "com.associative", partial_compose(m, 1, m), partial_compose(m, 2, m), S.words(3))
    _check_zero(report, "com.derivation", insertion_bracket(d, m), S.words(2))
    return report


def second_order_defect(op, m):
    """The seven-term combination whose vanishing is the second-order relation
    for ``op`` (any degree; the Koszul signs come from the compositions)."""
    m3 = partial_compose(m, 1, m)
    op_m = partial_compose(op, 1, m)
    t2 = partial_compose(m, 2, op_m)
    return linear_combination(
        m.carrier,
        3,
        op.degree,
        [
            (1, partial_compose(op, 1, m3)),
            (-1, partial_compose(m, 1, op_m)),
            (-1, t2),
            (-1, act_on_map(t2, Permutation((2, 1, 3)))),
            (1, pre_lie(m3, op)),
        ],
        name=f"so({op.name})",
    )


def check_second_order(op, S, report=None, check_id="second-order"):
    report = report if report is not None else Report(f"order <= 2 for {op.name}")
    _check_zero(report, check_id, second_order_defect(op, S.m), S.words(3))
    return report


def derived_bracket(op, m):
    """``b = [op, m]``."""
    b = insertion_bracket(op, m)
    b.name = f"[{op.name},{m.name}]"
    return b


def jacobi_defect(b):
    bb = partial_compose(b, 1, b)
    return _combo(
        bb,
        [
            (1, bb),
            (1, act_on_map(bb, Permutation.from_cycles("(123)", 3))),
            (1, act_on_map(bb, Permutation.from_cycles("(132)", 3))),
        ],
        name="jacobi",
    )


def leibniz_defect(b, m):
    """``b o_2 m - m o_1 b - (m o_2 b) o (12)``: the bracket is a derivation of
    the product in its second slot."""
    lhs = partial_compose(b, 2, m)
    return _combo(
        lhs,
        [
            (1, lhs),
            (-1, partial_compose(m, 1, b)),
            (-1, act_on_map(partial_compose(m, 2, b), Permutation((2, 1, 3)))),
        ],
        name="leibniz",
    )


def check_jacobi(b, S, report=None, check_id="jacobi"):
    report = report if report is not None else Report("Jacobi")
    _check_zero(report, check_id, jacobi_defect(b), S.words(3))
    return report


def check_leibniz(b, S, report=None, check_id="leibniz"):
    report = report if report is not None else Report("Leibniz")
    _check_zero(report, check_id, leibniz_defect(b, S.m), S.words(3))
    return report


def classify_strict(S):
    """Report with flags is-Com, is-cBV, is-BV, is-eBV."""
    rep = Report(f"strict classification of {S.name or 'structure'}")
    check_com(S, rep)
    is_com = rep.ok
    rep.flags["is-Com"] = is_com
    is_cbv = is_bv = False
    if S.delta is not None:
        delta = S.delta
        sq = _check_zero(rep, "cbv.delta-square", partial_compose(delta, 1, delta), S.words(1))
        so = check_second_order(delta, S, rep, "cbv.delta-second-order").results[-1].ok
        is_cbv = is_com and sq and so
        w = first_nonzero(insertion_bracket(S.d, delta), S.words(1))
        rep.add(
            "bv.obstruction-vanishes",
            w is None,
            None if w is None else _fmt_word(w),
            "n = [d, delta]",
            asserted=False,
        )
        is_bv = is_cbv and w is None
    else:
        rep.info("cbv", "no delta given")
    rep.flags["is-cBV"] = is_cbv
    rep.flags["is-BV"] = is_bv
    is_ebv = False
    if S.nabla is not None:
        nabla = S.nabla
        so = check_second_order(nabla, S, rep, "ebv.nabla-second-order").results[-1].ok
        inner = insertion_bracket(nabla, S.d)
        nab = _check_zero(rep, "ebv.nabla-equation", insertion_bracket(nabla, inner), S.words(1))
        is_ebv = is_com and so and nab
    rep.flags["is-eBV"] = is_ebv
    return rep


def obstruction_strict(S):
    """``n = [d, delta]``."""
    if S.delta is None:
        raise StructureError("no delta to take the obstruction of")
    n = insertion_bracket(S.d, S.delta)
    n.name = "n"
    return n


# ---------------------------------------------------------------------------
# diagonal tensor products


class _Shifted:
    """View of a function factor for the second tensor factor: derivative
    index ``mu`` refers to coordinate ``offset + mu``."""

    __slots__ = ("f", "offset")

    def __init__(self, f, offset):
        self.f, self.offset = f, offset

    def diff(self, mu):
        r = self.f.diff(mu + self.offset)
        if r is None:
            return None
        c, g = r
        return c, _Shifted(g, self.offset)

    def __mul__(self, other):
        return _Shifted(self.f * other.f, self.offset)

    def __eq__(self, other):
        return isinstance(other, _Shifted) and self.f == other.f and self.offset == other.offset

    def __hash__(self):
        return hash((self.f, self.offset))


def _unit_like(factor):
    if isinstance(factor, Wave):
        return Wave((), factor.dim)
    return Mono((0,) * len(factor.exps))


def _pair_symbol(a, b):
    return f"{a}|{b}"


def tensor_strict(A, B, name=None):
    """Diagonal tensor product: ``m = m (x) m``, ``d`` and ``delta`` act as
    derivations ``f (x) id + id (x) f`` with Koszul signs.

    For polynomial carriers the coefficient algebras are joined (coordinates
    of ``B`` come after those of ``A``); products are assumed linear over the
    coefficients, as for forms.
    """
    ca, cb = A.carrier, B.carrier
    poly = ca.is_polynomial or cb.is_polynomial
    if poly and not (ca.is_polynomial and cb.is_polynomial):
        raise StructureError("cannot tensor a polynomial carrier with a scalar one")
    basis = [(_pair_symbol(a, b), da + db) for a, da in ca.basis for b, db in cb.basis]
    split = {_pair_symbol(a, b): (a, b) for a, _ in ca.basis for b, _ in cb.basis}
    if poly:
        sig = tuple(ca.signature) + tuple(cb.signature)
        carrier = Carrier(basis, dim=ca.dim + cb.dim, signature=sig, name=name or f"{ca.name}x{cb.name}")
    else:
        carrier = Carrier(basis, name=name or f"{ca.name}x{cb.name}")
    off = ca.dim

    def parts(atom):
        if not poly:
            a, b = split[atom]
            return a, b, None
        a, b = split[atom[0]]
        return a, b, atom[1]

    def join(a, b, f):
        s = _pair_symbol(a, b)
        return s if not poly else (s, f)

    def on_a(op):
        def rule(w):
            a, b, f = parts(w[0])
            out = {}
            for x, c in op.apply(((a, f),) if poly else (a,)).items():
                xa, fx = (x[0], x[1]) if poly else (x, None)
                _acc(out, join(xa, b, fx), c)
            return out

        return rule

    def on_b(op):
        def rule(w):
            a, b, f = parts(w[0])
            sign = -1 if (op.degree * ca.symbol_degree(a)) % 2 else 1
            out = {}
            for x, c in op.apply(((b, _Shifted(f, off)),) if poly else (b,)).items():
                xb, fx = (x[0], x[1].f) if poly else (x, None)
                _acc(out, join(a, xb, fx), sign * c)
            return out

        return rule

    def derivation(fa, fb, label):
        if fa is None and fb is None:
            return None
        pairs = []
        if fa is not None:
            pairs.append((1, MultiMap(carrier, 1, fa.degree, on_a(fa))))
        if fb is not None:
            pairs.append((1, MultiMap(carrier, 1, fb.degree, on_b(fb))))
        degree = (fa or fb).degree
        return linear_combination(carrier, 1, degree, pairs, name=label)

    def m_rule(w):
        (a1, b1, f1), (a2, b2, f2) = parts(w[0]), parts(w[1])
        sign = -1 if (cb.symbol_degree(b1) * ca.symbol_degree(a2)) % 2 else 1
        if poly:
            ra = A.m.apply(((a1, f1), (a2, f2)))
            u = _Shifted(_unit_like(f1), off)
            rb = B.m.apply(((b1, u), (b2, u)))
        else:
            ra, rb = A.m.apply((a1, a2)), B.m.apply((b1, b2))
        out = {}
        for x, c in ra.items():
            for y, c2 in rb.items():
                if poly:
                    _acc(out, join(x[0], y[0], x[1]), sign * c * c2)
                else:
                    _acc(out, join(x, y, None), sign * c * c2)
        return out

    d = derivation(A.d, B.d, "d")
    m = MultiMap(carrier, 2, 0, m_rule, name="m")
    delta = derivation(A.delta, B.delta, "delta")
    nabla = derivation(A.nabla, B.nabla, "nabla")
    return StrictStructure(
        carrier, d, m, delta, nabla, name=name or f"{A.name} (x) {B.name}",
        domain=A.domain if A.domain == B.domain else "wave",
        max_poly_degree=min(A.max_poly_degree, B.max_poly_degree),
    )


# ---------------------------------------------------------------------------
# polynomial de Rham instances


def form_symbol(index):
    return "1" if not index else "^".join(f"dx{i}" for i in index)


def _insert_sign(mu, index):
    """Sign of moving ``dx^mu`` from the front into sorted position in ``index``."""
    return -1 if sum(1 for i in index if i < mu) % 2 else 1


def wedge_indices(I, J):
    """``(sign, I u J)`` for ``dx^I ^ dx^J``, or ``None`` when they overlap."""
    if set(I) & set(J):
        return None
    merged = list(I) + list(J)
    inv = sum(1 for x in range(len(merged)) for y in range(x + 1, len(merged)) if merged[x] > merged[y])
    return (-1 if inv % 2 else 1), tuple(sorted(merged))


def form_carrier(dim, signature=None, name=None):
    if not 1 <= dim <= 6:
        raise StructureError(f"dimension must be between 1 and 6, got {dim}")
    basis = [(form_symbol(I), k) for k in range(dim + 1) for I in combinations(range(dim), k)]
    return Carrier(basis, dim=dim, signature=signature, name=name or f"Omega(R^{dim})")


def _parse_form(symbol):
    return () if symbol == "1" else tuple(int(s[2:]) for s in symbol.split("^"))


def _dr_maps(carrier):
    dim = carrier.dim
    eta = carrier.signature

    def d_rule(w):
        (s, f), = w
        I = _parse_form(s)
        out = {}
        for mu in range(dim):
            if mu in I:
                continue
            r = f.diff(mu)
            if r is None:
                continue
            c, g = r
            _acc(out, (form_symbol(tuple(sorted(I + (mu,)))), g), _insert_sign(mu, I) * c)
        return out

    def wedge_rule(w):
        (s1, f1), (s2, f2) = w
        r = wedge_indices(_parse_form(s1), _parse_form(s2))
        if r is None:
            return {}
        sign, K = r
        return {(form_symbol(K), f1 * f2): Fraction(sign)}

    def codiff_rule(w):
        (s, f), = w
        I = _parse_form(s)
        out = {}
        for pos, mu in enumerate(I):
            r = f.diff(mu)
            if r is None:
                continue
            c, g = r
            sign = eta[mu] * (-1 if pos % 2 else 1)
            _acc(out, (form_symbol(I[:pos] + I[pos + 1 :]), g), sign * c)
        return out

    d = MultiMap(carrier, 1, 1, d_rule, name="d")
    wedge = MultiMap(carrier, 2, 0, wedge_rule, name="wedge")
    codiff = MultiMap(carrier, 1, -1, codiff_rule, name="dstar")
    return d, wedge, codiff


def build_de_rham(dim, signature=None, max_poly_degree=3, domain="wave"):
    """Forms with polynomial coefficients on ``R^dim`` with a constant diagonal
    metric: ``(d, wedge, d*)`` where ``d*(f dx^I) = sum eta^{mm} d_m f i_m dx^I``,
    normalised so that ``[d, d*] f = eta^{mn} d_m d_n f`` on functions."""
    carrier = form_carrier(dim, signature)
    d, wedge, codiff = _dr_maps(carrier)
    return StrictStructure(
        carrier, d, wedge, delta=codiff, name=f"deRham(d={dim}, eta={carrier.signature})",
        domain=domain, max_poly_degree=max_poly_degree,
    )


def box_operator(carrier):
    """``eta^{mm} d_m d_m`` acting on coefficients, form part untouched."""
    eta = carrier.signature

    def rule(w):
        (s, f), = w
        out = {}
        for mu in range(carrier.dim):
            r1 = f.diff(mu)
            if r1 is None:
                continue
            r2 = r1[1].diff(mu)
            if r2 is None:
                continue
            _acc(out, (s, r2[1]), eta[mu] * r1[0] * r2[0])
        return out

    return MultiMap(carrier, 1, 0, rule, name="box")


def check_box(S, report=None):
    """``[d, d*]`` equals the metric Laplacian on 0-forms."""
    report = report if report is not None else Report("box")
    words = [w for w in S.words(1) if w[0][0] == "1"]
    _check_equal(report, "box.functions", obstruction_strict(S), box_operator(S.carrier), words)
    return report


def build_poisson(dim, pi, max_poly_degree=3, domain="wave"):
    """Forms on ``R^dim`` with ``nabla = i_pi`` for a constant antisymmetric
    ``pi``: ``i_pi(dx^I) = sum_{a<b} pi^{ab} i_b i_a dx^I``."""
    pi = [[Fraction(x) for x in row] for row in pi]
    if len(pi) != dim or any(len(row) != dim for row in pi):
        raise StructureError(f"pi must be a {dim}x{dim} matrix")
    if any(pi[a][b] != -pi[b][a] for a in range(dim) for b in range(dim)):
        raise StructureError("pi must be antisymmetric")
    carrier = form_carrier(dim, (1,) * dim)
    d, wedge, _ = _dr_maps(carrier)

    def contract(mu, I):
        if mu not in I:
            return None
        pos = I.index(mu)
        return (-1 if pos % 2 else 1), I[:pos] + I[pos + 1 :]

    def rule(w):
        (s, f), = w
        I = _parse_form(s)
        out = {}
        for a in range(dim):
            for b in range(a + 1, dim):
                if not pi[a][b]:
                    continue
                r1 = contract(a, I)
                if r1 is None:
                    continue
                r2 = contract(b, r1[1])
                if r2 is None:
                    continue
                _acc(out, (form_symbol(r2[1]), f), pi[a][b] * r1[0] * r2[0])
        return out

    nabla = MultiMap(carrier, 1, -2, rule, name="i_pi")
    return StrictStructure(
        carrier, d, wedge, nabla=nabla, name=f"Poisson(d={dim})",
        domain=domain, max_poly_degree=max_poly_degree,
    )


def poisson_bv(P):
    """The BV structure ``delta = [nabla, d]`` induced by an exact one."""
    if P.nabla is None:
        raise StructureError("needs nabla")
    delta = insertion_bracket(P.nabla, P.d)
    delta.name = "[i_pi,d]"
    return StrictStructure(
        P.carrier, P.d, P.m, delta=delta, name=f"{P.name} BV",
        domain=P.domain, max_poly_degree=P.max_poly_degree,
    )


def order_three_operator(carrier, mu=0):
    """``d_mu^2 i_mu``: degree -1 and of order exactly three on forms."""

    def rule(w):
        (s, f), = w
        I = _parse_form(s)
        if mu not in I:
            return {}
        r1 = f.diff(mu)
        if r1 is None:
            return {}
        r2 = r1[1].diff(mu)
        if r2 is None:
            return {}
        pos = I.index(mu)
        sign = -1 if pos % 2 else 1
        return {(form_symbol(I[:pos] + I[pos + 1 :]), r2[1]): sign * r1[0] * r2[0]}

    return MultiMap(carrier, 1, -1, rule, name="order3")
