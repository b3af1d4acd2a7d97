"""Generating sets, symmetry validation, obstruction maps and classification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

from .errors import IncompleteStructureError, ShapeError, StructureError
from .formal import FormalExpr, Node
from .graded import (
    MultiMap,
    Permutation,
    _fmt_word,
    act_on_map,
    block_permutation,
    block_sign,
    first_difference,
    first_nonzero,
    linear_combination,
    partial_compose,
    permute_word,
)
from .keys import Op, keys_up_to, parse_key
from .report import Report
from .shuffles import enumerate_shuffles, enumerate_straight_shuffles, offsets, straight_extension


def _sgn(e):
    return -1 if e % 2 else 1


def _as_op(key, kind="m"):
    if isinstance(key, Op):
        return key
    if isinstance(key, str):
        return parse_key(key, kind)
    t, p = key
    return Op(kind, t, tuple(p))


def reshape(f, src, dst):
    """Given ``f = m_src`` return ``m_dst`` by block symmetry (``dst`` a
    rearrangement of ``src``; equal sizes are matched stably)."""
    src, dst = tuple(src), tuple(dst)
    if src == dst:
        return f
    if sorted(src) != sorted(dst):
        raise ShapeError(f"{dst} is not a block rearrangement of {src}")
    used = [False] * len(dst)
    order = []
    for size in src:
        j = next(j for j in range(len(dst)) if not used[j] and dst[j] == size)
        used[j] = True
        order.append(j)
    g = act_on_map(f, block_permutation(dst, order))
    return g if block_sign(dst, order) == 1 else -g


def _embed(perm, start, n):
    """``perm`` acting on positions ``start+1 .. start+perm.n`` of ``n``."""
    images = list(range(1, n + 1))
    for i in range(perm.n):
        images[start + i] = start + perm(i + 1)
    return Permutation(tuple(images))


# ---------------------------------------------------------------------------
# generating sets


class GeneratingSet:
    """A keyed family ``m^t_p`` over one carrier.

    Keys are stored canonically (sorted ``p``); other block orders are served
    through block symmetry.  Absent keys are the zero map when their weight
    exceeds ``truncation`` or when ``fill_zero`` is set, and an error otherwise.
    """

    def __init__(self, carrier, maps=None, truncation=None, fill_zero=False, name=""):
        self.carrier = carrier
        self.truncation = truncation
        self.fill_zero = fill_zero
        self.name = name
        self.maps = {}
        self._views = {}
        self._obstructions = {}
        for key, f in (maps or {}).items():
            self._insert(_as_op(key), f)

    def _insert(self, op, f):
        if op.kind != "m":
            raise ShapeError(f"generating sets hold m-keys, got {op}")
        if f.arity != op.arity:
            raise ShapeError(f"{op} needs arity {op.arity}, got {f.arity}")
        if f.degree != op.degree:
            raise StructureError(f"{op} needs degree {op.degree}, got {f.degree}")
        c = op.canonical()
        if c in self.maps:
            raise StructureError(f"{op} given twice (canonical form {c})")
        if self.truncation is not None and op.weight > self.truncation:
            if first_nonzero(f, self.carrier.test_words(f.arity)) is not None:
                raise StructureError(f"{op} has weight {op.weight} > truncation {self.truncation}")
        self.maps[c] = reshape(f, op.p, c.p)

    def keys(self):
        return sorted(self.maps, key=lambda k: (k.weight, k.t, k.k, k.p))

    def has(self, op):
        return _as_op(op).canonical() in self.maps

    def is_absent_zero(self, op):
        if self.fill_zero:
            return True
        return self.truncation is not None and op.weight > self.truncation

    def get(self, op):
        op = _as_op(op)
        if op.kind != "m":
            raise ShapeError(f"get() serves m-keys, got {op}")
        hit = self._views.get(op)
        if hit is not None:
            return hit
        c = op.canonical()
        f = self.maps.get(c)
        if f is None:
            if not self.is_absent_zero(op):
                raise IncompleteStructureError(f"generating map {op} is missing")
            f = MultiMap.zero(self.carrier, op.arity, op.degree, name=op.ascii())
        else:
            f = reshape(f, c.p, op.p)
        self._views[op] = f
        return f

    def with_maps(self, extra, truncation="same"):
        maps = dict(self.maps)
        for key, f in extra.items():
            op = _as_op(key)
            maps.pop(op.canonical(), None)
            maps[op] = f
        trunc = self.truncation if truncation == "same" else truncation
        return GeneratingSet(self.carrier, maps, trunc, self.fill_zero, self.name)

    # obstruction maps are memoised per set
    def obstruction(self, op, complement="shuffle", reading="total"):
        op = _as_op(op, "n")
        key = (op, complement, reading)
        hit = self._obstructions.get(key)
        if hit is None:
            expr = obstruction_formula(op, complement, reading)
            hit = expr.evaluate(self.carrier, self.resolver(complement, reading), degree=op.degree)
            hit.name = op.ascii()
            self._obstructions[key] = hit
        return hit

    def resolver(self, complement="shuffle", reading="total"):
        def resolve(op):
            if op.kind == "m":
                return self.get(op)
            return self.obstruction(op, complement, reading)

        return resolve


def weight0_row(S, max_arity):
    return [S.get(Op("m", 0, (n,))) for n in range(1, max_arity + 1)]


# ---------------------------------------------------------------------------
# symmetries


@dataclass(frozen=True)
class Violation:
    key: Op
    kind: str  # "block" or "shuffle"
    detail: str
    witness: tuple

    def __str__(self):
        return f"{self.key}: {self.kind} symmetry {self.detail} fails on {_fmt_word(self.witness)}"


def block_symmetry_maps(f, p):
    """Pairs ``(label, g)`` with ``g = +-f o sigma_bar - f`` for every block
    permutation preserving the profile (sign from ``block_sign``)."""
    out = []
    k = len(p)
    for sigma in permutations(range(k)):
        if sigma == tuple(range(k)) or any(p[sigma[j]] != p[j] for j in range(k)):
            continue
        perm = block_permutation(p, list(sigma))
        g = linear_combination(
            f.carrier, f.arity, f.degree, [(block_sign(p, list(sigma)), act_on_map(f, perm)), (-1, f)]
        )
        out.append((f"o{perm.cycle_str()}", g))
    return out


def shuffle_symmetry_maps(f, p):
    """Pairs ``(label, g)`` with ``g`` the signed shuffle sum inside one block."""
    out = []
    offs = offsets(p)
    n = sum(p)
    for i, pi in enumerate(p):
        for j in range(1, pi):
            pairs = [
                (sh.sign, act_on_map(f, _embed(sh, offs[i], n)))
                for sh in enumerate_shuffles(j, pi - j)
            ]
            g = linear_combination(f.carrier, f.arity, f.degree, pairs)
            out.append((f"block {i + 1}, Sh({j},{pi - j})", g))
    return out


def map_violations(key, f, words=None):
    words = f.carrier.test_words(f.arity) if words is None else words
    found = []
    for kind, checks in (("block", block_symmetry_maps(f, key.p)), ("shuffle", shuffle_symmetry_maps(f, key.p))):
        for label, g in checks:
            w = first_nonzero(g, words)
            if w is not None:
                found.append(Violation(key, kind, label, w))
    return found


def validate_symmetries(S, keys=None):
    """All block/shuffle symmetry violations of the stored maps."""
    out = []
    for key in keys if keys is not None else S.keys():
        key = _as_op(key).canonical()
        if key in S.maps:
            out.extend(map_violations(key, S.maps[key]))
    return out


def symmetrize(key, raw):
    """Average ``raw`` over the profile-preserving block permutations."""
    key = _as_op(key)
    if raw.arity != key.arity:
        raise ShapeError(f"{key} needs arity {key.arity}, got {raw.arity}")
    k = len(key.p)
    orders = [list(s) for s in permutations(range(k)) if all(key.p[s[j]] == key.p[j] for j in range(k))]
    if len(orders) == 1:
        return raw
    w = Fraction(1, len(orders))
    pairs = [(w * block_sign(key.p, s), act_on_map(raw, block_permutation(key.p, s))) for s in orders]
    return linear_combination(raw.carrier, raw.arity, raw.degree, pairs, name=raw.name)


# ---------------------------------------------------------------------------
# the obstruction formula


@dataclass(frozen=True)
class CompositionTerm:
    """One summand ``coeff * (outer o_pos inner) o perm`` of the main sum."""

    s: int
    I: tuple
    J: tuple
    q: tuple
    r: int
    outer_p: tuple
    position: int
    perm: Permutation
    coeff: int
    shuffle: object


def composition_terms(t, p, complement="shuffle", reading="total"):
    """Summands of the triple sum (over ``s``, ``I + J`` and straight shuffles),
    in a deterministic order."""
    p = tuple(p)
    k, n = len(p), sum(p)
    out = []
    for s in range(t + 1):
        for a in range(1, k + 1):
            for I in combinations(range(k), a):
                J = tuple(j for j in range(k) if j not in I)
                order = list(I) + list(J)
                beta = block_permutation(p, order)
                bsign = block_sign(p, order)
                pI = tuple(p[i] for i in I)
                pJ = tuple(p[j] for j in J)
                nI = sum(pI)
                for q in product(*(range(1, x + 1) for x in pI)):
                    r = 1 + nI - sum(q)
                    e = (sum(q) - a + 1) * (sum(pJ) - len(J)) + r - 1
                    for ds in enumerate_straight_shuffles(q, pI, complement):
                        sigma = Permutation(ds.sigma.images + tuple(range(nI + 1, n + 1)))
                        out.append(
                            CompositionTerm(
                                s, I, J, q, r, (r,) + pJ, ds.left + 1, sigma * beta,
                                bsign * _sgn(e) * ds.sign(reading), ds,
                            )
                        )
    return out


def split_terms(p):
    """``(i, j, profile, sign)`` for the block-splitting sum, ``sign`` being
    ``(-1)^{P_i + j - i}`` with 1-based ``i``."""
    p = tuple(p)
    offs = offsets(p)
    out = []
    for i, pi in enumerate(p):
        for j in range(1, pi):
            prof = p[:i] + (j, pi - j) + p[i + 1 :]
            out.append((i + 1, j, prof, _sgn(offs[i] + j - (i + 1))))
    return out


def _composite(outer, pos, inner, perm):
    tree = Node.leaf_vertex(outer).insert(pos, Node.leaf_vertex(inner))
    return tree, perm


def obstruction_formula(key, complement="shuffle", reading="total"):
    """The obstruction ``n^t_p`` as a formal expression in generator symbols."""
    key = _as_op(key, "n")
    if key.kind != "n":
        key = Op("n", key.t, key.p)
    t, p = key.t, key.p
    expr = FormalExpr(key.arity)
    for term in composition_terms(t, p, complement, reading):
        outer = Op("m", term.s, term.outer_p)
        inner = Op("m", t - term.s, term.q)
        expr._add(*_composite(outer, term.position, inner, term.perm), term.coeff)
    if t >= 1:
        ident = Permutation.identity(key.arity)
        for _, _, prof, sign in split_terms(p):
            expr._add(Node.leaf_vertex(Op("m", t - 1, prof)), ident, -sign)
    return expr


def relation_N_formula(key, complement="shuffle", reading="total"):
    """Left-hand side of the relation satisfied by the obstruction maps."""
    key = _as_op(key, "n")
    t, p = key.t, key.p
    expr = FormalExpr(key.arity)
    for term in composition_terms(t, p, complement, reading):
        a, b = len(term.I), len(term.J)
        inner_t = t - term.s
        if inner_t + a >= 2:
            extra = _sgn(sum(term.outer_p[1:]) - b + term.r - 1)
            outer = Op("m", term.s, term.outer_p)
            inner = Op("n", inner_t, term.q)
            expr._add(*_composite(outer, term.position, inner, term.perm), term.coeff * extra)
        if term.s + 1 + b >= 2:
            outer = Op("n", term.s, term.outer_p)
            inner = Op("m", inner_t, term.q)
            expr._add(*_composite(outer, term.position, inner, term.perm), -term.coeff)
    if t >= 1:
        ident = Permutation.identity(key.arity)
        for _, _, prof, sign in split_terms(p):
            expr._add(Node.leaf_vertex(Op("n", t - 1, prof)), ident, sign)
    return expr


def obstruction(S, key, complement="shuffle", reading="total"):
    """``n^t_p`` of the generating set ``S`` as a multilinear map."""
    return S.obstruction(_as_op(key, "n"), complement, reading)


def direct_obstruction(S, key, complement="shuffle", reading="total"):
    """Second evaluation route: block reordering followed by the literal
    straight-shuffle extension, without composition trees."""
    key = _as_op(key, "n")
    t, p = key.t, key.p
    carrier = S.carrier
    groups = {}
    for term in composition_terms(t, p, complement, reading):
        groups.setdefault((term.s, term.I, term.J, term.q), term)
    parts = []
    for (s, I, J, q), term in groups.items():
        order = list(I) + list(J)
        beta = block_permutation(p, order)
        pI = tuple(p[i] for i in I)
        nI = sum(pI)
        a, b = len(I), len(J)
        sign = block_permutation([x - 1 for x in p], order).sign
        sign *= _sgn((sum(q) - a + 1) * (sum(p[j] for j in J) - b) + term.r - 1)
        ext = straight_extension(S.get(Op("m", t - s, q)), q, pI, complement, reading)
        outer = S.get(Op("m", s, term.outer_p))
        parts.append((sign, beta, nI, ext, outer))
    splits = [(sgn, S.get(Op("m", t - 1, prof))) for _, _, prof, sgn in split_terms(p)] if t >= 1 else []

    def rule(w):
        out = {}
        for sign, beta, nI, ext, outer in parts:
            ks, y = permute_word(beta, w, carrier)
            head, tail = y[:nI], y[nI:]
            for hw, c in ext.apply(head).items():
                for atom, c2 in outer.apply(hw + tail).items():
                    v = out.get(atom, 0) + sign * ks * c * c2
                    if v:
                        out[atom] = v
                    else:
                        out.pop(atom, None)
        for sgn, f in splits:
            for atom, c in f.apply(w).items():
                v = out.get(atom, 0) - sgn * c
                if v:
                    out[atom] = v
                else:
                    out.pop(atom, None)
        return out

    return MultiMap(carrier, key.arity, key.degree, rule, name=f"direct {key.ascii()}")


# ---------------------------------------------------------------------------
# C-infinity relations and classification


def a_infinity_map(row, n):
    """``sum_{r+s+t=n} (-1)^{r+st} m_{r+1+t} o_{r+1} m_s`` for ``row = [m_1, m_2, ...]``."""
    carrier = row[0].carrier
    pairs = []
    for s in range(1, n + 1):
        for r in range(0, n - s + 1):
            t = n - s - r
            outer_arity = r + 1 + t
            if outer_arity > len(row) or s > len(row):
                continue
            pairs.append((_sgn(r + s * t), partial_compose(row[outer_arity - 1], r + 1, row[s - 1])))
    degree = 3 - n
    return linear_combination(carrier, n, degree, pairs, name=f"Ainf{n}")


def check_cinfty(S, max_arity=3, words=None, report=None):
    """A-infinity relations and shuffle vanishing of the weight-0 row."""
    report = report if report is not None else Report("C-infinity relations")
    row = weight0_row(S, max_arity)
    for n in range(1, max_arity + 1):
        ws = S.carrier.test_words(n) if words is None else words(n)
        w = first_nonzero(a_infinity_map(row, n), ws)
        report.add(f"A-infinity arity {n}", w is None, None if w is None else _fmt_word(w))
    for n in range(2, max_arity + 1):
        key = Op("m", 0, (n,))
        ws = S.carrier.test_words(n) if words is None else words(n)
        bad = map_violations(key, row[n - 1], ws)
        report.add(f"shuffle vanishing m0;{n}", not bad, str(bad[0]) if bad else None)
    return report


def obstruction_witness(S, key, words=None, complement="shuffle", reading="total"):
    f = obstruction(S, key, complement, reading)
    ws = S.carrier.test_words(f.arity) if words is None else words
    w = first_nonzero(f, ws)
    if w is None:
        return None
    return w, f.apply(w)


def _fmt_witness(w, out):
    body = " + ".join(f"({c})*{a!r}" for a, c in sorted(out.items(), key=lambda kv: repr(kv[0])))
    return f"{_fmt_word(w)} -> {body}"


def classify(S, n, words=None, complement="shuffle", reading="total"):
    """Obstruction report and flags for truncation order ``n``."""
    report = Report(f"classification at weight {n}")
    above = [k for k in S.keys() if k.weight > n]
    nonzero_above = [
        k for k in above if first_nonzero(S.maps[k], S.carrier.test_words(k.arity)) is not None
    ]
    vanish = {}
    for key in keys_up_to(n, "n"):
        wit = obstruction_witness(S, key, None if words is None else words(key.arity), complement, reading)
        vanish[key] = wit is None
        report.add(
            f"{key.ascii()} vanishes",
            wit is None,
            None if wit is None else _fmt_witness(*wit),
            asserted=False,
        )
    first_bad = next((k for k, v in vanish.items() if not v), None)
    report.flags[f"is-cBV({n})"] = not nonzero_above
    report.flags[f"is-BV({n})"] = not nonzero_above and all(vanish.values())
    report.flags[f"is-Gerst({n})"] = not nonzero_above and all(v for k, v in vanish.items() if k.t == 0)
    report.flags[f"is-shifted-L({n})"] = not nonzero_above and all(
        v for k, v in vanish.items() if k.t == 0 and all(x == 1 for x in k.p)
    )
    report.first_obstruction = first_bad
    return report


def check_relations_N(S, key, words=None, complement="shuffle", reading="total"):
    """Evaluate the relation satisfied by the obstruction maps; returns the
    first word on which it fails, or ``None``."""
    key = _as_op(key, "n")
    expr = relation_N_formula(key, complement, reading)
    f = expr.evaluate(S.carrier, S.resolver(complement, reading), degree=key.degree + 1)
    ws = S.carrier.test_words(key.arity) if words is None else words
    return first_nonzero(f, ws)


def extend_from_cinfty(row, extras=None, truncation=None, auto_symmetrize=False):
    """A generating set with ``m^0_n = row[n-1]``, the given extras, and every
    other key zero."""
    if not row:
        raise ShapeError("empty C-infinity row")
    carrier = row[0].carrier
    maps = {Op("m", 0, (i + 1,)): f for i, f in enumerate(row)}
    for key, f in (extras or {}).items():
        op = _as_op(key)
        if op.t == 0 and op.k == 1:
            raise StructureError(f"{op} belongs to the C-infinity row")
        if auto_symmetrize:
            f = symmetrize(op, f)
        bad = map_violations(op, f)
        if bad:
            raise StructureError(f"extra generator violates symmetry: {bad[0]}")
        maps[op] = f
    return GeneratingSet(carrier, maps, truncation=truncation, fill_zero=True)


def equal_maps(f, g, words=None):
    words = f.carrier.test_words(f.arity) if words is None else words
    return first_difference(f, g, words)
