"""Formal linear combinations of composition trees of generator symbols.

A term is ``coefficient * (tree o perm)``: the tree is evaluated by partial
compositions (Koszul prefix signs), then precomposed with the permutation's
Koszul action.  The sign bookkeeping is therefore identical to that of
:func:`cbvkit.graded.partial_compose` and :func:`cbvkit.graded.act_on_map`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ArityError
from .graded import Permutation, act_on_map, linear_combination, partial_compose
from .keys import Op


@dataclass(frozen=True)
class Node:
    op: Op
    children: tuple  # entries are None (a leaf) or Node

    def __post_init__(self):
        if len(self.children) != self.op.arity:
            raise ArityError(f"{self.op} has arity {self.op.arity}, got {len(self.children)} children")

    @classmethod
    def leaf_vertex(cls, op):
        return cls(op, (None,) * op.arity)

    @property
    def arity(self):
        return sum(1 if c is None else c.arity for c in self.children)

    @property
    def degree(self):
        return self.op.degree + sum(c.degree for c in self.children if c is not None)

    def ops(self):
        out = {self.op}
        for c in self.children:
            if c is not None:
                out |= c.ops()
        return out

    def insert(self, i, other):
        """Graft ``other`` onto leaf ``i`` (1-based, left to right)."""
        if not 1 <= i <= self.arity:
            raise ArityError(f"leaf {i} out of range for arity {self.arity}")
        kids = list(self.children)
        pos = 0
        for j, c in enumerate(kids):
            width = 1 if c is None else c.arity
            if i <= pos + width:
                kids[j] = other if c is None else c.insert(i - pos, other)
                return Node(self.op, tuple(kids))
            pos += width
        raise AssertionError("unreachable")

    def prefix(self):
        """Prefix notation, leaves written as ``_``."""
        if all(c is None for c in self.children):
            return self.op.ascii()
        inner = ", ".join("_" if c is None else c.prefix() for c in self.children)
        return f"{self.op.ascii()}({inner})"

    def pretty(self):
        """Paper-style notation for trees with at most one grafted subtree per level."""
        grafted = [(j, c) for j, c in enumerate(self.children) if c is not None]
        if not grafted:
            return _pretty_op(self.op)
        if len(grafted) == 1:
            j, c = grafted[0]
            pos = 1 + sum(1 if x is None else x.arity for x in self.children[:j])
            inner = c.pretty()
            if any(x is not None for x in c.children):
                inner = f"({inner})"
            circ = "∘" if self.op.arity == 1 else f"∘_{pos}"
            return f"{_pretty_op(self.op)} {circ} {inner}"
        return self.prefix()


def _pretty_op(op):
    p = ",".join(map(str, op.p))
    return f"{op.kind}^{op.t}_{p}" if len(op.p) == 1 else f"{op.kind}^{op.t}_{{{p}}}"


class FormalExpr:
    """Exact linear combination of ``(tree, permutation)`` pairs of one arity."""

    def __init__(self, arity, terms=None):
        self.arity = arity
        self.terms = {}
        for (tree, perm), c in (terms or {}).items():
            self._add(tree, perm, c)

    def _add(self, tree, perm, c):
        if tree.arity != self.arity or perm.n != self.arity:
            raise ArityError(f"term of arity {tree.arity} in an expression of arity {self.arity}")
        key = (tree, perm)
        v = self.terms.get(key, 0) + Fraction(c)
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    @classmethod
    def generator(cls, op):
        return cls(op.arity, {(Node.leaf_vertex(op), Permutation.identity(op.arity)): 1})

    @classmethod
    def zero(cls, arity):
        return cls(arity)

    def copy(self):
        e = FormalExpr(self.arity)
        e.terms = dict(self.terms)
        return e

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if self.arity != other.arity:
            raise ArityError(f"arity {self.arity} + arity {other.arity}")
        e = self.copy()
        for (tree, perm), c in other.terms.items():
            e._add(tree, perm, c)
        return e

    def __mul__(self, scalar):
        e = FormalExpr(self.arity)
        for key, c in self.terms.items():
            e._add(*key, c * scalar)
        return e

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, FormalExpr) and self.arity == other.arity and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    def ops(self):
        out = set()
        for tree, _ in self.terms:
            out |= tree.ops()
        return out

    def degrees(self):
        return {tree.degree for tree, _ in self.terms}

    def permuted(self, perm):
        """``self o perm``."""
        e = FormalExpr(self.arity)
        for (tree, p), c in self.terms.items():
            e._add(tree, p * perm, c)
        return e

    def sorted_terms(self):
        return sorted(
            self.terms.items(), key=lambda kv: (kv[0][0].prefix(), kv[0][1].images)
        )

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for (tree, perm), c in self.sorted_terms():
            body = tree.pretty()
            if not perm.is_identity():
                body = f"({body}) ∘ {perm.cycle_str()}"
            if c == 1:
                parts.append(f"+ {body}")
            elif c == -1:
                parts.append(f"- {body}")
            elif c > 0:
                parts.append(f"+ {c} {body}")
            else:
                parts.append(f"- {-c} {body}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else s

    def records(self):
        """One record per term: coefficient, prefix tree, one-line permutation."""
        return [
            {
                "coefficient": f"{c.numerator}/{c.denominator}",
                "tree": tree.prefix(),
                "permutation": list(perm.images),
            }
            for (tree, perm), c in self.sorted_terms()
        ]

    def evaluate(self, carrier, resolve, degree=None):
        """The expression as a :class:`~cbvkit.graded.MultiMap`, ``resolve(op)``
        supplying each generator."""
        tree_maps = {}
        pairs = []
        for (tree, perm), c in self.terms.items():
            f = tree_maps.get(tree)
            if f is None:
                f = tree_maps[tree] = tree_map(tree, resolve)
            pairs.append((c, act_on_map(f, perm)))
        if degree is None:
            degs = self.degrees()
            degree = degs.pop() if len(degs) == 1 else None
        return linear_combination(carrier, self.arity, degree, pairs)


def tree_map(tree, resolve):
    f = resolve(tree.op)
    pos = tree.op.arity
    for c in reversed(tree.children):
        if c is not None:
            f = partial_compose(f, pos, tree_map(c, resolve))
        pos -= 1
    return f


# -- builders used by the transcribed tables ---------------------------------


def gen(op):
    return FormalExpr.generator(op)


def comp(f, i, g):
    """Partial composition of permutation-free expressions."""
    out = FormalExpr(f.arity + g.arity - 1)
    for (t1, p1), c1 in f.terms.items():
        for (t2, p2), c2 in g.terms.items():
            if not (p1.is_identity() and p2.is_identity()):
                raise ValueError("comp() needs permutation-free operands")
            out._add(t1.insert(i, t2), Permutation.identity(out.arity), c1 * c2)
    return out


def star(f, g):
    out = FormalExpr.zero(f.arity + g.arity - 1)
    for i in range(1, f.arity + 1):
        out = out + comp(f, i, g)
    return out


def bracket(f, g):
    df, dg = _degree(f), _degree(g)
    sign = -1 if (df * dg) % 2 else 1
    return star(f, g) - sign * star(g, f)


def _degree(e):
    degs = e.degrees()
    if len(degs) != 1:
        raise ValueError("bracket needs homogeneous operands")
    return degs.pop()
