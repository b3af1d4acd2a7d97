"""Exact sparse polynomials and the two kinds of function factors used by
polynomial carriers.

A polynomial carrier is ``Z (x) O`` with ``O`` a polynomial algebra in ``d``
commuting variables.  Its atoms are pairs ``(symbol, factor)`` where the
factor is one of

* :class:`Mono` -- a concrete monomial ``x^a``; derivatives act by the power
  rule, so evaluation is literal;
* :class:`Wave` -- a formal plane wave ``exp(k_{i1} x) ... exp(k_{ir} x)``
  labelled by the input slots whose momenta it carries.  ``d/dx^mu`` acts by
  multiplying the coefficient with ``sum_{i in slots} k_{i,mu}``.

Constant-coefficient multi-differential operators vanish iff their symbol
vanishes, so an identity checked on waves with symbolic momenta holds for
every polynomial (indeed every smooth) input.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement


class Poly:
    """Polynomial over Q in integer-indexed variables.

    Stored as ``{monomial: coefficient}`` where a monomial is a sorted tuple of
    ``(variable, exponent)`` pairs.  No zero coefficients are stored.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)
        self._hash = None

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, i):
        return cls({((i, 1),): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == {(): Fraction(other)}

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        p = Poly()
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Poly()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not other:
                return Poly()
            p = Poly()
            p.terms = {m: c * other for m, c in self.terms.items()}
            return p
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        p = Poly()
        p.terms = out
        return p

    __rmul__ = __mul__

    def degree(self):
        return max((sum(e for _, e in m) for m in self.terms), default=-1)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(f"k{v}" + (f"^{e}" if e > 1 else "") for v, e in m)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Mono:
    """Monomial ``x^exps`` in ``len(exps)`` variables."""

    __slots__ = ("exps",)

    def __init__(self, exps):
        self.exps = tuple(exps)

    def __eq__(self, other):
        return isinstance(other, Mono) and self.exps == other.exps

    def __hash__(self):
        return hash(("M", self.exps))

    def __lt__(self, other):
        return (sum(self.exps), self.exps) < (sum(other.exps), other.exps)

    def __mul__(self, other):
        return Mono(a + b for a, b in zip(self.exps, other.exps))

    def diff(self, mu):
        """Return ``(coefficient, monomial)`` for ``d/dx^mu`` or ``None``."""
        e = self.exps[mu]
        if e == 0:
            return None
        ex = list(self.exps)
        ex[mu] -= 1
        return Fraction(e), Mono(ex)

    @property
    def total(self):
        return sum(self.exps)

    @classmethod
    def one(cls, d):
        return cls((0,) * d)

    def __repr__(self):
        if not any(self.exps):
            return "1"
        return "*".join(
            f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(self.exps) if e
        )


class Wave:
    """Product of plane waves carried by the input slots in ``slots``."""

    __slots__ = ("slots", "dim")

    def __init__(self, slots, dim):
        self.slots = frozenset(slots)
        self.dim = dim

    def __eq__(self, other):
        return isinstance(other, Wave) and self.slots == other.slots and self.dim == other.dim

    def __hash__(self):
        return hash(("W", self.slots, self.dim))

    def __lt__(self, other):
        return sorted(self.slots) < sorted(other.slots)

    def __mul__(self, other):
        return Wave(self.slots | other.slots, self.dim)

    def diff(self, mu):
        return momentum(self.slots, mu, self.dim), self

    def __repr__(self):
        return "e[" + ",".join(str(s) for s in sorted(self.slots)) + "]"


def momentum(slots, mu, dim):
    """``sum_{i in slots} k_{i,mu}`` with variable index ``i*dim + mu``."""
    return Poly({((i * dim + mu, 1),): 1 for i in slots})


def monomials(d, max_degree):
    """All monomials in ``d`` variables of total degree ``<= max_degree``."""
    out = []
    for deg in range(max_degree + 1):
        for combo in combinations_with_replacement(range(d), deg):
            ex = [0] * d
            for v in combo:
                ex[v] += 1
            out.append(Mono(ex))
    return out
