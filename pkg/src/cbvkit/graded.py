"""Exact graded multilinear algebra.

Conventions: cochain grading (differentials have degree +1); the symmetric
group acts on the left of tensor words by

    sigma(v_1 (x) ... (x) v_n) = +- v_{sigma^-1(1)} (x) ... (x) v_{sigma^-1(n)}

with the Koszul sign, and on the right of multilinear maps by precomposition,
``(f o sigma)(v) = f(sigma v)``.  Permutations compose as functions,
``(sigma tau)(i) = sigma(tau(i))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product

from .errors import ArityError, StructureError
from .poly import Mono, Wave, monomials


# ---------------------------------------------------------------------------
# carriers


class Carrier:
    """A finite graded basis, optionally tensored with polynomials in ``dim``
    variables.

    Atoms of a scalar carrier are the basis symbols themselves.  Atoms of a
    polynomial carrier are pairs ``(symbol, factor)`` with ``factor`` a
    :class:`~cbvkit.poly.Mono` or :class:`~cbvkit.poly.Wave`.
    """

    def __init__(self, basis, dim=0, signature=None, name=""):
        basis = tuple((str(s), d) for s, d in basis)
        names = [s for s, _ in basis]
        if len(set(names)) != len(names):
            raise StructureError(f"duplicate basis symbols in {names}")
        for s, d in basis:
            if not isinstance(d, int) or isinstance(d, bool):
                raise StructureError(f"degree of {s!r} must be an integer, got {d!r}")
        if dim < 0:
            raise StructureError("dim must be non-negative")
        if dim:
            if signature is None:
                signature = (1,) + (-1,) * (dim - 1)
            signature = tuple(int(x) for x in signature)
            if len(signature) != dim or any(x not in (1, -1) for x in signature):
                raise StructureError(f"signature must be {dim} entries of +-1")
        elif signature is not None:
            raise StructureError("a signature needs a polynomial carrier (dim >= 1)")
        self.basis = basis
        self.dim = dim
        self.signature = signature
        self.name = name
        self._deg = dict(basis)

    @property
    def symbols(self):
        return tuple(s for s, _ in self.basis)

    @property
    def is_polynomial(self):
        return self.dim > 0

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        extra = f", dim={self.dim}, signature={self.signature}" if self.dim else ""
        return f"Carrier({list(self.basis)!r}{extra})"

    def degree(self, atom):
        if type(atom) is str:
            return self._deg[atom]
        return self._deg[atom[0]]

    def word_degree(self, word):
        deg = self._deg
        return sum(deg[a] if type(a) is str else deg[a[0]] for a in word)

    def symbol_degree(self, symbol):
        return self._deg[symbol]

    def atom(self, symbol, factor=None):
        if symbol not in self._deg:
            raise KeyError(symbol)
        if not self.dim:
            if factor is not None:
                raise StructureError("scalar carrier atoms carry no function factor")
            return symbol
        if factor is None:
            factor = Mono.one(self.dim)
        return (symbol, factor)

    def atoms(self):
        if self.dim:
            raise StructureError("a polynomial carrier has no finite atom list")
        return self.symbols

    def words(self, n):
        """All basis words of length ``n`` (scalar carriers)."""
        return list(product(self.atoms(), repeat=n))

    def wave_words(self, n):
        """One symbolic word per symbol tuple, slot ``i`` carrying wave ``i``."""
        if not self.dim:
            raise StructureError("wave words need a polynomial carrier")
        waves = [Wave((i,), self.dim) for i in range(n)]
        return [tuple(zip(syms, waves)) for syms in product(self.symbols, repeat=n)]

    def monomial_words(self, n, max_degree):
        """Words of monomial atoms whose total polynomial degree is ``<= max_degree``."""
        monos = monomials(self.dim, max_degree)
        out = []
        for syms in product(self.symbols, repeat=n):
            for ms in product(monos, repeat=n):
                if sum(m.total for m in ms) <= max_degree:
                    out.append(tuple(zip(syms, ms)))
        return out

    def test_words(self, n):
        """The domain on which identities are checked pointwise."""
        if self.dim:
            return self.wave_words(n)
        return self.words(n)


# ---------------------------------------------------------------------------
# elements


def _key(x):
    return repr(x)


class Element:
    """Sparse exact linear combination of tensor words.

    Zero coefficients are never stored, so equality is dictionary equality.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for w, c in items:
                w = tuple(w)
                v = self.terms.get(w, 0) + c
                if v:
                    self.terms[w] = v
                else:
                    self.terms.pop(w, None)
        arities = {len(w) for w in self.terms}
        if len(arities) > 1:
            raise ArityError(f"mixed tensor arities {sorted(arities)}")

    @classmethod
    def atom(cls, atom, coeff=1):
        return cls({(atom,): Fraction(coeff)})

    @classmethod
    def word(cls, word, coeff=1):
        return cls({tuple(word): Fraction(coeff)})

    @classmethod
    def from_output(cls, out):
        """Wrap a map output ``{atom: coeff}``."""
        return cls({(a,): c for a, c in out.items()})

    @property
    def arity(self):
        for w in self.terms:
            return len(w)
        return None

    def degree(self, carrier):
        degs = {carrier.word_degree(w) for w in self.terms}
        if len(degs) > 1:
            raise StructureError(f"inhomogeneous element with degrees {sorted(degs)}")
        return next(iter(degs), None)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def _check(self, other):
        a, b = self.arity, other.arity
        if a is not None and b is not None and a != b:
            raise ArityError(f"cannot add arity {a} and arity {b}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        e = Element()
        e.terms = out
        return e

    def __neg__(self):
        e = Element()
        e.terms = {w: -c for w, c in self.terms.items()}
        return e

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, Element):
            return NotImplemented
        return Element({w: c * scalar for w, c in self.terms.items()})

    __rmul__ = __mul__

    def items(self):
        return sorted(self.terms.items(), key=lambda wc: _key(wc[0]))

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{_fmt_word(w)}" for w, c in self.items())


def _fmt_atom(a):
    if type(a) is str:
        return a
    return f"{a[0]}.{a[1]!r}"


def _fmt_word(w):
    return "(" + " | ".join(_fmt_atom(a) for a in w) + ")"


def tensor(*elements):
    """Tensor product of elements, concatenating words."""

    def mul(x, y):
        e = Element()
        for w1, c1 in x.terms.items():
            for w2, c2 in y.terms.items():
                w = w1 + w2
                v = e.terms.get(w, 0) + c1 * c2
                if v:
                    e.terms[w] = v
                else:
                    e.terms.pop(w, None)
        return e

    return reduce(mul, elements, Element({(): Fraction(1)}))


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{1..n}`` in one-line notation: ``images[i-1] = sigma(i)``."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation: {self.images}")
        object.__setattr__(self, "images", imgs)

    @property
    def n(self):
        return len(self.images)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, cycles, n):
        """Build from cycle notation, e.g. ``"(123)"``, ``"(13)(24)"``,
        ``"(1,10,2)"`` or a list of tuples.  ``(abc)`` sends a->b->c->a."""
        if isinstance(cycles, str):
            groups = re.findall(r"\(([^)]*)\)", cycles)
            parsed = []
            for g in groups:
                g = g.strip()
                if not g or g == "id":
                    continue
                if "," in g or " " in g:
                    parsed.append(tuple(int(x) for x in re.split(r"[,\s]+", g) if x))
                else:
                    parsed.append(tuple(int(ch) for ch in g))
            if cycles.strip() in ("id", "()", ""):
                parsed = []
            cycles = parsed
        img = list(range(1, n + 1))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= n or a in seen:
                    raise ValueError(f"bad cycle {cyc} for n={n}")
                seen.add(a)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return cls(tuple(img))

    def __call__(self, i):
        return self.images[i - 1]

    def __mul__(self, other):
        if self.n != other.n:
            raise ArityError(f"cannot compose S_{self.n} with S_{other.n}")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self):
        inv = [0] * self.n
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    @property
    def sign(self):
        s = 1
        seen = [False] * self.n
        for i in range(self.n):
            if seen[i]:
                continue
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = self.images[j] - 1
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    def apply(self, seq):
        """Reorder ``seq`` so that position ``sigma(i)`` holds ``seq[i]`` (no sign)."""
        if len(seq) != self.n:
            raise ArityError(f"permutation of {self.n} applied to length {len(seq)}")
        out = [None] * self.n
        for i, j in enumerate(self.images):
            out[j - 1] = seq[i]
        return tuple(out)

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images, 1))

    def cycles(self):
        seen, out = set(), []
        for i in range(1, self.n + 1):
            if i in seen or self(i) == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def cycle_str(self):
        cyc = self.cycles()
        if not cyc:
            return "id"
        sep = "," if self.n >= 10 else ""
        return "".join("(" + sep.join(str(a) for a in c) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation({self.images})"


def block_permutation(sizes, order):
    """The permutation moving whole blocks: block ``order[j]`` (0-based) of the
    input layout ``sizes`` lands in slot ``j`` of the output."""
    offsets = [sum(sizes[:i]) for i in range(len(sizes))]
    images = [0] * sum(sizes)
    pos = 1
    for b in order:
        for o in range(sizes[b]):
            images[offsets[b] + o] = pos
            pos += 1
    return Permutation(tuple(images))


def block_sign(sizes, order):
    """Sign attached to moving blocks of the given sizes: the Koszul sign of
    the same move with block ``i`` carrying parity ``sizes[i] - 1``."""
    odd = [(sizes[b] - 1) % 2 for b in order]
    s = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j] and odd[i] and odd[j]:
                s += 1
    return -1 if s % 2 else 1


def koszul_sign(perm, degrees):
    """Koszul sign of ``perm`` acting on homogeneous elements of ``degrees``."""
    odd = [d % 2 for d in degrees]
    s = 0
    img = perm.images
    n = len(img)
    for i in range(n):
        if not odd[i]:
            continue
        for j in range(i + 1, n):
            if odd[j] and img[i] > img[j]:
                s ^= 1
    return -1 if s else 1


def permute_word(perm, word, carrier):
    """Left action on a basis word: ``(sign, permuted word)``."""
    degs = [carrier.degree(a) for a in word]
    return koszul_sign(perm, degs), perm.apply(word)


def koszul_permute(perm, element, carrier):
    """Left Koszul action of ``perm`` on an element of ``A^{(x) n}``."""
    if element.arity is not None and element.arity != perm.n:
        raise ArityError(f"permutation of {perm.n} applied to arity {element.arity}")
    out = {}
    for w, c in element.terms.items():
        s, w2 = permute_word(perm, w, carrier)
        v = out.get(w2, 0) + s * c
        if v:
            out[w2] = v
        else:
            out.pop(w2, None)
    e = Element()
    e.terms = out
    return e


# ---------------------------------------------------------------------------
# multilinear maps


def _acc(out, atom, c):
    v = out.get(atom, 0) + c
    if v:
        out[atom] = v
    else:
        out.pop(atom, None)


class MultiMap:
    """Homogeneous multilinear map ``A^{(x) arity} -> A`` of a fixed degree.

    ``rule(word)`` returns ``{atom: coefficient}``; results are memoised per
    word, so rules must be pure.
    """

    __slots__ = ("carrier", "arity", "degree", "rule", "name", "_cache")

    def __init__(self, carrier, arity, degree, rule, name=None):
        if arity < 1:
            raise ArityError("arity must be positive")
        self.carrier = carrier
        self.arity = arity
        self.degree = degree
        self.rule = rule
        self.name = name
        self._cache = {}

    def __repr__(self):
        return f"MultiMap({self.name or '?'}, arity={self.arity}, degree={self.degree})"

    @classmethod
    def zero(cls, carrier, arity, degree, name="0"):
        return cls(carrier, arity, degree, lambda w: {}, name=name)

    @classmethod
    def from_table(cls, carrier, arity, degree, table, name=None):
        """Scalar carrier map from ``{word: {atom: coeff}}``; absent words map to 0."""
        table = {tuple(w): {a: Fraction(c) for a, c in out.items() if c} for w, out in table.items()}
        return cls(carrier, arity, degree, lambda w: table.get(w, {}), name=name)

    def apply(self, word):
        r = self._cache.get(word)
        if r is None:
            if len(word) != self.arity:
                raise ArityError(f"{self!r} applied to a word of length {len(word)}")
            raw = self.rule(word)
            r = {a: c for a, c in raw.items() if c}
            self._cache[word] = r
        return r

    def __call__(self, *args):
        x = args[0] if len(args) == 1 else tensor(*args)
        if x.arity is not None and x.arity != self.arity:
            raise ArityError(f"{self!r} applied to arity {x.arity}")
        out = {}
        for w, c in x.terms.items():
            for a, c2 in self.apply(w).items():
                _acc(out, a, c * c2)
        return Element.from_output(out)

    def _same_shape(self, other):
        if self.arity != other.arity:
            raise ArityError(f"arity mismatch {self.arity} vs {other.arity}")

    def __add__(self, other):
        self._same_shape(other)
        f, g = self, other

        def rule(w):
            out = dict(f.apply(w))
            for a, c in g.apply(w).items():
                _acc(out, a, c)
            return out

        return MultiMap(self.carrier, self.arity, self.degree, rule, name=f"({f.name}+{g.name})")

    def __mul__(self, scalar):
        scalar = Fraction(scalar) if isinstance(scalar, int) else scalar
        f = self
        if not scalar:
            return MultiMap.zero(self.carrier, self.arity, self.degree)
        return MultiMap(
            self.carrier,
            self.arity,
            self.degree,
            lambda w: {a: c * scalar for a, c in f.apply(w).items()},
            name=f"{scalar}*{f.name}",
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def homogeneity_violations(self, words=None):
        """Words on which the output degree is not ``deg(word) + degree``."""
        words = self.carrier.test_words(self.arity) if words is None else words
        bad = []
        for w in words:
            target = self.carrier.word_degree(w) + self.degree
            if any(self.carrier.degree(a) != target for a in self.apply(w)):
                bad.append(w)
        return bad


def linear_combination(carrier, arity, degree, pairs, name=None):
    """``sum c_i f_i`` as a single map (one cache, one pass per word)."""
    pairs = [(Fraction(c) if isinstance(c, int) else c, f) for c, f in pairs if c]
    for _, f in pairs:
        if f.arity != arity:
            raise ArityError(f"arity mismatch {f.arity} vs {arity}")

    def rule(w):
        out = {}
        for c, f in pairs:
            for a, v in f.apply(w).items():
                _acc(out, a, c * v)
        return out

    return MultiMap(carrier, arity, degree, rule, name=name)


def act_on_map(f, perm):
    """Right action ``f o sigma``: ``(f o sigma)(w) = f(sigma w)`` with Koszul sign."""
    if perm.n != f.arity:
        raise ArityError(f"permutation of {perm.n} acting on arity {f.arity}")
    if perm.is_identity():
        return f
    carrier = f.carrier

    def rule(w):
        s, w2 = permute_word(perm, w, carrier)
        r = f.apply(w2)
        if s == 1:
            return r
        return {a: -c for a, c in r.items()}

    return MultiMap(carrier, f.arity, f.degree, rule, name=f"{f.name}o{perm.cycle_str()}")


def partial_compose(f, i, g):
    """``f o_i g`` with prefix sign ``(-1)^{|g| (|v_1|+...+|v_{i-1}|)}``."""
    if not 1 <= i <= f.arity:
        raise ArityError(f"position {i} out of range for arity {f.arity}")
    carrier = f.carrier
    m = g.arity
    odd_g = g.degree % 2

    def rule(w):
        pre, mid, post = w[: i - 1], w[i - 1 : i - 1 + m], w[i - 1 + m :]
        inner = g.apply(mid)
        if not inner:
            return {}
        s = -1 if odd_g and carrier.word_degree(pre) % 2 else 1
        out = {}
        for a, c in inner.items():
            for b, c2 in f.apply(pre + (a,) + post).items():
                _acc(out, b, s * c * c2)
        return out

    return MultiMap(
        carrier, f.arity + m - 1, f.degree + g.degree, rule, name=f"({f.name}o{i}{g.name})"
    )


def pre_lie(f, g):
    """``f * g = sum_i f o_i g``."""
    return linear_combination(
        f.carrier,
        f.arity + g.arity - 1,
        f.degree + g.degree,
        [(1, partial_compose(f, i, g)) for i in range(1, f.arity + 1)],
        name=f"({f.name}*{g.name})",
    )


def insertion_bracket(f, g):
    """``[f, g] = f * g - (-1)^{|f||g|} g * f``."""
    if f.arity + g.arity - 1 < 1:
        raise ArityError("bracket arity must be positive")
    sign = -1 if (f.degree * g.degree) % 2 else 1
    fg, gf = pre_lie(f, g), pre_lie(g, f)
    return linear_combination(
        f.carrier,
        fg.arity,
        fg.degree,
        [(1, fg), (-sign, gf)],
        name=f"[{f.name},{g.name}]",
    )


def first_difference(f, g, words):
    """First word on which ``f`` and ``g`` differ, or ``None``."""
    for w in words:
        if f.apply(w) != g.apply(w):
            return w
    return None


def first_nonzero(f, words):
    for w in words:
        if f.apply(w):
            return w
    return None


def check_square_zero(d, words=None):
    """Raise :class:`StructureError` unless ``d o d = 0`` on ``words``."""
    if d.arity != 1:
        raise StructureError("a differential must have arity 1")
    words = d.carrier.test_words(1) if words is None else words
    dd = partial_compose(d, 1, d)
    w = first_nonzero(dd, words)
    if w is not None:
        raise StructureError(f"d o d != 0 on {_fmt_word(w)}")


def hom_differential(d, f, check=True):
    """``d_Hom(f) = d o f - (-1)^{|f|} f * d`` (``f * d`` is the pre-Lie sum)."""
    if d.arity != 1:
        raise ArityError("d_Hom needs an arity-1 differential")
    if d.degree != 1:
        raise StructureError(f"the differential must have degree +1, got {d.degree}")
    if check:
        check_square_zero(d)
    sign = -1 if f.degree % 2 else 1
    return linear_combination(
        f.carrier,
        f.arity,
        f.degree + 1,
        [(1, partial_compose(d, 1, f)), (-sign, pre_lie(f, d))],
        name=f"dHom({f.name})",
    )


def is_zero_map(f, words=None):
    words = f.carrier.test_words(f.arity) if words is None else words
    return first_nonzero(f, words) is None
