"""Shuffles, straight shuffles and straight-shuffle extensions.

A decorated straight shuffle is a permutation ``sigma`` of ``n = sum(p)``
together with tuples ``l, q, r`` (``l_i + q_i + r_i = p_i``) such that the
``q_i``-interval of block ``i`` (after its first ``l_i`` entries) is sent
order-preservingly onto the ``i``-th stretch of the middle segment
``sum(l) + q_1 + ... + q_{i-1} + [1, q_i]``.

The interval condition alone leaves the complement free.  The adopted
complement rule (``complement="shuffle"``) is: the ``l``-parts of all blocks
fill the first ``sum(l)`` output slots and the ``r``-parts fill the last
``sum(r)`` slots, each part keeping its internal order, i.e. both outer
groups are shuffles of the respective parts.  ``complement="free"`` drops the
rule and keeps only the interval condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product

from .errors import ArityError, ShapeError
from .graded import Permutation, _acc, permute_word

COMPLEMENT_RULES = ("shuffle", "free")
EXPONENT_READINGS = ("total", "running")


def check_profile(p):
    p = tuple(int(x) for x in p)
    if not p or any(x < 1 for x in p):
        raise ShapeError(f"block profile must be a non-empty tuple of positive sizes, got {p}")
    return p


def offsets(p):
    """``P_i = p_1 + ... + p_{i-1}`` (0-based list)."""
    out, acc = [], 0
    for x in p:
        out.append(acc)
        acc += x
    return out


def enumerate_shuffles(j, m):
    """All ``(j, m)``-shuffles of ``S_{j+m}``: increasing on ``1..j`` and on ``j+1..j+m``."""
    if j < 0 or m < 0 or j + m < 1:
        raise ShapeError(f"bad shuffle shape ({j}, {m})")
    n = j + m
    out = []
    for first in combinations(range(1, n + 1), j):
        rest = [x for x in range(1, n + 1) if x not in first]
        out.append(Permutation(tuple(first) + tuple(rest)))
    return out


def multi_shuffles(sizes):
    """Permutations of ``sum(sizes)`` that keep the order inside each segment."""
    n = sum(sizes)
    out = []

    def rec(prefix, counts):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for i, c in enumerate(counts):
            if c:
                counts[i] -= 1
                prefix.append(i)
                yield from rec(prefix, counts)
                prefix.pop()
                counts[i] += 1

    offs = offsets(sizes) if sizes else []
    for arrangement in rec([], list(sizes)):
        used = [0] * len(sizes)
        images = [0] * n
        for pos, seg in enumerate(arrangement, 1):
            images[offs[seg] + used[seg]] = pos
            used[seg] += 1
        out.append(Permutation(tuple(images)))
    return out


@dataclass(frozen=True)
class DecoratedShuffle:
    sigma: Permutation
    l: tuple
    q: tuple
    r: tuple
    p: tuple

    @property
    def k(self):
        return len(self.p)

    @property
    def left(self):
        return sum(self.l)

    @property
    def middle(self):
        return sum(self.q)

    @property
    def right(self):
        return sum(self.r)

    def is_valid(self, complement="shuffle"):
        return is_straight_shuffle(self.sigma, self.l, self.q, self.r, self.p, complement)

    def explicit_exponent(self, reading="total"):
        """Exponent of the explicit sign factor of the extension formula."""
        if reading == "total":
            e = (sum(self.q) + 1) * sum(self.r)
        elif reading == "running":
            e, acc = 0, 0
            for qi, ri in zip(self.q, self.r):
                acc += qi
                e += (acc + 1) * ri
        else:
            raise ValueError(f"unknown exponent reading {reading!r}")
        return e + sum(i * (li + ri) for i, (li, ri) in enumerate(zip(self.l, self.r)))

    def sign(self, reading="total"):
        """Degree-independent part of the sign: ``sign(sigma)`` times the explicit factor."""
        return self.sigma.sign * (-1 if self.explicit_exponent(reading) % 2 else 1)


def _check_decoration(l, q, r, p):
    if not (len(l) == len(q) == len(r) == len(p)):
        raise ShapeError("decoration tuples must have equal length")
    for li, qi, ri, pi in zip(l, q, r, p):
        if li < 0 or ri < 0 or qi < 1 or li + qi + ri != pi:
            raise ShapeError(f"need l_i, r_i >= 0, q_i >= 1, l_i+q_i+r_i = p_i; got {l},{q},{r},{p}")


def is_straight_shuffle(sigma, l, q, r, p, complement="shuffle"):
    """Whether ``sigma`` is an ``(l, q, r, p)``-shuffle."""
    l, q, r, p = (tuple(x) for x in (l, q, r, p))
    _check_decoration(l, q, r, p)
    n = sum(p)
    if sigma.n != n:
        raise ArityError(f"sigma in S_{sigma.n} but sum(p) = {n}")
    L, Q = sum(l), sum(q)
    offs = offsets(p)
    mid = L
    for i in range(len(p)):
        start = offs[i] + l[i]
        for o in range(q[i]):
            if sigma(start + o + 1) != mid + o + 1:
                return False
        mid += q[i]
    if complement == "free":
        return True
    if complement != "shuffle":
        raise ValueError(f"unknown complement rule {complement!r}")
    for i in range(len(p)):
        lefts = [sigma(offs[i] + o + 1) for o in range(l[i])]
        rights = [sigma(offs[i] + l[i] + q[i] + o + 1) for o in range(r[i])]
        if any(x > L for x in lefts) or any(x <= L + Q for x in rights):
            return False
        if lefts != sorted(lefts) or rights != sorted(rights):
            return False
    return True


def _decorations(q, p):
    ranges = [range(pi - qi + 1) for qi, pi in zip(q, p)]
    for l in product(*ranges):
        r = tuple(pi - qi - li for li, qi, pi in zip(l, q, p))
        yield tuple(l), r


_STSH_CACHE = {}


def enumerate_straight_shuffles(q, p, complement="shuffle"):
    """All decorated straight shuffles for ``q <= p``, ordered by ``l`` then by
    the one-line notation of ``sigma``."""
    q, p = tuple(q), check_profile(p)
    if len(q) != len(p) or any(qi < 1 or qi > pi for qi, pi in zip(q, p)):
        raise ShapeError(f"need 1 <= q_i <= p_i componentwise, got q={q}, p={p}")
    key = (q, p, complement)
    hit = _STSH_CACHE.get(key)
    if hit is not None:
        return hit
    n = sum(p)
    offs = offsets(p)
    out = []
    for l, r in _decorations(q, p):
        L, Q = sum(l), sum(q)
        mid_images = {}
        mid = L
        for i in range(len(p)):
            for o in range(q[i]):
                mid_images[offs[i] + l[i] + o + 1] = mid + o + 1
            mid += q[i]
        lpos = [offs[i] + o + 1 for i in range(len(p)) for o in range(l[i])]
        rpos = [offs[i] + l[i] + q[i] + o + 1 for i in range(len(p)) for o in range(r[i])]
        if complement == "shuffle":
            lefts = [[perm(j) for j in range(1, L + 1)] for perm in multi_shuffles(l)] if L else [[]]
            rights = (
                [[L + Q + perm(j) for j in range(1, sum(r) + 1)] for perm in multi_shuffles(r)]
                if sum(r)
                else [[]]
            )
            arrangements = [(a, b) for a in lefts for b in rights]
        elif complement == "free":
            slots = list(range(1, L + 1)) + list(range(L + Q + 1, n + 1))
            arrangements = []
            for perm in permutations(slots):
                arrangements.append((list(perm[: len(lpos)]), list(perm[len(lpos) :])))
        else:
            raise ValueError(f"unknown complement rule {complement!r}")
        sigmas = []
        for lim, rim in arrangements:
            images = [0] * n
            for pos, img in mid_images.items():
                images[pos - 1] = img
            for pos, img in zip(lpos, lim):
                images[pos - 1] = img
            for pos, img in zip(rpos, rim):
                images[pos - 1] = img
            sigmas.append(Permutation(tuple(images)))
        for s in sorted(set(sigmas), key=lambda s: s.images):
            out.append(DecoratedShuffle(s, l, q, r, p))
    out = tuple(out)
    _STSH_CACHE[key] = out
    return out


def brute_force_straight_shuffles(q, p, complement="shuffle"):
    """Oracle: filter ``S_n x decorations`` through :func:`is_straight_shuffle`."""
    q, p = tuple(q), check_profile(p)
    n = sum(p)
    out = []
    for l, r in _decorations(q, p):
        for images in permutations(range(1, n + 1)):
            s = Permutation(images)
            if is_straight_shuffle(s, l, q, r, p, complement):
                out.append(DecoratedShuffle(s, l, q, r, p))
    return out


class TensorMap:
    """Homogeneous linear map ``A^{(x) arity} -> A^{(x) out_arity}``."""

    def __init__(self, carrier, arity, out_arity, degree, rule, name=None):
        self.carrier = carrier
        self.arity = arity
        self.out_arity = out_arity
        self.degree = degree
        self.rule = rule
        self.name = name
        self._cache = {}

    def apply(self, word):
        r = self._cache.get(word)
        if r is None:
            if len(word) != self.arity:
                raise ArityError(f"{self.name} applied to a word of length {len(word)}")
            r = {w: c for w, c in self.rule(word).items() if c}
            self._cache[word] = r
        return r

    def __call__(self, x):
        from .graded import Element

        out = {}
        for w, c in x.terms.items():
            for w2, c2 in self.apply(w).items():
                _acc(out, w2, c * c2)
        e = Element()
        e.terms = out
        return e


def straight_extension(m, q, p, complement="shuffle", reading="total"):
    """The straight-shuffle extension ``m_{p/q}: A^{(x) sum p} -> A^{(x) r}``,
    ``r = 1 + sum(p) - sum(q)``, of a map ``m`` of block shape ``q``."""
    q, p = tuple(q), check_profile(p)
    if m.arity != sum(q):
        raise ShapeError(f"map of arity {m.arity} does not have block shape {q}")
    shuffles = enumerate_straight_shuffles(q, p, complement)
    carrier = m.carrier
    odd_m = m.degree % 2
    out_arity = 1 + sum(p) - sum(q)
    signs = [ds.sign(reading) for ds in shuffles]

    def rule(w):
        out = {}
        for ds, base in zip(shuffles, signs):
            s, y = permute_word(ds.sigma, w, carrier)
            L, Q = ds.left, ds.middle
            pre, mid, post = y[:L], y[L : L + Q], y[L + Q :]
            if odd_m and carrier.word_degree(pre) % 2:
                s = -s
            for a, c in m.apply(mid).items():
                _acc(out, pre + (a,) + post, base * s * c)
        return out

    return TensorMap(carrier, sum(p), out_arity, m.degree, rule, name=f"{m.name}_{p}/{q}")
