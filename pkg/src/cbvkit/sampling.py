"""Random carriers, symmetry-admissible random maps and random dg commutative
algebras, all exact and driven by an explicit ``random.Random``."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import permutations

from .graded import Carrier, MultiMap, Permutation, block_permutation, block_sign, koszul_sign
from .keys import Op, generator_keys
from .linalg import inverse, nullspace
from .shuffles import enumerate_shuffles, offsets

DEFAULT_SEED = 20240611


def make_rng(seed=None):
    return random.Random(DEFAULT_SEED if seed is None else seed)


def random_carrier(rng, dim=None, degrees=(-2, 2), name="R"):
    """A scalar carrier of dimension 3..5 whose degrees contain both parities."""
    dim = dim or rng.randint(3, 5)
    lo, hi = degrees
    while True:
        degs = [rng.randint(lo, hi) for _ in range(dim)]
        if dim < 2 or len({d % 2 for d in degs}) == 2:
            break
    return Carrier([(f"e{i + 1}", d) for i, d in enumerate(degs)], name=name)


def _group_moves(p):
    """Permutations generating the symmetry group of profile ``p``: adjacent
    transpositions inside blocks and swaps of equal-sized blocks."""
    n, offs, k = sum(p), offsets(p), len(p)
    moves = []
    for i, pi in enumerate(p):
        for o in range(pi - 1):
            imgs = list(range(1, n + 1))
            a = offs[i] + o
            imgs[a], imgs[a + 1] = imgs[a + 1], imgs[a]
            moves.append(Permutation(tuple(imgs)))
    for i in range(k):
        for j in range(i + 1, k):
            if p[i] == p[j]:
                order = list(range(k))
                order[i], order[j] = order[j], order[i]
                moves.append(block_permutation(p, order))
    return moves


def _constraints(p):
    """Linear constraints ``sum_c c * f o perm = 0`` defining admissibility."""
    n, offs, k = sum(p), offsets(p), len(p)
    out = []
    ident = Permutation.identity(n)
    for sigma in permutations(range(k)):
        if sigma == tuple(range(k)) or any(p[sigma[j]] != p[j] for j in range(k)):
            continue
        out.append([(block_sign(p, list(sigma)), block_permutation(p, list(sigma))), (-1, ident)])
    for i, pi in enumerate(p):
        for j in range(1, pi):
            row = []
            for sh in enumerate_shuffles(j, pi - j):
                images = list(range(1, n + 1))
                for a in range(pi):
                    images[offs[i] + a] = offs[i] + sh(a + 1)
                row.append((sh.sign, Permutation(tuple(images))))
            out.append(row)
    return out


def admissible_basis(carrier, p):
    """Per orbit of words: ``(orbit_words, kernel_basis)`` spanning the value
    assignments satisfying block and shuffle symmetry exactly."""
    moves = _group_moves(p)
    cons = _constraints(p)
    seen = set()
    out = []
    for w in carrier.words(sum(p)):
        if w in seen:
            continue
        orbit, frontier = [w], [w]
        seen.add(w)
        while frontier:
            nxt = []
            for v in frontier:
                for mv in moves:
                    u = mv.apply(v)
                    if u not in seen:
                        seen.add(u)
                        orbit.append(u)
                        nxt.append(u)
            frontier = nxt
        index = {v: i for i, v in enumerate(orbit)}
        rows = []
        for v in orbit:
            degs = [carrier.degree(a) for a in v]
            for row in cons:
                vec = [Fraction(0)] * len(orbit)
                for c, perm in row:
                    vec[index[perm.apply(v)]] += c * koszul_sign(perm, degs)
                if any(vec):
                    rows.append(vec)
        out.append((orbit, nullspace(rows, len(orbit))))
    return out


def _rand_coeff(rng, density):
    if rng.random() > density:
        return 0
    return rng.choice((-3, -2, -1, 1, 2, 3))


def random_admissible_map(rng, carrier, key, density=0.7, name=None):
    """A random map of ``key``'s arity and degree with exact block and shuffle
    symmetry (random combinations of the kernel basis per output atom)."""
    key = key if isinstance(key, Op) else Op("m", key[0], tuple(key[1]))
    degree = key.degree
    by_degree = {}
    for s, d in carrier.basis:
        by_degree.setdefault(d, []).append(s)
    table = {}
    for orbit, basis in admissible_basis(carrier, key.p):
        if not basis:
            continue
        targets = by_degree.get(carrier.word_degree(orbit[0]) + degree, [])
        for a in targets:
            coeffs = [_rand_coeff(rng, density) for _ in basis]
            if not any(coeffs):
                continue
            for i, w in enumerate(orbit):
                v = sum(c * b[i] for c, b in zip(coeffs, basis))
                if v:
                    table.setdefault(w, {})[a] = v
    return MultiMap.from_table(carrier, key.arity, degree, table, name=name or key.ascii())


def random_generating_maps(rng, carrier, keys, density=0.7):
    return {k.canonical(): random_admissible_map(rng, carrier, k.canonical(), density) for k in keys}


# ---------------------------------------------------------------------------
# random dg commutative algebras


def _template(rng):
    """``(names, degrees, products, differential)`` of a small cdga with unit."""
    kind = rng.randrange(4)
    if kind == 0:
        g = 2 * rng.randint(-1, 1)
        names = ["1", "y", "yy", "x", "xy"]
        degs = [0, g, 2 * g, g + 1, 2 * g + 1]
        prod = {("y", "y"): {"yy": 1}, ("y", "x"): {"xy": 1}, ("x", "y"): {"xy": 1}}
        diff = {"y": {"x": 1}, "yy": {"xy": 2}}
    elif kind == 1:
        g = 2 * rng.randint(-1, 1) + 1
        names = ["1", "y", "x", "xy"]
        degs = [0, g, g + 1, 2 * g + 1]
        prod = {("x", "y"): {"xy": 1}, ("y", "x"): {"xy": 1}}
        diff = {"y": {"x": 1}}
    elif kind == 2:
        a, b = rng.choice((-1, 1)), rng.choice((-1, 1, 3))
        names = ["1", "e", "f", "ef"]
        degs = [0, a, b, a + b]
        prod = {("e", "f"): {"ef": 1}, ("f", "e"): {"ef": -1}}
        diff = {}
    else:
        a = rng.choice((-2, -1, 0, 1))
        names = ["1", "u", "v", "w"]
        degs = [0, a, a + 1, rng.randint(-2, 2)]
        prod = {}
        diff = {"u": {"v": 1}}
    for s in names:
        prod[("1", s)] = {s: 1}
        if s != "1":
            prod[(s, "1")] = {s: 1}
    return names, degs, prod, diff


def _random_invertible(rng, n):
    while True:
        m = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        try:
            return m, inverse(m)
        except ZeroDivisionError:
            continue


def random_cdga(rng, name="C"):
    """``(carrier, d, m)``: a template cdga conjugated by a random
    degree-preserving linear automorphism."""
    names, degs, prod, diff = _template(rng)
    carrier = Carrier([(f"b{i + 1}", d) for i, d in enumerate(degs)], name=name)
    sym = carrier.symbols
    n = len(names)
    phi = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    groups = {}
    for i, d in enumerate(degs):
        groups.setdefault(d, []).append(i)
    for idx in groups.values():
        blk, _ = _random_invertible(rng, len(idx))
        for a, i in enumerate(idx):
            for b, j in enumerate(idx):
                phi[i][j] = blk[a][b]
    phi_inv = inverse(phi)
    pos = {s: i for i, s in enumerate(names)}

    def vec_to_out(vec):
        # new-basis coordinates: phi^{-1} applied to template coordinates
        out = {}
        for i in range(n):
            c = sum(phi_inv[i][j] * vec[j] for j in range(n))
            if c:
                out[sym[i]] = c
        return out

    def image(i):
        # phi(e_i) in template coordinates: column i of phi
        return [phi[j][i] for j in range(n)]

    def apply_table(table, inputs):
        vec = [Fraction(0)] * n
        for key, out in table.items():
            coeff = 1
            for k_in, idx in zip(key, inputs):
                coeff *= idx[pos[k_in]]
            if coeff:
                for s, c in out.items():
                    vec[pos[s]] += coeff * c
        return vec

    dtab, mtab = {}, {}
    for i in range(n):
        out = vec_to_out(apply_table({(k,): v for k, v in diff.items()}, [image(i)]))
        if out:
            dtab[(sym[i],)] = out
        for j in range(n):
            out = vec_to_out(apply_table(prod, [image(i), image(j)]))
            if out:
                mtab[(sym[i], sym[j])] = out
    d = MultiMap.from_table(carrier, 1, 1, dtab, name="d")
    m = MultiMap.from_table(carrier, 2, 0, mtab, name="m")
    return carrier, d, m


def random_valid_set(rng, max_weight=3, density=0.6):
    """A generating set whose weight-0 row is a (conjugated) strict cdga and
    whose other generators up to ``max_weight`` are random admissible maps."""
    from .homotopy import extend_from_cinfty

    carrier, d, m = random_cdga(rng)
    extras = {}
    for w in range(1, max_weight + 1):
        for key in generator_keys(w):
            if key.t == 0 and key.k == 1:
                continue
            extras[key] = random_admissible_map(rng, carrier, key, density)
    return extend_from_cinfty([d, m], extras)
