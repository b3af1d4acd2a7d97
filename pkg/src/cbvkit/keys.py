"""Index keys for generating maps ``m^t_{p}`` and obstruction maps ``n^t_{p}``."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from .errors import ShapeError


def _profile(p):
    p = tuple(int(x) for x in p)
    if not p or any(x < 1 for x in p):
        raise ShapeError(f"block profile must be non-empty with positive entries, got {p}")
    return p


@dataclass(frozen=True, order=True)
class Op:
    """A generator symbol: ``kind`` is ``"m"`` (generating map) or ``"n"``
    (obstruction map)."""

    kind: str
    t: int
    p: tuple

    def __post_init__(self):
        if self.kind not in ("m", "n"):
            raise ShapeError(f"unknown operation kind {self.kind!r}")
        if self.t < 0:
            raise ShapeError("t must be non-negative")
        object.__setattr__(self, "p", _profile(self.p))
        if self.kind == "n" and self.t + len(self.p) < 2:
            raise ShapeError(f"obstruction n^{self.t}_{self.p} needs t + k >= 2")

    @property
    def k(self):
        return len(self.p)

    @property
    def arity(self):
        return sum(self.p)

    @property
    def degree(self):
        base = 3 - 2 * self.t - sum(self.p) - len(self.p)
        return base + 1 if self.kind == "n" else base

    @property
    def weight(self):
        return self.t + sum(self.p) - 1

    def canonical(self):
        return Op(self.kind, self.t, tuple(sorted(self.p)))

    @property
    def is_canonical(self):
        return self.p == tuple(sorted(self.p))

    def label(self):
        return f"{self.kind}^{self.t}_{{{','.join(map(str, self.p))}}}"

    def ascii(self):
        return f"{self.kind}{self.t};{','.join(map(str, self.p))}"

    def __str__(self):
        return self.label()


def m(t, *p):
    return Op("m", t, tuple(p))


def n(t, *p):
    return Op("n", t, tuple(p))


def parse_key(text, kind="m"):
    """Parse ``"t;p1,...,pk"``."""
    try:
        t, ps = text.split(";")
        return Op(kind, int(t), tuple(int(x) for x in ps.split(",")))
    except ValueError as exc:
        raise ShapeError(f"bad key {text!r}; expected 't;p1,...,pk'") from exc


def generator_keys(weight):
    """Canonical generating-map keys of the given weight."""
    out = []
    for t in range(weight + 1):
        total = weight + 1 - t
        for k in range(1, total + 1):
            for p in _partitions(total, k):
                out.append(Op("m", t, p))
    return sorted(out, key=_table_order)


def obstruction_keys(weight):
    """Canonical obstruction keys of the given weight (``t + k >= 2``)."""
    return [Op("n", g.t, g.p) for g in generator_keys(weight) if g.t + g.k >= 2]


def keys_up_to(weight, kind="n"):
    gen = obstruction_keys if kind == "n" else generator_keys
    return [key for w in range(weight + 1) for key in gen(w)]


def _partitions(total, k):
    out = []
    for combo in combinations_with_replacement(range(1, total + 1), k):
        if sum(combo) == total:
            out.append(tuple(combo))
    return out


def _table_order(key):
    return (key.t, len(key.p), key.p)
