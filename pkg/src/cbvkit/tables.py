"""Low-weight obstruction tables: symbolic specialisation, the hand-written
reference entries, and an evaluation oracle deciding equality modulo the
generator symmetries."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ShapeError
from .formal import bracket, comp, gen
from .graded import Permutation, _fmt_word, first_difference
from .homotopy import GeneratingSet, obstruction_formula
from .keys import Op, m, n, obstruction_keys
from .sampling import make_rng, random_admissible_map, random_carrier

WEIGHT_BOUND = 3
MAX_WEIGHT = 4

COMPLEMENT = "shuffle"
READING = "total"


def specialize_obstruction(key, bound=WEIGHT_BOUND, complement=COMPLEMENT, reading=READING):
    """The obstruction formula at a fixed key, as a formal expression."""
    key = key if key.kind == "n" else Op("n", key.t, key.p)
    limit = max(bound, WEIGHT_BOUND) if bound <= MAX_WEIGHT else MAX_WEIGHT
    if key.weight > limit:
        raise ShapeError(f"weight {key.weight} exceeds the bound {limit}")
    return obstruction_formula(key, complement, reading)


# ---------------------------------------------------------------------------
# reference entries


def _perms(expr, *cycles):
    out = None
    for c in cycles:
        term = expr.permuted(Permutation.from_cycles(c, expr.arity))
        out = term if out is None else out + term
    return out


def _o(f, i, g):
    return comp(gen(f), i, gen(g))


def _b(f, g):
    return bracket(gen(f), gen(g))


d = m(0, 1)


def _tabulated():
    t = {}
    t[n(1, 1)] = _b(d, m(1, 1))
    t[n(0, 1, 1)] = _b(d, m(0, 1, 1))
    t[n(0, 1, 2)] = (
        _b(d, m(0, 1, 2))
        - _o(m(0, 2), 1, m(0, 1, 1))
        - _perms(_o(m(0, 2), 2, m(0, 1, 1)), "(12)")
        + _o(m(0, 1, 1), 2, m(0, 2))
    )
    t[n(0, 1, 1, 1)] = _b(d, m(0, 1, 1, 1)) - _perms(
        _o(m(0, 1, 1), 1, m(0, 1, 1)), "id", "(123)", "(132)"
    )
    t[n(1, 1, 1)] = _b(d, m(1, 1, 1)) - _b(m(1, 1), m(0, 1, 1))
    t[n(1, 2)] = _b(d, m(1, 2)) + _b(m(1, 1), m(0, 2)) - gen(m(0, 1, 1))
    t[n(2, 1)] = _b(d, m(2, 1)) + _o(m(1, 1), 1, m(1, 1))
    t[n(0, 2, 2)] = (
        _b(d, m(0, 2, 2))
        + _o(m(0, 1, 2), 1, m(0, 2))
        - _o(m(0, 2, 1), 3, m(0, 2))
        + _perms(_o(m(0, 2), 2, m(0, 1, 2)), "(12)")
        - _o(m(0, 2), 2, m(0, 1, 2))
        + _perms(_o(m(0, 2), 2, m(0, 2, 1)), "(123)")
        - _o(m(0, 2), 1, m(0, 2, 1))
        + _o(m(0, 3), 2, m(0, 1, 1))
        - _perms(_o(m(0, 3), 3, m(0, 1, 1)), "(123)")
        + _perms(_o(m(0, 3), 3, m(0, 1, 1)), "(23)")
        + _perms(_o(m(0, 3), 2, m(0, 1, 1)), "(1243)")
        - _perms(_o(m(0, 3), 1, m(0, 1, 1)), "(23)")
        + _perms(_o(m(0, 3), 1, m(0, 1, 1)), "(234)")
    )
    # the entry writes m_{1,2} without superscript in two terms; weight forces t = 0
    t[n(0, 1, 3)] = (
        _b(d, m(0, 1, 3))
        - _perms(_o(m(0, 2), 2, m(0, 1, 2)), "(12)")
        + _o(m(0, 2), 1, m(0, 1, 2))
        + _o(m(0, 1, 2), 2, m(0, 2))
        - _o(m(0, 1, 2), 3, m(0, 2))
        + _o(m(0, 1, 1), 2, m(0, 3))
        + _o(m(0, 3), 1, m(0, 1, 1))
        + _perms(_o(m(0, 3), 2, m(0, 1, 1)), "(12)")
        + _perms(_o(m(0, 3), 3, m(0, 1, 1)), "(321)")
    )
    t[n(0, 1, 1, 2)] = (
        _b(d, m(0, 1, 1, 2))
        - _o(m(0, 1, 2), 1, m(0, 1, 1))
        - _o(m(0, 1, 2), 2, m(0, 1, 1))
        - _perms(_o(m(0, 1, 2), 3, m(0, 1, 1)), "(23)")
        - _perms(_o(m(0, 1, 2), 2, m(0, 1, 1)), "(12)")
        - _perms(_o(m(0, 1, 2), 3, m(0, 1, 1)), "(321)")
        + _o(m(0, 1, 1), 2, m(0, 1, 2))
        + _perms(_o(m(0, 1, 1), 2, m(0, 1, 2)), "(12)")
        - _o(m(0, 2), 1, m(0, 1, 1, 1))
        - _perms(_o(m(0, 2), 1, m(0, 1, 1, 1)), "(34)")
        + _o(m(0, 1, 1, 1), 3, m(0, 2))
    )
    t[n(0, 1, 1, 1, 1)] = (
        _b(d, m(0, 1, 1, 1, 1))
        + _perms(_o(m(0, 1, 1), 1, m(0, 1, 1, 1)), "id", "(1234)", "(13)(24)", "(4321)")
        + _perms(
            _o(m(0, 1, 1, 1), 1, m(0, 1, 1)),
            "id", "(23)", "(234)", "(123)", "(1342)", "(13)(24)",
        )
    )
    t[n(1, 3)] = (
        _b(d, m(1, 3))
        + _b(m(1, 1), m(0, 3))
        + _o(m(1, 2), 1, m(0, 2))
        - _o(m(1, 2), 2, m(0, 2))
        + _o(m(0, 2), 1, m(1, 2))
        - _o(m(0, 2), 2, m(1, 2))
        - gen(m(0, 1, 2))
        - gen(m(0, 2, 1))
    )
    # the entry lists "+ m^0_{1,1} o_2 m^1_2" twice; transcribed as printed
    t[n(1, 1, 2)] = (
        _b(d, m(1, 1, 2))
        + _b(m(1, 1), m(0, 1, 2))
        - _o(m(0, 2), 1, m(1, 1, 1))
        - _perms(_o(m(0, 2), 2, m(1, 1, 1)), "(12)")
        + _o(m(0, 1, 1), 2, m(1, 2))
        - _o(m(1, 2), 1, m(0, 1, 1))
        - _perms(_o(m(1, 2), 2, m(0, 1, 1)), "(12)")
        + _o(m(0, 1, 1), 2, m(1, 2))
        - gen(m(0, 1, 1, 1))
    )
    t[n(1, 1, 1, 1)] = (
        _b(d, m(1, 1, 1, 1))
        + _b(m(1, 1), m(0, 1, 1, 1))
        + _perms(_o(m(0, 1, 1), 1, m(1, 1, 1)), "id", "(123)", "(321)")
        + _perms(_o(m(1, 1, 1), 1, m(0, 1, 1)), "id", "(123)", "(321)")
    )
    t[n(2, 1, 1)] = _b(d, m(2, 1, 1)) + _b(m(1, 1), m(1, 1, 1)) + _b(m(2, 1), m(0, 1, 1))
    t[n(2, 2)] = (
        _b(d, m(2, 2)) + _b(m(1, 1), m(1, 2)) + _b(m(2, 1), m(0, 2)) - gen(m(1, 1, 1))
    )
    t[n(3, 1)] = _b(d, m(3, 1)) + _b(m(1, 1), m(2, 1))
    return t


TABULATED = _tabulated()

# literal forms that differ from the adopted transcription
LITERAL_VARIANTS = {
    # written out as m1 o m11 - m11 o_1 m1 - m11 o_2 m1 next to "= [m1, m11]"
    n(0, 1, 1): _o(d, 1, m(0, 1, 1)) - _o(m(0, 1, 1), 1, d) - _o(m(0, 1, 1), 2, d),
}


def tabulated_keys():
    return sorted(TABULATED, key=lambda k: (k.weight, k.t, k.k, k.p))


def tabulated_obstruction(key):
    key = key if key.kind == "n" else Op("n", key.t, key.p)
    try:
        return TABULATED[key]
    except KeyError:
        raise ShapeError(f"{key} is not a tabulated obstruction") from None


# ---------------------------------------------------------------------------
# evaluation oracle


@dataclass
class OracleResult:
    equal: bool
    trials: int
    witness: dict | None = None

    def __bool__(self):
        return self.equal


def random_assignment(rng, ops, dims=(3, 5), degrees=(-2, 2)):
    carrier = random_carrier(rng, rng.randint(*dims), degrees)
    keys = {op.canonical() for op in ops if op.kind == "m"}
    maps = {k: random_admissible_map(rng, carrier, k) for k in sorted(keys)}
    return GeneratingSet(carrier, maps, fill_zero=True)


def exprs_equal_mod_symmetry(e1, e2, trials=25, dims=(3, 5), seed=None, degrees=(-2, 2)):
    """Compare two expressions on random symmetry-admissible assignments."""
    if e1.arity != e2.arity:
        return OracleResult(False, 0, {"reason": f"arity {e1.arity} vs {e2.arity}"})
    rng = make_rng(seed)
    ops = e1.ops() | e2.ops()
    for trial in range(trials):
        S = random_assignment(rng, ops, dims, degrees)
        f = e1.evaluate(S.carrier, S.get)
        g = e2.evaluate(S.carrier, S.get)
        w = first_difference(f, g, S.carrier.words(e1.arity))
        if w is not None:
            return OracleResult(
                False,
                trial + 1,
                {
                    "trial": trial,
                    "carrier": list(S.carrier.basis),
                    "word": _fmt_word(w),
                    "left": {str(a): str(c) for a, c in f.apply(w).items()},
                    "right": {str(a): str(c) for a, c in g.apply(w).items()},
                },
            )
    return OracleResult(True, trials)


def check_key(key, trials=25, seed=None, complement=COMPLEMENT, reading=READING):
    return exprs_equal_mod_symmetry(
        specialize_obstruction(key, complement=complement, reading=reading),
        tabulated_obstruction(key),
        trials=trials,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# rendering


def table_keys(weight):
    keys = obstruction_keys(weight)
    return sorted(keys, key=lambda k: (k.t, k.k, k.p))


def render_table(weight, bound=WEIGHT_BOUND):
    lines = [f"obstructions of weight {weight}"]
    for key in table_keys(weight):
        expr = specialize_obstruction(key, bound=max(bound, weight))
        lines.append(f"{key.label()} = {expr.render()}")
    return "\n".join(lines)


def table_records(weight, bound=WEIGHT_BOUND):
    out = []
    for key in table_keys(weight):
        expr = specialize_obstruction(key, bound=max(bound, weight))
        for rec in expr.records():
            out.append(json.dumps({"key": key.ascii(), **rec}))
    return "\n".join(out)
