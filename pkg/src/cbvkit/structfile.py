"""JSON structure files: load and export generating sets and strict structures.

Layout::

    {
      "kind": "generating" | "strict",
      "metadata": {"name": "...", "truncation": 2, "fill_zero": false},
      "carrier": {"basis": [["e1", 0], ...], "dim": 4, "signature": [1, -1, -1, -1]},
      "maps": {"0;1": [entry, ...], ...}
    }

Generating sets key maps by ``"t;p1,...,pk"``; strict structures use ``"d"``,
``"m"``, ``"delta"`` and ``"nabla"``.  An entry is
``{"in": [symbols...], "out": [term, ...]}`` where a term is
``["num/den", symbol]`` on scalar carriers and
``["num/den", symbol, [[mu, ...], ...]]`` on polynomial carriers, the last
component listing the partial derivatives applied to each input slot.
Output functions are the product of the (differentiated) input functions.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from itertools import product

from .errors import CbvError, StructureError
from .graded import Carrier, MultiMap
from .homotopy import GeneratingSet
from .keys import parse_key
from .poly import Poly, Wave
from .strict import StrictStructure
from .ym import _rule_from_terms

STRICT_ROLES = {"d": (1, 1), "m": (2, 0), "delta": (1, -1), "nabla": (1, -2)}

_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")


class StructureFileError(CbvError):
    """A structure file that does not parse into a valid structure."""


def format_rational(c):
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def parse_rational(text):
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise StructureFileError(f"coefficient {text!r} must be a 'num/den' string")
    m = _RATIONAL.match(str(text).strip())
    if not m or m.group(2) == "0":
        raise StructureFileError(f"bad rational {text!r}; expected 'num/den'")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


# ---------------------------------------------------------------------------
# export


def _wave_terms(f, syms):
    """``[(coeff, out, derivs)]`` read off from ``f`` on the wave word over ``syms``.

    The coefficient polynomial in the momenta ``k_{i,mu}`` is the symbol of a
    constant-coefficient operator, so each monomial is one derivative term.
    """
    C = f.carrier
    word = tuple((s, Wave((i,), C.dim)) for i, s in enumerate(syms))
    terms = []
    for (out, wave), poly in f.apply(word).items():
        if wave.slots != frozenset(range(len(syms))):
            raise StructureError(f"{f!r} is not multiplicative on {syms}; cannot export")
        monos = poly.terms if isinstance(poly, Poly) else {(): poly}
        for mono, c in monos.items():
            derivs = [[] for _ in syms]
            for var, e in mono:
                slot, mu = divmod(var, C.dim)
                derivs[slot].extend([mu] * e)
            terms.append((c, out, [sorted(d) for d in derivs]))
    terms.sort(key=lambda t: (t[1], t[2], t[0]))
    return terms


def map_entries(f):
    C = f.carrier
    entries = []
    if C.is_polynomial:
        for syms in product(C.symbols, repeat=f.arity):
            terms = _wave_terms(f, syms)
            if terms:
                entries.append(
                    {"in": list(syms), "out": [[format_rational(c), s, d] for c, s, d in terms]}
                )
    else:
        for w in C.words(f.arity):
            out = f.apply(w)
            if out:
                entries.append(
                    {"in": list(w), "out": [[format_rational(c), a] for a, c in sorted(out.items())]}
                )
    return entries


def carrier_record(C):
    rec = {"name": C.name, "basis": [[s, d] for s, d in C.basis]}
    if C.dim:
        rec["dim"] = C.dim
        rec["signature"] = list(C.signature)
    return rec


def export_generating(S):
    return {
        "kind": "generating",
        "metadata": {"name": S.name, "truncation": S.truncation, "fill_zero": S.fill_zero},
        "carrier": carrier_record(S.carrier),
        "maps": {f"{k.t};{','.join(map(str, k.p))}": map_entries(S.maps[k]) for k in S.keys()},
    }


def export_strict(S):
    maps = {}
    for role in STRICT_ROLES:
        f = getattr(S, role)
        if f is not None:
            maps[role] = map_entries(f)
    return {
        "kind": "strict",
        "metadata": {"name": S.name, "domain": S.domain, "max_poly_degree": S.max_poly_degree},
        "carrier": carrier_record(S.carrier),
        "maps": maps,
    }


def export_structure(S):
    return export_strict(S) if isinstance(S, StrictStructure) else export_generating(S)


def dump(S, path):
    text = json.dumps(export_structure(S), indent=1)
    with open(path, "w") as fh:
        fh.write(text + "\n")


# ---------------------------------------------------------------------------
# load


def load_carrier(rec):
    if not isinstance(rec, dict) or "basis" not in rec:
        raise StructureFileError("carrier section needs a 'basis' list")
    try:
        basis = [(str(s), d) for s, d in rec["basis"]]
        return Carrier(basis, dim=int(rec.get("dim", 0)), signature=rec.get("signature"), name=str(rec.get("name", "")))
    except (TypeError, ValueError) as exc:
        raise StructureFileError(f"bad carrier section: {exc}") from exc
    except StructureError as exc:
        raise StructureFileError(str(exc)) from exc


def load_map(C, entries, arity, degree, name):
    if not isinstance(entries, list):
        raise StructureFileError(f"map {name}: expected a list of entries")
    symbols = set(C.symbols)
    table = {}
    for e in entries:
        try:
            word, terms = tuple(e["in"]), e["out"]
        except (TypeError, KeyError) as exc:
            raise StructureFileError(f"map {name}: entries need 'in' and 'out'") from exc
        if len(word) != arity or not set(word) <= symbols:
            raise StructureFileError(f"map {name}: bad input word {list(word)}")
        if word in table:
            raise StructureFileError(f"map {name}: input word {list(word)} listed twice")
        parsed = []
        for t in terms:
            if not isinstance(t, list) or len(t) != (3 if C.dim else 2) or t[1] not in symbols:
                raise StructureFileError(f"map {name}: malformed output term {t!r}")
            c = parse_rational(t[0])
            if C.word_degree(word) + degree != C.symbol_degree(t[1]):
                raise StructureFileError(f"map {name}: term {t!r} breaks degree {degree}")
            if C.dim:
                ds = t[2]
                if not isinstance(ds, list) or len(ds) != arity or any(
                    not isinstance(x, list) or any(not isinstance(mu, int) or not 0 <= mu < C.dim for mu in x)
                    for x in ds
                ):
                    raise StructureFileError(f"map {name}: bad derivative list in {t!r}")
                parsed.append((c, t[1], tuple(tuple(x) for x in ds)))
            else:
                parsed.append((c, t[1]))
        table[word] = parsed
    if C.dim:
        return MultiMap(C, arity, degree, _rule_from_terms(lambda syms: table.get(syms, ())), name=name)
    flat = {}
    for w, terms in table.items():
        out = flat.setdefault(w, {})
        for c, a in terms:
            out[a] = out.get(a, 0) + c
    return MultiMap.from_table(C, arity, degree, flat, name=name)


def structure_from_record(rec):
    if not isinstance(rec, dict):
        raise StructureFileError("structure file must hold a JSON object")
    kind = rec.get("kind", "generating")
    meta = rec.get("metadata", {}) or {}
    C = load_carrier(rec.get("carrier"))
    maps = rec.get("maps", {})
    if not isinstance(maps, dict):
        raise StructureFileError("'maps' must be an object")
    try:
        if kind == "strict":
            fs = {}
            for role, entries in maps.items():
                if role not in STRICT_ROLES:
                    raise StructureFileError(f"unknown strict map {role!r}")
                arity, degree = STRICT_ROLES[role]
                fs[role] = load_map(C, entries, arity, degree, role)
            if "d" not in fs or "m" not in fs:
                raise StructureFileError("a strict structure needs 'd' and 'm'")
            return StrictStructure(
                C, name=meta.get("name", ""), domain=meta.get("domain", "wave"),
                max_poly_degree=int(meta.get("max_poly_degree", 3)), **fs,
            )
        if kind != "generating":
            raise StructureFileError(f"unknown structure kind {kind!r}")
        gens = {}
        for label, entries in maps.items():
            key = parse_key(label)
            gens[key] = load_map(C, entries, key.arity, key.degree, key.ascii())
        return GeneratingSet(
            C, gens, truncation=meta.get("truncation"),
            fill_zero=bool(meta.get("fill_zero", False)), name=meta.get("name", ""),
        )
    except StructureFileError:
        raise
    except (CbvError, ValueError, TypeError) as exc:
        raise StructureFileError(str(exc)) from exc


def load(path):
    try:
        with open(path) as fh:
            rec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StructureFileError(f"cannot read {path}: {exc}") from exc
    return structure_from_record(rec)


def load_theta3(path, carrier):
    """A trilinear degree -2 map from ``{"theta3": [entry, ...]}`` over ``carrier``."""
    try:
        with open(path) as fh:
            rec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise StructureFileError(f"cannot read {path}: {exc}") from exc
    if not isinstance(rec, dict) or "theta3" not in rec:
        raise StructureFileError("theta3 file needs a 'theta3' entry list")
    return load_map(carrier, rec["theta3"], 3, -2, "theta3")
