import random

import pytest

from cbvkit.graded import Carrier, MultiMap


def random_map(rng, carrier, arity, degree, density=0.5, name=None):
    """Unconstrained random multilinear map of the given degree (scalar carrier)."""
    by_degree = {}
    for s, d in carrier.basis:
        by_degree.setdefault(d, []).append(s)
    table = {}
    for w in carrier.words(arity):
        for a in by_degree.get(carrier.word_degree(w) + degree, []):
            if rng.random() < density:
                table.setdefault(w, {})[a] = rng.randint(-3, 3)
    return MultiMap.from_table(carrier, arity, degree, table, name=name)


def small_carrier(rng, dim=3):
    while True:
        degs = [rng.randint(-2, 2) for _ in range(dim)]
        if len({d % 2 for d in degs}) == 2:
            return Carrier([(f"e{i}", d) for i, d in enumerate(degs)])


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
